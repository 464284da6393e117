//! JSON matrix files:
//! `{"dim": n, "field": "real"|"complex", "entries": [...]}` with row-major
//! entries given as numbers (real) or `[re, im]` pairs (complex).

use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::Matrix;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Field {
    Real,
    Complex,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(untagged)]
enum Entry {
    Real(f64),
    Complex([f64; 2]),
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct MatrixFile {
    dim: usize,
    field: Field,
    entries: Vec<Entry>,
}

impl MatrixFile {
    fn from_matrix(m: &Matrix) -> Self {
        let field = if m.is_real() { Field::Real } else { Field::Complex };
        let entries = m
            .entries()
            .iter()
            .map(|z| match field {
                Field::Real => Entry::Real(z.re),
                Field::Complex => Entry::Complex([z.re, z.im]),
            })
            .collect();
        Self {
            dim: m.dim(),
            field,
            entries,
        }
    }

    fn into_matrix(self) -> Result<Matrix> {
        let expected = self.dim.saturating_mul(self.dim);
        if self.entries.len() != expected {
            return Err(Error::MatrixFile(format!(
                "non-square data: {} entries for dim {}",
                self.entries.len(),
                self.dim
            )));
        }
        let data = self
            .entries
            .into_iter()
            .enumerate()
            .map(|(i, e)| match (self.field, e) {
                (Field::Real, Entry::Real(x)) => Ok(Complex64::new(x, 0.0)),
                (Field::Complex, Entry::Complex([re, im])) => Ok(Complex64::new(re, im)),
                (Field::Complex, Entry::Real(x)) => Ok(Complex64::new(x, 0.0)),
                (Field::Real, Entry::Complex(_)) => Err(Error::MatrixFile(format!(
                    "entry {i} is a complex pair in a real matrix"
                ))),
            })
            .collect::<Result<Vec<_>>>()?;
        Matrix::from_entries(self.dim, data)
    }
}

impl Serialize for Matrix {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        MatrixFile::from_matrix(self).serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Matrix {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        MatrixFile::deserialize(deserializer)?
            .into_matrix()
            .map_err(serde::de::Error::custom)
    }
}

pub fn matrix_from_json(text: &str) -> Result<Matrix> {
    serde_json::from_str(text).map_err(|e| Error::MatrixFile(e.to_string()))
}

pub fn matrix_to_json(m: &Matrix) -> String {
    serde_json::to_string(m).expect("matrix serialization cannot fail")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_real_and_complex() {
        let m = matrix_from_json(r#"{"dim": 2, "field": "real", "entries": [1, 2, 2, 3.5]}"#).unwrap();
        assert_eq!(m, Matrix::from_real_rows(&[&[1.0, 2.0], &[2.0, 3.5]]).unwrap());

        let m = matrix_from_json(
            r#"{"dim": 2, "field": "complex", "entries": [[1,0],[0,1],[0,-1],[2,0]]}"#,
        )
        .unwrap();
        assert_eq!(m.get(0, 1), Complex64::new(0.0, 1.0));
        assert_eq!(m.get(1, 0), Complex64::new(0.0, -1.0));
    }

    #[test]
    fn rejects_non_square() {
        let err = matrix_from_json(r#"{"dim": 2, "field": "real", "entries": [1, 2, 3]}"#);
        assert!(matches!(err, Err(Error::MatrixFile(_))));
        let err = matrix_from_json(r#"{"dim": 2, "field": "real", "entries": [[1, 2], [3, 4]]}"#);
        assert!(err.is_err());
    }

    #[test]
    fn round_trip_is_bit_exact() {
        let m = Matrix::from_fn(3, |i, j| {
            Complex64::new(0.1 * (i as f64 + 1.0) / 3.0, if i == j { 0.0 } else { (j as f64 - i as f64) / 7.0 })
        });
        let back = matrix_from_json(&matrix_to_json(&m)).unwrap();
        assert_eq!(back, m);
        let real = Matrix::from_diag(&[1.0 / 3.0, 2.0]);
        let text = matrix_to_json(&real);
        assert!(text.contains("\"real\""));
        assert_eq!(matrix_from_json(&text).unwrap(), real);
    }
}
