mod common;

use common::*;
use num_complex::Complex64;
use proptest::prelude::*;
use tsharp_core::ensembles::{random_hermitian, random_pd, split_seed, EnsembleKind, EnsembleSpec, Field};
use tsharp_core::linalg::{hermitian_eigendecompose, matrix_function, matrix_from_json, matrix_to_json};
use tsharp_core::{Error, Hermitian, Matrix, Positive};

fn check_spectrum(h: &Hermitian) {
    let s = hermitian_eigendecompose(h).unwrap();
    let a = h.matrix();
    let n = a.dim() as f64;
    let residual = dd_reconstruction_residual(a, s.eigenvalues(), s.eigenvectors());
    assert!(residual <= 1e-12 * (1.0 + a.frobenius_norm()), "residual {residual:e}");
    let defect = dd_unitarity_defect(s.eigenvectors());
    assert!(defect <= 1e-12 * n, "unitarity {defect:e}");
    assert!(s.eigenvalues().windows(2).all(|w| w[0] >= w[1]));

    let (oracle, _) = na_eigh(&to_na(a));
    let scale = oracle.iter().fold(1.0f64, |m, x| m.max(x.abs()));
    for (x, y) in s.eigenvalues().iter().zip(&oracle) {
        assert!((x - y).abs() <= 1e-12 * scale, "{x} vs {y}");
    }
}

#[test]
fn thousand_random_hermitian() {
    for i in 0..1000u64 {
        let n = 2 + (i % 7) as usize;
        let field = if i % 3 == 0 { Field::Real } else { Field::Complex };
        check_spectrum(&random_hermitian(n, field, split_seed(0xE1, i)));
    }
}

#[test]
fn seed_42_six_by_six() {
    let h = random_hermitian(6, Field::Complex, 42);
    let s = h.eigen().unwrap();
    let residual = dd_reconstruction_residual(h.matrix(), s.eigenvalues(), s.eigenvectors());
    assert!(residual <= 1e-12 * h.matrix().frobenius_norm(), "{residual:e}");
}

#[test]
fn deterministic_bits() {
    let h = random_hermitian(7, Field::Complex, 99);
    let a = h.eigen().unwrap();
    let b = h.eigen().unwrap();
    assert_eq!(a, b);
}

#[test]
fn two_by_two_sqrt() {
    let a = Positive::strict(Hermitian::new(Matrix::from_real_rows(&[&[2.0, 1.0], &[1.0, 2.0]]).unwrap()).unwrap())
        .unwrap();
    let root = matrix_function(&a, f64::sqrt).unwrap();
    let s3 = 3f64.sqrt();
    let expect = Matrix::from_real_rows(&[&[(s3 + 1.0) / 2.0, (s3 - 1.0) / 2.0], &[(s3 - 1.0) / 2.0, (s3 + 1.0) / 2.0]])
        .unwrap();
    assert!(rel_frob_error(root.matrix(), &expect) <= 1e-14);
}

#[test]
fn negative_power_of_singular() {
    let z = Positive::psd(Hermitian::new(Matrix::from_diag(&[1.0, 0.0])).unwrap()).unwrap();
    assert!(matches!(
        matrix_function(&z, |x| x.powf(-0.5)),
        Err(Error::SingularFunction { .. })
    ));
}

fn pd(n: usize, seed: u64) -> Positive {
    random_pd(&EnsembleSpec::new(n, EnsembleKind::Pd, seed).with_condition(1e3)).unwrap()
}

#[test]
fn square_root_squares_back() {
    for seed in 0..100 {
        let a = pd(2 + (seed % 7) as usize, seed);
        let r = matrix_function(&a, f64::sqrt).unwrap();
        let sq = dd_matmul(r.matrix(), r.matrix());
        assert!(rel_frob_error(&sq, a.matrix()) <= 1e-11);
    }
}

#[test]
fn identity_function_reproduces_input() {
    for seed in 0..100 {
        let a = pd(2 + (seed % 7) as usize, seed);
        let same = matrix_function(&a, |x| x).unwrap();
        assert!(same.matrix().sub(a.matrix()).unwrap().frobenius_norm() <= 1e-12 * (1.0 + a.matrix().frobenius_norm()));
    }
}

#[test]
fn eigenvalues_of_function() {
    for seed in 0..100 {
        let a = pd(2 + (seed % 7) as usize, seed);
        for f in [f64::sqrt as fn(f64) -> f64, f64::ln, |x: f64| x.powf(2.5)] {
            let fa = matrix_function(&a, f).unwrap();
            let got = fa.eigen().unwrap();
            let mut want: Vec<f64> = a.eigenvalues().iter().map(|&x| f(x)).collect();
            want.sort_by(|x, y| y.total_cmp(x));
            let scale = want.iter().fold(0.0f64, |m, x| m.max(x.abs()));
            for (x, y) in got.eigenvalues().iter().zip(&want) {
                assert!((x - y).abs() <= 1e-12 * scale.max(1.0), "{x} vs {y}");
            }
        }
    }
}

#[test]
fn matrix_json_round_trip() {
    let h = random_hermitian(3, Field::Complex, 5);
    let text = matrix_to_json(h.matrix());
    assert_eq!(&matrix_from_json(&text).unwrap(), h.matrix());
    let real = matrix_from_json(r#"{"dim":2,"field":"real","entries":[1,2,3,4]}"#).unwrap();
    assert_eq!(real.get(1, 0), Complex64::new(3.0, 0.0));
    assert!(matrix_from_json(r#"{"dim":2,"field":"real","entries":[1,2,3]}"#).is_err());
}

fn hermitian_strategy() -> impl Strategy<Value = Hermitian> {
    (1usize..=8).prop_flat_map(|n| {
        proptest::collection::vec((-10.0f64..10.0, -10.0f64..10.0), n * n).prop_map(move |v| {
            let g = Matrix::from_fn(n, |i, j| {
                let (re, im) = v[i * n + j];
                Complex64::new(re, im)
            });
            let sym = g.add(&g.adjoint()).unwrap().scale(0.5);
            Hermitian::new(sym).unwrap()
        })
    })
}

proptest! {
    #[test]
    fn spectrum_invariants(h in hermitian_strategy()) {
        check_spectrum(&h);
    }

    #[test]
    fn adjoint_involution(h in hermitian_strategy()) {
        let m = h.matrix().matmul(&Matrix::from_fn(h.dim(), |i, j| Complex64::new(i as f64, j as f64 - 1.0))).unwrap();
        prop_assert_eq!(m.adjoint().adjoint(), m);
    }
}
