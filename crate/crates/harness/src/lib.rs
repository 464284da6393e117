//! Campaign runner and counterexample search over the inequality checks of
//! `tsharp-core`.

pub mod campaign;
pub mod config;
pub mod emit;
pub mod error;
pub mod search;

pub use campaign::{collect_campaign, run_campaign, CampaignSummary, Instance, Point};
pub use config::{CampaignConfig, EnsembleTemplate, OutputFormat, TemplateKind};
pub use error::{HarnessError, Result};
pub use search::{search_counterexample, SearchConfig, SearchReport, SearchTarget};
