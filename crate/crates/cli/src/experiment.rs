//! Experiment files.
//!
//! ```json
//! {
//!   "schema_version": 1,
//!   "seed": 1,
//!   "checks": [
//!     { "check_id": "rk_p1_equality", "params": { "n": 3, "k": 1, "mu": 0.0 } },
//!     { "check_id": "busemann", "budget": { "samples": 100000 }, "tolerance": { "stat_sigma": 4.0 } }
//!   ],
//!   "output": { "format": "json", "path": "report.json" }
//! }
//! ```
//!
//! Unknown keys are rejected at every level. Budget fields left out fall
//! back to the check's registry default.

use std::path::PathBuf;

use serde::Deserialize;

use kplane_core::harness::{validate_check, CheckSpec, Params, Tolerance};

use crate::CliError;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    #[default]
    Json,
    Csv,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentFile {
    pub schema_version: u32,
    pub seed: u64,
    pub checks: Vec<CheckEntry>,
    #[serde(default)]
    pub output: Option<Output>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CheckEntry {
    pub check_id: String,
    #[serde(default)]
    pub params: Params,
    #[serde(default)]
    pub budget: BudgetOverride,
    #[serde(default)]
    pub tolerance: Option<Tolerance>,
    /// Per-check seed; the file seed otherwise.
    #[serde(default)]
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, Copy, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BudgetOverride {
    pub samples: Option<u64>,
    pub order: Option<usize>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Output {
    #[serde(default)]
    pub format: Format,
    #[serde(default)]
    pub path: Option<PathBuf>,
}

/// Command-line overrides applied on top of a file.
#[derive(Debug, Clone, Copy, Default)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub samples: Option<u64>,
}

impl ExperimentFile {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let file: ExperimentFile = serde_json::from_str(text).map_err(|e| CliError::Schema(e.to_string()))?;
        if file.schema_version != SCHEMA_VERSION {
            return Err(CliError::Schema(format!(
                "schema_version {} is not supported (expected {SCHEMA_VERSION})",
                file.schema_version
            )));
        }
        if file.checks.is_empty() {
            return Err(CliError::Schema("an experiment needs at least one check".into()));
        }
        Ok(file)
    }

    pub fn load(path: &std::path::Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(path.display().to_string(), e))?;
        Self::parse(&text)
    }

    /// Validated specs in file order.
    pub fn specs(&self, o: Overrides) -> Result<Vec<CheckSpec>, CliError> {
        self.checks
            .iter()
            .enumerate()
            .map(|(i, c)| {
                let seed = o.seed.or(c.seed).unwrap_or(self.seed);
                let mut spec = CheckSpec::new(&c.check_id, c.params.clone(), seed);
                if let Some(s) = o.samples.or(c.budget.samples) {
                    spec.budget.samples = s;
                }
                if let Some(order) = c.budget.order {
                    spec.budget.order = order;
                }
                if let Some(t) = c.tolerance {
                    spec.tolerance = t;
                }
                validate_check(&spec).map_err(|e| CliError::Check { index: i, id: c.check_id.clone(), source: e })?;
                Ok(spec)
            })
            .collect()
    }
}

/// The suite shipped with the binary.
pub const DEFAULT_SUITE: &str = include_str!("../suites/default.json");
