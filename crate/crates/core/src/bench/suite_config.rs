//! TOML suite files.
//!
//! ```toml
//! [suite]
//! instances = ["../data/solomon/C101.txt", "../data/solomon/R101.txt"]
//! customers = [25, 50]
//! seeds = [1, 2, 3]
//! modes = ["rwpso", "baseline"]
//! reference = "../data/reference/solomon_best.csv"
//!
//! [pso]
//! archive_size = 5
//! ```
//!
//! Relative paths resolve against the directory holding the suite file.
//! `[pso]` accepts every [`PsoConfig`] field and starts from
//! [`PsoConfig::benchmark`].

use std::path::{Path, PathBuf};

use serde::Deserialize;
use thiserror::Error;

use super::harness::SuiteSpec;
use super::reference::{load_reference, ReferenceError};
use crate::engine::{Mode, PsoConfig};

#[derive(Debug, Error)]
pub enum SuiteConfigError {
    #[error("{path}: {message}")]
    Io { path: String, message: String },
    #[error("invalid suite file: {0}")]
    Toml(#[from] toml::de::Error),
    #[error("invalid suite file: {0}")]
    Invalid(String),
    #[error("reference table: {0}")]
    Reference(#[from] ReferenceError),
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct SuiteFile {
    suite: SuiteSection,
    #[serde(default)]
    pso: toml::Table,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct SuiteSection {
    instances: Vec<PathBuf>,
    #[serde(default)]
    customers: Vec<usize>,
    seeds: Vec<u64>,
    #[serde(default = "default_modes")]
    modes: Vec<Mode>,
    reference: Option<PathBuf>,
    iterations: Option<usize>,
}

fn default_modes() -> Vec<Mode> {
    vec![Mode::Rwpso]
}

/// Parses a suite document; relative paths resolve against `base_dir`.
pub fn parse_suite(text: &str, base_dir: &Path) -> Result<SuiteSpec, SuiteConfigError> {
    let file: SuiteFile = toml::from_str(text)?;
    let mut merged = toml::Table::try_from(PsoConfig::benchmark()).expect("config serializes to a table");
    merged.extend(file.pso);
    let pso: PsoConfig = merged.try_into()?;
    if file.suite.seeds.is_empty() {
        return Err(SuiteConfigError::Invalid("suite.seeds must list at least one seed".into()));
    }
    if file.suite.instances.is_empty() {
        return Err(SuiteConfigError::Invalid("suite.instances must list at least one file".into()));
    }
    if file.suite.modes.is_empty() {
        return Err(SuiteConfigError::Invalid("suite.modes must not be empty".into()));
    }
    pso.validate().map_err(|e| SuiteConfigError::Invalid(e.to_string()))?;
    let resolve = |p: &PathBuf| if p.is_absolute() { p.clone() } else { base_dir.join(p) };
    let reference = match &file.suite.reference {
        Some(p) => Some(load_reference(&resolve(p))?),
        None => None,
    };
    let customer_counts = if file.suite.customers.is_empty() {
        vec![None]
    } else {
        file.suite.customers.iter().map(|&n| Some(n)).collect()
    };
    Ok(SuiteSpec {
        instance_paths: file.suite.instances.iter().map(resolve).collect(),
        customer_counts,
        seeds: file.suite.seeds,
        cfg: pso,
        modes: file.suite.modes,
        reference,
        iterations: file.suite.iterations,
        jobs: None,
    })
}

pub fn load_suite(path: &Path) -> Result<SuiteSpec, SuiteConfigError> {
    let text = std::fs::read_to_string(path).map_err(|e| SuiteConfigError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })?;
    parse_suite(&text, path.parent().unwrap_or(Path::new(".")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_suite() {
        let spec = parse_suite("[suite]\ninstances = [\"a.txt\"]\nseeds = [4]\n", Path::new("/base")).unwrap();
        assert_eq!(spec.instance_paths, vec![PathBuf::from("/base/a.txt")]);
        assert_eq!(spec.customer_counts, vec![None]);
        assert_eq!(spec.modes, vec![Mode::Rwpso]);
        assert_eq!(spec.cfg, PsoConfig::benchmark());
    }

    #[test]
    fn pso_overrides_and_modes() {
        let text = "[suite]\ninstances = [\"/abs/a.txt\"]\ncustomers = [25, 50]\nseeds = [1, 2]\n\
                    modes = [\"rwpso\", \"baseline\"]\niterations = 5\n[pso]\narchive_size = 3\nn_particles = 8\n";
        let spec = parse_suite(text, Path::new("/base")).unwrap();
        assert_eq!(spec.instance_paths, vec![PathBuf::from("/abs/a.txt")]);
        assert_eq!(spec.customer_counts, vec![Some(25), Some(50)]);
        assert_eq!(spec.cfg.archive_size, 3);
        assert_eq!(spec.cfg.n_particles, 8);
        assert_eq!(spec.cfg.time_cost, 0.0);
        assert_eq!(spec.iterations, Some(5));
    }

    #[test]
    fn errors() {
        let base = Path::new(".");
        assert!(matches!(parse_suite("[suite]\ninstances = [\"a\"]\n", base), Err(SuiteConfigError::Toml(_))));
        assert!(matches!(
            parse_suite("[suite]\ninstances = [\"a\"]\nseeds = []\n", base),
            Err(SuiteConfigError::Invalid(_))
        ));
        assert!(matches!(
            parse_suite("[suite]\ninstances = [\"a\"]\nseeds = [1]\nbogus = 1\n", base),
            Err(SuiteConfigError::Toml(_))
        ));
        assert!(matches!(
            parse_suite("[suite]\ninstances = [\"a\"]\nseeds = [1]\n[pso]\nswarm = 3\n", base),
            Err(SuiteConfigError::Toml(_))
        ));
        assert!(matches!(
            parse_suite("[suite]\ninstances = [\"a\"]\nseeds = [1]\n[pso]\narchive_size = 0\n", base),
            Err(SuiteConfigError::Invalid(_))
        ));
    }
}
