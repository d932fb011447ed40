use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::codec::DecodePolicy;
use crate::vrptw::CostWeights;

#[derive(Debug, Error, PartialEq)]
pub enum ConfigError {
    #[error("{field} must be {requirement}, got {value}")]
    OutOfRange {
        field: &'static str,
        requirement: &'static str,
        value: f64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    /// Global best sampled by roulette wheel from the top-L archive.
    Rwpso,
    /// Classic global-best PSO.
    Baseline,
}

impl Mode {
    pub fn as_str(self) -> &'static str {
        match self {
            Mode::Rwpso => "rwpso",
            Mode::Baseline => "baseline",
        }
    }
}

impl std::fmt::Display for Mode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for Mode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "rwpso" => Ok(Mode::Rwpso),
            "baseline" | "pso" => Ok(Mode::Baseline),
            other => Err(format!("unknown mode {other:?} (expected rwpso or baseline)")),
        }
    }
}

/// Granularity of the r1/r2 draws in the velocity update.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RandomDraw {
    /// Fresh r1, r2 for every dimension.
    #[default]
    PerDimension,
    /// One r1, r2 pair per particle update.
    PerParticle,
}

/// What happens when a candidate beats an archived entry.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ArchiveRule {
    /// The candidate overwrites the entry at its rank; nothing shifts.
    #[default]
    Replace,
    /// The candidate is inserted at its rank and the tail entry falls off.
    InsertShift,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PsoConfig {
    pub n_particles: usize,
    pub c1: f64,
    pub c2: f64,
    pub w_start: f64,
    pub w_end: f64,
    pub max_iterations: usize,
    /// Size L of the global-best archive.
    pub archive_size: usize,
    /// `V_max = k * (X_max - X_min)`.
    pub k_vmax: f64,
    pub time_cost: f64,
    pub penalty_cost: f64,
    pub vehicle_weight: f64,
    /// Carried and reported; no algorithmic role.
    pub rate: f64,
    pub seed: u64,
    /// Vehicles encoded per particle; `None` uses the instance's declared fleet.
    pub fleet_bound: Option<usize>,
    pub decoder: DecodePolicy,
    pub random_draw: RandomDraw,
    pub archive_rule: ArchiveRule,
}

impl Default for PsoConfig {
    fn default() -> Self {
        PsoConfig {
            n_particles: 20,
            c1: 2.0,
            c2: 2.0,
            w_start: 0.9,
            w_end: 0.4,
            max_iterations: 1000,
            archive_size: 5,
            k_vmax: 0.5,
            time_cost: 10.0,
            penalty_cost: 100.0,
            vehicle_weight: 1000.0,
            rate: 2.0,
            seed: 0,
            fleet_bound: None,
            decoder: DecodePolicy::default(),
            random_draw: RandomDraw::default(),
            archive_rule: ArchiveRule::default(),
        }
    }
}

impl PsoConfig {
    /// Defaults with waiting time left out of the cost, so the reported
    /// distance is the quantity being optimized after vehicle count.
    pub fn benchmark() -> Self {
        PsoConfig {
            time_cost: 0.0,
            ..PsoConfig::default()
        }
    }

    pub fn weights(&self) -> CostWeights {
        CostWeights {
            vehicle_weight: self.vehicle_weight,
            time_cost: self.time_cost,
            penalty_cost: self.penalty_cost,
        }
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        let check = |ok: bool, field: &'static str, requirement: &'static str, value: f64| {
            if ok {
                Ok(())
            } else {
                Err(ConfigError::OutOfRange { field, requirement, value })
            }
        };
        check(self.n_particles >= 1, "n_particles", "at least 1", self.n_particles as f64)?;
        check(self.archive_size >= 1, "archive_size", "at least 1", self.archive_size as f64)?;
        check((0.1..=1.0).contains(&self.k_vmax), "k_vmax", "in [0.1, 1.0]", self.k_vmax)?;
        check(self.c1 >= 0.0, "c1", "non-negative", self.c1)?;
        check(self.c2 >= 0.0, "c2", "non-negative", self.c2)?;
        check(self.w_start.is_finite(), "w_start", "finite", self.w_start)?;
        check(self.w_end.is_finite(), "w_end", "finite", self.w_end)?;
        check(self.time_cost >= 0.0, "time_cost", "non-negative", self.time_cost)?;
        check(self.penalty_cost >= 0.0, "penalty_cost", "non-negative", self.penalty_cost)?;
        check(self.vehicle_weight >= 0.0, "vehicle_weight", "non-negative", self.vehicle_weight)?;
        if let Some(f) = self.fleet_bound {
            check(f >= 1, "fleet_bound", "at least 1", f as f64)?;
        }
        Ok(())
    }
}

/// Linearly decays from `w_start` at `t = 0` to `w_end` at `t = T`.
pub fn inertia(t: usize, cfg: &PsoConfig) -> f64 {
    if cfg.max_iterations == 0 {
        return cfg.w_start;
    }
    cfg.w_start + (cfg.w_end - cfg.w_start) * t as f64 / cfg.max_iterations as f64
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_defaults() {
        let c = PsoConfig::default();
        assert_eq!((c.n_particles, c.c1, c.c2, c.w_start, c.w_end), (20, 2.0, 2.0, 0.9, 0.4));
        assert_eq!((c.time_cost, c.penalty_cost, c.rate), (10.0, 100.0, 2.0));
        assert_eq!(PsoConfig::benchmark().time_cost, 0.0);
        assert!(c.validate().is_ok());
    }

    #[test]
    fn inertia_schedule() {
        let c = PsoConfig { max_iterations: 1000, ..PsoConfig::default() };
        assert!((inertia(0, &c) - 0.9).abs() < 1e-15);
        assert!((inertia(1000, &c) - 0.4).abs() < 1e-15);
        assert!((inertia(500, &c) - 0.65).abs() < 1e-15);
    }

    #[test]
    fn rejects_bad_values() {
        let c = PsoConfig { archive_size: 0, ..PsoConfig::default() };
        assert!(c.validate().is_err());
        let c = PsoConfig { k_vmax: 2.0, ..PsoConfig::default() };
        assert!(c.validate().is_err());
        let c = PsoConfig { n_particles: 0, ..PsoConfig::default() };
        assert!(c.validate().is_err());
    }

    #[test]
    fn mode_parsing() {
        assert_eq!("rwpso".parse::<Mode>(), Ok(Mode::Rwpso));
        assert_eq!("baseline".parse::<Mode>(), Ok(Mode::Baseline));
        assert!("ga".parse::<Mode>().is_err());
    }
}
