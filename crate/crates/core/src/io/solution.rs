//! JSON solution dumps: a run record plus the routes with their service
//! start times.

use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::engine::{Mode, RunResult};
use crate::vrptw::RoutePlan;

#[derive(Debug, Error)]
pub enum SolutionError {
    #[error("{path}: {message}")]
    Io { path: String, message: String },
    #[error("invalid solution document: {0}")]
    Json(#[from] serde_json::Error),
}

/// Reads either `{"customers": [...], "begin_service": [...]}` or a bare
/// array of customer ids.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(from = "RouteInput")]
pub struct RouteDump {
    pub customers: Vec<usize>,
    #[serde(default)]
    pub begin_service: Vec<f64>,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum RouteInput {
    Ids(Vec<usize>),
    Full {
        customers: Vec<usize>,
        #[serde(default)]
        begin_service: Vec<f64>,
    },
}

impl From<RouteInput> for RouteDump {
    fn from(input: RouteInput) -> Self {
        match input {
            RouteInput::Ids(customers) => RouteDump { customers, begin_service: Vec::new() },
            RouteInput::Full { customers, begin_service } => RouteDump { customers, begin_service },
        }
    }
}

/// Only `routes` is required when reading; the remaining fields describe
/// the run that produced the plan.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolutionDump {
    #[serde(default)]
    pub instance: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mode: Option<Mode>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub archive_size: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default)]
    pub nv: usize,
    #[serde(default)]
    pub td: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cost: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub iterations: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub wall_clock: Option<f64>,
    pub routes: Vec<RouteDump>,
}

fn route_dumps(plan: &RoutePlan) -> Vec<RouteDump> {
    plan.routes
        .iter()
        .map(|r| RouteDump {
            customers: r.stops.clone(),
            begin_service: r.schedule.iter().map(|s| s.begin).collect(),
        })
        .collect()
}

impl SolutionDump {
    pub fn from_run(run: &RunResult) -> Self {
        SolutionDump {
            instance: run.instance.clone(),
            mode: Some(run.mode),
            archive_size: Some(run.archive_size),
            seed: Some(run.seed),
            nv: run.nv,
            td: run.td,
            cost: Some(run.cost),
            iterations: Some(run.iterations),
            wall_clock: Some(run.wall_clock),
            routes: route_dumps(&run.best_plan),
        }
    }

    pub fn from_plan(instance: &str, plan: &RoutePlan) -> Self {
        SolutionDump {
            instance: instance.to_string(),
            mode: None,
            archive_size: None,
            seed: None,
            nv: plan.nv,
            td: plan.td,
            cost: None,
            iterations: None,
            wall_clock: None,
            routes: route_dumps(plan),
        }
    }

    pub fn route_stops(&self) -> Vec<Vec<usize>> {
        self.routes.iter().map(|r| r.customers.clone()).collect()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("solution dumps always serialize")
    }

    pub fn from_json(text: &str) -> Result<Self, SolutionError> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn read(path: &Path) -> Result<Self, SolutionError> {
        let text = std::fs::read_to_string(path).map_err(|e| SolutionError::Io {
            path: path.display().to_string(),
            message: e.to_string(),
        })?;
        Self::from_json(&text)
    }
}
