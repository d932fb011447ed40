use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::schedule::{schedule_route, traffic_penalty, Infeasibility, Route, ScheduleError};
use super::Instance;

/// Weights turning a plan into one scalar cost (lower is better).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CostWeights {
    /// Cost per vehicle used; large enough that vehicle count dominates distance.
    pub vehicle_weight: f64,
    /// Cost per unit of waiting time.
    pub time_cost: f64,
    /// Unit penalty for traffic-window legs and unassigned customers.
    pub penalty_cost: f64,
}

impl Default for CostWeights {
    fn default() -> Self {
        CostWeights {
            vehicle_weight: 1000.0,
            time_cost: 0.0,
            penalty_cost: 100.0,
        }
    }
}

impl CostWeights {
    pub fn zero() -> Self {
        CostWeights {
            vehicle_weight: 0.0,
            time_cost: 0.0,
            penalty_cost: 0.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RoutePlan {
    pub routes: Vec<Route>,
    pub nv: usize,
    pub td: f64,
    pub total_wait: f64,
    pub penalty: f64,
}

impl RoutePlan {
    /// Aggregates already-scheduled routes. `extra_penalty` is added on top of
    /// the traffic penalty.
    pub fn from_routes(inst: &Instance, routes: Vec<Route>, weights: &CostWeights, extra_penalty: f64) -> Self {
        let mut td = 0.0;
        let mut total_wait = 0.0;
        let mut penalty = extra_penalty;
        for r in &routes {
            td += r.distance;
            total_wait += r.total_wait();
            penalty += traffic_penalty(inst, r, weights.penalty_cost);
        }
        RoutePlan {
            nv: routes.len(),
            routes,
            td,
            total_wait,
            penalty,
        }
    }

    pub fn stops(&self) -> Vec<Vec<usize>> {
        self.routes.iter().map(|r| r.stops.clone()).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CoverageKind {
    Missing,
    Duplicate,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EvalError {
    #[error("unknown customer id {0}")]
    UnknownCustomerId(usize),
    #[error("coverage violation: customer {customer} {}", match .kind { CoverageKind::Missing => "is not visited", CoverageKind::Duplicate => "is visited more than once" })]
    CoverageViolation { customer: usize, kind: CoverageKind },
    #[error("route {route}: {reason}")]
    Infeasible { route: usize, reason: Infeasibility },
}

/// One entry of a full validation pass.
#[derive(Debug, Clone, PartialEq)]
pub struct Violation(pub EvalError);

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

fn coverage(inst: &Instance, routes: &[Vec<usize>]) -> Vec<EvalError> {
    let n = inst.n_customers();
    let mut count = vec![0usize; n + 1];
    let mut errors = Vec::new();
    for &c in routes.iter().flatten() {
        if c == 0 || c > n {
            errors.push(EvalError::UnknownCustomerId(c));
            continue;
        }
        count[c] += 1;
        if count[c] == 2 {
            errors.push(EvalError::CoverageViolation {
                customer: c,
                kind: CoverageKind::Duplicate,
            });
        }
    }
    for (c, &k) in count.iter().enumerate().skip(1) {
        if k == 0 {
            errors.push(EvalError::CoverageViolation {
                customer: c,
                kind: CoverageKind::Missing,
            });
        }
    }
    errors
}

/// Checks coverage, then schedules every route; fails on the first violation.
/// Empty routes are ignored.
pub fn evaluate(inst: &Instance, routes: &[Vec<usize>], weights: &CostWeights) -> Result<RoutePlan, EvalError> {
    if let Some(e) = coverage(inst, routes).into_iter().next() {
        return Err(e);
    }
    let mut scheduled = Vec::with_capacity(routes.len());
    for (idx, stops) in routes.iter().enumerate().filter(|(_, r)| !r.is_empty()) {
        match schedule_route(inst, stops) {
            Ok(r) => scheduled.push(r),
            Err(ScheduleError::Infeasible(reason)) => {
                return Err(EvalError::Infeasible { route: idx, reason })
            }
            Err(ScheduleError::UnknownCustomerId(c)) => return Err(EvalError::UnknownCustomerId(c)),
            Err(ScheduleError::DuplicateStop(c)) => {
                return Err(EvalError::CoverageViolation {
                    customer: c,
                    kind: CoverageKind::Duplicate,
                })
            }
            Err(ScheduleError::EmptyRoute) => unreachable!("empty routes are filtered"),
        }
    }
    Ok(RoutePlan::from_routes(inst, scheduled, weights, 0.0))
}

/// Every violation of coverage, capacity, time windows and the depot horizon.
/// An empty result means the plan is feasible.
pub fn validate(inst: &Instance, routes: &[Vec<usize>]) -> Vec<Violation> {
    let mut out: Vec<Violation> = coverage(inst, routes).into_iter().map(Violation).collect();
    for (idx, stops) in routes.iter().enumerate().filter(|(_, r)| !r.is_empty()) {
        let valid: Vec<usize> = stops.iter().copied().filter(|&c| c >= 1 && c <= inst.n_customers()).collect();
        let mut seen = std::collections::HashSet::new();
        if valid.len() != stops.len() || !valid.iter().all(|c| seen.insert(*c)) {
            continue;
        }
        if let Err(ScheduleError::Infeasible(reason)) = schedule_route(inst, stops) {
            out.push(Violation(EvalError::Infeasible { route: idx, reason }));
        }
    }
    out
}

/// `W_v * nv + td + TimeCost * wait + penalty`.
pub fn scalar_cost(plan: &RoutePlan, weights: &CostWeights) -> f64 {
    weights.vehicle_weight * plan.nv as f64 + plan.td + weights.time_cost * plan.total_wait + plan.penalty
}

/// Orders by vehicle count, then distance, then penalty.
pub fn compare_lexicographic(a: &RoutePlan, b: &RoutePlan) -> Ordering {
    a.nv.cmp(&b.nv)
        .then_with(|| a.td.total_cmp(&b.td))
        .then_with(|| a.penalty.total_cmp(&b.penalty))
}
