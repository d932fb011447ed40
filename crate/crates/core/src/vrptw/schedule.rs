use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::Instance;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ViolationKind {
    /// Arrived after the customer's due date.
    LateArrival,
    CapacityExceeded,
    /// Returned to the depot after the end of the horizon.
    DepotOverrun,
}

impl fmt::Display for ViolationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ViolationKind::LateArrival => "time window violated (late arrival)",
            ViolationKind::CapacityExceeded => "capacity exceeded",
            ViolationKind::DepotOverrun => "depot horizon exceeded",
        })
    }
}

/// First hard violation met while simulating a route.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Infeasibility {
    /// Customer id at which the violation occurs (the last stop for depot overruns).
    pub stop: usize,
    pub kind: ViolationKind,
}

impl fmt::Display for Infeasibility {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} at customer {}", self.kind, self.stop)
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ScheduleError {
    #[error("unknown customer id {0}")]
    UnknownCustomerId(usize),
    #[error("customer {0} appears twice in the route")]
    DuplicateStop(usize),
    #[error("route has no stops")]
    EmptyRoute,
    #[error("{0}")]
    Infeasible(Infeasibility),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StopTimes {
    pub customer: usize,
    pub arrival: f64,
    pub wait: f64,
    pub begin: f64,
    pub depart: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Route {
    pub stops: Vec<usize>,
    pub load: f64,
    pub schedule: Vec<StopTimes>,
    /// Length including both depot legs.
    pub distance: f64,
    pub return_time: f64,
}

impl Route {
    pub fn total_wait(&self) -> f64 {
        self.schedule.iter().map(|s| s.wait).sum()
    }
}

/// Times for serving `to` after leaving `from` at `depart`; the caller checks
/// the returned arrival against the window.
#[inline]
fn visit(inst: &Instance, from: usize, depart: f64, to: usize) -> StopTimes {
    let c = &inst.node_unchecked(to);
    let arrival = depart + inst.travel_time(from, to);
    let begin = arrival.max(c.ready);
    StopTimes {
        customer: to,
        arrival,
        wait: begin - arrival,
        begin,
        depart: begin + c.service,
    }
}

/// Forward simulation of a route leaving the depot at `start_0`.
///
/// Early arrivals wait for free; late arrivals, overloads and late returns
/// are hard violations.
pub fn schedule_route(inst: &Instance, stops: &[usize]) -> Result<Route, ScheduleError> {
    if stops.is_empty() {
        return Err(ScheduleError::EmptyRoute);
    }
    let n = inst.n_customers();
    let mut seen = vec![false; n + 1];
    for &s in stops {
        if s == 0 || s > n {
            return Err(ScheduleError::UnknownCustomerId(s));
        }
        if std::mem::replace(&mut seen[s], true) {
            return Err(ScheduleError::DuplicateStop(s));
        }
    }

    let (start, end) = inst.horizon();
    let mut schedule = Vec::with_capacity(stops.len());
    let mut load = 0.0;
    let mut distance = 0.0;
    let mut prev = 0;
    let mut depart = start;
    for &s in stops {
        let c = inst.node_unchecked(s);
        let t = visit(inst, prev, depart, s);
        if t.arrival > c.due {
            return Err(ScheduleError::Infeasible(Infeasibility {
                stop: s,
                kind: ViolationKind::LateArrival,
            }));
        }
        load += c.demand;
        if load > inst.capacity() {
            return Err(ScheduleError::Infeasible(Infeasibility {
                stop: s,
                kind: ViolationKind::CapacityExceeded,
            }));
        }
        distance += inst.distance(prev, s);
        schedule.push(t);
        prev = s;
        depart = t.depart;
    }
    let return_time = depart + inst.travel_time(prev, 0);
    if return_time > end {
        return Err(ScheduleError::Infeasible(Infeasibility {
            stop: prev,
            kind: ViolationKind::DepotOverrun,
        }));
    }
    distance += inst.distance(prev, 0);

    Ok(Route {
        stops: stops.to_vec(),
        load,
        schedule,
        distance,
        return_time,
    })
}

/// Incremental route used by the decoder: O(1) feasibility test for
/// appending one more customer, using the same arithmetic as
/// [`schedule_route`].
#[derive(Debug, Clone, Default)]
pub struct RouteBuilder {
    stops: Vec<usize>,
    load: f64,
    last: usize,
    depart: f64,
}

impl RouteBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn is_empty(&self) -> bool {
        self.stops.is_empty()
    }

    pub fn stops(&self) -> &[usize] {
        &self.stops
    }

    pub fn into_stops(self) -> Vec<usize> {
        self.stops
    }

    /// Appends `customer` if the extended route stays feasible.
    pub fn try_push(&mut self, inst: &Instance, customer: usize) -> bool {
        let c = inst.node_unchecked(customer);
        let load = self.load + c.demand;
        if load > inst.capacity() {
            return false;
        }
        let depart = if self.stops.is_empty() { inst.horizon().0 } else { self.depart };
        let t = visit(inst, self.last, depart, customer);
        if t.arrival > c.due || t.depart + inst.travel_time(customer, 0) > inst.horizon().1 {
            return false;
        }
        self.stops.push(customer);
        self.load = load;
        self.last = customer;
        self.depart = t.depart;
        true
    }
}

/// Route that accepts insertions at any position, with O(1) feasibility
/// screening through forward start times and backward latest start times.
#[derive(Debug, Clone, Default)]
pub struct InsertionRoute {
    stops: Vec<usize>,
    load: f64,
    depart: Vec<f64>,
    latest: Vec<f64>,
}

impl InsertionRoute {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn is_empty(&self) -> bool {
        self.stops.is_empty()
    }

    pub fn stops(&self) -> &[usize] {
        &self.stops
    }

    pub fn into_stops(self) -> Vec<usize> {
        self.stops
    }

    /// Appends every feasible `(added distance, position)` for `customer`
    /// to `out`.
    pub fn insertion_candidates(&self, inst: &Instance, customer: usize, out: &mut Vec<(f64, usize)>) {
        let c = inst.node_unchecked(customer);
        if self.load + c.demand > inst.capacity() {
            return;
        }
        let (start, end) = inst.horizon();
        for pos in 0..=self.stops.len() {
            let (prev, depart_prev) = if pos == 0 { (0, start) } else { (self.stops[pos - 1], self.depart[pos - 1]) };
            let t = visit(inst, prev, depart_prev, customer);
            if t.arrival > c.due {
                break;
            }
            let next = self.stops.get(pos).copied().unwrap_or(0);
            let ok = if next == 0 {
                t.depart + inst.travel_time(customer, 0) <= end
            } else {
                let n = inst.node_unchecked(next);
                let begin_next = (t.depart + inst.travel_time(customer, next)).max(n.ready);
                begin_next <= self.latest[pos]
            };
            if ok {
                let delta = inst.distance(prev, customer) + inst.distance(customer, next) - inst.distance(prev, next);
                out.push((delta, pos));
            }
        }
    }

    /// Inserts `customer` at `pos` after an exact forward check; returns
    /// false and leaves the route untouched when the result is infeasible.
    pub fn insert(&mut self, inst: &Instance, customer: usize, pos: usize) -> bool {
        let c = inst.node_unchecked(customer);
        if pos > self.stops.len() || self.load + c.demand > inst.capacity() {
            return false;
        }
        let mut stops = Vec::with_capacity(self.stops.len() + 1);
        stops.extend_from_slice(&self.stops[..pos]);
        stops.push(customer);
        stops.extend_from_slice(&self.stops[pos..]);
        let (start, end) = inst.horizon();
        let mut depart = Vec::with_capacity(stops.len());
        let mut prev = 0;
        let mut time = start;
        for &s in &stops {
            let t = visit(inst, prev, time, s);
            if t.arrival > inst.node_unchecked(s).due {
                return false;
            }
            depart.push(t.depart);
            prev = s;
            time = t.depart;
        }
        if time + inst.travel_time(prev, 0) > end {
            return false;
        }
        let mut latest = vec![0.0; stops.len()];
        let mut bound = end;
        let mut next = 0;
        for k in (0..stops.len()).rev() {
            let n = inst.node_unchecked(stops[k]);
            let l = n.due.min(bound - inst.travel_time(stops[k], next) - n.service);
            latest[k] = l;
            bound = l;
            next = stops[k];
        }
        self.stops = stops;
        self.load += c.demand;
        self.depart = depart;
        self.latest = latest;
        true
    }
}

/// Penalty for legs travelled while the traffic window is active.
///
/// Each leg `(i, j)` occupies `[depart_i, depart_i + tt_ij]`; every leg whose
/// interval intersects the window adds `eps * penalty_cost`.
pub fn traffic_penalty(inst: &Instance, route: &Route, penalty_cost: f64) -> f64 {
    let Some(tw) = inst.traffic_window() else {
        return 0.0;
    };
    let mut prev = 0;
    let mut depart = inst.horizon().0;
    let mut legs = 0usize;
    let mut hit = |from: usize, depart: f64, to: usize| {
        let arrive = depart + inst.travel_time(from, to);
        if depart <= tw.end && arrive >= tw.start {
            legs += 1;
        }
    };
    for st in &route.schedule {
        hit(prev, depart, st.customer);
        prev = st.customer;
        depart = st.depart;
    }
    hit(prev, depart, 0);
    legs as f64 * tw.eps * penalty_cost
}
