//! Continuous particle positions and their decoding into route plans.
//!
//! A position has `c + 2 * vec` dimensions: one priority value per customer,
//! followed by an `(x, y)` reference point per vehicle. Customers are served
//! in ascending order of their priority value; the reference points steer
//! which vehicle receives each customer.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::vrptw::{schedule_route, scalar_cost, CostWeights, InsertionRoute, Instance, RouteBuilder, RoutePlan};

#[derive(Debug, Error, PartialEq)]
pub enum CodecError {
    #[error("fleet bound must be at least 1")]
    EmptyFleet,
    #[error("velocity factor k must lie in [0.1, 1.0], got {0}")]
    VelocityFactor(f64),
}

/// How decoded customers are assigned to vehicles.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DecodePolicy {
    /// Each customer, in priority order, goes to the position of least added
    /// distance over all open routes where it fits (ties favour the earlier
    /// route, then the later position); a new vehicle opens when no such
    /// position exists.
    #[default]
    CheapestInsertion,
    /// Each customer is appended to the first open vehicle that can take it;
    /// the next vehicle opens when none can.
    FirstFeasible,
    /// Each customer ranks all vehicles by the distance from their reference
    /// point to its location and is appended to the nearest one that can
    /// take it.
    NearestReference,
}

impl DecodePolicy {
    pub fn as_str(self) -> &'static str {
        match self {
            DecodePolicy::CheapestInsertion => "cheapest_insertion",
            DecodePolicy::FirstFeasible => "first_feasible",
            DecodePolicy::NearestReference => "nearest_reference",
        }
    }
}

impl std::str::FromStr for DecodePolicy {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.replace('-', "_").as_str() {
            "cheapest_insertion" => Ok(DecodePolicy::CheapestInsertion),
            "first_feasible" => Ok(DecodePolicy::FirstFeasible),
            "nearest_reference" => Ok(DecodePolicy::NearestReference),
            other => Err(format!(
                "unknown decode policy {other:?} (expected cheapest_insertion, first_feasible or nearest_reference)"
            )),
        }
    }
}

/// Dimension layout and per-dimension bounds of the search space.
#[derive(Debug, Clone, PartialEq)]
pub struct EncodingShape {
    n_customers: usize,
    n_vehicles: usize,
    lower: Vec<f64>,
    upper: Vec<f64>,
    vmax: Vec<f64>,
}

impl EncodingShape {
    pub fn n_customers(&self) -> usize {
        self.n_customers
    }

    pub fn n_vehicles(&self) -> usize {
        self.n_vehicles
    }

    pub fn dims(&self) -> usize {
        self.n_customers + 2 * self.n_vehicles
    }

    pub fn lower(&self) -> &[f64] {
        &self.lower
    }

    pub fn upper(&self) -> &[f64] {
        &self.upper
    }

    pub fn vmax(&self) -> &[f64] {
        &self.vmax
    }

    /// Clamps every coordinate into `[lower, upper]`.
    pub fn clamp_position(&self, position: &mut [f64]) {
        for ((x, lo), hi) in position.iter_mut().zip(&self.lower).zip(&self.upper) {
            *x = x.clamp(*lo, *hi);
        }
    }

    pub fn clamp_velocity(&self, velocity: &mut [f64]) {
        for (v, vm) in velocity.iter_mut().zip(&self.vmax) {
            *v = v.clamp(-vm, *vm);
        }
    }
}

/// Customer block bounded by `[0, 1]`; reference-point blocks by the instance
/// bounding box. `V_max = k * (X_max - X_min)` per dimension.
pub fn make_shape(inst: &Instance, fleet_bound: usize, k_vmax: f64) -> Result<EncodingShape, CodecError> {
    if fleet_bound == 0 {
        return Err(CodecError::EmptyFleet);
    }
    if !(0.1..=1.0).contains(&k_vmax) {
        return Err(CodecError::VelocityFactor(k_vmax));
    }
    let c = inst.n_customers();
    let (x0, x1, y0, y1) = inst.bounding_box();
    let mut lower = vec![0.0; c];
    let mut upper = vec![1.0; c];
    for _ in 0..fleet_bound {
        lower.extend([x0, y0]);
        upper.extend([x1, y1]);
    }
    let vmax = lower.iter().zip(&upper).map(|(lo, hi)| k_vmax * (hi - lo)).collect();
    Ok(EncodingShape {
        n_customers: c,
        n_vehicles: fleet_bound,
        lower,
        upper,
        vmax,
    })
}

/// Customer ids `1..=c` by ascending position value; ties go to the lower id.
pub fn priority_list(position: &[f64], shape: &EncodingShape) -> Vec<usize> {
    let block = &position[..shape.n_customers];
    let mut ids: Vec<usize> = (1..=shape.n_customers).collect();
    ids.sort_by(|&a, &b| block[a - 1].total_cmp(&block[b - 1]).then(a.cmp(&b)));
    ids
}

pub fn reference_points(position: &[f64], shape: &EncodingShape) -> Vec<(f64, f64)> {
    position[shape.n_customers..shape.dims()]
        .chunks_exact(2)
        .map(|p| (p[0], p[1]))
        .collect()
}

/// Strictly positive, order-reversing map from cost to fitness.
#[inline]
pub fn fitness_of(cost: f64) -> f64 {
    1.0 / (1.0 + cost)
}

#[derive(Debug, Clone, PartialEq)]
pub struct Decoded {
    pub plan: RoutePlan,
    pub cost: f64,
    pub fitness: f64,
    /// Customers that no vehicle could take; each sits in its own route and
    /// adds one penalty unit.
    pub overflow: usize,
}

fn squared_distance(a: (f64, f64), b: (f64, f64)) -> f64 {
    (a.0 - b.0).powi(2) + (a.1 - b.1).powi(2)
}

/// Vehicle indices sorted by distance from `target` to their reference point.
fn rank_vehicles(refs: &[(f64, f64)], target: (f64, f64), out: &mut Vec<usize>) {
    out.clear();
    out.extend(0..refs.len());
    out.sort_by(|&a, &b| {
        squared_distance(refs[a], target)
            .total_cmp(&squared_distance(refs[b], target))
            .then(a.cmp(&b))
    });
}

fn assign_first_feasible(inst: &Instance, priority: &[usize], fleet: usize) -> (Vec<RouteBuilder>, Vec<usize>) {
    let mut open: Vec<RouteBuilder> = Vec::new();
    let mut overflow = Vec::new();
    for &c in priority {
        if open.iter_mut().any(|r| r.try_push(inst, c)) {
            continue;
        }
        if open.len() < fleet {
            let mut r = RouteBuilder::new();
            if r.try_push(inst, c) {
                open.push(r);
                continue;
            }
        }
        overflow.push(c);
    }
    (open, overflow)
}

fn assign_nearest_reference(
    inst: &Instance,
    priority: &[usize],
    refs: &[(f64, f64)],
) -> (Vec<RouteBuilder>, Vec<usize>) {
    let mut vehicles: Vec<RouteBuilder> = vec![RouteBuilder::new(); refs.len()];
    let mut overflow = Vec::new();
    let mut order = Vec::with_capacity(refs.len());
    for &c in priority {
        let node = inst.node(c).expect("priority ids are valid");
        rank_vehicles(refs, (node.x, node.y), &mut order);
        if !order.iter().any(|&v| vehicles[v].try_push(inst, c)) {
            overflow.push(c);
        }
    }
    (vehicles.into_iter().filter(|r| !r.is_empty()).collect(), overflow)
}

fn assign_cheapest_insertion(inst: &Instance, priority: &[usize], fleet: usize) -> (Vec<Vec<usize>>, Vec<usize>) {
    let mut routes: Vec<InsertionRoute> = Vec::new();
    let mut overflow = Vec::new();
    let mut candidates: Vec<(f64, usize, usize)> = Vec::new();
    let mut scratch = Vec::new();
    for &c in priority {
        candidates.clear();
        for (r, route) in routes.iter().enumerate() {
            scratch.clear();
            route.insertion_candidates(inst, c, &mut scratch);
            candidates.extend(scratch.iter().map(|&(delta, pos)| (delta, r, pos)));
        }
        candidates.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)).then(b.2.cmp(&a.2)));
        if candidates.iter().any(|&(_, r, pos)| routes[r].insert(inst, c, pos)) {
            continue;
        }
        if routes.len() < fleet {
            let mut route = InsertionRoute::new();
            if route.insert(inst, c, 0) {
                routes.push(route);
                continue;
            }
        }
        overflow.push(c);
    }
    (routes.into_iter().map(InsertionRoute::into_stops).collect(), overflow)
}

/// Turns a position into a feasible plan plus its cost and fitness.
///
/// Never fails: customers that cannot be placed once the fleet is exhausted
/// are served by dedicated overflow routes and penalized.
pub fn decode(
    inst: &Instance,
    position: &[f64],
    shape: &EncodingShape,
    weights: &CostWeights,
    policy: DecodePolicy,
) -> Decoded {
    debug_assert_eq!(position.len(), shape.dims());
    let priority = priority_list(position, shape);
    let refs = reference_points(position, shape);
    let built = |(b, o): (Vec<RouteBuilder>, Vec<usize>)| (b.into_iter().map(RouteBuilder::into_stops).collect(), o);
    let (stops, overflow): (Vec<Vec<usize>>, Vec<usize>) = match policy {
        DecodePolicy::FirstFeasible => built(assign_first_feasible(inst, &priority, refs.len())),
        DecodePolicy::NearestReference => built(assign_nearest_reference(inst, &priority, &refs)),
        DecodePolicy::CheapestInsertion => assign_cheapest_insertion(inst, &priority, refs.len()),
    };
    let routes = stops
        .into_iter()
        .chain(overflow.iter().map(|&c| vec![c]))
        .map(|stops| schedule_route(inst, &stops).expect("decoder only builds feasible routes"))
        .collect();
    let plan = RoutePlan::from_routes(inst, routes, weights, overflow.len() as f64 * weights.penalty_cost);
    let cost = scalar_cost(&plan, weights);
    Decoded {
        plan,
        cost,
        fitness: fitness_of(cost),
        overflow: overflow.len(),
    }
}

/// Particle state in the encoded search space.
#[derive(Debug, Clone, PartialEq)]
pub struct Particle {
    pub position: Vec<f64>,
    pub velocity: Vec<f64>,
    pub pbest_position: Vec<f64>,
    pub pbest_fitness: f64,
    pub fitness: f64,
}

impl Particle {
    /// Zero velocity, personal best at the starting position.
    pub fn at(position: Vec<f64>, fitness: f64) -> Self {
        Particle {
            velocity: vec![0.0; position.len()],
            pbest_position: position.clone(),
            pbest_fitness: fitness,
            position,
            fitness,
        }
    }
}
