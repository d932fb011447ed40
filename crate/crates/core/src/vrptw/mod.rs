//! The VRPTW model: instance data, route scheduling under hard time
//! windows, and plan-level metrics.

mod instance;
mod plan;
mod schedule;

pub use instance::{Customer, Instance, InstanceError, TrafficWindow};
pub use plan::{
    compare_lexicographic, evaluate, scalar_cost, validate, CostWeights, CoverageKind, EvalError, RoutePlan,
    Violation,
};
pub use schedule::{
    schedule_route, traffic_penalty, Infeasibility, InsertionRoute, Route, RouteBuilder, ScheduleError, StopTimes, ViolationKind,
};
