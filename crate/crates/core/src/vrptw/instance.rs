use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum InstanceError {
    #[error("instance has no depot")]
    MissingDepot,
    #[error("node at index {index} has id {id}")]
    IdMismatch { index: usize, id: usize },
    #[error("depot horizon must start at 0, got {0}")]
    HorizonStart(f64),
    #[error("customer {id} demand {demand} exceeds vehicle capacity {capacity}")]
    DemandExceedsCapacity { id: usize, demand: f64, capacity: f64 },
    #[error("customer {0} cannot be served by a dedicated vehicle within its time window and the depot horizon")]
    UnreachableCustomer(usize),
    #[error("invalid traffic window [{start}, {end}]")]
    TrafficWindow { start: f64, end: f64 },
}

/// A depot or customer node. The depot is node 0 with zero demand.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Customer {
    pub id: usize,
    pub x: f64,
    pub y: f64,
    pub demand: f64,
    pub ready: f64,
    pub due: f64,
    pub service: f64,
}

/// Congestion interval during which every travelled leg is penalized.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrafficWindow {
    pub start: f64,
    pub end: f64,
    /// Scales the per-leg penalty cost.
    pub eps: f64,
}

/// Immutable VRPTW problem data.
#[derive(Debug, Clone)]
pub struct Instance {
    name: String,
    capacity: f64,
    nodes: Vec<Customer>,
    dm: Vec<f64>,
    tt: Vec<f64>,
    big_k: f64,
    traffic: Option<TrafficWindow>,
    fleet_size: usize,
}

impl Instance {
    /// Builds an instance from the depot (`nodes[0]`) and customers `1..`.
    ///
    /// Distances are Euclidean at full precision and travel time equals
    /// distance. Every customer must fit a vehicle on its own, both by load
    /// and by schedule.
    pub fn new(name: impl Into<String>, capacity: f64, nodes: Vec<Customer>) -> Result<Self, InstanceError> {
        if nodes.is_empty() {
            return Err(InstanceError::MissingDepot);
        }
        for (index, node) in nodes.iter().enumerate() {
            if node.id != index {
                return Err(InstanceError::IdMismatch { index, id: node.id });
            }
        }
        if nodes[0].ready != 0.0 {
            return Err(InstanceError::HorizonStart(nodes[0].ready));
        }
        let n = nodes.len();
        let mut dm = vec![0.0; n * n];
        for i in 0..n {
            for j in (i + 1)..n {
                let d = (nodes[i].x - nodes[j].x).hypot(nodes[i].y - nodes[j].y);
                dm[i * n + j] = d;
                dm[j * n + i] = d;
            }
        }
        let tt = dm.clone();
        let max_service = nodes.iter().map(|c| c.service).fold(0.0, f64::max);
        let max_tt = tt.iter().copied().fold(0.0, f64::max);
        let big_k = nodes[0].due + max_service + max_tt + 1.0;

        let inst = Instance {
            name: name.into(),
            capacity,
            nodes,
            dm,
            tt,
            big_k,
            traffic: None,
            fleet_size: n.saturating_sub(1).max(1),
        };
        for c in inst.customers() {
            if c.demand > capacity {
                return Err(InstanceError::DemandExceedsCapacity {
                    id: c.id,
                    demand: c.demand,
                    capacity,
                });
            }
            if super::schedule_route(&inst, &[c.id]).is_err() {
                return Err(InstanceError::UnreachableCustomer(c.id));
            }
        }
        Ok(inst)
    }

    pub fn with_traffic_window(mut self, window: TrafficWindow) -> Result<Self, InstanceError> {
        if window.start.is_nan() || window.end.is_nan() || window.start > window.end {
            return Err(InstanceError::TrafficWindow {
                start: window.start,
                end: window.end,
            });
        }
        self.traffic = Some(window);
        Ok(self)
    }

    pub fn renamed(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    /// Sets the number of available vehicles (at least 1).
    pub fn with_fleet_size(mut self, vehicles: usize) -> Self {
        self.fleet_size = vehicles.max(1);
        self
    }

    /// Available vehicles; defaults to one per customer.
    pub fn fleet_size(&self) -> usize {
        self.fleet_size
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn capacity(&self) -> f64 {
        self.capacity
    }

    pub fn n_customers(&self) -> usize {
        self.nodes.len() - 1
    }

    pub fn depot(&self) -> &Customer {
        &self.nodes[0]
    }

    /// Customers `1..=n`, depot excluded.
    pub fn customers(&self) -> &[Customer] {
        &self.nodes[1..]
    }

    /// Node by id; 0 is the depot.
    pub fn node(&self, id: usize) -> Option<&Customer> {
        self.nodes.get(id)
    }

    #[inline]
    pub(crate) fn node_unchecked(&self, id: usize) -> &Customer {
        &self.nodes[id]
    }

    /// The depot window `[start_0, end_0]`.
    pub fn horizon(&self) -> (f64, f64) {
        (self.nodes[0].ready, self.nodes[0].due)
    }

    #[inline]
    pub fn distance(&self, i: usize, j: usize) -> f64 {
        self.dm[i * self.nodes.len() + j]
    }

    #[inline]
    pub fn travel_time(&self, i: usize, j: usize) -> f64 {
        self.tt[i * self.nodes.len() + j]
    }

    /// Big-M constant large enough to relax the linking constraint when an
    /// arc is unused.
    pub fn big_k(&self) -> f64 {
        self.big_k
    }

    pub fn traffic_window(&self) -> Option<&TrafficWindow> {
        self.traffic.as_ref()
    }

    /// `(min_x, max_x, min_y, max_y)` over depot and customers.
    pub fn bounding_box(&self) -> (f64, f64, f64, f64) {
        self.nodes.iter().fold(
            (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY),
            |(x0, x1, y0, y1), c| (x0.min(c.x), x1.max(c.x), y0.min(c.y), y1.max(c.y)),
        )
    }
}
