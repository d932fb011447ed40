//! Test-only helpers: a random small-instance generator and an exhaustive
//! VRPTW solver that shares no code with the library's scheduler.

#![allow(dead_code)]

use std::path::PathBuf;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rwpso::vrptw::{Customer, Instance};

pub fn solomon_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data/solomon")
}

pub fn reference_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data/reference")
}

pub fn solomon_file(name: &str) -> PathBuf {
    solomon_dir().join(format!("{name}.txt"))
}

/// Random instance with `n` customers. Tight instances get narrow windows
/// and a capacity that binds; wide ones span most of the horizon.
pub fn random_instance(seed: u64, n: usize, tight: bool) -> Instance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let horizon = 400.0;
    let service = 10.0;
    let capacity = if tight { 40.0 } else { 100.0 };
    let mut nodes = vec![Customer { id: 0, x: 50.0, y: 50.0, demand: 0.0, ready: 0.0, due: horizon, service: 0.0 }];
    for id in 1..=n {
        let x: f64 = rng.gen_range(0.0..100.0);
        let y: f64 = rng.gen_range(0.0..100.0);
        let d0 = ((x - 50.0).powi(2) + (y - 50.0).powi(2)).sqrt();
        let earliest = d0;
        let latest = horizon - service - d0;
        let (ready, due) = if tight {
            let width = rng.gen_range(20.0..60.0);
            let center = rng.gen_range(earliest..latest);
            ((center - width / 2.0).max(0.0), (center + width / 2.0).min(latest).max(earliest))
        } else {
            (0.0, latest)
        };
        let demand = rng.gen_range(5..=20) as f64;
        nodes.push(Customer { id, x, y, demand, ready, due, service });
    }
    Instance::new(format!("rand{seed}"), capacity, nodes).expect("generated instance is valid")
}

#[derive(Debug, Clone, PartialEq)]
pub struct OraclePlan {
    pub routes: Vec<Vec<usize>>,
    pub nv: usize,
    pub td: f64,
}

fn dist(a: &Customer, b: &Customer) -> f64 {
    ((a.x - b.x).powi(2) + (a.y - b.y).powi(2)).sqrt()
}

/// Distance of `order` if it is feasible, recomputed from raw coordinates.
pub fn route_distance(nodes: &[Customer], capacity: f64, order: &[usize]) -> Option<f64> {
    let load: f64 = order.iter().map(|&c| nodes[c].demand).sum();
    if load > capacity {
        return None;
    }
    let depot = &nodes[0];
    let mut time = depot.ready;
    let mut total = 0.0;
    let mut at = depot;
    for &c in order {
        let next = &nodes[c];
        let leg = dist(at, next);
        total += leg;
        let arrive = time + leg;
        if arrive > next.due {
            return None;
        }
        time = arrive.max(next.ready) + next.service;
        at = next;
    }
    let leg = dist(at, depot);
    if time + leg > depot.due {
        return None;
    }
    Some(total + leg)
}

fn permutations(items: &mut Vec<usize>, k: usize, visit: &mut dyn FnMut(&[usize])) {
    if k == items.len() {
        visit(items);
        return;
    }
    for i in k..items.len() {
        items.swap(k, i);
        permutations(items, k + 1, visit);
        items.swap(k, i);
    }
}

type Partition = Option<(usize, f64, Vec<usize>)>;

/// Best ordering of every customer subset, indexed by bitmask over
/// customers `1..=n`.
fn best_orders(nodes: &[Customer], capacity: f64) -> Vec<Option<(f64, Vec<usize>)>> {
    let n = nodes.len() - 1;
    let mut best = vec![None; 1 << n];
    for (mask, slot) in best.iter_mut().enumerate().skip(1) {
        let mut members: Vec<usize> = (1..=n).filter(|c| mask & (1 << (c - 1)) != 0).collect();
        let mut found: Option<(f64, Vec<usize>)> = None;
        permutations(&mut members, 0, &mut |order| {
            if let Some(d) = route_distance(nodes, capacity, order) {
                if found.as_ref().is_none_or(|(bd, _)| d < *bd) {
                    found = Some((d, order.to_vec()));
                }
            }
        });
        *slot = found;
    }
    best
}

/// Exhaustive optimum under (vehicle count, total distance) order, over all
/// set partitions of the customers and all orderings within each route.
pub fn brute_force(inst: &Instance) -> OraclePlan {
    let nodes: Vec<Customer> = std::iter::once(*inst.depot()).chain(inst.customers().iter().copied()).collect();
    let n = nodes.len() - 1;
    let best = best_orders(&nodes, inst.capacity());
    let full = (1usize << n) - 1;
    // Partition search: the lowest remaining customer anchors the next block.
    let mut memo: Vec<Option<Partition>> = vec![None; 1 << n];
    fn solve(
        mask: usize,
        best: &[Option<(f64, Vec<usize>)>],
        memo: &mut Vec<Option<Partition>>,
    ) -> Partition {
        if mask == 0 {
            return Some((0, 0.0, Vec::new()));
        }
        if let Some(v) = &memo[mask] {
            return v.clone();
        }
        let low = mask & mask.wrapping_neg();
        let rest = mask ^ low;
        let mut result: Partition = None;
        let mut sub = rest;
        loop {
            let block = sub | low;
            if let Some((d, _)) = &best[block] {
                if let Some((nv, td, mut blocks)) = solve(mask ^ block, best, memo) {
                    let cand = (nv + 1, td + d);
                    let better = match &result {
                        None => true,
                        Some((bn, bt, _)) => cand.0 < *bn || (cand.0 == *bn && cand.1 < *bt),
                    };
                    if better {
                        blocks.push(block);
                        result = Some((cand.0, cand.1, blocks));
                    }
                }
            }
            if sub == 0 {
                break;
            }
            sub = (sub - 1) & rest;
        }
        memo[mask] = Some(result.clone());
        result
    }
    let (nv, td, blocks) = solve(full, &best, &mut memo).expect("every customer is individually feasible");
    let routes = blocks.iter().map(|&b| best[b].as_ref().unwrap().1.clone()).collect();
    OraclePlan { routes, nv, td }
}

/// Reference implementation of the two-decimal report rounding.
pub fn round2(x: f64) -> f64 {
    (x * 100.0).round() / 100.0
}
