//! Roulette-wheel particle swarm optimization for the vehicle routing
//! problem with time windows, with Solomon benchmark tooling.

pub mod bench;
pub mod cli;
pub mod codec;
pub mod engine;
pub mod io;
pub mod vrptw;
