//! Particle swarm optimization with a roulette-wheel sampled global best.

mod archive;
mod config;
mod swarm;

use thiserror::Error;

pub use archive::{ArchiveEntry, GBestArchive};
pub use config::{inertia, ArchiveRule, ConfigError, Mode, PsoConfig, RandomDraw};
pub use swarm::{
    run, update_particle, update_particle_with, Guide, RunResult, Swarm, SwarmState, STREAM_INIT, STREAM_MOTION,
    STREAM_SELECTION,
};

#[derive(Debug, Error, PartialEq)]
pub enum EngineError {
    #[error("the global-best archive is empty")]
    EmptyArchive,
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Codec(#[from] crate::codec::CodecError),
}
