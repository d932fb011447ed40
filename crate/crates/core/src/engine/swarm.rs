use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::archive::GBestArchive;
use super::config::{inertia, Mode, PsoConfig, RandomDraw};
use super::EngineError;
use crate::codec::{decode, make_shape, Decoded, EncodingShape, Particle};
use crate::vrptw::{compare_lexicographic, CostWeights, Instance, RoutePlan};

/// Stream ids of the three independent ChaCha8 streams derived from a seed.
pub const STREAM_INIT: u64 = 0;
pub const STREAM_SELECTION: u64 = 1;
pub const STREAM_MOTION: u64 = 2;

fn stream(seed: u64, id: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(id);
    rng
}

/// Velocity and position update for one particle, with the uniform draws
/// supplied by `draw`.
///
/// Per dimension `d`: `v = w*v + c1*r1*(pbest - x) + c2*r2*(gbest - x)`,
/// clamped to `[-vmax, vmax]`, then `x += v`, clamped to the position bounds.
pub fn update_particle_with(
    p: &mut Particle,
    gbest: &[f64],
    w: f64,
    cfg: &PsoConfig,
    shape: &EncodingShape,
    mut draw: impl FnMut() -> f64,
) -> Result<(), EngineError> {
    let dims = p.position.len();
    if gbest.len() != dims || p.velocity.len() != dims || p.pbest_position.len() != dims || shape.dims() != dims {
        return Err(EngineError::DimensionMismatch {
            expected: dims,
            found: gbest.len(),
        });
    }
    let shared = match cfg.random_draw {
        RandomDraw::PerParticle => Some((draw(), draw())),
        RandomDraw::PerDimension => None,
    };
    let (lower, upper, vmax) = (shape.lower(), shape.upper(), shape.vmax());
    for d in 0..dims {
        let (r1, r2) = match shared {
            Some(pair) => pair,
            None => (draw(), draw()),
        };
        let x = p.position[d];
        let v = w * p.velocity[d] + cfg.c1 * r1 * (p.pbest_position[d] - x) + cfg.c2 * r2 * (gbest[d] - x);
        let v = v.clamp(-vmax[d], vmax[d]);
        p.velocity[d] = v;
        p.position[d] = (x + v).clamp(lower[d], upper[d]);
    }
    Ok(())
}

pub fn update_particle<R: Rng>(
    p: &mut Particle,
    gbest: &[f64],
    w: f64,
    cfg: &PsoConfig,
    shape: &EncodingShape,
    rng: &mut R,
) -> Result<(), EngineError> {
    update_particle_with(p, gbest, w, cfg, shape, || rng.gen::<f64>())
}

/// Where the social term of the velocity update comes from.
#[derive(Debug, Clone, PartialEq)]
pub enum Guide {
    /// Roulette-wheel sample from the top-L archive.
    Archive(GBestArchive),
    /// The single best position seen so far.
    Single { position: Vec<f64>, fitness: f64 },
}

impl Guide {
    pub fn best_fitness(&self) -> f64 {
        match self {
            Guide::Archive(a) => a.head().map_or(f64::NEG_INFINITY, |e| e.fitness),
            Guide::Single { fitness, .. } => *fitness,
        }
    }

    pub fn best_position(&self) -> &[f64] {
        match self {
            Guide::Archive(a) => a.head().map_or(&[], |e| &e.position),
            Guide::Single { position, .. } => position,
        }
    }
}

#[derive(Debug, Clone)]
pub struct SwarmState {
    pub particles: Vec<Particle>,
    pub guide: Guide,
    pub iteration: usize,
    pub best_plan: RoutePlan,
    pub best_cost: f64,
    pub best_fitness: f64,
    selection_rng: ChaCha8Rng,
    motion_rng: ChaCha8Rng,
}

impl SwarmState {
    /// Particles whose personal best coincides with the current best
    /// position. High values indicate the swarm has collapsed.
    pub fn converged_count(&self) -> usize {
        let head = self.guide.best_position();
        self.particles.iter().filter(|p| p.pbest_position == head).count()
    }

    pub fn best_guide_fitness(&self) -> f64 {
        self.guide.best_fitness()
    }
}

/// A configured optimizer bound to one instance.
pub struct Swarm<'a> {
    inst: &'a Instance,
    shape: EncodingShape,
    cfg: PsoConfig,
    mode: Mode,
    weights: CostWeights,
}

impl<'a> Swarm<'a> {
    pub fn new(inst: &'a Instance, cfg: &PsoConfig, mode: Mode) -> Result<Self, EngineError> {
        cfg.validate()?;
        let fleet = cfg.fleet_bound.unwrap_or(inst.fleet_size());
        let shape = make_shape(inst, fleet, cfg.k_vmax)?;
        Ok(Swarm {
            inst,
            shape,
            cfg: cfg.clone(),
            mode,
            weights: cfg.weights(),
        })
    }

    pub fn shape(&self) -> &EncodingShape {
        &self.shape
    }

    pub fn config(&self) -> &PsoConfig {
        &self.cfg
    }

    fn decode(&self, position: &[f64]) -> Decoded {
        decode(self.inst, position, &self.shape, &self.weights, self.cfg.decoder)
    }

    /// Uniform random positions, zero velocities, pbest at the start.
    pub fn init(&self) -> SwarmState {
        let mut init_rng = stream(self.cfg.seed, STREAM_INIT);
        let (lower, upper) = (self.shape.lower(), self.shape.upper());
        let mut particles = Vec::with_capacity(self.cfg.n_particles);
        let mut best: Option<Decoded> = None;
        for _ in 0..self.cfg.n_particles {
            let position: Vec<f64> = lower
                .iter()
                .zip(upper)
                .map(|(lo, hi)| lo + (hi - lo) * init_rng.gen::<f64>())
                .collect();
            let decoded = self.decode(&position);
            particles.push(Particle::at(position, decoded.fitness));
            if best
                .as_ref()
                .is_none_or(|b| compare_lexicographic(&decoded.plan, &b.plan).is_lt())
            {
                best = Some(decoded);
            }
        }
        let guide = match self.mode {
            Mode::Rwpso => Guide::Archive(GBestArchive::seeded(
                self.cfg.archive_size,
                self.cfg.archive_rule,
                particles.iter().map(|p| (p.position.as_slice(), p.fitness)),
            )),
            Mode::Baseline => {
                let mut head = &particles[0];
                for p in &particles[1..] {
                    if p.fitness > head.fitness {
                        head = p;
                    }
                }
                Guide::Single {
                    position: head.position.clone(),
                    fitness: head.fitness,
                }
            }
        };
        let best = best.expect("at least one particle");
        SwarmState {
            particles,
            guide,
            iteration: 0,
            best_cost: best.cost,
            best_fitness: best.fitness,
            best_plan: best.plan,
            selection_rng: stream(self.cfg.seed, STREAM_SELECTION),
            motion_rng: stream(self.cfg.seed, STREAM_MOTION),
        }
    }

    /// One iteration over all particles in index order.
    pub fn step(&self, state: &mut SwarmState) {
        let w = inertia(state.iteration, &self.cfg);
        let mut gbest = Vec::with_capacity(self.shape.dims());
        for i in 0..state.particles.len() {
            gbest.clear();
            match &state.guide {
                Guide::Archive(archive) => {
                    let xi: f64 = state.selection_rng.gen();
                    gbest.extend_from_slice(archive.sample_gbest(xi).expect("archive is seeded"));
                }
                Guide::Single { position, .. } => gbest.extend_from_slice(position),
            }
            let p = &mut state.particles[i];
            update_particle(p, &gbest, w, &self.cfg, &self.shape, &mut state.motion_rng)
                .expect("particle dimensions match the shape");
            let decoded = self.decode(&p.position);
            p.fitness = decoded.fitness;
            if decoded.fitness > p.pbest_fitness {
                p.pbest_fitness = decoded.fitness;
                p.pbest_position.clone_from(&p.position);
            }
            match &mut state.guide {
                Guide::Archive(archive) => {
                    archive.offer(&p.position, decoded.fitness);
                }
                Guide::Single { position, fitness } => {
                    if decoded.fitness > *fitness {
                        *fitness = decoded.fitness;
                        position.clone_from(&p.position);
                    }
                }
            }
            if compare_lexicographic(&decoded.plan, &state.best_plan).is_lt() {
                state.best_cost = decoded.cost;
                state.best_fitness = decoded.fitness;
                state.best_plan = decoded.plan;
            }
        }
        state.iteration += 1;
    }

    pub fn run(&self) -> RunResult {
        let start = Instant::now();
        let mut state = self.init();
        for _ in 0..self.cfg.max_iterations {
            self.step(&mut state);
        }
        RunResult {
            instance: self.inst.name().to_string(),
            mode: self.mode,
            archive_size: match self.mode {
                Mode::Rwpso => self.cfg.archive_size,
                Mode::Baseline => 1,
            },
            seed: self.cfg.seed,
            nv: state.best_plan.nv,
            td: state.best_plan.td,
            cost: state.best_cost,
            fitness: state.best_fitness,
            iterations: state.iteration,
            wall_clock: start.elapsed().as_secs_f64(),
            best_plan: state.best_plan,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunResult {
    pub instance: String,
    pub mode: Mode,
    pub archive_size: usize,
    pub seed: u64,
    pub nv: usize,
    pub td: f64,
    pub cost: f64,
    pub fitness: f64,
    pub iterations: usize,
    /// Seconds spent in initialization and the iteration loop.
    pub wall_clock: f64,
    #[serde(skip_serializing, default = "empty_plan")]
    pub best_plan: RoutePlan,
}

fn empty_plan() -> RoutePlan {
    RoutePlan {
        routes: Vec::new(),
        nv: 0,
        td: 0.0,
        total_wait: 0.0,
        penalty: 0.0,
    }
}

/// Runs `cfg.max_iterations` iterations of the chosen mode on `inst`.
pub fn run(inst: &Instance, cfg: &PsoConfig, mode: Mode) -> Result<RunResult, EngineError> {
    Ok(Swarm::new(inst, cfg, mode)?.run())
}
