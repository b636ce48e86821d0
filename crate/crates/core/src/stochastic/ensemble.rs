use std::ops::Range;

use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use super::model::{DiffusionModel, Direction, InitialCondition};
use super::rng::path_rng;
use crate::error::{Error, Result};

/// Simulated trajectories, stored in physical-time order `t_k = k dt`
/// regardless of the direction in which they were generated.
#[derive(Clone, Debug)]
pub struct PathEnsemble {
    n_steps: usize,
    dt: f64,
    b: f64,
    direction: Direction,
    master_seed: u64,
    paths: Range<u64>,
    states: Vec<f64>,
}

impl PathEnsemble {
    pub fn n_paths(&self) -> usize {
        (self.paths.end - self.paths.start) as usize
    }

    pub fn n_steps(&self) -> usize {
        self.n_steps
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn horizon(&self) -> f64 {
        self.dt * self.n_steps as f64
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn direction(&self) -> Direction {
        self.direction
    }

    pub fn master_seed(&self) -> u64 {
        self.master_seed
    }

    /// Global indices of the paths held here.
    pub fn path_indices(&self) -> Range<u64> {
        self.paths.clone()
    }

    /// States of local path `i` at `t_0, ..., t_M`.
    pub fn path(&self, i: usize) -> &[f64] {
        let w = self.n_steps + 1;
        &self.states[i * w..(i + 1) * w]
    }

    pub fn paths(&self) -> impl Iterator<Item = &[f64]> {
        self.states.chunks_exact(self.n_steps + 1)
    }

    /// All states at time step `k`.
    pub fn slice_at(&self, k: usize) -> Vec<f64> {
        self.paths().map(|p| p[k]).collect()
    }

    /// Time step index closest to `t`.
    pub fn step_of(&self, t: f64) -> usize {
        ((t / self.dt).round().max(0.0) as usize).min(self.n_steps)
    }
}

fn draw_start(init: InitialCondition, rng: &mut impl Rng) -> f64 {
    match init {
        InitialCondition::Fixed(x) => x,
        InitialCondition::Normal { mean, std } => {
            let z: f64 = rng.sample(StandardNormal);
            mean + std * z
        }
    }
}

fn simulate_path(
    model: &DiffusionModel,
    path: u64,
    n_steps: usize,
    dt: f64,
    seed: u64,
) -> Result<Vec<f64>> {
    let mut rng = path_rng(seed, path);
    let horizon = model.horizon();
    let noise = model.b() * dt.sqrt();
    let mut x = draw_start(model.initial(), &mut rng);
    let mut out = Vec::with_capacity(n_steps + 1);
    out.push(x);
    for step in 0..n_steps {
        let xi: f64 = rng.sample(StandardNormal);
        // Backward paths run in reflected time tau = T - t with drift -â(x, T - tau);
        // the drift is evaluated at the later physical endpoint of each increment.
        let drift = match model.direction() {
            Direction::Forward => model.drift(x, step as f64 * dt),
            Direction::Backward => -model.drift(x, horizon - step as f64 * dt),
        };
        if !drift.is_finite() {
            return Err(Error::NonFiniteDrift { path, step });
        }
        x += drift * dt + noise * xi;
        out.push(x);
    }
    if model.direction() == Direction::Backward {
        out.reverse();
    }
    Ok(out)
}

/// Euler–Maruyama paths with global indices `paths`, so that large ensembles
/// can be generated in batches that concatenate to the full ensemble.
pub fn simulate_range(
    model: &DiffusionModel,
    paths: Range<u64>,
    n_steps: usize,
    seed: u64,
) -> Result<PathEnsemble> {
    if n_steps == 0 {
        return Err(Error::InvalidParameter("n_steps must be positive".into()));
    }
    let dt = model.horizon() / n_steps as f64;
    let results: Vec<Result<Vec<f64>>> = paths
        .clone()
        .into_par_iter()
        .map(|p| simulate_path(model, p, n_steps, dt, seed))
        .collect();
    let mut states = Vec::with_capacity((paths.end - paths.start) as usize * (n_steps + 1));
    for r in results {
        states.extend(r?);
    }
    Ok(PathEnsemble {
        n_steps,
        dt,
        b: model.b(),
        direction: model.direction(),
        master_seed: seed,
        paths,
        states,
    })
}

/// Simulates paths `0..n_paths` with `dt = T / n_steps`.
pub fn simulate(
    model: &DiffusionModel,
    n_paths: usize,
    n_steps: usize,
    seed: u64,
) -> Result<PathEnsemble> {
    simulate_range(model, 0..n_paths as u64, n_steps, seed)
}
