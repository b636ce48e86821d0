use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Drift `a(x, t)`.
pub type DriftFn = Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>;

/// Filtration a process is adapted to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    /// Adapted to the past: starts from `x_0` at `t = 0`.
    Forward,
    /// Adapted to the future: starts from `x_T` at `t = T`.
    Backward,
}

/// Deterministic or Gaussian start (at `t = 0` forward, at `t = T` backward).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InitialCondition {
    Fixed(f64),
    Normal { mean: f64, std: f64 },
}

/// `dX = a(X, t) dt + b dW` with constant `b > 0`.
///
/// For `Direction::Backward` the drift is the backward drift `â(x, t)`, and
/// the process runs from `t = T` down to `t = 0`.
#[derive(Clone)]
pub struct DiffusionModel {
    drift: DriftFn,
    b: f64,
    direction: Direction,
    initial: InitialCondition,
    horizon: f64,
}

impl fmt::Debug for DiffusionModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("DiffusionModel")
            .field("b", &self.b)
            .field("direction", &self.direction)
            .field("initial", &self.initial)
            .field("horizon", &self.horizon)
            .finish_non_exhaustive()
    }
}

impl DiffusionModel {
    pub fn new(
        drift: impl Fn(f64, f64) -> f64 + Send + Sync + 'static,
        b: f64,
        direction: Direction,
        initial: InitialCondition,
        horizon: f64,
    ) -> Result<Self> {
        if !(b.is_finite() && b > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "diffusion coefficient must be positive, got {b}"
            )));
        }
        if !(horizon.is_finite() && horizon > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "horizon must be positive, got {horizon}"
            )));
        }
        if let InitialCondition::Normal { mean, std } = initial {
            if !(mean.is_finite() && std.is_finite() && std >= 0.0) {
                return Err(Error::InvalidParameter(format!(
                    "bad initial distribution N({mean}, {std}^2)"
                )));
            }
        }
        Ok(Self {
            drift: Arc::new(drift),
            b,
            direction,
            initial,
            horizon,
        })
    }

    pub fn forward(
        drift: impl Fn(f64, f64) -> f64 + Send + Sync + 'static,
        b: f64,
        initial: InitialCondition,
        horizon: f64,
    ) -> Result<Self> {
        Self::new(drift, b, Direction::Forward, initial, horizon)
    }

    pub fn backward(
        drift_hat: impl Fn(f64, f64) -> f64 + Send + Sync + 'static,
        b: f64,
        terminal: InitialCondition,
        horizon: f64,
    ) -> Result<Self> {
        Self::new(drift_hat, b, Direction::Backward, terminal, horizon)
    }

    pub fn drift(&self, x: f64, t: f64) -> f64 {
        (self.drift)(x, t)
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn direction(&self) -> Direction {
        self.direction
    }

    pub fn initial(&self) -> InitialCondition {
        self.initial
    }

    pub fn horizon(&self) -> f64 {
        self.horizon
    }
}
