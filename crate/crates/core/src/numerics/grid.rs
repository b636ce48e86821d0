use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Boundary topology of sampled data.
///
/// Only `Periodic` data can be differentiated; `Open` exists so that data read
/// from outside (for example a CSV snapshot header) can be represented and
/// then rejected by the operators.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Boundary {
    #[default]
    Periodic,
    Open,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawGrid {
    dim: usize,
    length: f64,
    points: usize,
    dt: f64,
    t_final: f64,
    #[serde(default)]
    boundary: Boundary,
}

/// Uniform grid on `[0, L)^dim` plus time-step metadata.
///
/// Nodes are `x_i = i * dx`. Multi-dimensional data is stored with axis 0
/// varying slowest: `index = (i0 * n + i1) * n + i2`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawGrid")]
pub struct GridSpec {
    dim: usize,
    length: f64,
    points: usize,
    dt: f64,
    t_final: f64,
    boundary: Boundary,
}

impl TryFrom<RawGrid> for GridSpec {
    type Error = Error;

    fn try_from(raw: RawGrid) -> Result<Self> {
        GridSpec::new(raw.dim, raw.length, raw.points, raw.dt, raw.t_final)
            .map(|g| g.with_boundary(raw.boundary))
    }
}

pub const MIN_POINTS: usize = 8;

impl GridSpec {
    pub fn new(dim: usize, length: f64, points: usize, dt: f64, t_final: f64) -> Result<Self> {
        if dim != 1 && dim != 3 {
            return Err(Error::InvalidGrid(format!("dim must be 1 or 3, got {dim}")));
        }
        if !(length.is_finite() && length > 0.0) {
            return Err(Error::InvalidGrid(format!(
                "length must be positive, got {length}"
            )));
        }
        if points < MIN_POINTS {
            return Err(Error::InvalidGrid(format!(
                "points per axis must be >= {MIN_POINTS}, got {points}"
            )));
        }
        if !(dt.is_finite() && dt > 0.0) {
            return Err(Error::InvalidGrid(format!("dt must be positive, got {dt}")));
        }
        if !(t_final.is_finite() && t_final > 0.0) {
            return Err(Error::InvalidGrid(format!(
                "t_final must be positive, got {t_final}"
            )));
        }
        Ok(Self {
            dim,
            length,
            points,
            dt,
            t_final,
            boundary: Boundary::Periodic,
        })
    }

    /// One-dimensional periodic grid.
    pub fn line(length: f64, points: usize, dt: f64, t_final: f64) -> Result<Self> {
        Self::new(1, length, points, dt, t_final)
    }

    /// Three-dimensional periodic cube.
    pub fn cube(length: f64, points: usize, dt: f64, t_final: f64) -> Result<Self> {
        Self::new(3, length, points, dt, t_final)
    }

    pub fn with_boundary(mut self, boundary: Boundary) -> Self {
        self.boundary = boundary;
        self
    }

    pub fn with_time(mut self, dt: f64, t_final: f64) -> Result<Self> {
        let g = Self::new(self.dim, self.length, self.points, dt, t_final)?;
        self.dt = g.dt;
        self.t_final = g.t_final;
        Ok(self)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn points(&self) -> usize {
        self.points
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn t_final(&self) -> f64 {
        self.t_final
    }

    pub fn boundary(&self) -> Boundary {
        self.boundary
    }

    pub fn is_periodic(&self) -> bool {
        self.boundary == Boundary::Periodic
    }

    pub fn dx(&self) -> f64 {
        self.length / self.points as f64
    }

    /// Volume element `dx^dim`.
    pub fn cell_volume(&self) -> f64 {
        self.dx().powi(self.dim as i32)
    }

    /// Number of time steps needed to reach `t_final`.
    pub fn n_steps(&self) -> usize {
        (self.t_final / self.dt).round().max(1.0) as usize
    }

    /// Total node count, `points^dim`.
    pub fn len(&self) -> usize {
        self.points.pow(self.dim as u32)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Spatial layout equality; time metadata is ignored.
    pub fn same_space(&self, other: &GridSpec) -> bool {
        self.dim == other.dim
            && self.points == other.points
            && self.boundary == other.boundary
            && (self.length - other.length).abs() <= 1e-12 * self.length
    }

    pub fn ensure_same_space(&self, other: &GridSpec) -> Result<()> {
        if self.same_space(other) {
            Ok(())
        } else {
            Err(Error::GridMismatch(format!(
                "{}-D/{} points/L={} vs {}-D/{} points/L={}",
                self.dim, self.points, self.length, other.dim, other.points, other.length
            )))
        }
    }

    pub fn ensure_periodic(&self) -> Result<()> {
        if self.is_periodic() {
            Ok(())
        } else {
            Err(Error::NonPeriodic(
                "operators require periodic data on [0, L)".into(),
            ))
        }
    }

    /// Multi-index of a flat index; unused axes are zero.
    pub fn unravel(&self, index: usize) -> [usize; 3] {
        let n = self.points;
        match self.dim {
            1 => [index, 0, 0],
            _ => [index / (n * n), (index / n) % n, index % n],
        }
    }

    pub fn ravel(&self, idx: [usize; 3]) -> usize {
        let n = self.points;
        match self.dim {
            1 => idx[0] % n,
            _ => ((idx[0] % n) * n + idx[1] % n) * n + idx[2] % n,
        }
    }

    /// Physical position of a node; unused axes are zero.
    pub fn position(&self, index: usize) -> [f64; 3] {
        let dx = self.dx();
        let idx = self.unravel(index);
        let mut p = [0.0; 3];
        for (axis, slot) in p.iter_mut().enumerate().take(self.dim) {
            *slot = idx[axis] as f64 * dx;
        }
        p
    }

    /// Node coordinates along one axis.
    pub fn axis_coordinates(&self) -> Vec<f64> {
        let dx = self.dx();
        (0..self.points).map(|i| i as f64 * dx).collect()
    }

    /// Angular wavenumbers in FFT order: `0, 1, .., N/2-1, -N/2, .., -1` times `2*pi/L`.
    pub fn wavenumbers(&self) -> Vec<f64> {
        let n = self.points as i64;
        let base = 2.0 * PI / self.length;
        (0..n)
            .map(|i| if i < (n + 1) / 2 { i } else { i - n })
            .map(|m| m as f64 * base)
            .collect()
    }

    /// Flat index stride of an axis.
    pub fn stride(&self, axis: usize) -> usize {
        let n = self.points;
        match (self.dim, axis) {
            (1, _) => 1,
            (_, 0) => n * n,
            (_, 1) => n,
            _ => 1,
        }
    }
}
