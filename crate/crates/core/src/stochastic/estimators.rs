use std::ops::Range;

use serde::{Deserialize, Serialize};

use super::ensemble::PathEnsemble;
use super::model::Direction;
use crate::error::{Error, Result};

/// Smallest bin occupancy accepted by the conditional estimators.
pub const MIN_BIN_OCCUPANCY: usize = 30;

/// Minimum number of steps for the quadratic-variation estimator.
pub const MIN_QV_STEPS: usize = 100;

/// Conditioning bin `|x - center| <= width / 2`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Bin {
    pub center: f64,
    pub width: f64,
}

impl Bin {
    pub fn new(center: f64, width: f64) -> Self {
        Self { center, width }
    }

    pub fn contains(&self, x: f64) -> bool {
        (x - self.center).abs() <= 0.5 * self.width
    }
}

/// Bin width `max(dx, b sqrt(dt))`.
pub fn default_bin_width(dx: f64, b: f64, dt: f64) -> f64 {
    dx.max(b * dt.sqrt())
}

/// Which of Nelson's mean derivatives to estimate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MeanDerivative {
    /// `E[(X_{t+dt} - X_t) / dt | X_t = x]`, the forward drift `a`.
    Forward,
    /// `E[(X_t - X_{t-dt}) / dt | X_t = x]`, the backward drift `â`.
    Backward,
}

impl From<Direction> for MeanDerivative {
    fn from(d: Direction) -> Self {
        match d {
            Direction::Forward => MeanDerivative::Forward,
            Direction::Backward => MeanDerivative::Backward,
        }
    }
}

/// Running sample moments; merging is exact and order-deterministic.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct MomentAccumulator {
    pub n: usize,
    pub sum: f64,
    pub sum_sq: f64,
}

impl MomentAccumulator {
    pub fn push(&mut self, x: f64) {
        self.n += 1;
        self.sum += x;
        self.sum_sq += x * x;
    }

    pub fn merge(&mut self, other: &MomentAccumulator) {
        self.n += other.n;
        self.sum += other.sum;
        self.sum_sq += other.sum_sq;
    }

    pub fn mean(&self) -> f64 {
        self.sum / self.n as f64
    }

    pub fn variance(&self) -> f64 {
        if self.n < 2 {
            return 0.0;
        }
        let n = self.n as f64;
        ((self.sum_sq - self.sum * self.sum / n) / (n - 1.0)).max(0.0)
    }

    /// Standard error of the mean.
    pub fn stderr(&self) -> f64 {
        (self.variance() / self.n as f64).sqrt()
    }

    pub fn estimate(&self) -> Estimate {
        Estimate {
            value: self.mean(),
            stderr: self.stderr(),
            n: self.n,
        }
    }
}

/// Monte Carlo estimate with its standard error.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub value: f64,
    pub stderr: f64,
    pub n: usize,
}

/// Adds the difference quotients of every sample in `bin` at steps `steps`.
pub fn accumulate_mean_derivative(
    e: &PathEnsemble,
    kind: MeanDerivative,
    bin: Bin,
    steps: Range<usize>,
    acc: &mut MomentAccumulator,
) {
    let inv_dt = 1.0 / e.dt();
    for p in e.paths() {
        for k in steps.clone() {
            let x = p[k];
            if !bin.contains(x) {
                continue;
            }
            let q = match kind {
                MeanDerivative::Forward if k < e.n_steps() => (p[k + 1] - x) * inv_dt,
                MeanDerivative::Backward if k > 0 => (x - p[k - 1]) * inv_dt,
                _ => continue,
            };
            acc.push(q);
        }
    }
}

fn checked(acc: &MomentAccumulator, bin: Bin) -> Result<Estimate> {
    if acc.n < MIN_BIN_OCCUPANCY {
        return Err(Error::InsufficientSamples {
            center: bin.center,
            occupancy: acc.n,
            required: MIN_BIN_OCCUPANCY,
        });
    }
    Ok(acc.estimate())
}

/// Conditional mean velocity pooled over `steps`.
pub fn estimate_mean_derivative(
    e: &PathEnsemble,
    kind: MeanDerivative,
    bin: Bin,
    steps: Range<usize>,
) -> Result<Estimate> {
    let mut acc = MomentAccumulator::default();
    accumulate_mean_derivative(e, kind, bin, steps, &mut acc);
    checked(&acc, bin)
}

/// Drift estimate at time `t` in the ensemble's own direction: `a` for a
/// forward ensemble, `â` for a backward one.
pub fn estimate_mean_velocity(e: &PathEnsemble, bin: Bin, t: f64) -> Result<Estimate> {
    let k = e.step_of(t);
    estimate_mean_derivative(e, e.direction().into(), bin, k..k + 1)
}

/// One row of a drift table.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BinEstimate {
    pub center: f64,
    /// `None` when fewer than [`MIN_BIN_OCCUPANCY`] samples landed in the bin.
    pub value: Option<f64>,
    pub stderr: Option<f64>,
    pub n: usize,
}

pub fn drift_profile(
    e: &PathEnsemble,
    kind: MeanDerivative,
    centers: &[f64],
    width: f64,
    steps: Range<usize>,
) -> Vec<BinEstimate> {
    centers
        .iter()
        .map(|&c| {
            let mut acc = MomentAccumulator::default();
            accumulate_mean_derivative(e, kind, Bin::new(c, width), steps.clone(), &mut acc);
            let ok = acc.n >= MIN_BIN_OCCUPANCY;
            BinEstimate {
                center: c,
                value: ok.then(|| acc.mean()),
                stderr: ok.then(|| acc.stderr()),
                n: acc.n,
            }
        })
        .collect()
}

/// Pathwise quadratic variation `sum_k (dX_k)^2`, accumulated over paths.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct QuadraticVariation {
    pub per_path: MomentAccumulator,
    pub horizon: f64,
}

impl QuadraticVariation {
    pub fn add(&mut self, e: &PathEnsemble) -> Result<()> {
        if e.n_steps() < MIN_QV_STEPS {
            return Err(Error::TooFewSamples {
                got: e.n_steps(),
                required: MIN_QV_STEPS,
            });
        }
        self.horizon = e.horizon();
        for p in e.paths() {
            let qv: f64 = p.windows(2).map(|w| (w[1] - w[0]) * (w[1] - w[0])).sum();
            self.per_path.push(qv);
        }
        Ok(())
    }

    pub fn merge(&mut self, other: &QuadraticVariation) {
        self.per_path.merge(&other.per_path);
        self.horizon = other.horizon;
    }

    /// `sqrt(E[QV] / T)`, an estimate of `|b|`.
    pub fn diffusion(&self) -> f64 {
        (self.per_path.mean() / self.horizon).sqrt()
    }
}

/// `sqrt(E[sum (dX)^2] / T)`, an estimate of `|b|`.
pub fn estimate_diffusion(e: &PathEnsemble) -> Result<f64> {
    let mut qv = QuadraticVariation::default();
    qv.add(e)?;
    Ok(qv.diffusion())
}

/// Current and osmotic velocities `v = (a + â)/2`, `u = (a - â)/2` on shared bins.
pub fn velocity_fields(a: &[f64], a_hat: &[f64]) -> Result<(Vec<f64>, Vec<f64>)> {
    if a.len() != a_hat.len() {
        return Err(Error::InvalidParameter(format!(
            "drift tables differ in length: {} vs {}",
            a.len(),
            a_hat.len()
        )));
    }
    let v = a.iter().zip(a_hat).map(|(x, y)| 0.5 * (x + y)).collect();
    let u = a.iter().zip(a_hat).map(|(x, y)| 0.5 * (x - y)).collect();
    Ok((v, u))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stochastic::{simulate, DiffusionModel, InitialCondition};

    #[test]
    fn velocity_field_arithmetic() {
        let (v, u) = velocity_fields(&[1.0, 2.0], &[-1.0, 2.0]).unwrap();
        assert_eq!(v, vec![0.0, 2.0]);
        assert_eq!(u, vec![1.0, 0.0]);
        assert!(velocity_fields(&[1.0], &[]).is_err());
    }

    #[test]
    fn empty_bin_reports_occupancy() {
        let m =
            DiffusionModel::forward(|_, _| 0.0, 1.0, InitialCondition::Fixed(0.0), 0.1).unwrap();
        let e = simulate(&m, 50, 10, 1).unwrap();
        match estimate_mean_velocity(&e, Bin::new(100.0, 0.1), 0.05) {
            Err(Error::InsufficientSamples { occupancy, .. }) => assert_eq!(occupancy, 0),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn diffusion_needs_enough_steps() {
        let m =
            DiffusionModel::forward(|_, _| 0.0, 1.0, InitialCondition::Fixed(0.0), 0.1).unwrap();
        let e = simulate(&m, 5, 10, 1).unwrap();
        assert!(matches!(
            estimate_diffusion(&e),
            Err(Error::TooFewSamples { .. })
        ));
    }

    #[test]
    fn deterministic_path_has_no_diffusion() {
        let m =
            DiffusionModel::forward(|_, _| 0.0, 1e-12, InitialCondition::Fixed(0.3), 1.0).unwrap();
        let e = simulate(&m, 10, 200, 1).unwrap();
        assert!(estimate_diffusion(&e).unwrap() <= 1e-6);
    }
}
