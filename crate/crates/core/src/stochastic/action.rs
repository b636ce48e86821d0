//! Discretized stochastic actions.
//!
//! `S_alpha = E sum_k [ (dX_k)^2 / dt - b^2 ]` and
//! `L = E sum_k (dX_k)^2 / dt` for the complex process. Conditionally on the
//! path, each compensated term has expectation `a(t*) * integral(a ds)` over
//! its step, so both actions approximate `integral(a^2 dt)` (respectively
//! `integral(V^2 dt)`, a complex square) as `dt -> 0`.

use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::complex::ComplexPathEnsemble;
use super::ensemble::{simulate, PathEnsemble};
use super::estimators::{Estimate, MomentAccumulator};
use super::model::{DiffusionModel, Direction, InitialCondition};
use crate::burgers::{geodesic_residual, GeodesicSign};
use crate::error::{Error, Result};
use crate::numerics::{GridSpec, Norms, ScalarField, Scheme};
use crate::series::FieldSeries;

/// Real and imaginary Monte Carlo estimates of a complex mean.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComplexEstimate {
    pub value: Complex64,
    pub stderr_re: f64,
    pub stderr_im: f64,
    pub n: usize,
}

impl ComplexEstimate {
    fn from_samples(samples: impl Iterator<Item = Complex64>) -> Self {
        let (mut re, mut im) = (MomentAccumulator::default(), MomentAccumulator::default());
        for z in samples {
            re.push(z.re);
            im.push(z.im);
        }
        Self {
            value: Complex64::new(re.mean(), im.mean()),
            stderr_re: re.stderr(),
            stderr_im: im.stderr(),
            n: re.n,
        }
    }
}

pub type ActionEstimate = Estimate;

/// Per-path values of `sum_k [ (dX_k)^2 / dt - b^2 ]`. `alpha = 1` needs a
/// forward (past-adapted) ensemble, `alpha = 0` a backward (future-adapted) one.
pub fn salpha_samples(e: &PathEnsemble, alpha: u8) -> Result<Vec<f64>> {
    let expected = match alpha {
        1 => Direction::Forward,
        0 => Direction::Backward,
        _ => {
            return Err(Error::InvalidParameter(format!(
                "alpha must be 0 or 1, got {alpha}"
            )))
        }
    };
    if e.direction() != expected {
        return Err(Error::InvalidParameter(format!(
            "alpha = {alpha} requires a {expected:?} ensemble, got {:?}",
            e.direction()
        )));
    }
    if e.n_steps() < 2 {
        return Err(Error::TooFewSamples {
            got: e.n_steps(),
            required: 2,
        });
    }
    let inv_dt = 1.0 / e.dt();
    let b2 = e.b() * e.b();
    Ok(e.paths()
        .map(|p| {
            p.windows(2)
                .map(|w| (w[1] - w[0]) * (w[1] - w[0]) * inv_dt - b2)
                .sum()
        })
        .collect())
}

/// Monte Carlo estimate of `S_alpha`; see [`salpha_samples`].
pub fn action_salpha(e: &PathEnsemble, alpha: u8) -> Result<ActionEstimate> {
    let mut acc = MomentAccumulator::default();
    for s in salpha_samples(e, alpha)? {
        acc.push(s);
    }
    Ok(acc.estimate())
}

/// Monte Carlo estimate of `L = E sum (dX)^2 / dt` for the complex process.
/// No compensator is needed because `E dZ^2 = 0` when `b̂ = b`.
pub fn action_complex(e: &ComplexPathEnsemble) -> Result<ComplexEstimate> {
    if e.n_steps() < 2 {
        return Err(Error::TooFewSamples {
            got: e.n_steps(),
            required: 2,
        });
    }
    let inv_dt = 1.0 / e.dt();
    Ok(ComplexEstimate::from_samples(e.paths().map(|p| {
        p.windows(2)
            .map(|w| (w[1] - w[0]) * (w[1] - w[0]) * inv_dt)
            .sum::<Complex64>()
    })))
}

/// Sample mean of `Z_T^2 / T` with `Z_T = sum_k dZ_k`; zero in expectation.
pub fn noise_square(e: &ComplexPathEnsemble) -> ComplexEstimate {
    let horizon = e.dt() * e.n_steps() as f64;
    ComplexEstimate::from_samples(e.noise_sums().iter().map(|z| z * z / horizon))
}

/// One point of a drift-family sweep.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepPoint {
    pub theta: f64,
    pub action: ActionEstimate,
    /// Geodesic residual `a a_x + (b^2/2) a_xx` of the stationary drift `theta * phi`.
    pub residual: Norms,
    /// Paired estimate of `S_1(theta) - S_1(theta_ref)`, where `theta_ref` is
    /// the sweep point with the smallest geodesic residual.
    pub excess: Estimate,
}

/// Settings shared by every point of a [`variational_sweep`].
#[derive(Clone, Debug)]
pub struct SweepSetup {
    pub b: f64,
    pub initial: InitialCondition,
    pub horizon: f64,
    pub n_paths: usize,
    pub n_steps: usize,
    pub seed: u64,
    /// Periodic grid on which the geodesic residual of each drift is evaluated.
    pub grid: GridSpec,
    pub scheme: Scheme,
}

/// `S_1` and the geodesic residual over the drift family `a_theta = theta * phi(x)`.
///
/// Every `theta` reuses the same seed (common random numbers), so the paired
/// differences in [`SweepPoint::excess`] carry much less noise than the
/// individual estimates.
pub fn variational_sweep(
    phi: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
    thetas: &[f64],
    setup: &SweepSetup,
) -> Result<Vec<SweepPoint>> {
    if thetas.is_empty() {
        return Err(Error::InvalidParameter("empty sweep".into()));
    }
    let phi_field = ScalarField::from_real_fn(&setup.grid, |p| phi(p[0]))?;
    let h = setup.horizon / setup.n_steps as f64;
    let mut samples = Vec::with_capacity(thetas.len());
    let mut residuals = Vec::with_capacity(thetas.len());
    for &theta in thetas {
        let f = phi.clone();
        let model = DiffusionModel::forward(
            move |x, _| theta * f(x),
            setup.b,
            setup.initial,
            setup.horizon,
        )?;
        let e = simulate(&model, setup.n_paths, setup.n_steps, setup.seed)?;
        samples.push(salpha_samples(&e, 1)?);
        let a = phi_field.scale(Complex64::new(theta, 0.0))?;
        let series = FieldSeries::from_parts(vec![0.0, h, 2.0 * h], vec![a.clone(), a.clone(), a])?;
        residuals.push(
            geodesic_residual(&series, setup.b, GeodesicSign::Forward, setup.scheme)?
                .into_iter()
                .fold(Norms::zero(), |acc, (_, n)| acc.max(n)),
        );
    }
    let reference = (0..thetas.len())
        .min_by(|&i, &j| residuals[i].l_inf.total_cmp(&residuals[j].l_inf))
        .unwrap_or(0);
    Ok(thetas
        .iter()
        .enumerate()
        .map(|(i, &theta)| {
            let mut action = MomentAccumulator::default();
            let mut excess = MomentAccumulator::default();
            for (s, r) in samples[i].iter().zip(&samples[reference]) {
                action.push(*s);
                excess.push(s - r);
            }
            SweepPoint {
                theta,
                action: action.estimate(),
                residual: residuals[i],
                excess: excess.estimate(),
            }
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stochastic::{simulate_complex, DiffusionModel};

    #[test]
    fn direction_must_match_alpha() {
        let m =
            DiffusionModel::forward(|_, _| 0.0, 1.0, InitialCondition::Fixed(0.0), 1.0).unwrap();
        let e = simulate(&m, 10, 10, 0).unwrap();
        assert!(action_salpha(&e, 1).is_ok());
        assert!(action_salpha(&e, 0).is_err());
        assert!(action_salpha(&e, 2).is_err());
        let e = simulate(&m, 10, 1, 0).unwrap();
        assert!(matches!(
            action_salpha(&e, 1),
            Err(Error::TooFewSamples { .. })
        ));
    }

    #[test]
    fn deterministic_limit_is_riemann_sum() {
        let m =
            DiffusionModel::forward(|_, _| 1.0, 1e-9, InitialCondition::Fixed(0.0), 1.0).unwrap();
        let e = simulate(&m, 4, 1000, 0).unwrap();
        assert!((action_salpha(&e, 1).unwrap().value - 1.0).abs() < 1e-6);
    }

    #[test]
    fn complex_action_of_constant_drift() {
        let e = simulate_complex(
            |_, _| Complex64::new(0.0, 1.0),
            1.0,
            Complex64::new(0.0, 0.0),
            1.0,
            4000,
            100,
            5,
        )
        .unwrap();
        let l = action_complex(&e).unwrap();
        assert!((l.value.re + 1.0).abs() <= 5.0 * l.stderr_re, "{l:?}");
        assert!(l.value.im.abs() <= 5.0 * l.stderr_im, "{l:?}");
    }
}
