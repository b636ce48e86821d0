use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::numerics::{integrate, GridSpec, ScalarField};
use crate::series::FieldSeries;

/// Allowed deviation of `∫rho` from one.
pub const MASS_TOLERANCE: f64 = 1e-8;

/// Most negative density value tolerated as round-off.
pub const NEGATIVITY_FLOOR: f64 = -1e-12;

/// A probability density on a periodic line at time `t`.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityState {
    rho: ScalarField,
    t: f64,
}

impl DensityState {
    pub fn new(rho: ScalarField, t: f64) -> Result<Self> {
        let grid = rho.grid();
        grid.ensure_periodic()?;
        if grid.dim() != 1 {
            return Err(Error::Unsupported(
                "Fokker–Planck stepping is 1-D only".into(),
            ));
        }
        if !rho.is_real() {
            return Err(Error::InvalidParameter("density must be real".into()));
        }
        check_positive(&rho)?;
        let mass = integrate(&rho).re;
        if (mass - 1.0).abs() > MASS_TOLERANCE {
            return Err(Error::InvalidParameter(format!(
                "density must have unit mass, got {mass}"
            )));
        }
        Ok(Self { rho, t })
    }

    pub fn rho(&self) -> &ScalarField {
        &self.rho
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    pub fn mass(&self) -> f64 {
        integrate(&self.rho).re
    }

    pub fn grid(&self) -> &GridSpec {
        self.rho.grid()
    }
}

fn check_positive(rho: &ScalarField) -> Result<()> {
    let (index, min) = rho
        .values()
        .iter()
        .enumerate()
        .map(|(i, v)| (i, v.re))
        .fold(
            (0, f64::INFINITY),
            |acc, x| if x.1 < acc.1 { x } else { acc },
        );
    if min < NEGATIVITY_FLOOR {
        return Err(Error::Negative { min, index });
    }
    Ok(())
}

/// `dt <= min(dx / ‖a‖∞, dx^2 / b^2) / 2`.
pub fn fp_stable_dt(dx: f64, a_max: f64, b: f64) -> f64 {
    let adv = if a_max > 0.0 {
        dx / a_max
    } else {
        f64::INFINITY
    };
    let diff = if b > 0.0 {
        dx * dx / (b * b)
    } else {
        f64::INFINITY
    };
    0.5 * adv.min(diff)
}

/// Bernoulli function `z / (e^z - 1)`.
fn bernoulli(z: f64) -> f64 {
    if z.abs() < 1e-6 {
        1.0 - 0.5 * z + z * z / 12.0
    } else {
        z / z.exp_m1()
    }
}

/// Scharfetter–Gummel flux from node `i` to node `i + 1`.
fn sg_flux(a_face: f64, diffusivity: f64, dx: f64, left: f64, right: f64) -> f64 {
    if diffusivity == 0.0 {
        return if a_face >= 0.0 {
            a_face * left
        } else {
            a_face * right
        };
    }
    let pe = a_face * dx / diffusivity;
    diffusivity / dx * (bernoulli(-pe) * left - bernoulli(pe) * right)
}

/// One explicit step of `rho_t + (a rho)_x = (b^2/2) rho_xx` with exponentially
/// fitted fluxes: mass is conserved to round-off, positivity holds under the
/// step limit, and a drift with `a = (b^2/2) (log rho)_x` linear in `x`
/// leaves `rho` exactly stationary.
fn step(rho: &ScalarField, a: &ScalarField, b: f64, dt: f64) -> Result<ScalarField> {
    let grid = rho.grid();
    grid.ensure_same_space(a.grid())?;
    if !a.is_real() {
        return Err(Error::InvalidParameter("drift must be real".into()));
    }
    let n = grid.points();
    let dx = grid.dx();
    let a_vals = a.re();
    let a_max = a_vals.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    let limit = fp_stable_dt(dx, a_max, b);
    if dt > limit {
        return Err(Error::Stability {
            dt,
            suggested: limit,
        });
    }
    let r = rho.re();
    let d = 0.5 * b * b;
    let flux: Vec<f64> = (0..n)
        .map(|i| {
            let j = (i + 1) % n;
            sg_flux(0.5 * (a_vals[i] + a_vals[j]), d, dx, r[i], r[j])
        })
        .collect();
    let out: Vec<f64> = (0..n)
        .map(|i| r[i] - dt / dx * (flux[i] - flux[(i + n - 1) % n]))
        .collect();
    let next = ScalarField::from_real(grid.clone(), &out)?;
    check_positive(&next)?;
    Ok(next)
}

/// Advances the forward equation `rho_t + (a rho)_x - (b^2/2) rho_xx = 0` by `dt > 0`.
pub fn step_forward_fp(
    state: &DensityState,
    a: &ScalarField,
    b: f64,
    dt: f64,
) -> Result<DensityState> {
    if !(dt > 0.0) {
        return Err(Error::IllPosedDirection(format!(
            "the forward equation is integrated forward in time; got dt = {dt}"
        )));
    }
    Ok(DensityState {
        rho: step(&state.rho, a, b, dt)?,
        t: state.t + dt,
    })
}

/// Advances the backward equation `rho_t + (â rho)_x + (b^2/2) rho_xx = 0`
/// backwards in time by a signed `dt < 0`. In reflected time `tau = -t` it is
/// the forward equation with drift `-â`.
pub fn step_backward_fp(
    state: &DensityState,
    a_hat: &ScalarField,
    b: f64,
    dt: f64,
) -> Result<DensityState> {
    if !(dt < 0.0) {
        return Err(Error::IllPosedDirection(format!(
            "the backward equation is integrated backward in time; got dt = {dt}"
        )));
    }
    let reflected = a_hat.scale(Complex64::new(-1.0, 0.0))?;
    Ok(DensityState {
        rho: step(&state.rho, &reflected, b, -dt)?,
        t: state.t + dt,
    })
}

/// Runs `n_steps` forward steps with a drift that may depend on time.
pub fn evolve_forward_fp(
    state: &DensityState,
    mut drift: impl FnMut(f64) -> Result<ScalarField>,
    b: f64,
    dt: f64,
    n_steps: usize,
) -> Result<FieldSeries> {
    let mut out = FieldSeries::new();
    let mut s = state.clone();
    out.push(s.t, s.rho.clone())?;
    for _ in 0..n_steps {
        let a = drift(s.t)?;
        s = step_forward_fp(&s, &a, b, dt)?;
        out.push(s.t, s.rho.clone())?;
    }
    Ok(out)
}
