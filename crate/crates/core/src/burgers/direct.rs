use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::problem::{to_physical, BurgersProblem, BurgersSolution};
use crate::error::{Error, Result};
use crate::numerics::{derivative, laplacian, spectral, GridSpec, ScalarField, Scheme};

/// `‖a‖∞` beyond which a run is declared blown up.
pub const BLOW_UP_THRESHOLD: f64 = 1e6;

/// Step count, output density and spatial discretization for a Burgers solve.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolveOptions {
    pub n_steps: usize,
    /// Number of output intervals; the initial and final states are always kept.
    pub records: usize,
    pub scheme: Scheme,
}

impl SolveOptions {
    pub fn new(n_steps: usize) -> Self {
        Self {
            n_steps,
            records: n_steps.min(100),
            scheme: Scheme::Spectral,
        }
    }

    pub fn with_scheme(mut self, scheme: Scheme) -> Self {
        self.scheme = scheme;
        self
    }

    pub fn with_records(mut self, records: usize) -> Self {
        self.records = records;
        self
    }

    pub(crate) fn record_every(&self) -> usize {
        (self.n_steps / self.records.max(1)).max(1)
    }

    pub(crate) fn dt(&self, t_final: f64) -> Result<f64> {
        if self.n_steps == 0 {
            return Err(Error::InvalidParameter("n_steps must be positive".into()));
        }
        Ok(t_final / self.n_steps as f64)
    }
}

fn sup(comps: &[ScalarField]) -> f64 {
    comps.iter().map(ScalarField::max_abs).fold(0.0, f64::max)
}

/// Largest stable step: the diffusive and advective limits, tightened to the
/// RK4 stability region of the chosen discretization.
fn stable_dt(
    grid: &GridSpec,
    nu: Complex64,
    a_max: f64,
    scheme: Scheme,
    explicit_viscosity: bool,
) -> f64 {
    let dx = grid.dx();
    let dim = grid.dim() as f64;
    let (k_diff, k_adv) = match scheme {
        Scheme::Spectral => (std::f64::consts::PI / dx, std::f64::consts::PI / dx),
        Scheme::Central2 => (2.0 / dx, 1.0 / dx),
    };
    let mut limit = f64::INFINITY;
    if nu.norm() > 0.0 {
        limit = limit.min(dx * dx / (2.0 * nu.norm()));
        if explicit_viscosity {
            limit = limit.min(2.5 / (nu.norm() * dim * k_diff * k_diff));
        }
    }
    if a_max > 0.0 {
        limit = limit.min(dx / a_max).min(2.5 / (a_max * dim * k_adv));
    }
    limit
}

/// `-(1/2) ∂_j (sum_k w_k^2) - ∂_j U`, the conservative nonlinear term.
fn nonlinear(
    comps: &[ScalarField],
    force: &[ScalarField],
    scheme: Scheme,
) -> Result<Vec<ScalarField>> {
    let mut s = comps[0].mul(&comps[0])?;
    for c in &comps[1..] {
        s = s.add(&c.mul(c)?)?;
    }
    let half = s.scale(Complex64::new(-0.5, 0.0))?;
    (0..comps.len())
        .map(|j| {
            let d = derivative(&half, j, scheme)?;
            match force.get(j) {
                Some(f) => d.add(f),
                None => Ok(d),
            }
        })
        .collect()
}

fn axpy(x: &[ScalarField], a: f64, y: &[ScalarField]) -> Result<Vec<ScalarField>> {
    x.iter()
        .zip(y)
        .map(|(xi, yi)| xi.zip_with(yi, |p, q| p + q * a))
        .collect()
}

/// Solves the problem with a time-marching scheme.
///
/// Real viscosity: classical RK4 on the conservative form with explicit
/// viscosity. Imaginary (or mixed) viscosity: integrating-factor RK4, where
/// the dispersive term is propagated exactly in Fourier space and only the
/// nonlinearity is explicit.
pub fn solve_burgers_direct(p: &BurgersProblem, opts: &SolveOptions) -> Result<BurgersSolution> {
    let grid = p.grid().clone();
    let dt = opts.dt(p.t_final())?;
    let (nu, mut w) = p.integrable_form();
    let explicit = nu.im == 0.0;
    let limit = stable_dt(&grid, nu, sup(&w), opts.scheme, explicit);
    if dt > limit {
        return Err(Error::Stability {
            dt,
            suggested: limit,
        });
    }
    let force: Vec<ScalarField> = match p.potential() {
        Some(u) => (0..grid.dim())
            .map(|j| derivative(u, j, opts.scheme)?.scale(Complex64::new(-1.0, 0.0)))
            .collect::<Result<_>>()?,
        None => Vec::new(),
    };
    let every = opts.record_every();
    let mut samples = vec![(0.0, w.clone())];
    let propagate = |comps: &[ScalarField], h: f64| -> Result<Vec<ScalarField>> {
        comps
            .iter()
            .map(|c| {
                let out = spectral::apply_multiplier(c.values(), &grid, |k, _| {
                    let k2 = k[0] * k[0] + k[1] * k[1] + k[2] * k[2];
                    (-nu * k2 * h).exp()
                });
                ScalarField::new(grid.clone(), out)
            })
            .collect()
    };
    for step in 1..=opts.n_steps {
        let t = step as f64 * dt;
        let t_phys = match p.direction() {
            super::TimeDirection::InitialValue => t,
            super::TimeDirection::FinalValue => p.t_final() - t,
        };
        let next = (|| -> Result<Vec<ScalarField>> {
            Ok(if explicit {
                let rhs = |u: &[ScalarField]| -> Result<Vec<ScalarField>> {
                    let n = nonlinear(u, &force, opts.scheme)?;
                    n.iter()
                        .zip(u)
                        .map(|(ni, ui)| {
                            if nu == Complex64::new(0.0, 0.0) {
                                Ok(ni.clone())
                            } else {
                                ni.add(&laplacian(ui, opts.scheme)?.scale(nu)?)
                            }
                        })
                        .collect()
                };
                let k1 = rhs(&w)?;
                let k2 = rhs(&axpy(&w, 0.5 * dt, &k1)?)?;
                let k3 = rhs(&axpy(&w, 0.5 * dt, &k2)?)?;
                let k4 = rhs(&axpy(&w, dt, &k3)?)?;
                let mut acc = axpy(&w, dt / 6.0, &k1)?;
                acc = axpy(&acc, dt / 3.0, &k2)?;
                acc = axpy(&acc, dt / 3.0, &k3)?;
                axpy(&acc, dt / 6.0, &k4)?
            } else {
                let n = |u: &[ScalarField]| nonlinear(u, &force, opts.scheme);
                let e_half_w = propagate(&w, 0.5 * dt)?;
                let e_full_w = propagate(&w, dt)?;
                let k1 = n(&w)?;
                let u2 = propagate(&axpy(&w, 0.5 * dt, &k1)?, 0.5 * dt)?;
                let k2 = n(&u2)?;
                let u3 = axpy(&e_half_w, 0.5 * dt, &k2)?;
                let k3 = n(&u3)?;
                let u4 = axpy(&e_full_w, dt, &propagate(&k3, 0.5 * dt)?)?;
                let k4 = n(&u4)?;
                let mid = propagate(&axpy(&k2, 1.0, &k3)?, 0.5 * dt)?;
                let mut acc = axpy(&e_full_w, dt / 6.0, &propagate(&k1, dt)?)?;
                acc = axpy(&acc, dt / 3.0, &mid)?;
                axpy(&acc, dt / 6.0, &k4)?
            })
        })();
        w = match next {
            Ok(v) => v,
            Err(Error::NonFinite { .. }) => {
                return Err(Error::BlowUp {
                    t: t_phys,
                    max: f64::INFINITY,
                })
            }
            Err(e) => return Err(e),
        };
        let m = sup(&w);
        if !(m <= BLOW_UP_THRESHOLD) {
            return Err(Error::BlowUp { t: t_phys, max: m });
        }
        if step % every == 0 || step == opts.n_steps {
            samples.push((t, w.clone()));
        }
    }
    Ok(BurgersSolution {
        series: to_physical(p.direction(), p.t_final(), samples)?,
        node_time: None,
        node_indices: Vec::new(),
    })
}
