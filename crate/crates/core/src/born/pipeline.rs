use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::velocities::extract_velocities;
use crate::error::{Error, Result};
use crate::fokker_planck::{complex_fp_residual, ComplexFpSample};
use crate::numerics::{derivative, integrate, laplacian, GridSpec, Norms, ScalarField, Scheme};
use crate::schrodinger::{Equation, Evolver, Method, SchrodingerProblem};
use crate::series::{FieldSeries, VectorSeries};

/// A masked node counts as a formed node only where the evolved density
/// carries at least this fraction of its maximum.
pub const NODE_DENSITY_FRACTION: f64 = 1e-8;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BornOptions {
    pub method: Method,
    /// Discretization used for velocity extraction and residuals.
    pub scheme: Scheme,
    /// Keep fields every `record_every` steps (the first and last are always kept).
    pub record_every: usize,
    /// Drive the density with `G = psi*` under the conjugate equation and `U = V*`.
    pub conjugate: bool,
}

impl Default for BornOptions {
    fn default() -> Self {
        Self {
            method: Method::SplitStep,
            scheme: Scheme::Spectral,
            record_every: 10,
            conjugate: false,
        }
    }
}

/// Per-step diagnostics.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct StepRecord {
    pub t: f64,
    /// `‖rho - |psi|^2‖`.
    pub born: Norms,
    /// `‖rho - |psi|^2‖∞ / ‖rho‖∞`.
    pub born_relative: f64,
    /// `‖2∇·(u |psi|^2) - ∇²(b^2 |psi|^2)‖`.
    pub osmotic: Norms,
    /// `max |U - V*|`.
    pub conjugacy: f64,
    pub mass: f64,
    pub psi_norm: f64,
    pub min_rho: f64,
    pub masked: usize,
}

/// A node formed in the support of the density; the run stops there.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Truncation {
    pub t: f64,
    pub nodes: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BornRun {
    pub psi_series: FieldSeries,
    pub rho_series: FieldSeries,
    pub v_series: VectorSeries,
    pub u_series: VectorSeries,
    pub steps: Vec<StepRecord>,
    /// Complex Fokker–Planck residuals on the recorded samples (interior ones).
    pub complex_fp: Vec<ComplexFpSample>,
    pub truncation: Option<Truncation>,
}

impl BornRun {
    pub fn max_born_relative(&self) -> f64 {
        self.steps
            .iter()
            .map(|s| s.born_relative)
            .fold(0.0, f64::max)
    }

    pub fn max_osmotic(&self) -> Norms {
        self.steps
            .iter()
            .map(|s| s.osmotic)
            .fold(Norms::zero(), Norms::max)
    }

    pub fn max_mass_error(&self) -> f64 {
        self.steps
            .iter()
            .map(|s| (s.mass - 1.0).abs())
            .fold(0.0, f64::max)
    }

    pub fn max_norm_drift(&self) -> f64 {
        self.steps
            .iter()
            .map(|s| (s.psi_norm - 1.0).abs())
            .fold(0.0, f64::max)
    }

    pub fn max_conjugacy(&self) -> f64 {
        self.steps.iter().map(|s| s.conjugacy).fold(0.0, f64::max)
    }

    pub fn min_rho(&self) -> f64 {
        self.steps
            .iter()
            .map(|s| s.min_rho)
            .fold(f64::INFINITY, f64::min)
    }
}

/// `-∇·(v rho)` with central face fluxes `((v_i + v_{i+1})/2) ((rho_i + rho_{i+1})/2)`.
fn continuity_rate(grid: &GridSpec, rho: &[f64], v: &[Vec<f64>]) -> Vec<f64> {
    let n = grid.points();
    let dx = grid.dx();
    let mut out = vec![0.0; rho.len()];
    for (axis, va) in v.iter().enumerate() {
        let stride = grid.stride(axis);
        for (i, o) in out.iter_mut().enumerate() {
            let pos = grid.unravel(i)[axis];
            let next = if pos + 1 == n {
                i + stride - n * stride
            } else {
                i + stride
            };
            let prev = if pos == 0 {
                i + (n - 1) * stride
            } else {
                i - stride
            };
            let f_right = 0.25 * (va[i] + va[next]) * (rho[i] + rho[next]);
            let f_left = 0.25 * (va[prev] + va[i]) * (rho[prev] + rho[i]);
            *o -= (f_right - f_left) / dx;
        }
    }
    out
}

fn lerp(a: &[Vec<f64>], b: &[Vec<f64>], w: f64) -> Vec<Vec<f64>> {
    a.iter()
        .zip(b)
        .map(|(x, y)| {
            x.iter()
                .zip(y)
                .map(|(p, q)| (1.0 - w) * p + w * q)
                .collect()
        })
        .collect()
}

/// One SSP-RK3 step of `rho_t + ∇·(v rho) = 0`, with the velocity linearly
/// interpolated between the two ends of the step.
fn continuity_step(
    grid: &GridSpec,
    rho: &[f64],
    v0: &[Vec<f64>],
    v1: &[Vec<f64>],
    dt: f64,
) -> Vec<f64> {
    let vm = lerp(v0, v1, 0.5);
    let l0 = continuity_rate(grid, rho, v0);
    let r1: Vec<f64> = rho.iter().zip(&l0).map(|(r, l)| r + dt * l).collect();
    let l1 = continuity_rate(grid, &r1, v1);
    let r2: Vec<f64> = rho
        .iter()
        .zip(&r1)
        .zip(&l1)
        .map(|((r, p), l)| 0.75 * r + 0.25 * (p + dt * l))
        .collect();
    let l2 = continuity_rate(grid, &r2, &vm);
    rho.iter()
        .zip(&r2)
        .zip(&l2)
        .map(|((r, p), l)| r / 3.0 + 2.0 / 3.0 * (p + dt * l))
        .collect()
}

struct Snapshot {
    current: Vec<Vec<f64>>,
    osmotic_residual: Norms,
    conjugacy: f64,
    masked: Vec<usize>,
    v: crate::ga::MultivectorField,
    u: crate::ga::MultivectorField,
}

fn snapshot(psi: &ScalarField, b: f64, scheme: Scheme, conjugate: bool) -> Result<Snapshot> {
    let vel = extract_velocities(psi, b, scheme)?;
    // For the conjugate drive `psi` holds G = F*. The extracted E = -i b^2 ∇G/G
    // equals -U, so U = -E, V = -E*, v = -Re E, while u = -Im E is unchanged.
    let (v, u, current) = if conjugate {
        let neg = |f: &crate::ga::MultivectorField| f.map(|m| -*m);
        (
            neg(&vel.conjugate)?,
            neg(&vel.complex)?,
            vel.current
                .iter()
                .map(|c| c.re().iter().map(|x| -x).collect())
                .collect(),
        )
    } else {
        (
            vel.complex.clone(),
            vel.conjugate.clone(),
            vel.current.iter().map(ScalarField::re).collect(),
        )
    };
    let rho_psi = psi.abs_sq();
    let mut div = ScalarField::zeros(psi.grid());
    for (axis, u_axis) in vel.osmotic.iter().enumerate() {
        let flux = u_axis.mul(&rho_psi)?.scale(Complex64::new(2.0, 0.0))?;
        div = div.add(&derivative(&flux, axis, scheme)?)?;
    }
    let osm = div.sub(&laplacian(&rho_psi, scheme)?.scale(Complex64::new(b * b, 0.0))?)?;
    let conj = u.residual_norm(&v.conj())?.l_inf;
    Ok(Snapshot {
        current,
        osmotic_residual: Norms::of(&osm),
        conjugacy: conj,
        masked: vel.masked,
        v,
        u,
    })
}

/// Evolves `psi`, transports `rho_0 = |psi_0|^2` with the current velocity
/// extracted from `psi` at every step, and records the Born discrepancy, the
/// osmotic identity and the complex Fokker–Planck residuals.
pub fn run_born_pipeline(p: &SchrodingerProblem, opts: &BornOptions) -> Result<BornRun> {
    let grid = p.grid().clone();
    let b = p.b();
    let dt = p.dt();
    let (equation, initial) = if opts.conjugate {
        (Equation::Conjugate, p.psi0().conj())
    } else {
        (Equation::Forward, p.psi0().clone())
    };
    let mut ev = Evolver::new(p, opts.method, equation, &initial)?;
    let every = opts.record_every.max(1);
    let n_steps = p.n_steps();
    let dv = grid.cell_volume();

    let mut rho: Vec<f64> = initial.abs_sq().re();
    let mut snap = snapshot(&initial, b, opts.scheme, opts.conjugate)?;
    let mut run = BornRun {
        psi_series: FieldSeries::new(),
        rho_series: FieldSeries::new(),
        v_series: VectorSeries::new(),
        u_series: VectorSeries::new(),
        steps: Vec::new(),
        complex_fp: Vec::new(),
        truncation: None,
    };
    let record = |run: &mut BornRun,
                  t: f64,
                  psi: &ScalarField,
                  rho: &[f64],
                  snap: &Snapshot|
     -> Result<()> {
        run.psi_series.push(t, psi.clone())?;
        run.rho_series
            .push(t, ScalarField::from_real(grid.clone(), rho)?)?;
        run.v_series.push(t, snap.v.clone())?;
        run.u_series.push(t, snap.u.clone())?;
        Ok(())
    };
    let diagnostics = |t: f64, psi: &ScalarField, rho: &[f64], snap: &Snapshot| -> StepRecord {
        let mut diff_inf: f64 = 0.0;
        let mut diff_sq = 0.0;
        let mut rho_inf: f64 = 0.0;
        let mut min_rho = f64::INFINITY;
        for (r, z) in rho.iter().zip(psi.values()) {
            let d = (r - z.norm_sqr()).abs();
            diff_inf = diff_inf.max(d);
            diff_sq += d * d;
            rho_inf = rho_inf.max(r.abs());
            min_rho = min_rho.min(*r);
        }
        StepRecord {
            t,
            born: Norms {
                l_inf: diff_inf,
                l2: (diff_sq * dv).sqrt(),
            },
            born_relative: diff_inf / rho_inf,
            osmotic: snap.osmotic_residual,
            conjugacy: snap.conjugacy,
            mass: rho.iter().sum::<f64>() * dv,
            psi_norm: integrate(&psi.abs_sq()).re,
            min_rho,
            masked: snap.masked.len(),
        }
    };

    record(&mut run, 0.0, &initial, &rho, &snap)?;
    run.steps.push(diagnostics(0.0, &initial, &rho, &snap));
    for k in 1..=n_steps {
        ev.advance()?;
        let psi = ev.state()?;
        let next = snapshot(&psi, b, opts.scheme, opts.conjugate)?;
        let rho_max = rho.iter().cloned().fold(0.0, f64::max);
        let formed: Vec<usize> = next
            .masked
            .iter()
            .copied()
            .filter(|&i| rho[i] > NODE_DENSITY_FRACTION * rho_max)
            .collect();
        if !formed.is_empty() {
            run.truncation = Some(Truncation {
                t: ev.time(),
                nodes: formed,
            });
            break;
        }
        let v_max = snap
            .current
            .iter()
            .chain(&next.current)
            .flat_map(|c| c.iter())
            .fold(0.0_f64, |m, v| m.max(v.abs()));
        if v_max * dt > grid.dx() {
            return Err(Error::Stability {
                dt,
                suggested: grid.dx() / v_max,
            });
        }
        rho = continuity_step(&grid, &rho, &snap.current, &next.current, dt);
        snap = next;
        let t = ev.time();
        run.steps.push(diagnostics(t, &psi, &rho, &snap));
        if k % every == 0 || k == n_steps {
            record(&mut run, t, &psi, &rho, &snap)?;
        }
    }
    if run.rho_series.len() >= 3 {
        run.complex_fp = complex_fp_residual(&run.rho_series, &run.v_series, b, opts.scheme)?;
    }
    Ok(run)
}
