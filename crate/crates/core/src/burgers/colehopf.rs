use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::direct::SolveOptions;
use super::problem::{to_physical, BurgersProblem, BurgersSolution};
use crate::error::{Error, Result};
use crate::ga::{stretched_gradient_components, MultivectorField, StretchSpec};
use crate::numerics::{derivative, spectral, GridSpec, Norms, ScalarField, Scheme};
use crate::schrodinger::LinearPropagator;

/// Relative modulus below which a node counts as a zero of `F`.
pub const EPS_FLOOR: f64 = 1e-12;

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Which linear equation the transform targets.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ColeHopfVariant {
    /// `nu = b^2/2`: heat equation, `lambda = -b^2`.
    RealHeat,
    /// `nu = i b^2/2`: forward Schrödinger-type equation, `lambda = -i b^2`.
    ComplexForward,
    /// `nu = -i b^2/2`: conjugate equation, `lambda = i b^2`.
    ComplexConjugate,
}

impl ColeHopfVariant {
    /// Viscosity of the Burgers equation linearized by this variant.
    pub fn viscosity(self, b: f64) -> Complex64 {
        let h = 0.5 * b * b;
        match self {
            ColeHopfVariant::RealHeat => Complex64::new(h, 0.0),
            ColeHopfVariant::ComplexForward => I * h,
            ColeHopfVariant::ComplexConjugate => -I * h,
        }
    }

    /// Coefficient `mu` in the linearization condition `lambda^2 + mu lambda = 0`.
    fn mu(self, b: f64) -> Complex64 {
        2.0 * self.viscosity(b)
    }
}

/// Nonzero root of `lambda^2 + mu lambda = 0` for the chosen variant.
pub fn solve_linearization_condition(b: f64, variant: ColeHopfVariant) -> Result<Complex64> {
    if !(b.is_finite() && b != 0.0) {
        return Err(Error::Degenerate(format!(
            "b = {b}: only the root lambda = 0 exists"
        )));
    }
    Ok(-variant.mu(b))
}

/// `V = lambda ∇ log F` with a root `lambda` of the linearization condition.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ColeHopfMap {
    lambda: Complex64,
    b: f64,
    variant: ColeHopfVariant,
}

impl ColeHopfMap {
    pub fn new(b: f64, variant: ColeHopfVariant) -> Result<Self> {
        if !(b > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "b must be positive, got {b}"
            )));
        }
        Ok(Self {
            lambda: solve_linearization_condition(b, variant)?,
            b,
            variant,
        })
    }

    pub fn lambda(&self) -> Complex64 {
        self.lambda
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn variant(&self) -> ColeHopfVariant {
        self.variant
    }

    pub fn viscosity(&self) -> Complex64 {
        self.variant.viscosity(self.b)
    }

    /// The isotropic stretch `C(∇) = lambda ∇`.
    pub fn stretch(&self) -> StretchSpec {
        StretchSpec::isotropic(self.lambda)
    }
}

/// Nodes with `|F| < EPS_FLOOR * max |F|`.
pub fn near_zero_nodes(f: &ScalarField) -> Vec<usize> {
    let floor = EPS_FLOOR * f.max_abs();
    f.values()
        .iter()
        .enumerate()
        .filter(|(_, v)| v.norm() < floor || f.max_abs() == 0.0)
        .map(|(i, _)| i)
        .collect()
}

/// `V = lambda (∇F) / F`, evaluated in ratio form.
///
/// Equivalent to `lambda ∇ log F` for any branch of the logarithm; the
/// principal branch `-pi < arg F <= pi` is only relevant when a logarithm is
/// actually formed (see [`linearization_residual`]).
pub fn cole_hopf_forward(
    f: &ScalarField,
    map: &ColeHopfMap,
    scheme: Scheme,
) -> Result<MultivectorField> {
    let nodes = near_zero_nodes(f);
    if !nodes.is_empty() {
        return Err(Error::NearZero { nodes });
    }
    let grads = stretched_gradient_components(f, &map.stretch(), scheme)?;
    let comps: Vec<ScalarField> = grads
        .iter()
        .map(|g| g.zip_with(f, |d, v| d / v))
        .collect::<Result<_>>()?;
    MultivectorField::from_vector_components(&comps)
}

/// `F = e^{kappa·x} P` with periodic `P`: the exponential of a potential
/// whose gradient has nonzero mean.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BlochField {
    pub periodic: ScalarField,
    pub kappa: [Complex64; 3],
}

impl BlochField {
    /// Pointwise `|F| = |P| e^{Re kappa·x}`.
    pub fn modulus(&self) -> Vec<f64> {
        let grid = self.periodic.grid();
        self.periodic
            .values()
            .iter()
            .enumerate()
            .map(|(i, p)| p.norm() * twist(grid, &self.kappa, i).norm())
            .collect()
    }

    /// Node values of `F` (not periodic unless `kappa = 0`).
    pub fn values(&self) -> Vec<Complex64> {
        let grid = self.periodic.grid();
        self.periodic
            .values()
            .iter()
            .enumerate()
            .map(|(i, p)| p * twist(grid, &self.kappa, i))
            .collect()
    }

    /// `lambda ∇ log F = lambda (kappa + ∇P / P)`.
    pub fn velocity(&self, lambda: Complex64, scheme: Scheme) -> Result<MultivectorField> {
        let p = &self.periodic;
        let comps: Vec<ScalarField> = (0..p.grid().dim())
            .map(|j| {
                let d = derivative(p, j, scheme)?;
                d.zip_with(p, |dp, pv| lambda * (self.kappa[j] + dp / pv))
            })
            .collect::<Result<_>>()?;
        MultivectorField::from_vector_components(&comps)
    }

    /// Positions where `|F|` falls below the relative floor.
    pub fn near_zero_nodes(&self) -> Vec<usize> {
        let m = self.modulus();
        let max = m.iter().cloned().fold(0.0, f64::max);
        m.iter()
            .enumerate()
            .filter(|(_, &v)| v < EPS_FLOOR * max)
            .map(|(i, _)| i)
            .collect()
    }
}

fn twist(grid: &GridSpec, kappa: &[Complex64; 3], index: usize) -> Complex64 {
    let x = grid.position(index);
    (kappa[0] * x[0] + kappa[1] * x[1] + kappa[2] * x[2]).exp()
}

/// Periodic potential `phi` with `∇phi = v - mean(v)` and `phi(origin) = 0`,
/// together with the mean of every component.
pub fn potential_of(v: &[ScalarField]) -> Result<(ScalarField, [Complex64; 3])> {
    let grid = v
        .first()
        .ok_or_else(|| Error::InvalidParameter("no velocity components".into()))?
        .grid()
        .clone();
    grid.ensure_periodic()?;
    let n = grid.points();
    let mut mean = [Complex64::new(0.0, 0.0); 3];
    let mut spectrum = vec![Complex64::new(0.0, 0.0); grid.len()];
    let k = grid.wavenumbers();
    for (j, comp) in v.iter().enumerate() {
        mean[j] = comp.values().iter().sum::<Complex64>() / grid.len() as f64;
        let s = spectral::forward(comp.values(), &grid);
        for (i, si) in spectrum.iter_mut().enumerate() {
            let idx = grid.unravel(i);
            let nyquist = (0..grid.dim()).any(|a| n % 2 == 0 && idx[a] == n / 2);
            let kv = spectral::wavevector(&grid, &k, i);
            let k2 = kv[0] * kv[0] + kv[1] * kv[1] + kv[2] * kv[2];
            if nyquist || k2 == 0.0 {
                continue;
            }
            // phi_hat = -i (k · v_hat) / |k|^2
            *si += -I * kv[j] * s[i] / k2;
        }
    }
    let mut phi = spectral::inverse(&spectrum, &grid);
    let origin = phi[0];
    phi.iter_mut().for_each(|p| *p -= origin);
    Ok((ScalarField::new(grid, phi)?, mean))
}

/// Exponential reconstruction `F = exp(∫ V / lambda)` with `F(origin) = 1`.
pub fn cole_hopf_inverse(v: &MultivectorField, lambda: Complex64) -> Result<BlochField> {
    if lambda == Complex64::new(0.0, 0.0) {
        return Err(Error::Degenerate("lambda = 0".into()));
    }
    let (phi, mean) = potential_of(&v.vector_components())?;
    let periodic = phi.map(|p| (p / lambda).exp())?;
    let mut kappa = [Complex64::new(0.0, 0.0); 3];
    for j in 0..v.grid().dim() {
        kappa[j] = mean[j] / lambda;
    }
    Ok(BlochField { periodic, kappa })
}

/// `∇(C(∇) log F)^2 + mu C(∇)(∇ log F)^2` for positive real `F`, where
/// `lambda^2 + mu lambda = 0` (`mu = i b^2` for the forward variant). The
/// worst component's norms are returned.
pub fn linearization_residual(f: &ScalarField, map: &ColeHopfMap, scheme: Scheme) -> Result<Norms> {
    if let Some(index) = f.values().iter().position(|v| !(v.re > 0.0) || v.im != 0.0) {
        return Err(Error::InvalidParameter(format!(
            "F must be positive and real (node {index})"
        )));
    }
    let log_f = f.map(|v| Complex64::new(v.re.ln(), 0.0))?;
    let grid = f.grid();
    let stretched = stretched_gradient_components(&log_f, &map.stretch(), scheme)?;
    let plain = stretched_gradient_components(
        &log_f,
        &StretchSpec::isotropic(Complex64::new(1.0, 0.0)),
        scheme,
    )?;
    let square = |c: &[ScalarField]| -> Result<ScalarField> {
        let mut s = ScalarField::zeros(grid);
        for x in c {
            s = s.add(&x.mul(x)?)?;
        }
        Ok(s)
    };
    let w2 = square(&stretched)?;
    let g2 = square(&plain)?;
    let lhs = stretched_gradient_components(
        &w2,
        &StretchSpec::isotropic(Complex64::new(1.0, 0.0)),
        scheme,
    )?;
    let rhs = stretched_gradient_components(&g2, &map.stretch(), scheme)?;
    let mu = map.variant().mu(map.b());
    let mut worst = Norms::zero();
    for (l, r) in lhs.iter().zip(&rhs) {
        let res = l.zip_with(r, |x, y| x + mu * y)?;
        worst = worst.max(Norms::of(&res));
    }
    Ok(worst)
}

/// Solves the problem through the linear equation for `F`.
///
/// The data is integrated to `F_0 = exp(∫V/lambda)` with `lambda = -2 nu`,
/// `F` is propagated with `F_t = nu ∇²F - (U/lambda) F` (exact in Fourier
/// space when `U = 0`, Strang-split otherwise), and mapped back by
/// `V = lambda ∇ log F`. A near-zero node of `F` stops the run; the series is
/// truncated at the last sample before it and the event is reported.
pub fn solve_burgers_via_colehopf(
    p: &BurgersProblem,
    opts: &SolveOptions,
) -> Result<BurgersSolution> {
    let grid = p.grid().clone();
    let dt = opts.dt(p.t_final())?;
    let (nu, w0) = p.integrable_form();
    let lambda = -2.0 * nu;
    if lambda == Complex64::new(0.0, 0.0) {
        return Err(Error::Degenerate(
            "zero viscosity has no Cole–Hopf linearization".into(),
        ));
    }
    let bloch = cole_hopf_inverse(&MultivectorField::from_vector_components(&w0)?, lambda)?;
    let q = match p.potential() {
        Some(u) => Some(u.scale(-1.0 / lambda)?),
        None => None,
    };
    let prop = LinearPropagator::new(&grid, nu, bloch.kappa, q.as_ref(), dt)?;
    let real = nu.im == 0.0 && lambda.im == 0.0;
    let every = opts.record_every();
    let mut state = bloch.periodic.values().to_vec();
    let mut field = bloch.clone();
    let mut samples = vec![(0.0, w0)];
    let mut node_time = None;
    let mut node_indices = Vec::new();
    for step in 1..=opts.n_steps {
        prop.step(&mut state);
        if real {
            // Keep the gauge F(origin) = 1; real heat flows otherwise drift in scale.
            let s = state[0];
            state.iter_mut().for_each(|v| *v /= s);
        }
        field.periodic = ScalarField::new(grid.clone(), state.clone())?;
        let nodes = field.near_zero_nodes();
        let t = step as f64 * dt;
        if !nodes.is_empty() {
            node_time = Some(match p.direction() {
                super::TimeDirection::InitialValue => t,
                super::TimeDirection::FinalValue => p.t_final() - t,
            });
            node_indices = nodes;
            break;
        }
        if step % every == 0 || step == opts.n_steps {
            samples.push((
                t,
                field
                    .velocity(lambda, Scheme::Spectral)?
                    .vector_components(),
            ));
        }
    }
    Ok(BurgersSolution {
        series: to_physical(p.direction(), p.t_final(), samples)?,
        node_time,
        node_indices,
    })
}
