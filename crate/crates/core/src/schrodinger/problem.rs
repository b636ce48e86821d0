use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::propagator::LinearPropagator;
use crate::error::{Error, Result};
use crate::numerics::{integrate, GridSpec, ScalarField};
use crate::series::FieldSeries;

/// Tolerance on `∫|psi_0|^2 = 1`.
pub const NORM_TOLERANCE: f64 = 1e-10;

/// `i b^2 F_t = -(b^4/2) ∇²F + U F` with a real potential and normalized data.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SchrodingerProblem {
    b: f64,
    potential: ScalarField,
    psi0: ScalarField,
    dt: f64,
    t_final: f64,
}

impl SchrodingerProblem {
    pub fn new(
        b: f64,
        potential: ScalarField,
        psi0: ScalarField,
        dt: f64,
        t_final: f64,
    ) -> Result<Self> {
        if !(b.is_finite() && b > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "b must be positive, got {b}"
            )));
        }
        if !(dt.is_finite() && dt > 0.0 && t_final.is_finite() && t_final >= 0.0) {
            return Err(Error::InvalidParameter(format!(
                "need dt > 0 and t_final >= 0, got dt = {dt}, t_final = {t_final}"
            )));
        }
        psi0.grid().ensure_periodic()?;
        psi0.grid().ensure_same_space(potential.grid())?;
        if !potential.is_real() {
            return Err(Error::InvalidParameter(
                "potential must be real-valued for unitary evolution".into(),
            ));
        }
        let norm = integrate(&psi0.abs_sq()).re;
        if (norm - 1.0).abs() > NORM_TOLERANCE {
            return Err(Error::InvalidParameter(format!(
                "initial state must be normalized, ∫|psi|^2 = {norm}"
            )));
        }
        Ok(Self {
            b,
            potential,
            psi0,
            dt,
            t_final,
        })
    }

    /// Force-free problem.
    pub fn free(b: f64, psi0: ScalarField, dt: f64, t_final: f64) -> Result<Self> {
        let u = ScalarField::zeros(psi0.grid());
        Self::new(b, u, psi0, dt, t_final)
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn potential(&self) -> &ScalarField {
        &self.potential
    }

    pub fn psi0(&self) -> &ScalarField {
        &self.psi0
    }

    pub fn grid(&self) -> &GridSpec {
        self.psi0.grid()
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn t_final(&self) -> f64 {
        self.t_final
    }

    pub fn n_steps(&self) -> usize {
        (self.t_final / self.dt).round() as usize
    }

    /// Same problem with the initial state multiplied by the unit phase `e^{i theta}`.
    pub fn with_phase(&self, theta: f64) -> Result<Self> {
        let psi0 = self.psi0.scale(Complex64::from_polar(1.0, theta))?;
        Self::new(self.b, self.potential.clone(), psi0, self.dt, self.t_final)
    }
}

/// Time integrator.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    /// Strang splitting with exact Fourier kinetic propagator.
    #[default]
    SplitStep,
    /// Crank–Nicolson with centered second differences (1-D only).
    CrankNicolson,
}

/// Which of the two conjugate equations to integrate.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Equation {
    /// `i b^2 F_t = -(b^4/2) ∇²F + U F`.
    #[default]
    Forward,
    /// `-i b^2 G_t = -(b^4/2) ∇²G + U G`, satisfied by `G = F*`.
    Conjugate,
}

impl Equation {
    /// Coefficients `(nu, q)` of `F_t = nu ∇²F + q U F`.
    fn coefficients(self, b: f64) -> (Complex64, Complex64) {
        let b2 = b * b;
        let nu = Complex64::new(0.0, 0.5 * b2);
        let q = Complex64::new(0.0, -1.0 / b2);
        match self {
            Equation::Forward => (nu, q),
            Equation::Conjugate => (nu.conj(), q.conj()),
        }
    }
}

enum Stepper {
    Split(LinearPropagator),
    Cn(CrankNicolson),
}

/// Step-by-step integrator, used directly by pipelines that need every step.
pub struct Evolver {
    grid: GridSpec,
    stepper: Stepper,
    state: Vec<Complex64>,
    dt: f64,
    step: usize,
}

impl Evolver {
    /// Starts from `initial`; under [`Equation::Conjugate`] pass the conjugated data.
    pub fn new(
        p: &SchrodingerProblem,
        method: Method,
        equation: Equation,
        initial: &ScalarField,
    ) -> Result<Self> {
        p.grid().ensure_same_space(initial.grid())?;
        let (nu, q) = equation.coefficients(p.b);
        let qf = p.potential.scale(q)?;
        let has_potential = p.potential.max_abs() > 0.0;
        let stepper = match method {
            Method::SplitStep => Stepper::Split(LinearPropagator::new(
                p.grid(),
                nu,
                [Complex64::new(0.0, 0.0); 3],
                has_potential.then_some(&qf),
                p.dt,
            )?),
            Method::CrankNicolson => Stepper::Cn(CrankNicolson::new(p.grid(), nu, &qf, p.dt)?),
        };
        Ok(Self {
            grid: p.grid().clone(),
            stepper,
            state: initial.values().to_vec(),
            dt: p.dt,
            step: 0,
        })
    }

    pub fn time(&self) -> f64 {
        self.step as f64 * self.dt
    }

    pub fn steps_taken(&self) -> usize {
        self.step
    }

    pub fn state(&self) -> Result<ScalarField> {
        ScalarField::new(self.grid.clone(), self.state.clone())
    }

    pub fn advance(&mut self) -> Result<()> {
        match &self.stepper {
            Stepper::Split(prop) => prop.step(&mut self.state),
            Stepper::Cn(cn) => cn.step(&mut self.state),
        }
        self.step += 1;
        if let Some(index) = self
            .state
            .iter()
            .position(|v| !(v.re.is_finite() && v.im.is_finite()))
        {
            return Err(Error::NonFinite {
                context: format!("wavefunction at step {}", self.step),
                index,
            });
        }
        Ok(())
    }
}

/// Evolves `psi0` (or `psi0*` under the conjugate equation) to `t_final`,
/// recording every `record_every`-th step and always the final one.
pub fn evolve(
    p: &SchrodingerProblem,
    method: Method,
    equation: Equation,
    record_every: usize,
) -> Result<FieldSeries> {
    let initial = match equation {
        Equation::Forward => p.psi0.clone(),
        Equation::Conjugate => p.psi0.conj(),
    };
    let every = record_every.max(1);
    let n = p.n_steps();
    let mut ev = Evolver::new(p, method, equation, &initial)?;
    let mut out = FieldSeries::new();
    out.push(0.0, initial)?;
    for k in 1..=n {
        ev.advance()?;
        if k % every == 0 || k == n {
            out.push(ev.time(), ev.state()?)?;
        }
    }
    Ok(out)
}

/// `(I - dt/2 A) F^{n+1} = (I + dt/2 A) F^n` with `A = nu D2 + diag(q)` on a
/// periodic line; the cyclic tridiagonal system is solved by Sherman–Morrison.
struct CrankNicolson {
    off_lhs: Complex64,
    diag_lhs: Vec<Complex64>,
    off_rhs: Complex64,
    diag_rhs: Vec<Complex64>,
}

impl CrankNicolson {
    fn new(grid: &GridSpec, nu: Complex64, q: &ScalarField, dt: f64) -> Result<Self> {
        if grid.dim() != 1 {
            return Err(Error::Unsupported(
                "Crank–Nicolson is implemented in 1-D only".into(),
            ));
        }
        let c = nu / (grid.dx() * grid.dx());
        let h = 0.5 * dt;
        Ok(Self {
            off_lhs: -c * h,
            diag_lhs: q
                .values()
                .iter()
                .map(|&qi| 1.0 - h * (qi - 2.0 * c))
                .collect(),
            off_rhs: c * h,
            diag_rhs: q
                .values()
                .iter()
                .map(|&qi| 1.0 + h * (qi - 2.0 * c))
                .collect(),
        })
    }

    fn step(&self, f: &mut Vec<Complex64>) {
        let n = f.len();
        let rhs: Vec<Complex64> = (0..n)
            .map(|i| self.diag_rhs[i] * f[i] + self.off_rhs * (f[(i + 1) % n] + f[(i + n - 1) % n]))
            .collect();
        *f = solve_cyclic(self.off_lhs, &self.diag_lhs, &rhs);
    }
}

/// Thomas algorithm for constant off-diagonals `a`.
fn solve_tridiagonal(a: Complex64, diag: &[Complex64], rhs: &[Complex64]) -> Vec<Complex64> {
    let n = diag.len();
    let mut c_prime = vec![Complex64::new(0.0, 0.0); n];
    let mut d_prime = vec![Complex64::new(0.0, 0.0); n];
    c_prime[0] = a / diag[0];
    d_prime[0] = rhs[0] / diag[0];
    for i in 1..n {
        let m = diag[i] - a * c_prime[i - 1];
        c_prime[i] = a / m;
        d_prime[i] = (rhs[i] - a * d_prime[i - 1]) / m;
    }
    let mut x = d_prime;
    for i in (0..n - 1).rev() {
        let next = x[i + 1];
        x[i] -= c_prime[i] * next;
    }
    x
}

/// Periodic tridiagonal solve with both corner entries equal to `a`.
fn solve_cyclic(a: Complex64, diag: &[Complex64], rhs: &[Complex64]) -> Vec<Complex64> {
    let n = diag.len();
    let gamma = -diag[0];
    let mut d = diag.to_vec();
    d[0] -= gamma;
    d[n - 1] -= a * a / gamma;
    let x = solve_tridiagonal(a, &d, rhs);
    let mut u = vec![Complex64::new(0.0, 0.0); n];
    u[0] = gamma;
    u[n - 1] = a;
    let z = solve_tridiagonal(a, &d, &u);
    let factor = (x[0] + a * x[n - 1] / gamma) / (1.0 + z[0] + a * z[n - 1] / gamma);
    x.iter().zip(&z).map(|(xi, zi)| xi - factor * zi).collect()
}
