//! Closed-form solutions used as oracles by tests and experiments.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::numerics::{GridSpec, ScalarField};

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Free Gaussian packet of `i b^2 F_t = -(b^4/2) F_xx`, wrapped onto a
/// periodic interval by summing `2 * images + 1` translates.
///
/// With `D = b^2/2` and `alpha = 1/(4 s0^2)` a single translate is
/// `A (1 + 4 i alpha D t)^{-1/2} exp(-alpha (x - x0 - 2 D k0 t)^2 / (1 + 4 i alpha D t) + i k0 (x - x0) - i D k0^2 t)`,
/// whose density has standard deviation `s0` at `t = 0`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GaussianPacket {
    pub b: f64,
    pub x0: f64,
    /// Carrier wavenumber; must be a multiple of `2 pi / length` for periodicity.
    pub k0: f64,
    pub s0: f64,
    pub length: f64,
    pub images: i32,
}

impl GaussianPacket {
    pub fn centered(b: f64, s0: f64, length: f64) -> Self {
        Self {
            b,
            x0: 0.5 * length,
            k0: 0.0,
            s0,
            length,
            images: 3,
        }
    }

    fn single(&self, x: f64, t: f64) -> (Complex64, Complex64) {
        let d = 0.5 * self.b * self.b;
        let alpha = 0.25 / (self.s0 * self.s0);
        let amp = (2.0 * alpha / PI).powf(0.25);
        let denom = 1.0 + 4.0 * I * alpha * d * t;
        let y = x - self.x0 - 2.0 * d * self.k0 * t;
        let expo =
            -alpha * y * y / denom + I * self.k0 * (x - self.x0) - I * d * self.k0 * self.k0 * t;
        let psi = amp / denom.sqrt() * expo.exp();
        let dpsi = psi * (-2.0 * alpha * y / denom + I * self.k0);
        (psi, dpsi)
    }

    /// `(psi, psi_x)` at `(x, t)`.
    pub fn eval(&self, x: f64, t: f64) -> (Complex64, Complex64) {
        let mut psi = Complex64::new(0.0, 0.0);
        let mut dpsi = Complex64::new(0.0, 0.0);
        for m in -self.images..=self.images {
            let (p, d) = self.single(x + m as f64 * self.length, t);
            psi += p;
            dpsi += d;
        }
        (psi, dpsi)
    }

    pub fn psi(&self, x: f64, t: f64) -> Complex64 {
        self.eval(x, t).0
    }

    /// `V = -i b^2 psi_x / psi`.
    pub fn complex_velocity(&self, x: f64, t: f64) -> Complex64 {
        let (p, d) = self.eval(x, t);
        -I * self.b * self.b * d / p
    }

    pub fn field(&self, grid: &GridSpec, t: f64) -> Result<ScalarField> {
        ScalarField::from_fn(grid, |p| self.psi(p[0], t))
    }

    /// Density standard deviation at time `t` (single translate).
    pub fn width(&self, t: f64) -> f64 {
        let d = 0.5 * self.b * self.b;
        let s2 = self.s0 * self.s0;
        (s2 + (d * t / self.s0).powi(2)).sqrt()
    }
}

/// Harmonic potential `U = (K/2)(x - c)^2` and its two lowest eigenstates
/// for `i b^2 F_t = -(b^4/2) F_xx + U F`: `phi_n ~ H_n e^{-beta y^2}` with
/// `beta = sqrt(K)/(2 b^2)` and angular frequencies `omega_n = b^2 beta (2n + 1)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct HarmonicOscillator {
    pub b: f64,
    pub stiffness: f64,
    pub center: f64,
}

impl HarmonicOscillator {
    pub fn beta(&self) -> f64 {
        self.stiffness.sqrt() / (2.0 * self.b * self.b)
    }

    pub fn omega(&self, n: u32) -> f64 {
        self.b * self.b * self.beta() * (2 * n + 1) as f64
    }

    /// Energy `<H> = b^2 omega_n` of eigenstate `n`.
    pub fn energy(&self, n: u32) -> f64 {
        self.b * self.b * self.omega(n)
    }

    pub fn potential(&self, x: f64) -> f64 {
        0.5 * self.stiffness * (x - self.center).powi(2)
    }

    pub fn potential_field(&self, grid: &GridSpec) -> Result<ScalarField> {
        ScalarField::from_real_fn(grid, |p| self.potential(p[0]))
    }

    pub fn ground(&self, x: f64) -> f64 {
        let beta = self.beta();
        let y = x - self.center;
        (2.0 * beta / PI).powf(0.25) * (-beta * y * y).exp()
    }

    pub fn first_excited(&self, x: f64) -> f64 {
        2.0 * self.beta().sqrt() * (x - self.center) * self.ground(x)
    }

    /// `c0 phi_0 e^{-i omega_0 t} + c1 phi_1 e^{-i omega_1 t}`.
    pub fn superposition(&self, c0: Complex64, c1: Complex64, x: f64, t: f64) -> Complex64 {
        c0 * self.ground(x) * Complex64::from_polar(1.0, -self.omega(0) * t)
            + c1 * self.first_excited(x) * Complex64::from_polar(1.0, -self.omega(1) * t)
    }
}

/// Viscous Burgers front `c [1 - tanh(c (x - x0 - c t) / (2 nu))]` of
/// `a_t + a a_x = nu a_xx`, connecting `2c` (left) to `0` (right).
pub fn traveling_front(x: f64, t: f64, c: f64, nu: f64, x0: f64) -> f64 {
    c * (1.0 - (c * (x - x0 - c * t) / (2.0 * nu)).tanh())
}

/// Superposition of decaying cosines `phi = a0 + sum A_j cos(k_j x + theta_j) e^{-nu k_j^2 tau}`,
/// a positive solution of the heat equation `phi_tau = nu phi_xx` when `a0 > sum |A_j|`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HeatModes {
    pub nu: f64,
    pub a0: f64,
    /// `(amplitude, wavenumber, phase)` triples.
    pub modes: Vec<(f64, f64, f64)>,
}

impl HeatModes {
    /// `(phi, phi_x)` at `(x, tau)`.
    pub fn eval(&self, x: f64, tau: f64) -> (f64, f64) {
        let mut phi = self.a0;
        let mut dphi = 0.0;
        for &(amp, k, theta) in &self.modes {
            let decay = amp * (-self.nu * k * k * tau).exp();
            phi += decay * (k * x + theta).cos();
            dphi -= decay * k * (k * x + theta).sin();
        }
        (phi, dphi)
    }

    /// Periodic solution `-2 nu phi_x / phi` of `a_t + a a_x = nu a_xx`,
    /// Galilean-boosted by `c`: `c + a(x - c t, t)`.
    pub fn burgers(&self, x: f64, t: f64, c: f64) -> f64 {
        let (phi, dphi) = self.eval(x - c * t, t);
        c - 2.0 * self.nu * dphi / phi
    }

    /// Solution of the negative-viscosity equation `a_t + a a_x + nu a_xx = 0`
    /// with final time `t_final`: `a = 2 nu phi_x / phi` evaluated at `tau = T - t`.
    pub fn reversed(&self, x: f64, t: f64, t_final: f64) -> f64 {
        let (phi, dphi) = self.eval(x, t_final - t);
        2.0 * self.nu * dphi / phi
    }
}
