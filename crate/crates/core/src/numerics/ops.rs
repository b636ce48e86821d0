use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::field::ScalarField;
use super::grid::GridSpec;
use super::spectral;
use crate::error::{Error, Result};
use crate::ga::{Multivector, MultivectorField};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Spatial derivative discretization.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Scheme {
    /// Second-order centered differences.
    Central2,
    /// Fourier pseudo-spectral differentiation.
    #[default]
    Spectral,
}

/// Grid-weighted error norms: `l2^2 = sum |f_i|^2 dx^dim`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Norms {
    pub l_inf: f64,
    pub l2: f64,
}

impl Norms {
    pub fn of_values(values: &[Complex64], cell_volume: f64) -> Self {
        let mut l_inf: f64 = 0.0;
        let mut sq = 0.0;
        for v in values {
            let a = v.norm();
            l_inf = l_inf.max(a);
            sq += a * a;
        }
        Self {
            l_inf,
            l2: (sq * cell_volume).sqrt(),
        }
    }

    pub fn of(f: &ScalarField) -> Self {
        Self::of_values(f.values(), f.grid().cell_volume())
    }

    /// Componentwise maximum, used for worst-case summaries.
    pub fn max(self, other: Norms) -> Self {
        Self {
            l_inf: self.l_inf.max(other.l_inf),
            l2: self.l2.max(other.l2),
        }
    }

    pub fn zero() -> Self {
        Self::default()
    }
}

/// Norms of `lhs - rhs`.
pub fn residual_norm(lhs: &ScalarField, rhs: &ScalarField) -> Result<Norms> {
    Ok(Norms::of(&lhs.sub(rhs)?))
}

/// Periodic quadrature: Riemann sum times `dx^dim`, exact for trigonometric polynomials.
pub fn integrate(f: &ScalarField) -> Complex64 {
    f.values().iter().sum::<Complex64>() * f.grid().cell_volume()
}

fn is_constant(values: &[Complex64]) -> bool {
    values.iter().all(|v| *v == values[0])
}

fn check_axis(grid: &GridSpec, axis: usize) -> Result<()> {
    grid.ensure_periodic()?;
    if axis >= grid.dim() {
        return Err(Error::InvalidParameter(format!(
            "axis {axis} out of range for a {}-D grid",
            grid.dim()
        )));
    }
    Ok(())
}

fn shifted(
    values: &[Complex64],
    grid: &GridSpec,
    index: usize,
    axis: usize,
    offset: isize,
) -> Complex64 {
    let n = grid.points() as isize;
    let mut idx = grid.unravel(index);
    idx[axis] = (idx[axis] as isize + offset).rem_euclid(n) as usize;
    values[grid.ravel(idx)]
}

/// `d f / d x_axis`.
pub fn derivative(f: &ScalarField, axis: usize, scheme: Scheme) -> Result<ScalarField> {
    let grid = f.grid();
    check_axis(grid, axis)?;
    let v = f.values();
    if is_constant(v) {
        return Ok(ScalarField::zeros(grid));
    }
    let out = match scheme {
        Scheme::Central2 => {
            let inv = 1.0 / (2.0 * grid.dx());
            (0..v.len())
                .map(|i| (shifted(v, grid, i, axis, 1) - shifted(v, grid, i, axis, -1)) * inv)
                .collect()
        }
        Scheme::Spectral => {
            let n = grid.points();
            spectral::apply_multiplier(v, grid, |k, idx| {
                // The Nyquist mode has no odd-derivative partner; drop it.
                if n.is_multiple_of(2) && idx[axis] == n / 2 {
                    ZERO
                } else {
                    Complex64::new(0.0, k[axis])
                }
            })
        }
    };
    ScalarField::new(grid.clone(), out)
}

/// `d^2 f / d x_axis^2`.
pub fn second_derivative(f: &ScalarField, axis: usize, scheme: Scheme) -> Result<ScalarField> {
    let grid = f.grid();
    check_axis(grid, axis)?;
    let v = f.values();
    if is_constant(v) {
        return Ok(ScalarField::zeros(grid));
    }
    let out = match scheme {
        Scheme::Central2 => {
            let inv = 1.0 / (grid.dx() * grid.dx());
            (0..v.len())
                .map(|i| {
                    (shifted(v, grid, i, axis, 1) - 2.0 * v[i] + shifted(v, grid, i, axis, -1))
                        * inv
                })
                .collect()
        }
        Scheme::Spectral => {
            spectral::apply_multiplier(v, grid, |k, _| Complex64::new(-k[axis] * k[axis], 0.0))
        }
    };
    ScalarField::new(grid.clone(), out)
}

/// `sum_j d^2 f / d x_j^2`.
pub fn laplacian(f: &ScalarField, scheme: Scheme) -> Result<ScalarField> {
    let grid = f.grid();
    grid.ensure_periodic()?;
    match scheme {
        Scheme::Spectral => {
            if is_constant(f.values()) {
                return Ok(ScalarField::zeros(grid));
            }
            let out = spectral::apply_multiplier(f.values(), grid, |k, _| {
                Complex64::new(-(k[0] * k[0] + k[1] * k[1] + k[2] * k[2]), 0.0)
            });
            ScalarField::new(grid.clone(), out)
        }
        Scheme::Central2 => {
            let mut acc = second_derivative(f, 0, scheme)?;
            for axis in 1..grid.dim() {
                acc = acc.add(&second_derivative(f, axis, scheme)?)?;
            }
            Ok(acc)
        }
    }
}

/// Partial derivatives along every axis of the grid.
pub fn gradient_components(f: &ScalarField, scheme: Scheme) -> Result<Vec<ScalarField>> {
    (0..f.grid().dim())
        .map(|axis| derivative(f, axis, scheme))
        .collect()
}

/// The vector field `e^j d_j f`; a single `e1` component in 1-D.
pub fn gradient(f: &ScalarField, scheme: Scheme) -> Result<MultivectorField> {
    MultivectorField::from_vector_components(&gradient_components(f, scheme)?)
}

/// `sum_j d_j v_j` of the vector part of `v`.
pub fn divergence(v: &MultivectorField, scheme: Scheme) -> Result<ScalarField> {
    let grid = v.grid();
    let mut acc = ScalarField::zeros(grid);
    for axis in 0..grid.dim() {
        acc = acc.add(&derivative(&v.vector_component(axis), axis, scheme)?)?;
    }
    Ok(acc)
}

/// Bivector `grad ^ v` of the vector part of `v`; identically zero in 1-D.
pub fn curl(v: &MultivectorField, scheme: Scheme) -> Result<MultivectorField> {
    let grid = v.grid();
    grid.ensure_periodic()?;
    let mut out = vec![Multivector::zero(); grid.len()];
    if grid.dim() == 3 {
        let d = |comp: usize, axis: usize| derivative(&v.vector_component(comp), axis, scheme);
        // Blade slots: e12 = 4, e13 = 5, e23 = 6.
        for (slot, (i, j)) in [(4usize, (0usize, 1usize)), (5, (0, 2)), (6, (1, 2))] {
            let dij = d(j, i)?;
            let dji = d(i, j)?;
            for (n, mv) in out.iter_mut().enumerate() {
                mv.c[slot] = dij.values()[n] - dji.values()[n];
            }
        }
    }
    MultivectorField::new(grid.clone(), out)
}

/// Periodic antiderivative along the single axis of a 1-D field.
///
/// Returns `(phi, mean)` with `phi' = f - mean` (spectrally) and `phi(x_0) = 0`.
pub fn antiderivative(f: &ScalarField) -> Result<(ScalarField, Complex64)> {
    let grid = f.grid();
    grid.ensure_periodic()?;
    if grid.dim() != 1 {
        return Err(Error::Unsupported("antiderivative is 1-D only".into()));
    }
    let n = grid.points();
    let mean = f.values().iter().sum::<Complex64>() / n as f64;
    let mut phi = spectral::apply_multiplier(f.values(), grid, |k, idx| {
        if idx[0] == 0 || (n.is_multiple_of(2) && idx[0] == n / 2) {
            ZERO
        } else {
            Complex64::new(0.0, -1.0 / k[0])
        }
    });
    let origin = phi[0];
    for p in &mut phi {
        *p -= origin;
    }
    Ok((ScalarField::new(grid.clone(), phi)?, mean))
}
