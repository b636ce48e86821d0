use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::burgers::EPS_FLOOR;
use crate::error::{Error, Result};
use crate::ga::MultivectorField;
use crate::numerics::{gradient_components, ScalarField, Scheme};

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Complex velocity pair and its real parts, with the gauge `h(t) = 1`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Velocities {
    /// `V = -i b^2 ∇psi / psi = v - i u`.
    pub complex: MultivectorField,
    /// `U = V*`.
    pub conjugate: MultivectorField,
    /// Current velocity `v = Re V`.
    pub current: Vec<ScalarField>,
    /// Osmotic velocity `u = -Im V`.
    pub osmotic: Vec<ScalarField>,
    /// Nodes with `|psi| < EPS_FLOOR max|psi|`, where all velocities are set to zero.
    pub masked: Vec<usize>,
}

/// Extracts `(V, U, v, u)` from a wavefunction; near-zero nodes are masked.
pub fn extract_velocities(psi: &ScalarField, b: f64, scheme: Scheme) -> Result<Velocities> {
    if !(b > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "b must be positive, got {b}"
        )));
    }
    let floor = EPS_FLOOR * psi.max_abs();
    let masked: Vec<usize> = psi
        .values()
        .iter()
        .enumerate()
        .filter(|(_, v)| !(v.norm() >= floor) || floor == 0.0)
        .map(|(i, _)| i)
        .collect();
    let mut keep = vec![true; psi.len()];
    for &i in &masked {
        keep[i] = false;
    }
    let scale = -I * b * b;
    let comps: Vec<ScalarField> = gradient_components(psi, scheme)?
        .iter()
        .map(|g| {
            let vals = g
                .values()
                .iter()
                .zip(psi.values())
                .zip(&keep)
                .map(|((d, p), &k)| {
                    if k {
                        scale * d / p
                    } else {
                        Complex64::new(0.0, 0.0)
                    }
                })
                .collect();
            ScalarField::new(psi.grid().clone(), vals)
        })
        .collect::<Result<_>>()?;
    let current = comps
        .iter()
        .map(|c| c.map(|z| Complex64::new(z.re, 0.0)))
        .collect::<Result<_>>()?;
    let osmotic = comps
        .iter()
        .map(|c| c.map(|z| Complex64::new(-z.im, 0.0)))
        .collect::<Result<_>>()?;
    let complex = MultivectorField::from_vector_components(&comps)?;
    let conjugate = complex.conj();
    Ok(Velocities {
        complex,
        conjugate,
        current,
        osmotic,
        masked,
    })
}
