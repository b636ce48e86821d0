use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::numerics::{gradient_components, integrate, Norms, ScalarField, Scheme};
use crate::series::FieldSeries;

/// `∫|psi|^2`.
pub fn norm(psi: &ScalarField) -> f64 {
    integrate(&psi.abs_sq()).re
}

/// `∫ (b^4/2)|∇psi|^2 + U |psi|^2`.
pub fn energy(psi: &ScalarField, b: f64, potential: &ScalarField, scheme: Scheme) -> Result<f64> {
    psi.grid().ensure_same_space(potential.grid())?;
    let b4 = b.powi(4);
    let grads = gradient_components(psi, scheme)?;
    let dv = psi.grid().cell_volume();
    let mut e = 0.0;
    for i in 0..psi.len() {
        let kinetic: f64 = grads.iter().map(|g| g.values()[i].norm_sqr()).sum();
        e += 0.5 * b4 * kinetic + potential.values()[i].re * psi.values()[i].norm_sqr();
    }
    Ok(e * dv)
}

/// Norm and energy at every sample of a series.
pub fn norm_and_energy(
    series: &FieldSeries,
    b: f64,
    potential: &ScalarField,
    scheme: Scheme,
) -> Result<Vec<(f64, f64)>> {
    series
        .fields()
        .iter()
        .map(|psi| Ok((norm(psi), energy(psi, b, potential, scheme)?)))
        .collect()
}

/// `|G(t) - F(t)*|` at every common sample.
pub fn conjugate_evolution_check(f: &FieldSeries, g: &FieldSeries) -> Result<Vec<Norms>> {
    if f.times() != g.times() {
        return Err(Error::InvalidParameter(
            "conjugate check needs both series sampled at the same times".into(),
        ));
    }
    f.fields()
        .iter()
        .zip(g.fields())
        .map(|(ff, gg)| {
            let diff = gg.zip_with(ff, |a, b| a - b.conj())?;
            Ok(Norms::of(&diff))
        })
        .collect()
}

/// Phase of `psi(x_index)` relative to `psi_0(x_index)`, unwrapped over the series.
pub fn phase_history(series: &FieldSeries, index: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(series.len());
    let mut prev: Option<f64> = None;
    let mut offset = 0.0;
    for psi in series.fields() {
        let z: Complex64 = psi.values()[index];
        let mut p = z.arg();
        if let Some(q) = prev {
            let mut d = p + offset - q;
            while d > std::f64::consts::PI {
                offset -= 2.0 * std::f64::consts::PI;
                d -= 2.0 * std::f64::consts::PI;
            }
            while d < -std::f64::consts::PI {
                offset += 2.0 * std::f64::consts::PI;
                d += 2.0 * std::f64::consts::PI;
            }
        }
        p += offset;
        prev = Some(p);
        out.push(p);
    }
    out
}
