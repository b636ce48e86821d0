use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ga::MultivectorField;
use crate::numerics::{
    derivative, divergence, laplacian, second_derivative, Norms, ScalarField, Scheme,
};
use crate::series::{FieldSeries, VectorSeries};

const I: Complex64 = Complex64::new(0.0, 1.0);

/// `rho_t` according to the forward equation: `-(a rho)_x + (b^2/2) rho_xx`.
pub fn forward_rate(
    rho: &ScalarField,
    a: &ScalarField,
    b: f64,
    scheme: Scheme,
) -> Result<ScalarField> {
    let adv = derivative(&a.mul(rho)?, 0, scheme)?;
    let diff = second_derivative(rho, 0, scheme)?;
    diff.scale(Complex64::new(0.5 * b * b, 0.0))?.sub(&adv)
}

/// `rho_t` according to the backward equation: `-(â rho)_x - (b^2/2) rho_xx`.
pub fn backward_rate(
    rho: &ScalarField,
    a_hat: &ScalarField,
    b: f64,
    scheme: Scheme,
) -> Result<ScalarField> {
    let adv = derivative(&a_hat.mul(rho)?, 0, scheme)?;
    let diff = second_derivative(rho, 0, scheme)?;
    diff.scale(Complex64::new(-0.5 * b * b, 0.0))?.sub(&adv)
}

/// Forward/backward residuals and their half-sum / difference at one sample.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SumDifferenceSample {
    pub t: f64,
    /// `R_f = rho_t + (a rho)_x - (b^2/2) rho_xx`.
    pub forward: Norms,
    /// `R_b = rho_t + (â rho)_x + (b^2/2) rho_xx`.
    pub backward: Norms,
    /// Continuity residual `rho_t + (v rho)_x`, `v = (a + â)/2`.
    pub continuity: Norms,
    /// Osmotic residual `2 (u rho)_x - b^2 rho_xx`, `u = (a - â)/2`.
    pub osmotic: Norms,
    /// Largest deviation from `(R_f + R_b)/2 = continuity` and `R_f - R_b = osmotic`.
    pub split: Norms,
}

fn check_aligned(a: &FieldSeries, b: &FieldSeries) -> Result<()> {
    if a.times() != b.times() {
        return Err(Error::InvalidParameter(
            "series are sampled at different times".into(),
        ));
    }
    Ok(())
}

/// Sum/difference decomposition of the forward and backward equations on a
/// density series with matching drift series.
pub fn sum_difference_residuals(
    rho: &FieldSeries,
    a: &FieldSeries,
    a_hat: &FieldSeries,
    b: f64,
    scheme: Scheme,
) -> Result<Vec<SumDifferenceSample>> {
    check_aligned(rho, a)?;
    check_aligned(rho, a_hat)?;
    if rho.len() < 3 {
        return Err(Error::TooFewSamples {
            got: rho.len(),
            required: 3,
        });
    }
    let half = Complex64::new(0.5, 0.0);
    (1..rho.len() - 1)
        .map(|k| {
            let r = &rho.fields()[k];
            let rt = rho.time_derivative(k)?;
            let (ak, ahk) = (&a.fields()[k], &a_hat.fields()[k]);
            let rf = rt.sub(&forward_rate(r, ak, b, scheme)?)?;
            let rb = rt.sub(&backward_rate(r, ahk, b, scheme)?)?;
            let v = ak.add(ahk)?.scale(half)?;
            let u = ak.sub(ahk)?.scale(half)?;
            let cont = rt.add(&derivative(&v.mul(r)?, 0, scheme)?)?;
            let osm = derivative(&u.mul(r)?, 0, scheme)?
                .scale(Complex64::new(2.0, 0.0))?
                .sub(&second_derivative(r, 0, scheme)?.scale(Complex64::new(b * b, 0.0))?)?;
            let split_sum = rf.add(&rb)?.scale(half)?.sub(&cont)?;
            let split_diff = rf.sub(&rb)?.sub(&osm)?;
            Ok(SumDifferenceSample {
                t: rho.times()[k],
                forward: Norms::of(&rf),
                backward: Norms::of(&rb),
                continuity: Norms::of(&cont),
                osmotic: Norms::of(&osm),
                split: Norms::of(&split_sum).max(Norms::of(&split_diff)),
            })
        })
        .collect()
}

/// Complex Fokker–Planck residuals at one sample.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComplexFpSample {
    pub t: f64,
    /// `rho_t + ∇·(V rho) + (i/2) ∇²(b^2 rho)`.
    pub forward: Norms,
    /// `rho_t + ∇·(V* rho) - (i/2) ∇²(b^2 rho)`.
    pub conjugate: Norms,
    /// Real part: the continuity residual.
    pub real_part: Norms,
    /// Imaginary part: the osmotic constraint `-∇·(u rho) + (b^2/2) ∇²rho`.
    pub imag_part: Norms,
}

fn scaled_by(v: &MultivectorField, rho: &ScalarField) -> Result<MultivectorField> {
    let comps: Vec<ScalarField> = v
        .vector_components()
        .iter()
        .map(|c| c.mul(rho))
        .collect::<Result<_>>()?;
    MultivectorField::from_vector_components(&comps)
}

/// Residuals of the complex Fokker–Planck equation and its conjugate on a
/// density series and a complex-velocity series sampled at the same times.
pub fn complex_fp_residual(
    rho: &FieldSeries,
    v: &VectorSeries,
    b: f64,
    scheme: Scheme,
) -> Result<Vec<ComplexFpSample>> {
    if rho.times() != v.times() {
        return Err(Error::InvalidParameter(
            "series are sampled at different times".into(),
        ));
    }
    if rho.len() < 3 {
        return Err(Error::TooFewSamples {
            got: rho.len(),
            required: 3,
        });
    }
    let b2 = b * b;
    (1..rho.len() - 1)
        .map(|k| {
            let r = &rho.fields()[k];
            let rt = rho.time_derivative(k)?;
            let vk = &v.fields()[k];
            let div = divergence(&scaled_by(vk, r)?, scheme)?;
            let div_conj = divergence(&scaled_by(&vk.conj(), r)?, scheme)?;
            let lap = laplacian(r, scheme)?.scale(Complex64::new(0.5 * b2, 0.0))?;
            let fwd = rt.add(&div)?.add(&lap.scale(I)?)?;
            let conj = rt.add(&div_conj)?.sub(&lap.scale(I)?)?;
            let re = fwd.map(|z| Complex64::new(z.re, 0.0))?;
            let im = fwd.map(|z| Complex64::new(z.im, 0.0))?;
            Ok(ComplexFpSample {
                t: rho.times()[k],
                forward: Norms::of(&fwd),
                conjugate: Norms::of(&conj),
                real_part: Norms::of(&re),
                imag_part: Norms::of(&im),
            })
        })
        .collect()
}
