//! Stretched gradient `C(grad) = c_k e^k d_k` and its commutation identities.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::field::MultivectorField;
use crate::error::Result;
use crate::numerics::{
    derivative, gradient_components, laplacian, residual_norm, GridSpec, Norms, ScalarField, Scheme,
};

/// Constant stretch coefficients, one per axis.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct StretchSpec {
    pub c: [Complex64; 3],
}

impl StretchSpec {
    pub fn new(c: [Complex64; 3]) -> Self {
        Self { c }
    }

    /// The same coefficient on every axis.
    pub fn isotropic(lambda: Complex64) -> Self {
        Self { c: [lambda; 3] }
    }

    pub fn real(c: [f64; 3]) -> Self {
        Self {
            c: c.map(|x| Complex64::new(x, 0.0)),
        }
    }
}

/// Components `c_k d_k f`, one per grid axis.
pub fn stretched_gradient_components(
    f: &ScalarField,
    s: &StretchSpec,
    scheme: Scheme,
) -> Result<Vec<ScalarField>> {
    gradient_components(f, scheme)?
        .into_iter()
        .enumerate()
        .map(|(k, d)| d.scale(s.c[k]))
        .collect()
}

/// `C(grad) f` as a vector field.
pub fn stretched_gradient(
    f: &ScalarField,
    s: &StretchSpec,
    scheme: Scheme,
) -> Result<MultivectorField> {
    MultivectorField::from_vector_components(&stretched_gradient_components(f, s, scheme)?)
}

/// Worst-case residual norms of the stretched-gradient identities.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct PropIdentityReport {
    /// `d_t C(grad) f - C(grad) d_t f`.
    pub commute_time: Norms,
    /// `lap C(grad) f - C(grad) lap f`.
    pub commute_laplacian: Norms,
    /// `(C(grad) f . grad) g - (grad f . C(grad)) g` with `g = f^2`.
    pub symmetry: Norms,
    /// Per component: `W_i d_i W_i - 1/2 d_i (W_i^2)` with `W = C(grad) f`.
    pub advection_gradient: Norms,
    /// Diagnostic only: `(W . grad) W - 1/2 grad (W . W)`, the full vector
    /// contraction. It vanishes for isotropic stretches but not in general.
    pub full_contraction: Norms,
}

impl PropIdentityReport {
    /// Worst case over the four identities (the diagnostic is excluded).
    pub fn worst(&self) -> Norms {
        self.commute_time
            .max(self.commute_laplacian)
            .max(self.symmetry)
            .max(self.advection_gradient)
    }
}

fn accumulate(acc: &mut Norms, lhs: &ScalarField, rhs: &ScalarField) -> Result<()> {
    *acc = acc.max(residual_norm(lhs, rhs)?);
    Ok(())
}

/// Evaluates the identities for a time-dependent field `f(x, t)` at time `t`.
///
/// Time derivatives use centered differences with step `h`; because both sides
/// share the same samples, the commutator vanishes up to round-off.
pub fn check_prop_identities(
    f: impl Fn([f64; 3], f64) -> Complex64,
    grid: &GridSpec,
    s: &StretchSpec,
    t: f64,
    h: f64,
    scheme: Scheme,
) -> Result<PropIdentityReport> {
    let dim = grid.dim();
    let at = |time: f64| ScalarField::from_fn(grid, |p| f(p, time));
    let f0 = at(t)?;
    let (fp, fm) = (at(t + h)?, at(t - h)?);
    let inv2h = Complex64::new(0.5 / h, 0.0);
    let mut report = PropIdentityReport::default();

    let w0 = stretched_gradient_components(&f0, s, scheme)?;
    let wp = stretched_gradient_components(&fp, s, scheme)?;
    let wm = stretched_gradient_components(&fm, s, scheme)?;
    let ft = fp.sub(&fm)?.scale(inv2h)?;
    let c_ft = stretched_gradient_components(&ft, s, scheme)?;
    let lap_f = laplacian(&f0, scheme)?;
    let c_lap = stretched_gradient_components(&lap_f, s, scheme)?;
    for k in 0..dim {
        let wt = wp[k].sub(&wm[k])?.scale(inv2h)?;
        accumulate(&mut report.commute_time, &wt, &c_ft[k])?;
        accumulate(
            &mut report.commute_laplacian,
            &laplacian(&w0[k], scheme)?,
            &c_lap[k],
        )?;
    }

    // Symmetry of the stretched directional derivative, tested on g = f^2.
    let g = f0.mul(&f0)?;
    let grad_f = gradient_components(&f0, scheme)?;
    let grad_g = gradient_components(&g, scheme)?;
    let c_grad_g = stretched_gradient_components(&g, s, scheme)?;
    let mut lhs = ScalarField::zeros(grid);
    let mut rhs = ScalarField::zeros(grid);
    for k in 0..dim {
        lhs = lhs.add(&w0[k].mul(&grad_g[k])?)?;
        rhs = rhs.add(&grad_f[k].mul(&c_grad_g[k])?)?;
    }
    accumulate(&mut report.symmetry, &lhs, &rhs)?;

    // Advection of W by itself versus the gradient of its square.
    let half = Complex64::new(0.5, 0.0);
    let mut w_sq = ScalarField::zeros(grid);
    for wk in &w0 {
        w_sq = w_sq.add(&wk.mul(wk)?)?;
    }
    let grad_w_sq = gradient_components(&w_sq, scheme)?;
    for i in 0..dim {
        let di_wi = derivative(&w0[i], i, scheme)?;
        let lhs = w0[i].mul(&di_wi)?;
        let rhs = derivative(&w0[i].mul(&w0[i])?, i, scheme)?.scale(half)?;
        accumulate(&mut report.advection_gradient, &lhs, &rhs)?;

        let mut adv = ScalarField::zeros(grid);
        for j in 0..dim {
            adv = adv.add(&w0[j].mul(&derivative(&w0[i], j, scheme)?)?)?;
        }
        accumulate(
            &mut report.full_contraction,
            &adv,
            &grad_w_sq[i].scale(half)?,
        )?;
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn cube() -> GridSpec {
        GridSpec::cube(1.0, 16, 0.01, 1.0).unwrap()
    }

    #[test]
    fn isotropic_is_scaled_gradient() {
        let g = cube();
        let f =
            ScalarField::from_real_fn(&g, |p| (2.0 * PI * p[0]).sin() * (2.0 * PI * p[2]).cos())
                .unwrap();
        let lam = Complex64::new(0.3, -1.2);
        let sg = stretched_gradient(&f, &StretchSpec::isotropic(lam), Scheme::Spectral).unwrap();
        let grad = crate::numerics::gradient(&f, Scheme::Spectral).unwrap();
        let scaled = grad.map(|m| m.scale(lam)).unwrap();
        assert!(sg.residual_norm(&scaled).unwrap().l_inf < 1e-12);
    }

    #[test]
    fn component_selection() {
        let g = cube();
        // Periodic stand-in for x + y: equal dependence on x and y, none on z.
        let f = ScalarField::from_real_fn(&g, |p| {
            ((2.0 * PI * p[0]).sin() + (2.0 * PI * p[1]).sin()) / (2.0 * PI)
        })
        .unwrap();
        let sg =
            stretched_gradient(&f, &StretchSpec::real([1.0, 0.0, 0.0]), Scheme::Spectral).unwrap();
        for (i, m) in sg.values().iter().enumerate() {
            let x = g.position(i)[0];
            assert!((m.c[1].re - (2.0 * PI * x).cos()).abs() < 1e-12);
            assert_eq!(m.c[2], Complex64::new(0.0, 0.0));
            assert_eq!(m.c[3], Complex64::new(0.0, 0.0));
        }
    }

    #[test]
    fn identities_on_trigonometric_field() {
        let g = cube();
        let f = |p: [f64; 3], t: f64| {
            Complex64::new(
                (2.0 * PI * p[0]).sin() * (2.0 * PI * p[1]).sin() * (1.0 + 0.5 * t.cos()),
                0.0,
            )
        };
        let s = StretchSpec::real([1.0, 2.0, 3.0]);
        let r = check_prop_identities(f, &g, &s, 0.3, 1e-3, Scheme::Spectral).unwrap();
        assert!(r.worst().l_inf <= 1e-10, "{r:?}");
        // The full vector contraction only agrees for isotropic stretches.
        assert!(r.full_contraction.l_inf > 1e-3);
        let iso = StretchSpec::isotropic(Complex64::new(0.0, -1.0));
        let r = check_prop_identities(f, &g, &iso, 0.3, 1e-3, Scheme::Spectral).unwrap();
        assert!(r.full_contraction.l_inf <= 1e-10, "{r:?}");
    }

    #[test]
    fn constant_field_and_zero_stretch_are_exact() {
        let g = cube();
        let s = StretchSpec::real([1.0, 2.0, 3.0]);
        let r = check_prop_identities(
            |_, _| Complex64::new(2.0, 0.0),
            &g,
            &s,
            0.0,
            1e-3,
            Scheme::Spectral,
        )
        .unwrap();
        assert_eq!(r.worst(), Norms::zero());
        let f = |p: [f64; 3], t: f64| Complex64::new((2.0 * PI * p[1]).cos() * t, 0.0);
        let r = check_prop_identities(
            f,
            &g,
            &StretchSpec::real([0.0; 3]),
            0.5,
            1e-3,
            Scheme::Spectral,
        )
        .unwrap();
        assert_eq!(r.worst(), Norms::zero());
    }
}
