use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{antiderivative, derivative, second_derivative, Norms, ScalarField, Scheme};
use crate::series::{FieldSeries, VectorSeries};

/// Sign of the viscous term in the drift equations.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GeodesicSign {
    /// `a_t + a a_x + (b^2/2) a_xx = 0`, the forward drift (negative viscosity).
    Forward,
    /// `â_t + â â_x - (b^2/2) â_xx = 0`, the backward drift (positive viscosity).
    Backward,
}

impl GeodesicSign {
    pub fn viscosity(self, b: f64) -> Complex64 {
        let h = 0.5 * b * b;
        match self {
            GeodesicSign::Forward => Complex64::new(-h, 0.0),
            GeodesicSign::Backward => Complex64::new(h, 0.0),
        }
    }
}

fn ensure_line(series: &FieldSeries) -> Result<()> {
    if series.len() < 3 {
        return Err(Error::TooFewSamples {
            got: series.len(),
            required: 3,
        });
    }
    match series.grid() {
        Some(g) if g.dim() == 1 => Ok(()),
        _ => Err(Error::Unsupported(
            "scalar Burgers residuals are 1-D".into(),
        )),
    }
}

/// `a_t + a a_x - nu a_xx` at interior sample `k` (centered time difference).
pub fn burgers_residual_field(
    series: &FieldSeries,
    k: usize,
    viscosity: Complex64,
    scheme: Scheme,
) -> Result<ScalarField> {
    let a = &series.fields()[k];
    let at = series.time_derivative(k)?;
    let ax = derivative(a, 0, scheme)?;
    let axx = second_derivative(a, 0, scheme)?;
    let mut values = Vec::with_capacity(a.len());
    for i in 0..a.len() {
        values.push(at.values()[i] + a.values()[i] * ax.values()[i] - viscosity * axx.values()[i]);
    }
    ScalarField::new(a.grid().clone(), values)
}

/// Residual norms at every interior sample.
pub fn burgers_residual(
    series: &FieldSeries,
    viscosity: Complex64,
    scheme: Scheme,
) -> Result<Vec<(f64, Norms)>> {
    ensure_line(series)?;
    (1..series.len() - 1)
        .map(|k| {
            Ok((
                series.times()[k],
                Norms::of(&burgers_residual_field(series, k, viscosity, scheme)?),
            ))
        })
        .collect()
}

/// Pointwise residual of `a_t + a a_x ± (b^2/2) a_xx` over the interior samples.
pub fn geodesic_residual(
    series: &FieldSeries,
    b: f64,
    sign: GeodesicSign,
    scheme: Scheme,
) -> Result<Vec<(f64, Norms)>> {
    burgers_residual(series, sign.viscosity(b), scheme)
}

/// `V_t + (V·∇)V - nu ∇²V + ∇U` for vector series, worst component per interior sample.
pub fn vector_burgers_residual(
    series: &VectorSeries,
    viscosity: Complex64,
    potential: Option<&ScalarField>,
    scheme: Scheme,
) -> Result<Vec<(f64, Norms)>> {
    let grid = series
        .grid()
        .ok_or(Error::TooFewSamples {
            got: 0,
            required: 3,
        })?
        .clone();
    if series.len() < 3 {
        return Err(Error::TooFewSamples {
            got: series.len(),
            required: 3,
        });
    }
    let dim = grid.dim();
    let comps: Vec<FieldSeries> = (0..dim).map(|j| series.component(j)).collect();
    let force: Option<Vec<ScalarField>> = potential
        .map(|u| {
            (0..dim)
                .map(|j| derivative(u, j, scheme))
                .collect::<Result<_>>()
        })
        .transpose()?;
    let mut out = Vec::new();
    for k in 1..series.len() - 1 {
        let v: Vec<&ScalarField> = comps.iter().map(|c| &c.fields()[k]).collect();
        let mut worst = Norms::zero();
        for j in 0..dim {
            let mut r = comps[j].time_derivative(k)?;
            for (m, vm) in v.iter().enumerate() {
                r = r.add(&vm.mul(&derivative(v[j], m, scheme)?)?)?;
            }
            let mut lap = ScalarField::zeros(&grid);
            for m in 0..dim {
                lap = lap.add(&second_derivative(v[j], m, scheme)?)?;
            }
            r = r.sub(&lap.scale(viscosity)?)?;
            if let Some(f) = &force {
                r = r.add(&f[j])?;
            }
            worst = worst.max(Norms::of(&r));
        }
        out.push((series.times()[k], worst));
    }
    Ok(out)
}

/// Residuals of the real transform chain at one interior sample.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RealColeHopfSample {
    pub t: f64,
    /// `R_B = a_t + a a_x + (b^2/2) a_xx`.
    pub burgers: Norms,
    /// `H = (u_t + (b^2/2) u_xx) / u` with its spatial mean removed
    /// (a time-only function is gauge).
    pub heat: Norms,
    /// `R_T = ∂_x H`.
    pub transformed: Norms,
    /// `R_B - b^2 R_T`, which vanishes identically for the exact chain.
    pub identity: Norms,
}

/// Outcome of [`real_cole_hopf_check`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RealColeHopfReport {
    pub samples: Vec<RealColeHopfSample>,
    pub worst_burgers: Norms,
    pub worst_heat: Norms,
    pub worst_identity: Norms,
    /// Number of `(sample, node)` pairs with `a <= 0`; reported only, since
    /// the transform below does not require a positive drift.
    pub nonpositive_nodes: usize,
}

/// Checks the chain linking the negative-viscosity drift equation to the
/// heat equation in reversed time, `u_t + (b^2/2) u_xx = 0`.
///
/// The transform is `a = b^2 ∂_x log u`, i.e. `u = exp(∫a / b^2)`; under it
/// `a_t + a a_x + (b^2/2) a_xx = b^2 ∂_x[(u_t + (b^2/2) u_xx)/u]` exactly. The
/// field `u` is built numerically (periodic part times `e^{kappa x}` when `a`
/// has nonzero mean), its time derivative is taken by centered differences,
/// and both sides are compared. A spatially constant `a` makes the chain
/// degenerate and is rejected.
pub fn real_cole_hopf_check(
    series: &FieldSeries,
    b: f64,
    scheme: Scheme,
) -> Result<RealColeHopfReport> {
    ensure_line(series)?;
    if !(b > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "b must be positive, got {b}"
        )));
    }
    let b2 = b * b;
    let mut nonpositive = 0;
    for (t, a) in series.iter() {
        let mean = a.values().iter().sum::<Complex64>() / a.len() as f64;
        let spread = a
            .values()
            .iter()
            .map(|v| (v - mean).norm())
            .fold(0.0, f64::max);
        if spread <= 1e-14 * mean.norm().max(1.0) {
            return Err(Error::Degenerate(format!(
                "a is spatially constant at t = {t}: the transformed field has a degenerate u = 0 region"
            )));
        }
        nonpositive += a.values().iter().filter(|v| v.re <= 0.0).count();
    }
    // Periodic parts P and twists kappa of u = e^{kappa x} P.
    let mut parts = FieldSeries::new();
    let mut kappas = Vec::with_capacity(series.len());
    for (t, a) in series.iter() {
        let (phi, mean) = antiderivative(a)?;
        parts.push(t, phi.map(|p| (p / b2).exp())?)?;
        kappas.push(mean / b2);
    }
    let mut samples = Vec::new();
    for k in 1..series.len() - 1 {
        let t = series.times()[k];
        let p = &parts.fields()[k];
        let kappa = kappas[k];
        let grid = p.grid();
        // u_t / u from the node values of u at neighbouring samples.
        let u_at = |j: usize| -> Vec<Complex64> {
            parts.fields()[j]
                .values()
                .iter()
                .enumerate()
                .map(|(i, v)| v * (kappas[j] * grid.position(i)[0]).exp())
                .collect()
        };
        let (um, u0, up) = (u_at(k - 1), u_at(k), u_at(k + 1));
        let (tm, tp) = (series.times()[k - 1], series.times()[k + 1]);
        let (hm, hp) = (t - tm, tp - t);
        let (cm, c0, cp) = (
            -hp / (hm * (hm + hp)),
            (hp - hm) / (hm * hp),
            hm / (hp * (hm + hp)),
        );
        let px = derivative(p, 0, Scheme::Spectral)?;
        let pxx = second_derivative(p, 0, Scheme::Spectral)?;
        let h: Vec<Complex64> = (0..p.len())
            .map(|i| {
                let ut = (um[i] * cm + u0[i] * c0 + up[i] * cp) / u0[i];
                let pv = p.values()[i];
                let uxx =
                    (pxx.values()[i] + 2.0 * kappa * px.values()[i] + kappa * kappa * pv) / pv;
                ut + 0.5 * b2 * uxx
            })
            .collect();
        let h_mean = h.iter().sum::<Complex64>() / h.len() as f64;
        let h_field = ScalarField::new(grid.clone(), h.iter().map(|v| v - h_mean).collect())?;
        let rt = derivative(&h_field, 0, scheme)?;
        let rb = burgers_residual_field(series, k, GeodesicSign::Forward.viscosity(b), scheme)?;
        let diff = rb.zip_with(&rt, |x, y| x - b2 * y)?;
        samples.push(RealColeHopfSample {
            t,
            burgers: Norms::of(&rb),
            heat: Norms::of(&h_field),
            transformed: Norms::of(&rt),
            identity: Norms::of(&diff),
        });
    }
    let fold =
        |f: fn(&RealColeHopfSample) -> Norms| samples.iter().map(f).fold(Norms::zero(), Norms::max);
    Ok(RealColeHopfReport {
        worst_burgers: fold(|s| s.burgers),
        worst_heat: fold(|s| s.heat),
        worst_identity: fold(|s| s.identity),
        nonpositive_nodes: nonpositive,
        samples,
    })
}
