use std::f64::consts::PI;

use num_complex::Complex64;

use super::{Check, Criterion, ExperimentConfig, Outcome, Output};
use crate::error::Result;
use crate::fokker_planck::{
    complex_fp_residual, evolve_forward_fp, fp_stable_dt, sum_difference_residuals, DensityState,
    SumDifferenceSample,
};
use crate::ga::MultivectorField;
use crate::numerics::{integrate, GridSpec, ScalarField, Scheme};
use crate::reference::GaussianPacket;
use crate::series::{FieldSeries, VectorSeries};

const PACKET_LENGTH: f64 = 20.0;
const PACKET_POINTS: usize = 256;
const PACKET_TIME: f64 = 0.5;

/// Exact density and drifts of a moving free packet at `t - h`, `t`, `t + h`.
struct PacketSamples {
    rho: FieldSeries,
    a: FieldSeries,
    a_hat: FieldSeries,
    v: VectorSeries,
}

fn packet_samples(b: f64, h: f64) -> Result<PacketSamples> {
    let packet = GaussianPacket {
        k0: 2.0 * PI * 2.0 / PACKET_LENGTH,
        ..GaussianPacket::centered(b, 1.0, PACKET_LENGTH)
    };
    let g = GridSpec::line(PACKET_LENGTH, PACKET_POINTS, h, 1.0)?;
    let mut s = PacketSamples {
        rho: FieldSeries::new(),
        a: FieldSeries::new(),
        a_hat: FieldSeries::new(),
        v: VectorSeries::new(),
    };
    for k in -1..=1 {
        let t = PACKET_TIME + k as f64 * h;
        let rho = ScalarField::from_real_fn(&g, |p| packet.psi(p[0], t).norm_sqr())?;
        let vel = ScalarField::from_fn(&g, |p| packet.complex_velocity(p[0], t))?;
        // V = v - i u, so a = v + u = Re V - Im V and â = v - u = Re V + Im V.
        s.a.push(t, vel.map(|z| Complex64::new(z.re - z.im, 0.0))?)?;
        s.a_hat
            .push(t, vel.map(|z| Complex64::new(z.re + z.im, 0.0))?)?;
        s.rho.push(t, rho)?;
        s.v.push(t, MultivectorField::from_vector_components(&[vel])?)?;
    }
    Ok(s)
}

fn scheme_residual(r: &SumDifferenceSample) -> f64 {
    r.forward
        .l_inf
        .max(r.backward.l_inf)
        .max(r.continuity.l_inf)
}

pub(crate) fn consistency(cfg: &ExperimentConfig, out: &mut Output) -> Result<Outcome> {
    let b = cfg.get(&cfg.b);
    let length = cfg.get(&cfg.length);
    let t_final = cfg.get(&cfg.t_final);
    let mut o = Outcome::new();

    // Ornstein–Uhlenbeck relaxation from an off-centre bump.
    let g = GridSpec::line(length, cfg.get(&cfg.points), 1e-3, t_final)?;
    let centre = 0.5 * length;
    let raw = ScalarField::from_real_fn(&g, |p| (-(p[0] - centre - 1.0).powi(2) / 0.5).exp())?;
    let rho0 = raw.scale(Complex64::new(1.0 / integrate(&raw).re, 0.0))?;
    let a = ScalarField::from_real_fn(&g, |p| -(p[0] - centre))?;
    let dt = 0.9 * fp_stable_dt(g.dx(), a.max_abs(), b);
    let n = (t_final / dt).ceil() as usize;
    let dt = t_final / n as f64;
    let series = evolve_forward_fp(&DensityState::new(rho0, 0.0)?, |_| Ok(a.clone()), b, dt, n)?;
    let mut mass_err: f64 = 0.0;
    let mut min_rho = f64::INFINITY;
    let stride = (n / 50).max(1);
    let mut rows = Vec::new();
    for (k, (t, f)) in series.iter().enumerate() {
        let m = integrate(f).re;
        mass_err = mass_err.max((m - 1.0).abs());
        let lo = f.re().into_iter().fold(f64::INFINITY, f64::min);
        min_rho = min_rho.min(lo);
        if k % stride == 0 || k + 1 == series.len() {
            rows.push(vec![t, m, lo]);
        }
    }
    out.table("mass.csv", &["t", "mass", "min_rho"], &rows)?;
    if let Some((_, f)) = series.last() {
        out.field("rho_final.csv", f)?;
    }
    o.check(Check::at_most(
        Criterion::FokkerPlanckConsistency,
        "mass_error",
        mass_err,
        1e-8,
    ));
    o.check(Check::at_least(
        Criterion::FokkerPlanckConsistency,
        "min_density",
        min_rho,
        0.0,
    ));

    // Sum/difference split on the exact packet. Time derivatives are centred
    // differences, so the residual is the O(h^2) scheme error.
    let steps = [1e-3, 5e-4];
    let mut samples = Vec::new();
    for &h in &steps {
        let s = packet_samples(b, h)?;
        samples.push(sum_difference_residuals(&s.rho, &s.a, &s.a_hat, b, Scheme::Spectral)?[0]);
    }
    out.table(
        "sum_difference.csv",
        &["h", "forward", "backward", "continuity", "osmotic", "split"],
        &steps
            .iter()
            .zip(&samples)
            .map(|(h, r)| {
                vec![
                    *h,
                    r.forward.l_inf,
                    r.backward.l_inf,
                    r.continuity.l_inf,
                    r.osmotic.l_inf,
                    r.split.l_inf,
                ]
            })
            .collect::<Vec<_>>(),
    )?;
    let coarse = scheme_residual(&samples[0]);
    let fine = scheme_residual(&samples[1]);
    let order = (coarse / fine).log2();
    let spatial = samples
        .iter()
        .map(|r| r.osmotic.l_inf.max(r.split.l_inf))
        .fold(0.0, f64::max);
    o.check(
        Check::at_most(
            Criterion::FokkerPlanckConsistency,
            "sum_difference_residual",
            coarse,
            1e-4,
        )
        .with_note("h = 1e-3 centred time differences"),
    );
    o.check(
        Check::at_least(
            Criterion::FokkerPlanckConsistency,
            "sum_difference_order",
            order,
            1.5,
        )
        .with_note("residual shrinks at the time-difference order"),
    );
    o.check(Check::at_most(
        Criterion::FokkerPlanckConsistency,
        "osmotic_and_split_residual",
        spatial,
        1e-8,
    ));

    let s = packet_samples(b, 1e-3)?;
    let cfp = complex_fp_residual(&s.rho, &s.v, b, Scheme::Spectral)?;
    let worst = cfp
        .iter()
        .map(|r| r.forward.l_inf.max(r.conjugate.l_inf))
        .fold(0.0, f64::max);
    out.table(
        "complex_fp.csv",
        &["t", "forward", "conjugate", "real_part", "imag_part"],
        &cfp.iter()
            .map(|r| {
                vec![
                    r.t,
                    r.forward.l_inf,
                    r.conjugate.l_inf,
                    r.real_part.l_inf,
                    r.imag_part.l_inf,
                ]
            })
            .collect::<Vec<_>>(),
    )?;
    o.check(Check::at_most(
        Criterion::FokkerPlanckConsistency,
        "complex_fp_residual",
        worst,
        1e-3,
    ));
    o.diagnostic("ou_steps", n);
    o.diagnostic("ou_dt", dt);
    Ok(o)
}
