use std::f64::consts::PI;

use num_complex::Complex64;
use rand::Rng;

use super::{Check, Criterion, ExperimentConfig, Outcome, Output};
use crate::burgers::{
    cole_hopf_forward, cole_hopf_inverse, geodesic_residual, linearization_residual,
    real_cole_hopf_check, solve_burgers_direct, solve_burgers_via_colehopf,
    solve_linearization_condition, BurgersProblem, BurgersSolution, ColeHopfMap, ColeHopfVariant,
    GeodesicSign, SolveOptions, TimeDirection,
};
use crate::error::Result;
use crate::ga::MultivectorField;
use crate::numerics::{GridSpec, ScalarField, Scheme};
use crate::reference::{traveling_front, HeatModes};
use crate::series::FieldSeries;
use crate::stochastic::rng::path_rng;

const TWO_PI: f64 = 2.0 * PI;

/// Largest deviation between a solution and an exact profile over all samples.
fn worst_against(
    sol: &BurgersSolution,
    exact: impl Fn(f64, &GridSpec) -> Result<ScalarField>,
) -> Result<Vec<(f64, f64)>> {
    sol.series
        .iter()
        .map(|(t, v)| {
            let e = MultivectorField::from_vector_components(&[exact(t, v.grid())?])?;
            Ok((t, v.residual_norm(&e)?.l_inf))
        })
        .collect()
}

fn max_of(v: &[(f64, f64)]) -> f64 {
    v.iter().map(|x| x.1).fold(0.0, f64::max)
}

/// Real-viscosity Burgers: traveling front, heat route, final-value data and
/// the real transform chain.
pub(crate) fn one_dimensional(cfg: &ExperimentConfig, out: &mut Output) -> Result<Outcome> {
    let b = cfg.get(&cfg.b);
    let nu = cfg.get(&cfg.viscosity);
    let length = cfg.get(&cfg.length);
    let t_final = cfg.get(&cfg.t_final);
    let dt = cfg.get(&cfg.dt);
    let scheme = cfg.get(&cfg.scheme);
    let n_steps = (t_final / dt).round() as usize;
    let mut o = Outcome::new();

    // Front c [1 - tanh(c (x - x0 - c t) / (2 nu))], compared where it lives:
    // the jump at the periodic seam opens a rarefaction that never reaches
    // the window |x - front| <= 4 over the default horizon.
    let speed = 1.0;
    let x0 = 0.5 * length;
    let grid = GridSpec::line(length, cfg.get(&cfg.points), dt, t_final)?;
    let a0 = ScalarField::from_real_fn(&grid, |p| traveling_front(p[0], 0.0, speed, nu, x0))?;
    let problem = BurgersProblem::scalar(
        Complex64::new(nu, 0.0),
        a0,
        TimeDirection::InitialValue,
        t_final,
    )?;
    let sol = solve_burgers_direct(
        &problem,
        &SolveOptions::new(n_steps)
            .with_scheme(scheme)
            .with_records(20),
    )?;
    let window = 4.0;
    let mut front_rows = Vec::new();
    let mut front_err: f64 = 0.0;
    for (t, v) in sol.series.iter() {
        let centre = x0 + speed * t;
        let mut err: f64 = 0.0;
        for (i, m) in v.values().iter().enumerate() {
            let x = grid.position(i)[0];
            if (x - centre).abs() <= window {
                err = err.max((m.c[1].re - traveling_front(x, t, speed, nu, x0)).abs());
            }
        }
        front_err = front_err.max(err);
        front_rows.push(vec![t, err]);
    }
    out.table("front_error.csv", &["t", "window_linf"], &front_rows)?;
    if let Some((t, v)) = sol.series.last() {
        let rows: Vec<Vec<f64>> = v
            .values()
            .iter()
            .enumerate()
            .map(|(i, m)| {
                let x = grid.position(i)[0];
                vec![x, m.c[1].re, traveling_front(x, t, speed, nu, x0)]
            })
            .collect();
        out.table("front_final.csv", &["x", "numeric", "exact"], &rows)?;
    }
    o.check(
        Check::at_most(
            Criterion::ColeHopfEquivalence,
            "traveling_front_linf",
            front_err,
            1e-2,
        )
        .with_note("window of 4 length units around the front"),
    );

    // Heat route on a boosted periodic heat solution.
    let modes = HeatModes {
        nu,
        a0: 2.0,
        modes: vec![(0.8, 1.0, 0.0), (0.3, 2.0, 0.5)],
    };
    let boost = 0.5;
    let hgrid = GridSpec::line(TWO_PI, 128, 1e-3, 1.0)?;
    let a0 = ScalarField::from_real_fn(&hgrid, |p| modes.burgers(p[0], 0.0, boost))?;
    let hp = BurgersProblem::scalar(
        Complex64::new(nu, 0.0),
        a0,
        TimeDirection::InitialValue,
        1.0,
    )?;
    let opts = SolveOptions::new(1000).with_records(10);
    let exact =
        |t: f64, g: &GridSpec| ScalarField::from_real_fn(g, |q| modes.burgers(q[0], t, boost));
    let via = worst_against(&solve_burgers_via_colehopf(&hp, &opts)?, exact)?;
    let direct = worst_against(&solve_burgers_direct(&hp, &opts)?, exact)?;
    out.table(
        "heat_route.csv",
        &["t", "colehopf_linf", "direct_linf"],
        &via.iter()
            .zip(&direct)
            .map(|(a, d)| vec![a.0, a.1, d.1])
            .collect::<Vec<_>>(),
    )?;
    o.check(Check::at_most(
        Criterion::ColeHopfEquivalence,
        "heat_route_linf",
        max_of(&via),
        1e-6,
    ));
    o.check(Check::at_most(
        Criterion::ColeHopfEquivalence,
        "heat_direct_linf",
        max_of(&direct),
        1e-6,
    ));

    // Negative viscosity -b^2/2 with final-value data, and the real chain.
    let reversed = HeatModes {
        nu: 0.5 * b * b,
        a0: 2.0,
        modes: vec![(0.7, 1.0, 0.2), (0.2, 3.0, 0.0)],
    };
    let rgrid = GridSpec::line(TWO_PI, 64, 1e-3, 1.0)?;
    let a_end = ScalarField::from_real_fn(&rgrid, |p| reversed.reversed(p[0], 1.0, 1.0))?;
    let fp = BurgersProblem::scalar(
        Complex64::new(-0.5 * b * b, 0.0),
        a_end,
        TimeDirection::FinalValue,
        1.0,
    )?;
    let exact_rev =
        |t: f64, g: &GridSpec| ScalarField::from_real_fn(g, |q| reversed.reversed(q[0], t, 1.0));
    let fv_direct = max_of(&worst_against(
        &solve_burgers_direct(&fp, &opts)?,
        exact_rev,
    )?);
    let fv_via = max_of(&worst_against(
        &solve_burgers_via_colehopf(&fp, &opts)?,
        exact_rev,
    )?);
    o.check(Check::at_most(
        Criterion::ColeHopfEquivalence,
        "final_value_direct_linf",
        fv_direct,
        1e-6,
    ));
    o.check(Check::at_most(
        Criterion::ColeHopfEquivalence,
        "final_value_colehopf_linf",
        fv_via,
        1e-6,
    ));

    let times: Vec<f64> = (0..5).map(|k| 0.2 + k as f64 * 1e-3).collect();
    let fields = times
        .iter()
        .map(|&t| ScalarField::from_real_fn(&rgrid, |p| reversed.reversed(p[0], t, 1.0)))
        .collect::<Result<Vec<_>>>()?;
    let series = FieldSeries::from_parts(times, fields)?;
    let report = real_cole_hopf_check(&series, b, Scheme::Spectral)?;
    let geodesic = geodesic_residual(&series, b, GeodesicSign::Forward, Scheme::Spectral)?;
    out.table(
        "real_chain.csv",
        &[
            "t",
            "burgers_linf",
            "heat_linf",
            "transformed_linf",
            "identity_linf",
        ],
        &report
            .samples
            .iter()
            .map(|s| {
                vec![
                    s.t,
                    s.burgers.l_inf,
                    s.heat.l_inf,
                    s.transformed.l_inf,
                    s.identity.l_inf,
                ]
            })
            .collect::<Vec<_>>(),
    )?;
    o.check(Check::at_most(
        Criterion::ColeHopfEquivalence,
        "real_chain_burgers_linf",
        report.worst_burgers.l_inf,
        1e-6,
    ));
    o.check(Check::at_most(
        Criterion::ColeHopfEquivalence,
        "real_chain_heat_linf",
        report.worst_heat.l_inf,
        1e-6,
    ));
    o.check(Check::at_most(
        Criterion::ColeHopfEquivalence,
        "real_chain_identity_linf",
        report.worst_identity.l_inf,
        1e-6,
    ));
    o.diagnostic("real_chain_nonpositive_nodes", report.nonpositive_nodes);
    o.diagnostic(
        "geodesic_residual_linf",
        geodesic.iter().map(|(_, n)| n.l_inf).fold(0.0, f64::max),
    );
    Ok(o)
}

/// Smooth positive random field `exp(sum_m A_m cos(k_m . x + phase_m))` on the `2 pi` cube.
fn random_positive_field(grid: &GridSpec, rng: &mut impl Rng) -> Result<ScalarField> {
    let modes: Vec<(f64, [f64; 3], f64)> = (0..4)
        .map(|_| {
            let amp = rng.random_range(-0.25..0.25);
            let k = [
                rng.random_range(-1..=1) as f64,
                rng.random_range(-1..=1) as f64,
                rng.random_range(-1..=1) as f64,
            ];
            (amp, k, rng.random_range(0.0..TWO_PI))
        })
        .collect();
    ScalarField::from_real_fn(grid, |p| {
        modes
            .iter()
            .map(|(a, k, ph)| a * (k[0] * p[0] + k[1] * p[1] + k[2] * p[2] + ph).cos())
            .sum::<f64>()
            .exp()
    })
}

/// Vector Cole–Hopf in 3-D.
pub(crate) fn three_dimensional(cfg: &ExperimentConfig, out: &mut Output) -> Result<Outcome> {
    let b = cfg.get(&cfg.b);
    let n = cfg.get(&cfg.points);
    let count = cfg.get(&cfg.samples);
    let grid = GridSpec::cube(TWO_PI, n, 1e-3, 1.0)?;
    let map = ColeHopfMap::new(b, ColeHopfVariant::ComplexForward)?;
    let mut o = Outcome::new();

    let mut rows = Vec::with_capacity(count);
    let mut worst: f64 = 0.0;
    let mut worst_round_trip: f64 = 0.0;
    for i in 0..count {
        let mut rng = path_rng(cfg.seed(), i as u64);
        let f = random_positive_field(&grid, &mut rng)?;
        let r = linearization_residual(&f, &map, Scheme::Spectral)?;
        let v = cole_hopf_forward(&f, &map, Scheme::Spectral)?;
        let back = cole_hopf_inverse(&v, map.lambda())?.velocity(map.lambda(), Scheme::Spectral)?;
        let trip = back.residual_norm(&v)?.l_inf;
        worst = worst.max(r.l_inf);
        worst_round_trip = worst_round_trip.max(trip);
        rows.push(vec![i as f64, r.l_inf, r.l2, trip]);
    }
    out.table(
        "linearization.csv",
        &["field", "residual_linf", "residual_l2", "round_trip_linf"],
        &rows,
    )?;
    o.check(
        Check::at_most(
            Criterion::LinearizationCancellation,
            "linearization_residual_linf",
            worst,
            1e-10,
        )
        .with_note(format!("{count} random smooth positive fields, spectral")),
    );

    let mut root_err: f64 = 0.0;
    let mut root_rows = Vec::new();
    for bb in [b, 0.5, 2.0] {
        let fwd = solve_linearization_condition(bb, ColeHopfVariant::ComplexForward)?;
        let conj = solve_linearization_condition(bb, ColeHopfVariant::ComplexConjugate)?;
        let b2 = bb * bb;
        root_err = root_err
            .max((fwd - Complex64::new(0.0, -b2)).norm())
            .max((conj - Complex64::new(0.0, b2)).norm());
        root_rows.push(vec![bb, fwd.re, fwd.im, conj.re, conj.im]);
    }
    out.table(
        "lambda_roots.csv",
        &[
            "b",
            "forward_re",
            "forward_im",
            "conjugate_re",
            "conjugate_im",
        ],
        &root_rows,
    )?;
    o.check(Check::at_most(
        Criterion::LinearizationCancellation,
        "lambda_root_error",
        root_err,
        0.0,
    ));

    // Separable flow: each component is an independent 1-D solution.
    let nu = map.viscosity();
    let t_end = 0.2;
    let line = GridSpec::line(TWO_PI, n, 1e-3, t_end)?;
    let comps: Vec<ScalarField> = (0..3)
        .map(|j| ScalarField::from_real_fn(&grid, |p| (p[j] + 0.3 * j as f64).cos()))
        .collect::<Result<_>>()?;
    let p3 = BurgersProblem::new(
        nu,
        MultivectorField::from_vector_components(&comps)?,
        TimeDirection::InitialValue,
        None,
        t_end,
    )?;
    let opts = SolveOptions::new(200).with_records(1);
    let s3 = solve_burgers_via_colehopf(&p3, &opts)?;
    let mut sep: f64 = 0.0;
    for j in 0..3 {
        let a1 = ScalarField::from_real_fn(&line, |p| (p[0] + 0.3 * j as f64).cos())?;
        let s1 = solve_burgers_via_colehopf(
            &BurgersProblem::scalar(nu, a1, TimeDirection::InitialValue, t_end)?,
            &opts,
        )?;
        if let (Some((_, v3)), Some((_, v1))) = (s3.series.last(), s1.series.last()) {
            for (i, m) in v3.values().iter().enumerate() {
                let idx = grid.unravel(i);
                sep = sep.max((m.c[j + 1] - v1.values()[idx[j]].c[1]).norm());
            }
        }
    }
    o.check(Check::at_most(
        Criterion::ColeHopfEquivalence,
        "separable_3d_vs_1d_linf",
        sep,
        1e-10,
    ));
    o.diagnostic("round_trip_linf", worst_round_trip);
    Ok(o)
}

/// Complex viscosity `i b^2 / 2`: direct solver against the Schrödinger route.
pub(crate) fn direct_vs_colehopf(cfg: &ExperimentConfig, out: &mut Output) -> Result<Outcome> {
    let b = cfg.get(&cfg.b);
    let dt = cfg.get(&cfg.dt);
    let t_final = cfg.get(&cfg.t_final);
    let grid = GridSpec::line(TWO_PI, cfg.get(&cfg.points), dt, t_final)?;
    let map = ColeHopfMap::new(b, ColeHopfVariant::ComplexForward)?;
    let amp = 0.3;
    let f0 = ScalarField::from_real_fn(&grid, |p| 1.0 + amp * p[0].cos())?;
    let v0 = cole_hopf_forward(&f0, &map, Scheme::Spectral)?;
    let p = BurgersProblem::new(
        map.viscosity(),
        v0,
        TimeDirection::InitialValue,
        None,
        t_final,
    )?;
    let opts = SolveOptions::new((t_final / dt).round() as usize).with_records(20);
    let via = solve_burgers_via_colehopf(&p, &opts)?;
    let direct = solve_burgers_direct(&p, &opts)?;
    let mut rows = Vec::new();
    let (mut worst, mut worst_exact): (f64, f64) = (0.0, 0.0);
    // The Cole–Hopf series stops before a node; compare on its samples only.
    for ((t, v), d) in via.series.iter().zip(direct.series.fields()) {
        // F(t) = 1 + amp e^{-i b^2 t / 2} cos x solves F_t = (i b^2/2) F_xx.
        let phase = Complex64::from_polar(amp, -0.5 * b * b * t);
        let exact = cole_hopf_forward(
            &ScalarField::from_fn(&grid, |q| 1.0 + phase * q[0].cos())?,
            &map,
            Scheme::Spectral,
        )?;
        let e_direct = d.residual_norm(v)?.l_inf;
        let e_exact = v.residual_norm(&exact)?.l_inf;
        worst = worst.max(e_direct);
        worst_exact = worst_exact.max(e_exact);
        rows.push(vec![t, e_direct, e_exact]);
    }
    out.table(
        "agreement.csv",
        &["t", "direct_vs_colehopf_linf", "colehopf_vs_exact_linf"],
        &rows,
    )?;
    if let Some((_, v)) = via.series.last() {
        out.field("velocity_final.csv", &v.vector_component(0))?;
    }
    let mut o = Outcome::new();
    o.check(
        Check::at_most(
            Criterion::ColeHopfEquivalence,
            "direct_vs_colehopf_linf",
            worst,
            1e-2,
        )
        .with_note("before node formation"),
    );
    o.check(Check::at_most(
        Criterion::ColeHopfEquivalence,
        "colehopf_vs_exact_linf",
        worst_exact,
        1e-8,
    ));
    o.diagnostic("node_time", via.node_time);
    o.diagnostic("compared_samples", rows.len());
    Ok(o)
}
