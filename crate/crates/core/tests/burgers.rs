use num_complex::Complex64;

use burgers_born::burgers::{
    cole_hopf_forward, cole_hopf_inverse, geodesic_residual, linearization_residual,
    real_cole_hopf_check, solve_burgers_direct, solve_burgers_via_colehopf,
    solve_linearization_condition, BurgersProblem, ColeHopfMap, ColeHopfVariant, GeodesicSign,
    SolveOptions, TimeDirection,
};
use burgers_born::ga::MultivectorField;
use burgers_born::numerics::{GridSpec, ScalarField, Scheme};
use burgers_born::reference::{traveling_front, HeatModes};
use burgers_born::series::FieldSeries;
use burgers_born::Error;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

#[test]
fn linearization_roots() {
    assert_eq!(
        solve_linearization_condition(1.0, ColeHopfVariant::ComplexForward).unwrap(),
        c(0.0, -1.0)
    );
    assert_eq!(
        solve_linearization_condition(1.0, ColeHopfVariant::ComplexConjugate).unwrap(),
        c(0.0, 1.0)
    );
    assert_eq!(
        solve_linearization_condition(2.0, ColeHopfVariant::ComplexForward).unwrap(),
        c(0.0, -4.0)
    );
    assert_eq!(
        solve_linearization_condition(1.5, ColeHopfVariant::RealHeat).unwrap(),
        c(-2.25, 0.0)
    );
    assert!(matches!(
        solve_linearization_condition(0.0, ColeHopfVariant::ComplexForward),
        Err(Error::Degenerate(_))
    ));
    for b in [0.5, 1.0, 3.0] {
        for v in [
            ColeHopfVariant::ComplexForward,
            ColeHopfVariant::ComplexConjugate,
            ColeHopfVariant::RealHeat,
        ] {
            let l = solve_linearization_condition(b, v).unwrap();
            let mu = 2.0 * v.viscosity(b);
            assert_eq!(l * l + mu * l, c(0.0, 0.0));
        }
    }
}

#[test]
fn forward_transform_examples() {
    let g = GridSpec::line(2.0 * std::f64::consts::PI, 64, 0.01, 1.0).unwrap();
    let map = ColeHopfMap::new(1.0, ColeHopfVariant::ComplexForward).unwrap();
    let plane = ScalarField::from_fn(&g, |p| Complex64::from_polar(1.0, 3.0 * p[0])).unwrap();
    let v = cole_hopf_forward(&plane, &map, Scheme::Spectral).unwrap();
    for m in v.values() {
        assert!((m.c[1] - c(3.0, 0.0)).norm() < 1e-11);
    }
    let constant = ScalarField::constant(&g, c(2.0, 1.0)).unwrap();
    assert_eq!(
        cole_hopf_forward(&constant, &map, Scheme::Spectral)
            .unwrap()
            .max_abs(),
        0.0
    );

    let lg = GridSpec::line(20.0, 256, 0.01, 1.0).unwrap();
    let s = 1.5;
    let gauss =
        ScalarField::from_real_fn(&lg, |p| (-(p[0] - 10.0).powi(2) / (2.0 * s * s)).exp()).unwrap();
    let v = cole_hopf_forward(&gauss, &map, Scheme::Spectral).unwrap();
    for (i, m) in v.values().iter().enumerate() {
        let x = lg.position(i)[0];
        if (x - 10.0).abs() < 4.0 {
            assert!(
                (m.c[1] - c(0.0, (x - 10.0) / (s * s))).norm() < 1e-8,
                "x = {x}"
            );
        }
    }
}

#[test]
fn near_zero_field_lists_nodes() {
    let g = GridSpec::line(1.0, 16, 0.01, 1.0).unwrap();
    let map = ColeHopfMap::new(1.0, ColeHopfVariant::ComplexForward).unwrap();
    let f = ScalarField::from_real_fn(&g, |p| if p[0] == 0.5 { 0.0 } else { 1.0 }).unwrap();
    match cole_hopf_forward(&f, &map, Scheme::Spectral) {
        Err(Error::NearZero { nodes }) => assert_eq!(nodes, vec![8]),
        other => panic!("unexpected {other:?}"),
    }
}

#[test]
fn exponential_reconstruction_round_trips() {
    let g = GridSpec::cube(2.0 * std::f64::consts::PI, 32, 0.01, 1.0).unwrap();
    let lambda = c(0.0, -1.0);
    let phi = ScalarField::from_fn(&g, |p| {
        c(
            p[0].sin() * p[1].cos() + 0.3 * p[2].sin(),
            0.2 * (p[0] + p[2]).cos(),
        )
    })
    .unwrap();
    let mut comps = burgers_born::numerics::gradient_components(&phi, Scheme::Spectral).unwrap();
    comps[1] = comps[1].map(|z| z + c(0.4, -0.1)).unwrap();
    let v = MultivectorField::from_vector_components(&comps).unwrap();
    let f = cole_hopf_inverse(&v, lambda).unwrap();
    assert!((f.values()[0] - c(1.0, 0.0)).norm() < 1e-14);
    let back = f.velocity(lambda, Scheme::Spectral).unwrap();
    let r = back.residual_norm(&v).unwrap().l_inf;
    assert!(r < 1e-10, "{r}");
}

#[test]
fn linearization_identity_cancels() {
    let g = GridSpec::cube(2.0 * std::f64::consts::PI, 16, 0.01, 1.0).unwrap();
    let f = ScalarField::from_real_fn(&g, |p| (0.5 * p[0].sin() + 0.3 * (p[1] + p[2]).cos()).exp())
        .unwrap();
    for b in [1.0, 0.7] {
        let map = ColeHopfMap::new(b, ColeHopfVariant::ComplexForward).unwrap();
        assert!(
            linearization_residual(&f, &map, Scheme::Spectral)
                .unwrap()
                .l_inf
                <= 1e-10
        );
    }
}

fn front_problem(n: usize) -> (GridSpec, BurgersProblem) {
    let (len, nu, cs) = (20.0, 0.25, 1.0);
    let g = GridSpec::line(len, n, 1e-3, 2.0).unwrap();
    let a0 =
        ScalarField::from_real_fn(&g, |p| traveling_front(p[0], 0.0, cs, nu, 0.5 * len)).unwrap();
    let p = BurgersProblem::scalar(c(nu, 0.0), a0, TimeDirection::InitialValue, 2.0).unwrap();
    (g, p)
}

#[test]
fn traveling_front_matches_analytic_solution() {
    let (g, p) = front_problem(512);
    let sol = solve_burgers_direct(
        &p,
        &SolveOptions::new(2000)
            .with_scheme(Scheme::Central2)
            .with_records(4),
    )
    .unwrap();
    let (t, a) = sol.series.last().unwrap();
    assert!((t - 2.0).abs() < 1e-12);
    let front = 10.0 + t;
    let mut err: f64 = 0.0;
    for (i, v) in a.values().iter().enumerate() {
        let x = g.position(i)[0];
        if (x - front).abs() <= 4.0 {
            err = err.max((v.c[1].re - traveling_front(x, t, 1.0, 0.25, 10.0)).abs());
        }
    }
    assert!(err <= 1e-2, "front error {err}");
}

#[test]
fn constant_data_stays_constant() {
    let g = GridSpec::line(1.0, 32, 1e-3, 0.1).unwrap();
    for nu in [c(0.1, 0.0), c(0.0, 0.1)] {
        let a0 = ScalarField::constant(&g, c(0.7, 0.0)).unwrap();
        let p = BurgersProblem::scalar(nu, a0, TimeDirection::InitialValue, 0.1).unwrap();
        let sol = solve_burgers_direct(&p, &SolveOptions::new(100)).unwrap();
        for f in sol.series.fields() {
            for m in f.values() {
                assert!((m.c[1] - c(0.7, 0.0)).norm() < 1e-12);
            }
        }
    }
}

#[test]
fn ill_posed_direction_is_refused() {
    let g = GridSpec::line(1.0, 32, 1e-3, 0.1).unwrap();
    let a0 = ScalarField::zeros(&g);
    assert!(matches!(
        BurgersProblem::scalar(c(-0.5, 0.0), a0.clone(), TimeDirection::InitialValue, 1.0),
        Err(Error::IllPosedDirection(_))
    ));
    assert!(matches!(
        BurgersProblem::scalar(c(0.5, 0.0), a0, TimeDirection::FinalValue, 1.0),
        Err(Error::IllPosedDirection(_))
    ));
}

#[test]
fn unstable_step_is_refused() {
    let g = GridSpec::line(1.0, 64, 1e-3, 0.1).unwrap();
    let a0 = ScalarField::from_real_fn(&g, |p| (2.0 * std::f64::consts::PI * p[0]).sin()).unwrap();
    let p = BurgersProblem::scalar(c(0.5, 0.0), a0, TimeDirection::InitialValue, 1.0).unwrap();
    assert!(matches!(
        solve_burgers_direct(&p, &SolveOptions::new(10)),
        Err(Error::Stability { .. })
    ));
}

#[test]
fn complex_viscosity_direct_matches_schrodinger_route() {
    let len = 2.0 * std::f64::consts::PI;
    let g = GridSpec::line(len, 512, 1e-4, 1.0).unwrap();
    let b = 1.0;
    let map = ColeHopfMap::new(b, ColeHopfVariant::ComplexForward).unwrap();
    let f0 = ScalarField::from_real_fn(&g, |p| 1.0 + 0.3 * p[0].cos()).unwrap();
    let v0 = cole_hopf_forward(&f0, &map, Scheme::Spectral).unwrap();
    let p =
        BurgersProblem::new(map.viscosity(), v0, TimeDirection::InitialValue, None, 1.0).unwrap();
    let opts = SolveOptions::new(10_000).with_records(10);
    let direct = solve_burgers_direct(&p, &opts).unwrap();
    let via = solve_burgers_via_colehopf(&p, &opts).unwrap();
    assert!(via.node_time.is_none());
    assert_eq!(direct.series.times(), via.series.times());
    let mut worst: f64 = 0.0;
    for ((t, d), v) in direct.series.iter().zip(via.series.fields()) {
        // exact: F(t) = 1 + 0.3 e^{-i t/2} cos x
        let exact = ScalarField::from_fn(&g, |q| {
            1.0 + 0.3 * Complex64::from_polar(1.0, -0.5 * t) * q[0].cos()
        })
        .unwrap();
        let ve = cole_hopf_forward(&exact, &map, Scheme::Spectral).unwrap();
        worst = worst.max(d.residual_norm(v).unwrap().l_inf);
        assert!(v.residual_norm(&ve).unwrap().l_inf < 1e-9);
    }
    assert!(worst <= 1e-2, "direct vs Cole–Hopf {worst}");
}

#[test]
fn heat_route_matches_direct_solver_on_boosted_modes() {
    let len = 2.0 * std::f64::consts::PI;
    let nu = 0.25;
    let modes = HeatModes {
        nu,
        a0: 2.0,
        modes: vec![(0.8, 1.0, 0.0), (0.3, 2.0, 0.5)],
    };
    let g = GridSpec::line(len, 128, 1e-3, 1.0).unwrap();
    let a0 = ScalarField::from_real_fn(&g, |p| modes.burgers(p[0], 0.0, 0.5)).unwrap();
    let p = BurgersProblem::scalar(c(nu, 0.0), a0, TimeDirection::InitialValue, 1.0).unwrap();
    let opts = SolveOptions::new(1000).with_records(5);
    let direct = solve_burgers_direct(&p, &opts).unwrap();
    let via = solve_burgers_via_colehopf(&p, &opts).unwrap();
    for ((t, d), v) in direct.series.iter().zip(via.series.fields()) {
        let exact = ScalarField::from_real_fn(&g, |q| modes.burgers(q[0], t, 0.5)).unwrap();
        let e = MultivectorField::from_vector_components(&[exact]).unwrap();
        assert!(v.residual_norm(&e).unwrap().l_inf < 1e-9, "t = {t}");
        assert!(d.residual_norm(&e).unwrap().l_inf < 1e-6, "t = {t}");
    }
}

#[test]
fn zero_velocity_stays_zero_via_colehopf() {
    let g = GridSpec::line(1.0, 32, 1e-3, 0.1).unwrap();
    let p = BurgersProblem::scalar(
        c(0.0, 0.5),
        ScalarField::zeros(&g),
        TimeDirection::InitialValue,
        0.1,
    )
    .unwrap();
    let sol = solve_burgers_via_colehopf(&p, &SolveOptions::new(10)).unwrap();
    for f in sol.series.fields() {
        assert!(f.max_abs() < 1e-15);
    }
}

#[test]
fn separable_3d_flow_equals_three_line_solutions() {
    let len = 2.0 * std::f64::consts::PI;
    let nu = c(0.0, 0.5);
    let g3 = GridSpec::cube(len, 16, 1e-3, 0.2).unwrap();
    let g1 = GridSpec::line(len, 16, 1e-3, 0.2).unwrap();
    let k = 2.0 * std::f64::consts::PI / len;
    let comps: Vec<ScalarField> = (0..3)
        .map(|j| ScalarField::from_real_fn(&g3, |p| k * (k * p[j]).cos()).unwrap())
        .collect();
    let v0 = MultivectorField::from_vector_components(&comps).unwrap();
    let p3 = BurgersProblem::new(nu, v0, TimeDirection::InitialValue, None, 0.2).unwrap();
    let opts = SolveOptions::new(200).with_records(2);
    let s3 = solve_burgers_via_colehopf(&p3, &opts).unwrap();
    let a1 = ScalarField::from_real_fn(&g1, |p| k * (k * p[0]).cos()).unwrap();
    let p1 = BurgersProblem::scalar(nu, a1, TimeDirection::InitialValue, 0.2).unwrap();
    let s1 = solve_burgers_via_colehopf(&p1, &opts).unwrap();
    let (_, last3) = s3.series.last().unwrap();
    let (_, last1) = s1.series.last().unwrap();
    for i in 0..g3.len() {
        let idx = g3.unravel(i);
        for (j, &k) in idx.iter().enumerate() {
            let expected = last1.values()[k].c[1];
            assert!((last3.values()[i].c[j + 1] - expected).norm() < 1e-10);
        }
    }
}

#[test]
fn rotational_data_is_rejected() {
    let g = GridSpec::cube(2.0 * std::f64::consts::PI, 8, 1e-3, 0.2).unwrap();
    let comps = vec![
        ScalarField::from_real_fn(&g, |p| p[1].sin()).unwrap(),
        ScalarField::zeros(&g),
        ScalarField::zeros(&g),
    ];
    let v = MultivectorField::from_vector_components(&comps).unwrap();
    assert!(matches!(
        BurgersProblem::new(c(0.0, 0.5), v, TimeDirection::InitialValue, None, 1.0),
        Err(Error::NotIrrotational(_))
    ));
}

fn reversed_series(b: f64, g: &GridSpec, times: &[f64], t_final: f64) -> FieldSeries {
    let modes = HeatModes {
        nu: 0.5 * b * b,
        a0: 2.0,
        modes: vec![(0.7, 1.0, 0.2), (0.2, 3.0, 0.0)],
    };
    let fields = times
        .iter()
        .map(|&t| ScalarField::from_real_fn(g, |p| modes.reversed(p[0], t, t_final)).unwrap())
        .collect();
    FieldSeries::from_parts(times.to_vec(), fields).unwrap()
}

#[test]
fn real_chain_holds_on_manufactured_solution() {
    let b = 1.0;
    let g = GridSpec::line(2.0 * std::f64::consts::PI, 64, 1e-3, 1.0).unwrap();
    let times: Vec<f64> = (0..5).map(|k| 0.2 + k as f64 * 1e-3).collect();
    let s = reversed_series(b, &g, &times, 1.0);
    let report = real_cole_hopf_check(&s, b, Scheme::Spectral).unwrap();
    assert!(report.worst_burgers.l_inf <= 1e-6, "{report:?}");
    assert!(report.worst_heat.l_inf <= 1e-6, "{report:?}");
    assert!(report.worst_identity.l_inf <= 1e-6, "{report:?}");
    let geo = geodesic_residual(&s, b, GeodesicSign::Forward, Scheme::Spectral).unwrap();
    assert!(geo.iter().all(|(_, n)| n.l_inf <= 1e-6));
}

#[test]
fn real_chain_flags_constant_drift() {
    let g = GridSpec::line(1.0, 16, 1e-3, 1.0).unwrap();
    let f = ScalarField::constant(&g, c(0.4, 0.0)).unwrap();
    let s = FieldSeries::from_parts(vec![0.0, 0.1, 0.2], vec![f.clone(), f.clone(), f]).unwrap();
    assert!(matches!(
        real_cole_hopf_check(&s, 1.0, Scheme::Spectral),
        Err(Error::Degenerate(_))
    ));
}

#[test]
fn final_value_problem_reproduces_reversed_solution() {
    let b = 1.0;
    let len = 2.0 * std::f64::consts::PI;
    let g = GridSpec::line(len, 64, 1e-3, 1.0).unwrap();
    let modes = HeatModes {
        nu: 0.5,
        a0: 2.0,
        modes: vec![(0.7, 1.0, 0.2)],
    };
    let a_t = ScalarField::from_real_fn(&g, |p| modes.reversed(p[0], 1.0, 1.0)).unwrap();
    let p =
        BurgersProblem::scalar(c(-0.5 * b * b, 0.0), a_t, TimeDirection::FinalValue, 1.0).unwrap();
    let opts = SolveOptions::new(1000).with_records(4);
    for sol in [
        solve_burgers_direct(&p, &opts).unwrap(),
        solve_burgers_via_colehopf(&p, &opts).unwrap(),
    ] {
        for (t, f) in sol.series.iter() {
            let exact = ScalarField::from_real_fn(&g, |q| modes.reversed(q[0], t, 1.0)).unwrap();
            let e = MultivectorField::from_vector_components(&[exact]).unwrap();
            assert!(f.residual_norm(&e).unwrap().l_inf < 1e-8, "t = {t}");
        }
    }
}

#[test]
fn geodesic_residual_of_linear_field_is_x() {
    let g = GridSpec::line(10.0, 100, 1e-3, 1.0).unwrap();
    let a = ScalarField::from_real_fn(&g, |p| p[0]).unwrap();
    let s = FieldSeries::from_parts(vec![0.0, 0.1, 0.2], vec![a.clone(), a.clone(), a]).unwrap();
    let r = burgers_born::burgers::burgers_residual_field(
        &s,
        1,
        GeodesicSign::Forward.viscosity(1.0),
        Scheme::Central2,
    )
    .unwrap();
    for i in 1..g.points() - 1 {
        assert!((r.values()[i].re - g.position(i)[0]).abs() < 1e-9);
    }
    assert!(geodesic_residual(
        &FieldSeries::new(),
        1.0,
        GeodesicSign::Forward,
        Scheme::Spectral
    )
    .is_err());
}
