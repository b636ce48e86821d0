use std::f64::consts::PI;

use num_complex::Complex64;
use num_rational::Ratio;
use proptest::prelude::*;

use burgers_born::burgers::{cole_hopf_forward, cole_hopf_inverse, ColeHopfMap, ColeHopfVariant};
use burgers_born::experiments::{ExperimentConfig, ExperimentKind};
use burgers_born::fokker_planck::{fp_stable_dt, step_forward_fp, DensityState};
use burgers_born::ga::Multivector;
use burgers_born::numerics::{derivative, integrate, laplacian, GridSpec, ScalarField, Scheme};
use burgers_born::schrodinger::{evolve, norm, Equation, Method, SchrodingerProblem};
use burgers_born::stochastic::{simulate, simulate_range, DiffusionModel, InitialCondition};

type Q = Ratio<i64>;

fn rational() -> impl Strategy<Value = Q> {
    (-20i64..=20, 1i64..=8).prop_map(|(n, d)| Q::new(n, d))
}

fn multivector() -> impl Strategy<Value = Multivector<Q>> {
    proptest::array::uniform8(rational()).prop_map(|c| Multivector { c })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn geometric_product_is_associative(a in multivector(), b in multivector(), c in multivector()) {
        prop_assert_eq!(a.gp(&b).gp(&c), a.gp(&b.gp(&c)));
    }

    #[test]
    fn reverse_reverses_products(a in multivector(), b in multivector()) {
        prop_assert_eq!(a.gp(&b).reverse(), b.reverse().gp(&a.reverse()));
    }

    #[test]
    fn vector_squares_to_its_norm(v in proptest::array::uniform3(rational())) {
        let u = Multivector::vector(v);
        let sq = v[0] * v[0] + v[1] * v[1] + v[2] * v[2];
        prop_assert_eq!(u.gp(&u), Multivector::scalar(sq));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn spectral_derivative_is_exact_on_trig_polynomials(
        k in 1i32..6,
        amp in -2.0f64..2.0,
        phase in 0.0f64..(2.0 * PI),
    ) {
        let g = GridSpec::line(2.0 * PI, 32, 0.01, 1.0).unwrap();
        let kf = k as f64;
        let f = ScalarField::from_real_fn(&g, |p| amp * (kf * p[0] + phase).sin()).unwrap();
        let d = derivative(&f, 0, Scheme::Spectral).unwrap();
        for (i, z) in d.values().iter().enumerate() {
            let x = g.position(i)[0];
            prop_assert!((z.re - amp * kf * (kf * x + phase).cos()).abs() < 1e-11);
        }
        // The Laplacian of a periodic field integrates to zero.
        prop_assert!(integrate(&laplacian(&f, Scheme::Central2).unwrap()).norm() < 1e-10);
    }

    #[test]
    fn fokker_planck_step_keeps_mass_and_sign(
        centre in 2.0f64..10.0,
        spread in 0.3f64..2.0,
        pull in 0.1f64..2.0,
        b in 0.5f64..1.5,
    ) {
        let g = GridSpec::line(12.0, 96, 1e-3, 1.0).unwrap();
        let raw = ScalarField::from_real_fn(&g, |p| (-(p[0] - centre).powi(2) / (2.0 * spread * spread)).exp()).unwrap();
        let rho = raw.scale(Complex64::new(1.0 / integrate(&raw).re, 0.0)).unwrap();
        let a = ScalarField::from_real_fn(&g, |p| -pull * (p[0] - 6.0)).unwrap();
        let dt = 0.9 * fp_stable_dt(g.dx(), a.max_abs(), b);
        let mut s = DensityState::new(rho, 0.0).unwrap();
        for _ in 0..20 {
            s = step_forward_fp(&s, &a, b, dt).unwrap();
        }
        prop_assert!((s.mass() - 1.0).abs() < 1e-12);
        prop_assert!(s.rho().re().iter().all(|&r| r >= 0.0));
    }

    #[test]
    fn split_step_preserves_norm(
        x0 in 6.0f64..14.0,
        k0 in -3.0f64..3.0,
        width in 0.7f64..2.0,
        b in 0.5f64..1.5,
    ) {
        let g = GridSpec::line(20.0, 128, 1e-2, 0.5).unwrap();
        let psi = ScalarField::from_fn(&g, |p| {
            let y = p[0] - x0;
            Complex64::from_polar((-y * y / (4.0 * width * width)).exp(), k0 * y)
        })
        .unwrap();
        let psi = psi.scale(Complex64::new(1.0 / norm(&psi).sqrt(), 0.0)).unwrap();
        let p = SchrodingerProblem::free(b, psi, 1e-2, 0.5).unwrap();
        let series = evolve(&p, Method::SplitStep, Equation::Forward, 10).unwrap();
        for f in series.fields() {
            prop_assert!((norm(f) - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn cole_hopf_round_trips_positive_fields(
        a1 in -0.5f64..0.5,
        a2 in -0.5f64..0.5,
        ph in 0.0f64..(2.0 * PI),
        b in 0.5f64..2.0,
    ) {
        let g = GridSpec::line(2.0 * PI, 64, 0.01, 1.0).unwrap();
        let f = ScalarField::from_real_fn(&g, |p| (a1 * p[0].cos() + a2 * (2.0 * p[0] + ph).sin()).exp()).unwrap();
        let map = ColeHopfMap::new(b, ColeHopfVariant::ComplexForward).unwrap();
        let v = cole_hopf_forward(&f, &map, Scheme::Spectral).unwrap();
        let back = cole_hopf_inverse(&v, map.lambda()).unwrap().velocity(map.lambda(), Scheme::Spectral).unwrap();
        prop_assert!(back.residual_norm(&v).unwrap().l_inf < 1e-9);
    }

    #[test]
    fn chunked_paths_equal_one_batch(seed in any::<u64>(), split in 1u64..15) {
        let m = DiffusionModel::forward(|x, _| -x, 1.0, InitialCondition::Normal { mean: 0.0, std: 0.7 }, 0.1).unwrap();
        let whole = simulate(&m, 16, 20, seed).unwrap();
        let head = simulate_range(&m, 0..split, 20, seed).unwrap();
        let tail = simulate_range(&m, split..16, 20, seed).unwrap();
        for i in 0..16usize {
            let part = if (i as u64) < split { head.path(i) } else { tail.path(i - split as usize) };
            prop_assert_eq!(whole.path(i), part);
        }
    }

    #[test]
    fn config_resolution_is_idempotent(kind in 0usize..10, seed in any::<u64>()) {
        let mut c = ExperimentConfig::new(ExperimentKind::ALL[kind]);
        c.seed = Some(seed);
        let r = c.resolved().unwrap();
        prop_assert_eq!(r.resolved().unwrap(), r.clone());
        let text = serde_json::to_string(&r).unwrap();
        prop_assert_eq!(ExperimentConfig::from_json(&text).unwrap(), r);
    }
}
