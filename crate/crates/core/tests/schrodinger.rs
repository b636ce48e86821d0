use num_complex::Complex64;

use burgers_born::numerics::{GridSpec, ScalarField, Scheme};
use burgers_born::reference::{GaussianPacket, HarmonicOscillator};
use burgers_born::schrodinger::{
    conjugate_evolution_check, energy, evolve, norm, norm_and_energy, phase_history, Equation,
    Method, SchrodingerProblem,
};
use burgers_born::Error;

fn packet_problem(n: usize, dt: f64, t: f64) -> (GaussianPacket, SchrodingerProblem) {
    let packet = GaussianPacket {
        k0: 2.0 * std::f64::consts::PI * 3.0 / 20.0,
        ..GaussianPacket::centered(1.0, 1.0, 20.0)
    };
    let g = GridSpec::line(20.0, n, dt, t).unwrap();
    let psi0 = packet.field(&g, 0.0).unwrap();
    let psi0 = psi0
        .scale(Complex64::new(1.0 / norm(&psi0).sqrt(), 0.0))
        .unwrap();
    (packet, SchrodingerProblem::free(1.0, psi0, dt, t).unwrap())
}

#[test]
fn split_step_follows_free_packet() {
    let (packet, p) = packet_problem(256, 1e-3, 1.0);
    let s = evolve(&p, Method::SplitStep, Equation::Forward, 250).unwrap();
    assert_eq!(s.len(), 5);
    for (t, psi) in s.iter() {
        let exact = packet.field(p.grid(), t).unwrap();
        let err = psi
            .values()
            .iter()
            .zip(exact.values())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max);
        assert!(err < 1e-8, "t = {t}, err = {err}");
    }
}

#[test]
fn crank_nicolson_is_second_order() {
    let mut errs = Vec::new();
    for n in [256, 512] {
        let (packet, p) = packet_problem(n, 1e-3, 0.5);
        let s = evolve(&p, Method::CrankNicolson, Equation::Forward, 500).unwrap();
        let (t, psi) = s.last().unwrap();
        let exact = packet.field(p.grid(), t).unwrap();
        errs.push(
            psi.values()
                .iter()
                .zip(exact.values())
                .map(|(a, b)| (a - b).norm())
                .fold(0.0, f64::max),
        );
    }
    let ratio = errs[0] / errs[1];
    assert!(errs[0] < 1e-2 && ratio > 3.0, "{errs:?}");
}

#[test]
fn norm_and_energy_are_conserved() {
    let osc = HarmonicOscillator {
        b: 1.0,
        stiffness: 1.0,
        center: 10.0,
    };
    let g = GridSpec::line(20.0, 256, 1e-2, 5.0).unwrap();
    let psi0 = ScalarField::from_fn(&g, |p| {
        osc.superposition(
            Complex64::new(0.8, 0.0),
            Complex64::new(0.6, 0.0),
            p[0],
            0.0,
        )
    })
    .unwrap();
    let psi0 = psi0
        .scale(Complex64::new(1.0 / norm(&psi0).sqrt(), 0.0))
        .unwrap();
    let u = osc.potential_field(&g).unwrap();
    let p = SchrodingerProblem::new(1.0, u.clone(), psi0, 1e-2, 5.0).unwrap();
    for method in [Method::SplitStep, Method::CrankNicolson] {
        let s = evolve(&p, method, Equation::Forward, 50).unwrap();
        let ne = norm_and_energy(&s, 1.0, &u, Scheme::Spectral).unwrap();
        let e0 = ne[0].1;
        let expected = 0.64 * osc.energy(0) + 0.36 * osc.energy(1);
        assert!((e0 - expected).abs() < 1e-8, "{e0} vs {expected}");
        for (n, e) in ne {
            assert!((n - 1.0).abs() < 1e-10);
            assert!((e - e0).abs() < 1e-3, "{method:?}: {e} vs {e0}");
        }
    }
}

#[test]
fn ground_state_rotates_at_its_frequency() {
    let osc = HarmonicOscillator {
        b: 0.8,
        stiffness: 2.0,
        center: 6.0,
    };
    let g = GridSpec::line(12.0, 128, 1e-3, 1.0).unwrap();
    let psi0 = ScalarField::from_real_fn(&g, |p| osc.ground(p[0])).unwrap();
    let psi0 = psi0
        .scale(Complex64::new(1.0 / norm(&psi0).sqrt(), 0.0))
        .unwrap();
    let u = osc.potential_field(&g).unwrap();
    let p = SchrodingerProblem::new(osc.b, u, psi0, 1e-3, 1.0).unwrap();
    let s = evolve(&p, Method::SplitStep, Equation::Forward, 100).unwrap();
    let phases = phase_history(&s, 64);
    for (t, ph) in s.times().iter().zip(phases) {
        assert!((ph + osc.omega(0) * t).abs() < 1e-6, "t = {t}");
    }
}

#[test]
fn conjugate_equation_evolves_the_conjugate() {
    let (_, p) = packet_problem(128, 1e-2, 0.5);
    let f = evolve(&p, Method::SplitStep, Equation::Forward, 10).unwrap();
    let g = evolve(&p, Method::SplitStep, Equation::Conjugate, 10).unwrap();
    for n in conjugate_evolution_check(&f, &g).unwrap() {
        assert!(n.l_inf < 1e-12, "{n:?}");
    }
}

#[test]
fn global_phase_is_irrelevant() {
    let (_, p) = packet_problem(128, 1e-2, 0.3);
    let q = p.with_phase(1.3).unwrap();
    let a = evolve(&p, Method::SplitStep, Equation::Forward, 30).unwrap();
    let b = evolve(&q, Method::SplitStep, Equation::Forward, 30).unwrap();
    let (_, fa) = a.last().unwrap();
    let (_, fb) = b.last().unwrap();
    for (x, y) in fa.values().iter().zip(fb.values()) {
        assert!((x.norm_sqr() - y.norm_sqr()).abs() < 1e-13);
    }
}

#[test]
fn invalid_problems_are_rejected() {
    let g = GridSpec::line(1.0, 16, 1e-3, 1.0).unwrap();
    let psi = ScalarField::constant(&g, Complex64::new(2.0, 0.0)).unwrap();
    assert!(matches!(
        SchrodingerProblem::free(1.0, psi, 1e-3, 1.0),
        Err(Error::InvalidParameter(_))
    ));
    let psi = ScalarField::constant(&g, Complex64::new(1.0, 0.0)).unwrap();
    assert!(SchrodingerProblem::free(0.0, psi.clone(), 1e-3, 1.0).is_err());
    let complex_u = ScalarField::constant(&g, Complex64::new(0.0, 1.0)).unwrap();
    assert!(SchrodingerProblem::new(1.0, complex_u, psi.clone(), 1e-3, 1.0).is_err());
    let ok = SchrodingerProblem::free(1.0, psi, 1e-3, 1.0).unwrap();
    assert!((energy(ok.psi0(), 1.0, ok.potential(), Scheme::Spectral).unwrap()).abs() < 1e-14);
}
