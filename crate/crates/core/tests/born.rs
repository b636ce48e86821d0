use num_complex::Complex64;

use burgers_born::born::{
    extract_velocities, madelung_decompose, madelung_reconstruct, normalization_branch_check,
    run_born_pipeline, BornOptions,
};
use burgers_born::numerics::{GridSpec, ScalarField, Scheme};
use burgers_born::reference::{GaussianPacket, HarmonicOscillator};
use burgers_born::schrodinger::{norm, SchrodingerProblem};
use burgers_born::Error;

fn unit(psi: ScalarField) -> ScalarField {
    let n = norm(&psi);
    psi.scale(Complex64::new(1.0 / n.sqrt(), 0.0)).unwrap()
}

fn free_packet(n: usize) -> SchrodingerProblem {
    let packet = GaussianPacket::centered(1.0, 1.0, 20.0);
    let g = GridSpec::line(20.0, n, 1e-3, 1.0).unwrap();
    SchrodingerProblem::free(1.0, unit(packet.field(&g, 0.0).unwrap()), 1e-3, 1.0).unwrap()
}

#[test]
fn velocities_match_packet() {
    let packet = GaussianPacket {
        k0: 2.0 * std::f64::consts::PI / 20.0,
        ..GaussianPacket::centered(0.9, 1.2, 20.0)
    };
    let g = GridSpec::line(20.0, 256, 1e-3, 1.0).unwrap();
    let t = 0.4;
    let psi = packet.field(&g, t).unwrap();
    let vel = extract_velocities(&psi, 0.9, Scheme::Spectral).unwrap();
    assert!(vel.masked.is_empty());
    for i in 0..g.points() {
        let x = g.position(i)[0];
        if (x - 10.0).abs() > 5.0 {
            continue;
        }
        let exact = packet.complex_velocity(x, t);
        let got = vel.complex.values()[i].c[1];
        assert!((got - exact).norm() < 1e-8, "x = {x}");
        assert_eq!(vel.conjugate.values()[i].c[1], got.conj());
        assert_eq!(vel.current[0].values()[i].re, got.re);
        assert_eq!(vel.osmotic[0].values()[i].re, -got.im);
    }
}

#[test]
fn zeros_are_masked() {
    let g = GridSpec::line(2.0 * std::f64::consts::PI, 32, 1e-3, 1.0).unwrap();
    let psi = ScalarField::from_real_fn(&g, |p| 1.0 + p[0].cos()).unwrap();
    let vel = extract_velocities(&psi, 1.0, Scheme::Spectral).unwrap();
    assert_eq!(vel.masked, vec![16]);
    assert_eq!(vel.complex.values()[16].c[1], Complex64::new(0.0, 0.0));
}

#[test]
fn madelung_round_trip_counts_winding() {
    let g = GridSpec::line(2.0 * std::f64::consts::PI, 64, 1e-3, 1.0).unwrap();
    let psi = ScalarField::from_fn(&g, |p| {
        (1.2 + 0.5 * p[0].sin()) * Complex64::from_polar(1.0, 3.0 * p[0] + 0.4 * p[0].cos())
    })
    .unwrap();
    let m = madelung_decompose(&psi).unwrap();
    assert_eq!(m.winding, 3);
    let back = madelung_reconstruct(&m).unwrap();
    for (a, b) in back.values().iter().zip(psi.values()) {
        assert!((a - b).norm() < 1e-13);
    }
    let node = ScalarField::from_real_fn(&g, |p| p[0].sin()).unwrap();
    assert!(matches!(
        madelung_decompose(&node),
        Err(Error::PhaseAmbiguous(0))
    ));
}

#[test]
fn normalization_branch() {
    let g = GridSpec::line(1.0, 16, 1e-3, 1.0).unwrap();
    let f = ScalarField::constant(&g, Complex64::new(2.0, 0.0)).unwrap();
    let (q, fp) = normalization_branch_check(&f, Complex64::new(0.0, 3.0)).unwrap();
    assert!((q - 36.0).abs() < 1e-12);
    assert!((norm(&fp) - 1.0).abs() < 1e-12);
    assert!(matches!(
        normalization_branch_check(&ScalarField::zeros(&g), Complex64::new(1.0, 0.0)),
        Err(Error::Degenerate(_))
    ));
}

#[test]
fn free_packet_density_follows_born_rule() {
    let coarse = run_born_pipeline(&free_packet(256), &BornOptions::default()).unwrap();
    let fine = run_born_pipeline(&free_packet(512), &BornOptions::default()).unwrap();
    assert!(coarse.truncation.is_none() && fine.truncation.is_none());
    let (ec, ef) = (coarse.max_born_relative(), fine.max_born_relative());
    assert!(ef <= 1e-2, "{ef}");
    assert!(ec / ef > 3.0, "{ec} / {ef}");
    assert!(fine.max_mass_error() <= 1e-10);
    assert!(fine.max_norm_drift() <= 1e-10);
    assert!(fine.max_osmotic().l_inf <= 1e-8);
    assert!(fine.max_conjugacy() == 0.0);
    assert!(fine.min_rho() >= 0.0);
    assert_eq!(fine.steps.len(), 1001);
    assert_eq!(fine.rho_series.len(), 101);
    assert!(fine
        .complex_fp
        .iter()
        .all(|s| s.forward.l_inf <= 1e-3 && s.conjugate.l_inf <= 1e-3));
}

#[test]
fn conjugate_drive_gives_the_same_density() {
    let p = free_packet(256);
    let direct = run_born_pipeline(&p, &BornOptions::default()).unwrap();
    let conj = run_born_pipeline(
        &p,
        &BornOptions {
            conjugate: true,
            ..BornOptions::default()
        },
    )
    .unwrap();
    for (a, b) in direct
        .rho_series
        .fields()
        .iter()
        .zip(conj.rho_series.fields())
    {
        assert!(a.sub(b).unwrap().max_abs() < 1e-12);
    }
    // Compare velocities where the packet carries weight; far tails amplify round-off.
    let grid = p.grid();
    for (a, b) in direct.v_series.fields().iter().zip(conj.v_series.fields()) {
        for i in 0..grid.points() {
            if (grid.position(i)[0] - 10.0).abs() < 5.0 {
                assert!((a.values()[i].c[1] - b.values()[i].c[1]).norm() < 1e-9);
            }
        }
    }
}

#[test]
fn ground_state_is_stationary() {
    let osc = HarmonicOscillator {
        b: 1.0,
        stiffness: 1.0,
        center: 10.0,
    };
    let g = GridSpec::line(20.0, 128, 1e-2, 3.0).unwrap();
    let psi0 = unit(ScalarField::from_real_fn(&g, |p| osc.ground(p[0])).unwrap());
    let p =
        SchrodingerProblem::new(1.0, osc.potential_field(&g).unwrap(), psi0, 1e-2, 3.0).unwrap();
    let run = run_born_pipeline(&p, &BornOptions::default()).unwrap();
    assert!(run.truncation.is_none());
    assert!(run.max_born_relative() <= 1e-6);
    assert!(run.max_norm_drift() <= 1e-8);
}

#[test]
fn forming_node_truncates_the_run() {
    // 1 + cos x evolves freely into 1 - cos x at t = 2 pi, opening a node at x = 0.
    let l = 2.0 * std::f64::consts::PI;
    let dt = l / 2000.0;
    let g = GridSpec::line(l, 64, dt, 7.0).unwrap();
    let psi0 = unit(ScalarField::from_real_fn(&g, |p| 1.0 + p[0].cos()).unwrap());
    let p = SchrodingerProblem::free(1.0, psi0, dt, 7.0).unwrap();
    let run = run_born_pipeline(&p, &BornOptions::default()).unwrap();
    let trunc = run.truncation.expect("node must be detected");
    assert_eq!(trunc.nodes, vec![0]);
    assert!((trunc.t - l).abs() < 1e-9);
    assert_eq!(run.steps.len(), 2000);
}
