use num_complex::Complex64;

use burgers_born::fokker_planck::{
    complex_fp_residual, evolve_forward_fp, fp_stable_dt, step_backward_fp, step_forward_fp,
    sum_difference_residuals, DensityState,
};
use burgers_born::ga::MultivectorField;
use burgers_born::numerics::{integrate, GridSpec, ScalarField, Scheme};
use burgers_born::reference::GaussianPacket;
use burgers_born::series::{FieldSeries, VectorSeries};
use burgers_born::Error;

const L: f64 = 12.0;

fn normalized(g: &GridSpec, f: impl Fn(f64) -> f64) -> ScalarField {
    let raw = ScalarField::from_real_fn(g, |p| f(p[0])).unwrap();
    let m = integrate(&raw).re;
    raw.scale(Complex64::new(1.0 / m, 0.0)).unwrap()
}

fn ou_drift(g: &GridSpec) -> ScalarField {
    ScalarField::from_real_fn(g, |p| -(p[0] - 0.5 * L)).unwrap()
}

fn moments(rho: &ScalarField) -> (f64, f64) {
    let g = rho.grid();
    let dx = g.dx();
    let mut m1 = 0.0;
    let mut m2 = 0.0;
    for (i, r) in rho.values().iter().enumerate() {
        let y = g.position(i)[0] - 0.5 * L;
        m1 += r.re * y * dx;
        m2 += r.re * y * y * dx;
    }
    (m1, m2 - m1 * m1)
}

#[test]
fn ou_density_relaxes_to_stationary_gaussian() {
    let b = 1.0;
    let g = GridSpec::line(L, 240, 1e-3, 6.0).unwrap();
    let rho0 = normalized(&g, |x| (-(x - 7.0).powi(2) / 0.5).exp());
    let state = DensityState::new(rho0, 0.0).unwrap();
    let a = ou_drift(&g);
    let dt = 0.9 * fp_stable_dt(g.dx(), a.max_abs(), b);
    let n = (6.0 / dt).ceil() as usize;
    let series = evolve_forward_fp(&state, |_| Ok(a.clone()), b, dt, n).unwrap();
    for f in series.fields() {
        assert!((integrate(f).re - 1.0).abs() <= 1e-8);
        assert!(f.re().iter().all(|&r| r >= -1e-12));
    }
    let (mean, var) = moments(series.last().unwrap().1);
    assert!(mean.abs() < 1e-2, "mean {mean}");
    assert!((var - 0.5 * b * b).abs() < 1e-2, "variance {var}");
}

#[test]
fn matched_drift_is_stationary_and_reversible() {
    let b = 1.0;
    let g = GridSpec::line(L, 120, 1e-3, 1.0).unwrap();
    let rho = normalized(&g, |x| (-(x - 0.5 * L).powi(2) / (b * b)).exp());
    let a = ou_drift(&g);
    let dt = fp_stable_dt(g.dx(), a.max_abs(), b);
    let s0 = DensityState::new(rho, 0.0).unwrap();
    let fwd = step_forward_fp(&s0, &a, b, dt).unwrap();
    let drift_fwd = fwd.rho().sub(s0.rho()).unwrap().max_abs();
    // Backward drift of the stationary pair: â = -a.
    let a_hat = a.scale(Complex64::new(-1.0, 0.0)).unwrap();
    let bwd = step_backward_fp(&s0, &a_hat, b, -dt).unwrap();
    assert!((bwd.t() + dt).abs() < 1e-15);
    let drift_bwd = bwd.rho().sub(s0.rho()).unwrap().max_abs();
    assert!(
        drift_fwd < 1e-3 && drift_bwd < 1e-3,
        "{drift_fwd} {drift_bwd}"
    );
    assert!((bwd.mass() - 1.0).abs() < 1e-12);
}

#[test]
fn direction_and_stability_are_enforced() {
    let g = GridSpec::line(L, 120, 1e-3, 1.0).unwrap();
    let rho = normalized(&g, |x| (-(x - 6.0).powi(2)).exp());
    let s = DensityState::new(rho, 0.0).unwrap();
    let a = ou_drift(&g);
    assert!(matches!(
        step_forward_fp(&s, &a, 1.0, -1e-3),
        Err(Error::IllPosedDirection(_))
    ));
    assert!(matches!(
        step_backward_fp(&s, &a, 1.0, 1e-3),
        Err(Error::IllPosedDirection(_))
    ));
    assert!(matches!(
        step_forward_fp(&s, &a, 1.0, 1.0),
        Err(Error::Stability { .. })
    ));
    let unnormalized = ScalarField::constant(&g, Complex64::new(1.0, 0.0)).unwrap();
    assert!(DensityState::new(unnormalized, 0.0).is_err());
    let cube = GridSpec::cube(1.0, 8, 1e-3, 1.0).unwrap();
    let uniform = ScalarField::constant(&cube, Complex64::new(1.0, 0.0)).unwrap();
    assert!(matches!(
        DensityState::new(uniform, 0.0),
        Err(Error::Unsupported(_))
    ));
}

struct PacketSeries {
    rho: FieldSeries,
    a: FieldSeries,
    a_hat: FieldSeries,
    v: VectorSeries,
}

fn packet_series(n: usize, t_mid: f64, h: f64) -> PacketSeries {
    let b = 1.0;
    let packet = GaussianPacket {
        k0: 2.0 * std::f64::consts::PI * 2.0 / 20.0,
        ..GaussianPacket::centered(b, 1.0, 20.0)
    };
    let g = GridSpec::line(20.0, n, h, 1.0).unwrap();
    let mut out = PacketSeries {
        rho: FieldSeries::new(),
        a: FieldSeries::new(),
        a_hat: FieldSeries::new(),
        v: VectorSeries::new(),
    };
    for k in 0..3 {
        let t = t_mid + (k as f64 - 1.0) * h;
        let rho = ScalarField::from_real_fn(&g, |p| packet.psi(p[0], t).norm_sqr()).unwrap();
        let vel = ScalarField::from_fn(&g, |p| packet.complex_velocity(p[0], t)).unwrap();
        // V = v - i u
        let a = vel.map(|z| Complex64::new(z.re - z.im, 0.0)).unwrap();
        let a_hat = vel.map(|z| Complex64::new(z.re + z.im, 0.0)).unwrap();
        out.rho.push(t, rho).unwrap();
        out.a.push(t, a).unwrap();
        out.a_hat.push(t, a_hat).unwrap();
        out.v
            .push(t, MultivectorField::from_vector_components(&[vel]).unwrap())
            .unwrap();
    }
    out
}

#[test]
fn sum_and_difference_split_on_free_packet() {
    let s = packet_series(256, 0.5, 1e-4);
    let samples = sum_difference_residuals(&s.rho, &s.a, &s.a_hat, 1.0, Scheme::Spectral).unwrap();
    assert_eq!(samples.len(), 1);
    let r = samples[0];
    assert!(r.forward.l_inf < 1e-6, "{r:?}");
    assert!(r.backward.l_inf < 1e-6, "{r:?}");
    assert!(r.continuity.l_inf < 1e-6, "{r:?}");
    assert!(r.osmotic.l_inf < 1e-9, "{r:?}");
    assert!(r.split.l_inf < 1e-12, "{r:?}");
}

#[test]
fn complex_fokker_planck_vanishes_on_free_packet() {
    let s = packet_series(256, 0.5, 1e-3);
    let samples = complex_fp_residual(&s.rho, &s.v, 1.0, Scheme::Spectral).unwrap();
    for r in samples {
        assert!(r.forward.l_inf <= 1e-3, "{r:?}");
        assert!(r.conjugate.l_inf <= 1e-3, "{r:?}");
        assert!(r.imag_part.l_inf <= 1e-9, "{r:?}");
    }
}

#[test]
fn mismatched_drift_shows_in_residual() {
    let mut s = packet_series(128, 0.5, 1e-4);
    let shifted: Vec<ScalarField> =
        s.a.fields()
            .iter()
            .map(|f| f.map(|z| z + Complex64::new(0.1, 0.0)).unwrap())
            .collect();
    s.a = FieldSeries::from_parts(s.a.times().to_vec(), shifted).unwrap();
    let r = sum_difference_residuals(&s.rho, &s.a, &s.a_hat, 1.0, Scheme::Spectral).unwrap()[0];
    assert!(r.forward.l_inf > 1e-3);
    assert!(r.split.l_inf < 1e-12);
}
