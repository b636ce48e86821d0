use std::f64::consts::PI;

use num_complex::Complex64;
use num_rational::Ratio;
use rand::Rng;

use super::{Check, Criterion, ExperimentConfig, Outcome, Output};
use crate::error::Result;
use crate::ga::{check_prop_identities, Multivector, StretchSpec};
use crate::numerics::{GridSpec, Scheme};
use crate::stochastic::rng::path_rng;

type Q = Ratio<i128>;
type Mv = Multivector<Q>;

fn rational(rng: &mut impl Rng) -> Q {
    Q::new(rng.random_range(-9..=9), rng.random_range(1..=6))
}

fn random_mv(rng: &mut impl Rng) -> Mv {
    Mv {
        c: std::array::from_fn(|_| rational(rng)),
    }
}

fn random_vector(rng: &mut impl Rng) -> Mv {
    Mv::vector(std::array::from_fn(|_| rational(rng)))
}

fn add(a: &Mv, b: &Mv) -> Mv {
    Mv {
        c: std::array::from_fn(|i| a.c[i] + b.c[i]),
    }
}

fn sub(a: &Mv, b: &Mv) -> Mv {
    Mv {
        c: std::array::from_fn(|i| a.c[i] - b.c[i]),
    }
}

/// Product axioms evaluated in exact arithmetic; returns `(name, failures)`.
fn axiom_failures(samples: usize, seed: u64) -> Vec<(&'static str, usize)> {
    let half = Q::new(1, 2);
    let one = Mv::scalar(Q::from_integer(1));
    let mut counts: Vec<(&'static str, usize)> = vec![
        ("associativity", 0),
        ("distributivity", 0),
        ("unit", 0),
        ("basis_squares", 0),
        ("basis_anticommute", 0),
        ("vector_product_split", 0),
        ("vector_square_is_scalar", 0),
        ("reverse_antihomomorphism", 0),
        ("contraction_split", 0),
        ("wedge_split", 0),
        ("scalar_product_symmetry", 0),
    ];
    let mut fail = |name: &str, ok: bool| {
        if !ok {
            if let Some(c) = counts.iter_mut().find(|c| c.0 == name) {
                c.1 += 1;
            }
        }
    };
    for i in 0..3 {
        fail("basis_squares", Mv::e(i).gp(&Mv::e(i)) == one);
        for j in 0..3 {
            if i != j {
                let ij = Mv::e(i).gp(&Mv::e(j));
                let ji = Mv::e(j).gp(&Mv::e(i));
                fail("basis_anticommute", add(&ij, &ji) == Mv::zero());
            }
        }
    }
    for s in 0..samples {
        let mut rng = path_rng(seed, s as u64);
        let (a, b, c) = (
            random_mv(&mut rng),
            random_mv(&mut rng),
            random_mv(&mut rng),
        );
        let (u, v) = (random_vector(&mut rng), random_vector(&mut rng));
        fail("associativity", a.gp(&b).gp(&c) == a.gp(&b.gp(&c)));
        fail(
            "distributivity",
            a.gp(&add(&b, &c)) == add(&a.gp(&b), &a.gp(&c)),
        );
        fail("unit", one.gp(&a) == a && a.gp(&one) == a);
        let uv = u.gp(&v);
        fail(
            "vector_product_split",
            uv == add(&u.contraction(&v), &u.wedge(&v)),
        );
        fail("vector_square_is_scalar", u.gp(&u).is_homogeneous(0));
        fail(
            "reverse_antihomomorphism",
            a.gp(&b).reverse() == b.reverse().gp(&a.reverse()),
        );
        // For a vector u: u⌋B = (uB - B̂u)/2 and u∧B = (uB + B̂u)/2.
        let ub = u.gp(&b);
        let bu = b.involute().gp(&u);
        fail(
            "contraction_split",
            u.contraction(&b) == sub(&ub, &bu).scale(half),
        );
        fail("wedge_split", u.wedge(&b) == add(&ub, &bu).scale(half));
        fail(
            "scalar_product_symmetry",
            a.scalar_product(&b) == b.scalar_product(&a),
        );
    }
    counts
}

/// Trigonometric polynomial in space and time on the `2 pi` cube.
fn trig(p: [f64; 3], t: f64) -> Complex64 {
    let re = (p[0] + t).sin() * (2.0 * p[1]).cos() + 0.5 * (p[0] + p[2] - 0.5 * t).cos();
    let im = 0.3 * (p[1] - 2.0 * p[2] + t).sin();
    Complex64::new(re, im)
}

pub(crate) fn identities(cfg: &ExperimentConfig, out: &mut Output) -> Result<Outcome> {
    let samples = cfg.get(&cfg.samples);
    let mut o = Outcome::new();

    let failures = axiom_failures(samples, cfg.seed());
    let total: usize = failures.iter().map(|f| f.1).sum();
    out.table(
        "axioms.csv",
        &["axiom_index", "failures"],
        &failures
            .iter()
            .enumerate()
            .map(|(i, f)| vec![i as f64, f.1 as f64])
            .collect::<Vec<_>>(),
    )?;
    o.check(
        Check::at_most(
            Criterion::GeometricAlgebra,
            "axiom_failures",
            total as f64,
            0.0,
        )
        .with_note(format!(
            "{samples} random rational triples, exact arithmetic"
        )),
    );
    for (name, count) in &failures {
        o.diagnostic(&format!("axiom_{name}"), count);
    }

    let grid = GridSpec::cube(2.0 * PI, cfg.get(&cfg.points), 1e-3, 1.0)?;
    let b2 = 1.0;
    let stretches = [
        ("real_anisotropic", StretchSpec::real([1.0, 0.5, 2.0])),
        (
            "isotropic_minus_i_b2",
            StretchSpec::isotropic(Complex64::new(0.0, -b2)),
        ),
        (
            "complex_anisotropic",
            StretchSpec::new([
                Complex64::new(1.0, -0.5),
                Complex64::new(0.0, 2.0),
                Complex64::new(-0.7, 0.3),
            ]),
        ),
    ];
    let mut rows = Vec::new();
    let mut worst: f64 = 0.0;
    for (k, (name, s)) in stretches.iter().enumerate() {
        let r = check_prop_identities(trig, &grid, s, 0.3, 1e-3, Scheme::Spectral)?;
        worst = worst.max(r.worst().l_inf);
        rows.push(vec![
            k as f64,
            r.commute_time.l_inf,
            r.commute_laplacian.l_inf,
            r.symmetry.l_inf,
            r.advection_gradient.l_inf,
            r.full_contraction.l_inf,
        ]);
        o.diagnostic(
            &format!("full_contraction_{name}"),
            r.full_contraction.l_inf,
        );
    }
    out.table(
        "identities.csv",
        &[
            "stretch_index",
            "commute_time",
            "commute_laplacian",
            "symmetry",
            "advection_gradient",
            "full_contraction",
        ],
        &rows,
    )?;
    o.check(Check::at_most(
        Criterion::GeometricAlgebra,
        "identity_residual_linf",
        worst,
        1e-10,
    ));
    Ok(o)
}
