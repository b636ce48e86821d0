//! Complex embedding `dX = V dt + sqrt(-i) sigma dZ` of a forward/backward
//! diffusion pair, with `dZ = (b dW + i b̂ dŴ) / (sqrt(2) sigma)` and
//! `sigma = sqrt((b^2 + b̂^2) / 2)`.

use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::rng::path_rng;
use crate::error::{Error, Result};

/// Principal square root of `-i`, `e^{-i pi/4} = (1 - i)/sqrt(2)`.
pub const SQRT_MINUS_I: Complex64 = Complex64::new(FRAC_1_SQRT_2, -FRAC_1_SQRT_2);

/// Principal square root of `i`, `e^{i pi/4}`.
pub const SQRT_I: Complex64 = Complex64::new(FRAC_1_SQRT_2, FRAC_1_SQRT_2);

/// Complex-valued paths of the embedded process with `b̂ = b`.
#[derive(Clone, Debug)]
pub struct ComplexPathEnsemble {
    n_steps: usize,
    dt: f64,
    b: f64,
    master_seed: u64,
    states: Vec<Complex64>,
    noise_sums: Vec<Complex64>,
}

impl ComplexPathEnsemble {
    pub fn n_paths(&self) -> usize {
        self.noise_sums.len()
    }

    pub fn n_steps(&self) -> usize {
        self.n_steps
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn master_seed(&self) -> u64 {
        self.master_seed
    }

    pub fn path(&self, i: usize) -> &[Complex64] {
        let w = self.n_steps + 1;
        &self.states[i * w..(i + 1) * w]
    }

    pub fn paths(&self) -> impl Iterator<Item = &[Complex64]> {
        self.states.chunks_exact(self.n_steps + 1)
    }

    /// `Z_T = sum_k dZ_k` for every path.
    pub fn noise_sums(&self) -> &[Complex64] {
        &self.noise_sums
    }
}

/// Euler–Maruyama for `dX = V(X, t) dt + sqrt(-i) b dZ` with `b̂ = b`.
pub fn simulate_complex(
    drift: impl Fn(Complex64, f64) -> Complex64 + Sync,
    b: f64,
    x0: Complex64,
    horizon: f64,
    n_paths: usize,
    n_steps: usize,
    seed: u64,
) -> Result<ComplexPathEnsemble> {
    if !(b.is_finite() && b > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "b must be positive, got {b}"
        )));
    }
    if n_steps == 0 || !(horizon > 0.0) {
        return Err(Error::InvalidParameter(
            "need n_steps > 0 and horizon > 0".into(),
        ));
    }
    let dt = horizon / n_steps as f64;
    let scale = (0.5 * dt).sqrt();
    let noise = SQRT_MINUS_I * b;
    let results: Vec<Result<(Vec<Complex64>, Complex64)>> = (0..n_paths as u64)
        .into_par_iter()
        .map(|p| {
            let mut rng = path_rng(seed, p);
            let mut x = x0;
            let mut z_sum = Complex64::new(0.0, 0.0);
            let mut out = Vec::with_capacity(n_steps + 1);
            out.push(x);
            for step in 0..n_steps {
                let w: f64 = rng.sample(StandardNormal);
                let w_hat: f64 = rng.sample(StandardNormal);
                let dz = Complex64::new(w, w_hat) * scale;
                let v = drift(x, step as f64 * dt);
                if !(v.re.is_finite() && v.im.is_finite()) {
                    return Err(Error::NonFiniteDrift { path: p, step });
                }
                x += v * dt + noise * dz;
                z_sum += dz;
                out.push(x);
            }
            Ok((out, z_sum))
        })
        .collect();
    let mut states = Vec::with_capacity(n_paths * (n_steps + 1));
    let mut noise_sums = Vec::with_capacity(n_paths);
    for r in results {
        let (path, z) = r?;
        states.extend(path);
        noise_sums.push(z);
    }
    Ok(ComplexPathEnsemble {
        n_steps,
        dt,
        b,
        master_seed: seed,
        states,
        noise_sums,
    })
}

/// Sample moments of the complex increment `dZ`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComplexIncrementStats {
    pub mean_dz: Complex64,
    pub mean_dz_sq: Complex64,
    pub mean_dz_dzstar: f64,
    pub n_samples: usize,
}

impl ComplexIncrementStats {
    /// Exact `E[dZ^2] = (b^2 - b̂^2)/(b^2 + b̂^2) dt`.
    pub fn expected_dz_sq(b: f64, b_hat: f64, dt: f64) -> f64 {
        (b * b - b_hat * b_hat) / (b * b + b_hat * b_hat) * dt
    }
}

pub const MIN_INCREMENT_SAMPLES: usize = 10_000;
const CHUNK: usize = 8192;

/// Draws `n_samples` increments `dZ` and returns their first and second moments.
pub fn complex_increment_stats(
    b: f64,
    b_hat: f64,
    n_samples: usize,
    dt: f64,
    seed: u64,
) -> Result<ComplexIncrementStats> {
    if n_samples < MIN_INCREMENT_SAMPLES {
        return Err(Error::TooFewSamples {
            got: n_samples,
            required: MIN_INCREMENT_SAMPLES,
        });
    }
    if !(b >= 0.0 && b_hat >= 0.0 && b * b + b_hat * b_hat > 0.0 && dt > 0.0) {
        return Err(Error::Degenerate(format!(
            "need b, b̂ >= 0 not both zero and dt > 0 (b = {b}, b̂ = {b_hat}, dt = {dt})"
        )));
    }
    let sigma = ((b * b + b_hat * b_hat) / 2.0).sqrt();
    let scale = dt.sqrt() / (std::f64::consts::SQRT_2 * sigma);
    let n_chunks = n_samples.div_ceil(CHUNK);
    let partial: Vec<(Complex64, Complex64, f64)> = (0..n_chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = path_rng(seed, c as u64);
            let len = CHUNK.min(n_samples - c * CHUNK);
            let mut s = (Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0), 0.0);
            for _ in 0..len {
                let w: f64 = rng.sample(StandardNormal);
                let w_hat: f64 = rng.sample(StandardNormal);
                let dz = Complex64::new(b * w, b_hat * w_hat) * scale;
                s.0 += dz;
                s.1 += dz * dz;
                s.2 += dz.norm_sqr();
            }
            s
        })
        .collect();
    let mut total = (Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0), 0.0);
    for p in partial {
        total.0 += p.0;
        total.1 += p.1;
        total.2 += p.2;
    }
    let n = n_samples as f64;
    Ok(ComplexIncrementStats {
        mean_dz: total.0 / n,
        mean_dz_sq: total.1 / n,
        mean_dz_dzstar: total.2 / n,
        n_samples,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn principal_roots() {
        assert!((SQRT_MINUS_I * SQRT_MINUS_I - Complex64::new(0.0, -1.0)).norm() < 1e-15);
        assert!((SQRT_I * SQRT_I - Complex64::new(0.0, 1.0)).norm() < 1e-15);
        // -i sqrt(-i) = -sqrt(i)
        assert!((Complex64::new(0.0, -1.0) * SQRT_MINUS_I + SQRT_I).norm() < 1e-15);
    }

    #[test]
    fn rejects_small_samples_and_degenerate_coefficients() {
        assert!(complex_increment_stats(1.0, 1.0, 10, 1e-3, 0).is_err());
        assert!(matches!(
            complex_increment_stats(0.0, 0.0, 20_000, 1e-3, 0),
            Err(Error::Degenerate(_))
        ));
    }

    #[test]
    fn expected_second_moment() {
        assert_eq!(ComplexIncrementStats::expected_dz_sq(1.0, 1.0, 0.1), 0.0);
        assert_eq!(ComplexIncrementStats::expected_dz_sq(1.0, 0.0, 0.1), 0.1);
        assert_eq!(ComplexIncrementStats::expected_dz_sq(0.0, 1.0, 0.1), -0.1);
    }
}
