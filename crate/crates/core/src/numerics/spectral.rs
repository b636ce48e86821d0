//! FFT helpers for periodic fields. Plans are cached per thread.

use std::cell::RefCell;
use std::collections::HashMap;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftDirection, FftPlanner};

use super::grid::GridSpec;

/// Planned transforms keyed by `(length, inverse)`.
type PlanCache = (FftPlanner<f64>, HashMap<(usize, bool), Arc<dyn Fft<f64>>>);

thread_local! {
    static PLANS: RefCell<PlanCache> =
        RefCell::new((FftPlanner::new(), HashMap::new()));
}

fn plan(n: usize, inverse: bool) -> Arc<dyn Fft<f64>> {
    PLANS.with(|cell| {
        let mut guard = cell.borrow_mut();
        let (planner, cache) = &mut *guard;
        cache
            .entry((n, inverse))
            .or_insert_with(|| {
                let dir = if inverse {
                    FftDirection::Inverse
                } else {
                    FftDirection::Forward
                };
                planner.plan_fft(n, dir)
            })
            .clone()
    })
}

/// In-place unnormalized FFT along one axis of a flattened field.
fn fft_axis(data: &mut [Complex64], grid: &GridSpec, axis: usize, inverse: bool) {
    let n = grid.points();
    let fft = plan(n, inverse);
    if grid.dim() == 1 {
        fft.process(data);
        return;
    }
    let stride = grid.stride(axis);
    let mut line = vec![Complex64::new(0.0, 0.0); n];
    let mut scratch = vec![Complex64::new(0.0, 0.0); fft.get_inplace_scratch_len()];
    for start in 0..data.len() {
        // A line starts wherever the axis index is zero.
        if !(start / stride).is_multiple_of(n) {
            continue;
        }
        for (j, slot) in line.iter_mut().enumerate() {
            *slot = data[start + j * stride];
        }
        fft.process_with_scratch(&mut line, &mut scratch);
        for (j, v) in line.iter().enumerate() {
            data[start + j * stride] = *v;
        }
    }
}

/// Forward transform over all axes (no normalization).
pub fn forward(values: &[Complex64], grid: &GridSpec) -> Vec<Complex64> {
    let mut data = values.to_vec();
    for axis in 0..grid.dim() {
        fft_axis(&mut data, grid, axis, false);
    }
    data
}

/// Inverse transform over all axes, normalized so that `inverse(forward(f)) = f`.
pub fn inverse(spectrum: &[Complex64], grid: &GridSpec) -> Vec<Complex64> {
    let mut data = spectrum.to_vec();
    for axis in 0..grid.dim() {
        fft_axis(&mut data, grid, axis, true);
    }
    let norm = 1.0 / data.len() as f64;
    for v in &mut data {
        *v *= norm;
    }
    data
}

/// Wavevector of a flat spectral index; unused axes are zero.
pub fn wavevector(grid: &GridSpec, k: &[f64], index: usize) -> [f64; 3] {
    let idx = grid.unravel(index);
    let mut out = [0.0; 3];
    for axis in 0..grid.dim() {
        out[axis] = k[idx[axis]];
    }
    out
}

/// Applies a Fourier multiplier `m(k)` to the field.
pub fn apply_multiplier(
    values: &[Complex64],
    grid: &GridSpec,
    multiplier: impl Fn([f64; 3], [usize; 3]) -> Complex64,
) -> Vec<Complex64> {
    let k = grid.wavenumbers();
    let mut spectrum = forward(values, grid);
    for (i, s) in spectrum.iter_mut().enumerate() {
        *s *= multiplier(wavevector(grid, &k, i), grid.unravel(i));
    }
    inverse(&spectrum, grid)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_3d() {
        let g = GridSpec::cube(1.0, 8, 0.1, 1.0).unwrap();
        let v: Vec<Complex64> = (0..g.len())
            .map(|i| Complex64::new((i as f64).sin(), (i as f64 * 0.3).cos()))
            .collect();
        let back = inverse(&forward(&v, &g), &g);
        for (a, b) in v.iter().zip(&back) {
            assert!((a - b).norm() < 1e-13);
        }
    }
}
