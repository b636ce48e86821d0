use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::numerics::{spectral, GridSpec, ScalarField};

/// Strang-split exponential propagator for `F_t = nu ∇²F + q(x) F`.
///
/// The field is carried as its periodic part `P` with `F = e^{kappa·x} P`, so
/// that fields whose logarithm has a non-zero mean gradient (Bloch-periodic
/// fields) are still propagated spectrally: `∇ -> ∇ + kappa` on `P`.
#[derive(Clone, Debug)]
pub struct LinearPropagator {
    grid: GridSpec,
    kinetic: Vec<Complex64>,
    half_potential: Option<Vec<Complex64>>,
}

impl LinearPropagator {
    pub fn new(
        grid: &GridSpec,
        nu: Complex64,
        kappa: [Complex64; 3],
        q: Option<&ScalarField>,
        dt: f64,
    ) -> Result<Self> {
        grid.ensure_periodic()?;
        if !(dt.is_finite() && dt > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "dt must be positive, got {dt}"
            )));
        }
        let k = grid.wavenumbers();
        let kinetic = (0..grid.len())
            .map(|i| {
                let kv = spectral::wavevector(grid, &k, i);
                let mut symbol = Complex64::new(0.0, 0.0);
                for axis in 0..grid.dim() {
                    let d = Complex64::new(0.0, kv[axis]) + kappa[axis];
                    symbol += d * d;
                }
                (nu * symbol * dt).exp()
            })
            .collect();
        let half_potential = match q {
            Some(q) => {
                grid.ensure_same_space(q.grid())?;
                Some(q.values().iter().map(|&v| (v * (0.5 * dt)).exp()).collect())
            }
            None => None,
        };
        Ok(Self {
            grid: grid.clone(),
            kinetic,
            half_potential,
        })
    }

    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    /// Advances the periodic part by one step.
    pub fn step(&self, p: &mut Vec<Complex64>) {
        if let Some(h) = &self.half_potential {
            p.iter_mut().zip(h).for_each(|(v, m)| *v *= m);
        }
        let mut spectrum = spectral::forward(p, &self.grid);
        spectrum.iter_mut()
            .zip(&self.kinetic)
            .for_each(|(s, m)| *s *= m);
        *p = spectral::inverse(&spectrum, &self.grid);
        if let Some(h) = &self.half_potential {
            p.iter_mut().zip(h).for_each(|(v, m)| *v *= m);
        }
    }
}
