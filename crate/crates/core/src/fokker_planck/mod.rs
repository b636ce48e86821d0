//! Forward and backward Fokker–Planck equations for a diffusion pair, and the
//! residuals of their sum/difference split and complex lift.

mod residuals;
mod stepper;

pub use residuals::{
    backward_rate, complex_fp_residual, forward_rate, sum_difference_residuals, ComplexFpSample,
    SumDifferenceSample,
};
pub use stepper::{
    evolve_forward_fp, fp_stable_dt, step_backward_fp, step_forward_fp, DensityState,
    MASS_TOLERANCE, NEGATIVITY_FLOOR,
};
