//! Forward/backward diffusions, the complex Itô–Nottale process, Nelson
//! mean-velocity estimators and discretized stochastic actions.

pub mod action;
pub mod complex;
pub mod ensemble;
pub mod estimators;
pub mod model;
pub mod rng;

pub use action::{
    action_complex, action_salpha, noise_square, salpha_samples, variational_sweep, ActionEstimate,
    ComplexEstimate, SweepPoint, SweepSetup,
};
pub use complex::{
    complex_increment_stats, simulate_complex, ComplexIncrementStats, ComplexPathEnsemble, SQRT_I,
    SQRT_MINUS_I,
};
pub use ensemble::{simulate, simulate_range, PathEnsemble};
pub use estimators::{
    accumulate_mean_derivative, default_bin_width, drift_profile, estimate_diffusion,
    estimate_mean_derivative, estimate_mean_velocity, velocity_fields, Bin, BinEstimate, Estimate,
    MeanDerivative, MomentAccumulator, QuadraticVariation, MIN_BIN_OCCUPANCY,
};
pub use model::{DiffusionModel, Direction, DriftFn, InitialCondition};
