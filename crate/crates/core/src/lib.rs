//! Stochastic diffusions, Burgers equations, Cole–Hopf transforms and the
//! Born rule `rho = |psi|^2`, cross-checked numerically on periodic grids.

// `!(x > 0.0)` is used on purpose throughout: unlike `x <= 0.0` it also
// rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod born;
pub mod burgers;
pub mod error;
pub mod experiments;
pub mod fokker_planck;
pub mod ga;
pub mod numerics;
pub mod reference;
pub mod schrodinger;
pub mod series;
pub mod stochastic;

pub use error::{Error, Result};
