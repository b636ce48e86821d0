//! Time integration of `i b^2 F_t = -(b^4/2) ∇²F + U F` and its conjugate.

mod observables;
mod problem;
mod propagator;

pub use observables::{conjugate_evolution_check, energy, norm, norm_and_energy, phase_history};
pub use problem::{evolve, Equation, Evolver, Method, SchrodingerProblem, NORM_TOLERANCE};
pub use propagator::LinearPropagator;
