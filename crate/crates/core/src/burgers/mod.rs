//! Burgers equations with real and imaginary viscosity, solved directly and
//! through real, complex and vector Cole–Hopf transforms.

mod colehopf;
mod direct;
mod problem;
mod residual;

pub use colehopf::{
    cole_hopf_forward, cole_hopf_inverse, linearization_residual, near_zero_nodes, potential_of,
    solve_burgers_via_colehopf, solve_linearization_condition, BlochField, ColeHopfMap,
    ColeHopfVariant, EPS_FLOOR,
};
pub use direct::{solve_burgers_direct, SolveOptions, BLOW_UP_THRESHOLD};
pub use problem::{BurgersProblem, BurgersSolution, TimeDirection, IRROTATIONAL_TOLERANCE};
pub use residual::{
    burgers_residual, burgers_residual_field, geodesic_residual, real_cole_hopf_check,
    vector_burgers_residual, GeodesicSign, RealColeHopfReport, RealColeHopfSample,
};
