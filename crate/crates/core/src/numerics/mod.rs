//! Periodic grids, fields, derivative operators, quadrature and norms.

pub mod field;
pub mod grid;
pub mod io;
pub mod ops;
pub mod spectral;

pub use field::ScalarField;
pub use grid::{Boundary, GridSpec};
pub use ops::{
    antiderivative, curl, derivative, divergence, gradient, gradient_components, integrate,
    laplacian, residual_norm, second_derivative, Norms, Scheme,
};
