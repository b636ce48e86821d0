//! Geometric algebra of Euclidean 3-space and calculus on periodic grids.

pub mod calculus;
pub mod field;
pub mod multivector;

pub use calculus::{
    check_prop_identities, stretched_gradient, stretched_gradient_components, PropIdentityReport,
    StretchSpec,
};
pub use field::MultivectorField;
pub use multivector::{Coeff, Multivector, BLADE_NAMES, GRADES};
