//! Born-rule verification: the density transported by the current velocity
//! of a wavefunction stays equal to `|psi|^2`.

mod madelung;
mod pipeline;
mod velocities;

pub use madelung::{
    madelung_decompose, madelung_reconstruct, normalization_branch_check, Madelung,
};
pub use pipeline::{
    run_born_pipeline, BornOptions, BornRun, StepRecord, Truncation, NODE_DENSITY_FRACTION,
};
pub use velocities::{extract_velocities, Velocities};
