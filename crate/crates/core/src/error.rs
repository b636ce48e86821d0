use thiserror::Error;

/// Every failure the library reports.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    #[error("non-periodic data rejected: {0}")]
    NonPeriodic(String),

    #[error("non-finite value at index {index} ({context})")]
    NonFinite { context: String, index: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("stability limit violated: dt = {dt:e}; use dt <= {suggested:e}")]
    Stability { dt: f64, suggested: f64 },

    #[error("ill-posed direction: {0}")]
    IllPosedDirection(String),

    #[error("near-zero wavefunction at {} node(s), first at index {}", nodes.len(), nodes.first().copied().unwrap_or(0))]
    NearZero { nodes: Vec<usize> },

    #[error("insufficient samples in bin centered at {center}: {occupancy} < {required}")]
    InsufficientSamples {
        center: f64,
        occupancy: usize,
        required: usize,
    },

    #[error("non-finite drift on path {path} at step {step}")]
    NonFiniteDrift { path: u64, step: usize },

    #[error("degenerate: {0}")]
    Degenerate(String),

    #[error("velocity field is not irrotational: max |curl| = {0:e}")]
    NotIrrotational(f64),

    #[error("blow-up at t = {t}: max |a| = {max:e}")]
    BlowUp { t: f64, max: f64 },

    #[error("density went negative: min rho = {min:e} at index {index}")]
    Negative { min: f64, index: usize },

    #[error("phase unwrap is ambiguous at node {0}")]
    PhaseAmbiguous(usize),

    #[error("need at least {required} time samples, got {got}")]
    TooFewSamples { got: usize, required: usize },

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("config: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
