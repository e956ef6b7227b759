use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("zero vector has no causal class")]
    ZeroVector,
    #[error("degenerate hyperplane: v^2 = {0:e}")]
    DegenerateHyperplane(f64),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("superluminal velocity |beta| = {0}")]
    Superluminal(f64),
    #[error("matrix is not in the group: residual {0:e}")]
    NotInGroup(f64),
    #[error("wrong Lorentz component: {0}")]
    WrongComponent(String),
    #[error("velocity {v} outside the admissible spectrum for k = {k}")]
    OutOfSpectrum { v: f64, k: f64 },
    #[error("composition diverges: 1 - k v v' = 0")]
    InfiniteVelocity,
    #[error("algebra mismatch: {0}")]
    AlgebraMismatch(String),
    #[error("contraction obstructed: [{a}, {b}] has a component along {c}")]
    ContractionObstructed { a: String, b: String, c: String },
    #[error("degenerate bilinear form")]
    DegenerateForm,
    #[error("event outside the field domain")]
    OutsideDomain,
    #[error("Newton iteration for the leaf parameter did not converge")]
    NoConvergence,
    #[error("loop is not closed: endpoint gap {0:e}")]
    OpenLoop(f64),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
