use thiserror::Error;

/// Errors raised by grid construction, stepping and diagnostics.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum SolverError {
    #[error("invalid grid extent: x_min={x_min}, x_max={x_max}, n_cells={n_cells}")]
    InvalidExtent { x_min: f64, x_max: f64, n_cells: usize },

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("non-positive depth h={h}")]
    NonPositiveDepth { h: f64 },

    #[error("dry bed at cell {cell}: h={h} below h_min={h_min}")]
    DryBed { cell: usize, h: f64, h_min: f64 },

    #[error("non-finite value in field `{field}` at cell {cell}")]
    NonFinite { field: &'static str, cell: usize },

    #[error("singular pivot at row {row}")]
    SingularPivot { row: usize },

    #[error("coercivity violated at cell {cell}: kappa={kappa}")]
    CoercivityViolation { cell: usize, kappa: f64 },

    #[error("length mismatch: expected {expected}, found {found}")]
    LengthMismatch { expected: usize, found: usize },

    #[error("solution diverged at t={t}: max depth {max_depth}")]
    Diverged { t: f64, max_depth: f64 },

    #[error("zero L1 norm of the numerical solution")]
    ZeroNorm,

    #[error("no undular bore found")]
    NoBoreFound,
}

pub type Result<T> = std::result::Result<T, SolverError>;
