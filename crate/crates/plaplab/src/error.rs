use thiserror::Error;

/// Crate-wide error type. Variants map onto the CLI exit codes:
/// configuration and geometry problems exit with 1, numerical
/// failures (blow-up, monotonicity abort) with 2.
#[derive(Debug, Error)]
pub enum Error {
    #[error("configuration error: {0}")]
    Config(String),

    #[error("degenerate gradient: eps = 0 and q = 0; the viscosity rule applies, use eps > 0")]
    DegenerateGradient,

    #[error("one-sided node {node:?}: central stencil leaves the box")]
    OneSidedNode { node: [usize; 3] },

    #[error("empty cylinder: no grid nodes inside")]
    EmptyCylinder,

    #[error("mismatched grids: {0}")]
    GridMismatch(String),

    #[error("estimator: {0}")]
    Estimator(String),

    #[error("blow-up: non-finite value at node {node:?}, level {level}")]
    BlowUp { node: [usize; 3], level: usize },

    #[error("non-monotone stencil at node {node:?} (p = {p}, grad = {grad:?})")]
    NonMonotoneStencil {
        node: [usize; 3],
        p: f64,
        grad: [f64; 3],
    },

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    /// CLI exit code: 1 for validation problems, 2 for numerical failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::BlowUp { .. } | Error::NonMonotoneStencil { .. } => 2,
            _ => 1,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
