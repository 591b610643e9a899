use thiserror::Error;

use crate::expr::ExprError;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FracError {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("contract violation: {0}")]
    Contract(String),
    #[error("grid too small: {nodes} nodes, at least {required} required")]
    GridTooSmall { nodes: usize, required: usize },
    #[error("refused: {0}")]
    Refused(String),
    #[error("picard iteration did not converge in {iterations} iterations (last increment {last_increment:e})")]
    IterationLimit {
        iterations: usize,
        last_increment: f64,
    },
    #[error("comparison solve failed for eps = {eps}: {source}")]
    ComparisonSolve {
        eps: f64,
        #[source]
        source: Box<FracError>,
    },
    #[error("set is not contained in c0: {0}")]
    NotInC0(String),
    #[error("index {n} outside the truncation range {lo}..={hi}")]
    Index { n: usize, lo: usize, hi: usize },
    #[error(transparent)]
    Expr(#[from] ExprError),
}

impl FracError {
    /// True for failures of the iteration itself rather than bad input.
    pub fn is_non_convergence(&self) -> bool {
        match self {
            FracError::IterationLimit { .. } => true,
            FracError::ComparisonSolve { source, .. } => source.is_non_convergence(),
            _ => false,
        }
    }
}

pub type Result<T, E = FracError> = std::result::Result<T, E>;
