use thiserror::Error;

/// Errors surfaced by the library. Internal consistency failures (two exact
/// computation routes disagreeing) are panics, not errors: they signal a bug,
/// never a property of the input.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("point set is empty")]
    EmptyPointSet,

    #[error("points span an affine space of dimension {found}, expected {expected}")]
    NotFullDimensional { found: usize, expected: usize },

    #[error("degenerate input: need at least two distinct points")]
    DegenerateInput,

    #[error("matrix is rank-deficient: rank {rank} < {cols} columns")]
    RankDeficient { rank: usize, cols: usize },

    #[error("matrix shape {rows}x{cols} is not square")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix shapes {0}x{1} and {2}x{3} are incompatible")]
    ShapeMismatch(usize, usize, usize, usize),

    #[error("ambient dimensions differ: {0} vs {1}")]
    DimensionMismatch(usize, usize),

    #[error("canonical form is only defined for simplices and polytopes of dimension <= 2")]
    UnsupportedClass,

    #[error("family {family} requires {constraint}")]
    BadParams {
        family: &'static str,
        constraint: String,
    },

    #[error("kappa exceeds the search cap {cap}: the step check still fails at k = {cap}")]
    KappaExceedsCap { cap: usize },

    #[error("polytope is not an equality case of the main inequality")]
    NotAnEqualityCase,

    #[error("enumeration guardrail exceeded: {0}")]
    GuardrailExceeded(String),

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;
