use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("undefined root count: the zero polynomial has no finite root set")]
    UndefinedRootCount,

    #[error("complex roots present")]
    ComplexRoots,

    #[error("degree {degree} exceeds the allowed bound {bound}")]
    DegreeTooLarge { degree: usize, bound: usize },

    #[error("{what} = {value} exceeds the cap {cap}; {hint}")]
    CapExceeded {
        what: &'static str,
        value: u128,
        cap: u128,
        hint: &'static str,
    },

    #[error("matrix does not have a unit diagonal (row {row})")]
    NonUnitDiagonal { row: usize },

    #[error("matrix is not totally nonnegative: {0}")]
    NotTotallyNonnegative(String),

    #[error("shift required: f(0) = 0, divide out the x^N factor before building the family")]
    ShiftRequired,

    #[error("poset is not quasi-rank uniform: elements {x} and {y} share quasi-rank {rank} but differ at rank {at}")]
    NonUniform { x: usize, y: usize, rank: usize, at: usize },

    #[error("poset is not a combinatorial P-poset: the ideal below element {element} does not match the family")]
    NotCombinatorial { element: usize },

    #[error("not a cubical f-polynomial: (1+t) does not divide the Adin right-hand side")]
    NotCubicalFPolynomial,

    #[error("degenerate basis: {0}")]
    DegenerateBasis(String),

    #[error("poset is not pure: {0}")]
    NotPure(String),

    #[error("library invariant violated: {0}")]
    InvariantViolation(String),
}

impl Error {
    /// True when the input was well formed but fails a mathematical property
    /// (not TN, not uniform, not combinatorial, ...), as opposed to bad input.
    pub fn is_mathematical_failure(&self) -> bool {
        matches!(
            self,
            Error::ComplexRoots
                | Error::NotTotallyNonnegative(_)
                | Error::NonUniform { .. }
                | Error::NotCombinatorial { .. }
                | Error::NotCubicalFPolynomial
                | Error::NotPure(_)
                | Error::InvariantViolation(_)
        )
    }
}

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidInput(msg.into())
}
