use thiserror::Error;

/// Errors produced by the oscillator, degeneracy and reduction routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A deformation parameter fell outside (0, 1].
    #[error("deformation point (q={q}, p={p}) outside (0,1]x(0,1]")]
    InvalidPoint { q: f64, p: f64 },

    /// A caller supplied an argument that violates a precondition.
    #[error("invalid argument: {0}")]
    Argument(String),

    /// The level pair E_0 = E_1 can never be degenerate.
    #[error("level pair (n=0, k=1) is excluded: E_0 = E_1 has no solution")]
    ExcludedPair,

    #[error("not applicable: {0}")]
    NotApplicable(String),

    /// A value lies outside the range on which an inversion is defined.
    #[error("p={p} outside admissible range [{min}, {max}] of the {kind} relation (p_min={min})")]
    OutOfRange {
        kind: &'static str,
        p: f64,
        min: f64,
        max: f64,
    },

    #[error("degenerate fit: {0}")]
    DegenerateFit(String),

    #[error("fit infeasible: {0}")]
    FitInfeasible(String),

    #[error("i/o or format error: {0}")]
    Format(String),
}

impl Error {
    /// True for errors caused by malformed input rather than numerical domain.
    pub fn is_argument(&self) -> bool {
        matches!(self, Error::Argument(_) | Error::ExcludedPair)
    }
}

pub type Result<T> = std::result::Result<T, Error>;
