use thiserror::Error;

use crate::action::Violation;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("modulus {0} is not a prime power")]
    InvalidModulus(u64),

    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("presentation violates {} constraint(s): {}", .0.len(), join_violations(.0))]
    InvalidPresentation(Vec<Violation>),

    #[error("p = {p} divides the root-of-unity order {n}")]
    NotCoprime { p: u64, n: u64 },

    #[error("character table does not give an integer multiplicity: {0}")]
    NonIntegerResult(String),

    #[error("induced action on the Frattini quotient fixes a subspace of dimension {0}")]
    NontrivialFixedSpace(usize),

    #[error("rank-one Frattini quotient for p = 2 admits no fixed-point-free p'-action")]
    InconsistentRankOne,

    #[error("cycle does not qualify: {0}")]
    NotQualifying(String),

    #[error("holonomy must be a nonzero field element")]
    HolonomyZero,

    #[error("search space of {size} exceeds the exhaustion cap {cap}")]
    SearchSpaceTooLarge { size: String, cap: String },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("internal assertion failed: {0}")]
    Internal(String),
}

fn join_violations(v: &[Violation]) -> String {
    v.iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join("; ")
}

impl Error {
    /// True for failures that signal a bug or an impossible input slipping
    /// past validation, as opposed to bad user input.
    pub fn is_internal(&self) -> bool {
        matches!(self, Error::Internal(_))
    }
}
