//! Crate-wide error type.

use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// Domain exceeds the desk-scale guard of 16 bits.
    DomainTooLarge { bits: u32 },
    /// A probability vector is not a valid distribution (negative entry,
    /// entry above one, or mass not exactly one).
    InvalidDist(String),
    /// Two objects that must share a domain do not.
    DomainMismatch,
    /// Conditioning on a z-value with zero mass.
    ZeroMassCondition { z: usize },
    /// A joint whose entire support is empty.
    DegenerateSupport,
    /// DSL syntax or arity error, with byte position.
    Parse { pos: usize, msg: String },
    /// Circuit enumeration guard (size or arity) violated.
    EnumerationGuard(String),
    /// Circuit enumeration exceeded its work budget.
    EnumerationBudget,
    /// Convex-combination weights are negative or do not sum to one.
    BadWeights,
    /// Two joints compared per-z do not share the same Z-marginal.
    ZMarginalMismatch,
    /// A max-probability cap outside [2^-n, 1].
    CapOutOfRange,
    /// LP instance exceeds the variable guard.
    LpBudgetExceeded { vars: usize },
    /// A class required to be complement-closed is not.
    NonClosedClass,
    /// A witness construction found its stated precondition violated.
    InfeasibleWitness(String),
    /// A reduction's hypothesis check failed; carries a description of the
    /// violating object.
    PreconditionFailed(String),
    /// The modulus hypothesis was not violated, so the core-lemma event
    /// construction does not apply.
    HypothesisNotViolated,
    /// Sample count from the 64/eps^2 formula exceeds the desk-scale guard.
    LTooLarge { l: u128 },
    /// No threshold achieves the required gap (precondition violated).
    NoThreshold,
    /// Degenerate delta parameter (must lie in (0, 1]).
    BadDelta,
    /// Unknown verification suite id.
    UnknownSuite(String),
    /// Malformed or semantically invalid scenario input.
    Scenario(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::DomainTooLarge { bits } => {
                write!(f, "domain of {bits} bits exceeds the 16-bit guard")
            }
            Error::InvalidDist(msg) => write!(f, "invalid distribution: {msg}"),
            Error::DomainMismatch => write!(f, "domain mismatch"),
            Error::ZeroMassCondition { z } => {
                write!(f, "conditioning on zero-mass z-value {z}")
            }
            Error::DegenerateSupport => write!(f, "joint has empty support"),
            Error::Parse { pos, msg } => write!(f, "parse error at byte {pos}: {msg}"),
            Error::EnumerationGuard(msg) => write!(f, "enumeration guard: {msg}"),
            Error::EnumerationBudget => write!(f, "enumeration work budget exceeded"),
            Error::BadWeights => write!(f, "weights must be nonnegative and sum to one"),
            Error::ZMarginalMismatch => {
                write!(f, "joints do not share the same Z-marginal")
            }
            Error::CapOutOfRange => write!(f, "cap outside [2^-n, 1]"),
            Error::LpBudgetExceeded { vars } => {
                write!(f, "LP with {vars} variables exceeds the guard")
            }
            Error::NonClosedClass => write!(f, "class is not complement-closed"),
            Error::InfeasibleWitness(msg) => write!(f, "infeasible witness: {msg}"),
            Error::PreconditionFailed(msg) => write!(f, "precondition failed: {msg}"),
            Error::HypothesisNotViolated => {
                write!(f, "modulus hypothesis is not violated for this input")
            }
            Error::LTooLarge { l } => write!(f, "sample count {l} exceeds the guard"),
            Error::NoThreshold => write!(f, "no threshold achieves the required gap"),
            Error::BadDelta => write!(f, "delta must lie in (0, 1]"),
            Error::UnknownSuite(id) => write!(f, "unknown suite id: {id}"),
            Error::Scenario(msg) => write!(f, "scenario: {msg}"),
        }
    }
}

impl std::error::Error for Error {}

pub type Result<T> = std::result::Result<T, Error>;
