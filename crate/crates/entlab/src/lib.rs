//! entlab: an exact, desk-scale laboratory for computational entropy.
//!
//! The crate computes min-, Metric-, HILL-, modulus-, and decomposable
//! entropy of small finite distributions against explicit distinguisher
//! classes, builds the constructive reductions between those notions, and
//! machine-verifies each conversion's inequality with exact rational
//! arithmetic. Domains are bitstring domains of at most 16 bits; every
//! probability and advantage is a `BigRational`, so verdicts carry no
//! tolerances.
//!
//! Module map:
//! - [`dist`]: distributions, joints, information-theoretic entropy.
//! - [`circuit`]: a boolean-circuit DSL with gate-count sizes and bounded
//!   class enumeration.
//! - [`distinguisher`]: \[0,1\]-valued distinguisher tables and the
//!   advantage algebra.
//! - [`entropy`]: decision procedures for every entropy notion (greedy
//!   waterfilling, exact-rational LP, multiplicative-weights boosting).
//! - [`reductions`]: the constructive witness builders and distinguisher
//!   transformers, each returning certified exact parameters.
//! - [`harness`]: scenario generation, verification suites, separation
//!   search.
//! - [`scenario`]: JSON formats for scenarios, verdicts, and reports.

pub mod circuit;
pub mod dist;
pub mod distinguisher;
pub mod entropy;
pub mod error;
pub mod harness;
pub mod rat;
pub mod reductions;
pub mod scenario;

pub use error::{Error, Result};
pub use rat::Rat;
