//! Search and verification engine for zero-sum sequences over finite abelian
//! groups of rank at most two.
//!
//! The crate is organised bottom-up:
//!
//! * [`group`] — arithmetic, bases, automorphisms and subset algebra for
//!   `C_{n1} ⊕ C_{n2}`;
//! * [`sequence`] — multiset sequences over a group and their k-term subsum
//!   sets, computed by a layered bit-indicator DP;
//! * [`zerosum`] — zero-sum / zero-sum-free / minimal-zero-sum predicates and
//!   witness extraction;
//! * [`search`] — canonical enumeration up to automorphism and the Davenport
//!   and eta constants by exhaustive search;
//! * [`structure`] — the basis-form family Υ, Properties B and C, and the
//!   two-form classification of maximal-length minimal zero-sum sequences;
//! * [`decomposition`] — product decompositions under the multiplication-by-m
//!   map, block classification, and the three swap moves plus pull-up;
//! * [`verification`] — exhaustive desk-scale checks of the supporting
//!   theorems (EGZ, a subsum lower bound, exchange and perturbation lemmas);
//! * [`report`] — machine-readable check reports.

pub mod group;
pub mod report;
pub mod sequence;
pub mod zerosum;
pub mod search;
pub mod structure;
pub mod decomposition;
pub mod verification;

use thiserror::Error;

/// Crate-wide error type. Each variant corresponds to one of the failure
/// modes named in the module contracts.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Group construction with `n1` not dividing `n2` (or `n1 < 1`).
    #[error("divisibility violated: n1 = {n1} must be >= 1 and divide n2 = {n2}")]
    Divisibility { n1: u64, n2: u64 },
    /// An operation mixed values from two different groups.
    #[error("group mismatch: {0}")]
    GroupMismatch(String),
    /// A configured cap (group size, automorphism table, search nodes) was hit.
    #[error("cap exceeded: {0}")]
    CapExceeded(String),
    /// Set algebra on an empty operand.
    #[error("empty set passed to {0}")]
    EmptySet(&'static str),
    /// Text could not be parsed; `pos` is a byte offset into the input.
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    /// A group did not have the required shape `C_{mn} ⊕ C_{mn}`.
    #[error("shape error: {0}")]
    Shape(String),
    /// A sequence had the wrong length for the requested classification.
    #[error("length error: expected length {expected}, got {got}")]
    Length { expected: usize, got: usize },
    /// Supplied bases do not satisfy the decomposition-context constraints.
    #[error("normalization error: {0}")]
    Normalization(String),
    /// A swap request violated one of its kind-specific preconditions.
    #[error("precondition violated: {0}")]
    Precondition(String),
    /// A term outside the domain of a partial map (for example `ι`).
    #[error("domain error: {0}")]
    Domain(String),
}

pub type Result<T> = std::result::Result<T, Error>;
