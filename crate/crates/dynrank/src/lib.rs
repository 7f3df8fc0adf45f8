//! Incremental linear algebra and the dynamic graph queries it pays for.
//!
//! The core maintains the rank of an integer matrix under single-entry
//! changes: one [`basis::GoodBasisState`] per prime in a sound prime set,
//! glued together by [`intmatrix::IntMatrixTracker`], whose rank over the
//! rationals is the maximum of the per-prime ranks. On top of that sit
//! trackers that reduce dynamic graph questions to rank questions:
//! s-t reachability ([`reach`]), 2-SAT and regular path queries
//! ([`queries`]), and randomized maximum matching ([`matching`]).
//! [`oracle`] holds the deliberately naive reference implementations the
//! test suites diff against.

pub mod basis;
pub mod intmatrix;
pub mod matching;
pub mod modp;
pub mod oracle;
pub mod queries;
pub mod reach;

pub use basis::GoodBasisState;
pub use intmatrix::IntMatrixTracker;
pub use matching::MatchingTracker;
pub use modp::{Prime, PrimeMode, PrimeSet};
pub use queries::{Lit, Nfa, RpqTracker, TwoSatTracker};
pub use reach::{AllPairsReach, ReachTracker};

/// Errors surfaced by tracker operations on bad input.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    IndexOutOfRange {
        what: &'static str,
        index: usize,
        limit: usize,
    },
    /// The prime set was sized for a declared entry bound; a larger entry
    /// would silently break rank lifting, so it is rejected instead.
    EntryExceedsBound {
        value: i64,
        bound: i64,
    },
    SelfLoop {
        node: usize,
    },
}

impl std::fmt::Display for Error {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Error::IndexOutOfRange { what, index, limit } => {
                write!(f, "{what} index {index} out of range (limit {limit})")
            }
            Error::EntryExceedsBound { value, bound } => {
                write!(f, "entry {value} exceeds declared bound {bound}")
            }
            Error::SelfLoop { node } => write!(f, "self-loops excluded (node {node})"),
        }
    }
}

impl std::error::Error for Error {}

pub type Result<T> = std::result::Result<T, Error>;
