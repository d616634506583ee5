//! Extremal graph theory workbench.
//!
//! The crate is organized around a bit-packed [`graph::Graph`] substrate:
//!
//! * [`gf`] — prime-field arithmetic, quadratic characters, Weil sums;
//! * [`constructions`] — algebraic triangle-free `K_{2,t}`-free graphs over
//!   prime fields, plus the projective-plane incidence baseline;
//! * [`detect`] — forbidden-subgraph detectors and counters (triangles,
//!   cycles, `K_{s,t}`, books, 4-cycle counts) with verifiable witnesses;
//! * [`turan`] — exact small-instance Turán and Zarankiewicz numbers by
//!   pruned exhaustive search;
//! * [`regularity`] — sparse `(eps, p)`-regularity machinery: energy
//!   functions, witness-driven refinement, cluster graphs;
//! * [`bounds`] — closed-form bound calculators and constructive procedures
//!   (stability dichotomy, local max-cut, layered odd-cycle finder);
//! * [`report`] — run configuration and JSON/CSV report emission.

pub mod bounds;
pub mod constructions;
pub mod detect;
pub mod gf;
pub mod graph;
pub mod graph6;
pub mod regularity;
pub mod report;
pub mod turan;

use thiserror::Error;

/// Crate-wide error type. The variants map onto the CLI exit-code contract:
/// domain/parse errors exit 1, budget exhaustion exits 2, internal invariant
/// failures exit 3.
#[derive(Debug, Error)]
pub enum Error {
    /// A precondition on the operation's inputs was violated.
    #[error("domain error: {0}")]
    Domain(String),
    /// A node/trial budget ran out before the computation finished.
    #[error("budget exhausted: {0}")]
    Budget(String),
    /// An internal invariant failed; indicates a bug, not bad input.
    #[error("internal invariant violated: {0}")]
    Internal(String),
    /// Malformed input data (graph6, edge lists, JSON).
    #[error("parse error: {0}")]
    Parse(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Process exit code for this error under the CLI contract.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Domain(_) | Error::Parse(_) | Error::Io(_) => 1,
            Error::Budget(_) => 2,
            Error::Internal(_) => 3,
        }
    }
}
