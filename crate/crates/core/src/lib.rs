//! Exact Fourier-Motzkin elimination for linear inequality systems whose
//! right-hand sides carry symbolic constants.
//!
//! The crate is organised bottom-up:
//!
//! * [`lincore`]: rationals, linear expressions, canonical inequalities,
//!   systems and the text DSL.
//! * [`fme`]: single-variable elimination with a full combination log, and
//!   multi-variable projection.
//! * [`implication`]: exact simplex, implication tests with Farkas
//!   certificates, redundancy pruning and system equivalence.
//! * [`rankfacts`]: the shipped MIMO interference-channel fixtures (stage
//!   systems and rank facts).
//! * [`oracle`]: random integer channel instances used as numeric ground
//!   truth for the symbolic derivation.
//! * [`cli`]: the `fmelim` command-line front end.

pub mod cli;
pub mod error;
pub mod fme;
pub mod implication;
pub mod lincore;
pub mod oracle;
pub mod rankfacts;

pub use error::{DslError, DslErrorKind, Error, Result};
pub use fme::{eliminate, project, EliminationLog, Projection, PrunePolicy};
pub use implication::{
    is_implied, lp_max, prune, systems_equivalent, verify_certificate, FactSet, FarkasCertificate,
    Implication, LpOutcome,
};
pub use lincore::{
    parse_system, serialize_system, Inequality, InequalitySystem, LinearExpression, Rational,
    SymbolKind, SymbolTable,
};
