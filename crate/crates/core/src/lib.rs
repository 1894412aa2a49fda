//! Uniqueness certificates for nonnegative and positive semidefinite solutions of
//! underdetermined linear systems.
//!
//! The vector case asks whether `{x : Ax = b, x >= 0}` is a single point, the matrix
//! case whether `{X : A(X) = b, X ⪰ 0}` is. The crate provides exact LP/SDP based
//! checks, randomized probes, expander-graph thresholds, eigenvalue conditions on
//! operator null spaces and a seeded experiment harness that maps the phase
//! transitions empirically.

pub mod ensembles;
pub mod error;
pub mod expander;
pub mod experiments;
pub mod linalg;
pub mod lp;
pub mod psd;
pub mod records;
pub mod sdp;
pub mod subsets;
pub mod vector;

pub use error::{Error, Result};
pub use linalg::{DenseMatrix, SvecCoords, SymMatrix};
