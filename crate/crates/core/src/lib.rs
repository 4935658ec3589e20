//! Determinantal representations of general plane curves.
//!
//! Given a homogeneous integer matrix `M` of degree `d`, a general form of
//! degree `d` in three variables may or may not be the determinant of a
//! matrix of forms whose entry degrees are `M`. This crate decides that
//! question, and the related one of which zero-dimensional schemes (by their
//! degree Hilbert-Burch matrix) lie on a general curve of degree `d`.
//!
//! - [`degmatrix`]: homogeneous integer matrices, well-ordering, minor degrees
//! - [`decide`]: the decision procedures
//! - [`resolution`]: Hilbert functions, h-vectors and Betti numbers
//! - [`series`]: linear series on general plane curves
//! - [`witness`]: randomized verification over a prime field

pub mod decide;
pub mod degmatrix;
pub mod resolution;
pub mod series;
pub mod witness;

pub use decide::{Decision, Reason, Verdict};
pub use degmatrix::{DegreeMatrix, DhbMatrix, WellOrderedSquare};
pub use resolution::{BettiData, HVector};
