//! Construction and verification toolkit for entanglement-assisted
//! quantum convolutional codes.
//!
//! The library takes a full-rank quantum check matrix over binary Laurent
//! polynomials (or a classical GF(4) convolutional generator), synthesizes
//! a periodic encoder/decoder that realizes its error-correcting
//! properties with the help of shared ebits, computes the `[[n,k;c]]`
//! code parameters, constructs the superdense-coding piggyback operators
//! on the extra-entanglement generators, and re-checks every commutation
//! and recovery claim with a finite-window brute-force oracle.
//!
//! Pipeline at a glance:
//!
//! 1. [`gf4`] imports a quaternary generator as a check matrix.
//! 2. [`construction`] runs the decomposition and builds the encoder.
//! 3. [`enhance`] adds the classical piggyback operators.
//! 4. [`oracle`] unrolls everything to concrete Pauli strings and
//!    verifies the symbolic claims over a finite window.
//!
//! All types are immutable values or locally owned state; everything is
//! safe to use from multiple threads.

pub mod check;
pub mod cli;
pub mod construction;
pub mod enhance;
pub mod gf4;
pub mod hermite;
pub mod laurent;
pub mod matrix;
pub mod oracle;
pub mod ratfunc;
pub mod report;
pub mod smith;

pub use check::{CheckMatrix, GateOp, RatCheckMatrix, TrackedPair};
pub use construction::{assemble_encoder, ConstructConfig, EncoderArtifact};
pub use laurent::LaurentPoly;
pub use matrix::{Matrix, PolyMatrix, RatMatrix};
pub use ratfunc::RationalFunc;
