//! Exact computer algebra for the W(2,2) and thin Lie algebras.
//!
//! Everything is computed over arbitrary-precision rationals; there is no
//! floating-point mode and every check in this crate is zero-tolerance.
//! The crate provides:
//!
//! * [`algebra`] — finitely supported elements of the two algebras and the
//!   bilinear bracket given by their structure constants;
//! * [`linalg`] — an exact sparse rational linear-system solver (particular
//!   solutions and nullspace bases);
//! * [`derivations`] — closed-form derivation objects, Leibniz checking and
//!   windowed derivation-space computation with inner/outer classification;
//! * [`two_local`] — 2-local derivation machinery: witness solving,
//!   homogeneity/additivity checkers, decomposition and classification;
//! * [`report`] — JSON report types shared by the checkers and the CLI;
//! * [`reproduce`] — the named verification cases exposed by the CLI.

pub mod algebra;
pub mod derivations;
mod error;
pub mod linalg;
pub mod rational;
pub mod report;
pub mod reproduce;
pub mod two_local;

pub use error::Error;
