//! Polynomials orthonormal with respect to area measure over the interior
//! of an analytic Jordan curve.
//!
//! The crate computes these polynomials exactly where closed forms exist
//! (disks, and the `|z^s − 1| = R^s` lemniscate family on the degree lane
//! `n ≡ s−1 (mod s)`), numerically elsewhere through two independent
//! engines, and evaluates the classical interior/exterior asymptotic models
//! against them: the strong exterior asymptotics, a contour-integral
//! representation valid inside the curve, corner-driven leading terms, and
//! the limiting behavior of the zero counting measures.
//!
//! See the `book/` guide at the repository root for a narrative tour; its
//! code snippets compile as doctests of this crate.

pub mod error;
pub mod scalar;
pub mod special;

pub use error::{Error, Result};
pub use scalar::Cx;
