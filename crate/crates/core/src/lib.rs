//! Character varieties of free groups, numerically.
//!
//! Representations of the free group `F_r` into `SU(n)` or `SL(n, ℂ)` are
//! tuples of matrices ([`groups::RepTuple`]). The crate provides
//!
//! * the polar deformation retraction of `SL(n, ℂ)` onto `SU(n)`, applied to
//!   tuples ([`retraction`]),
//! * trace coordinates for `SU(2)²`, `SU(2)³` and `SU(3)²` ([`invariants`]),
//! * semi-algebraic membership tests for their images ([`semialgebraic`]),
//! * lifts from coordinates back to matrices and a unitary conjugacy test
//!   ([`reconstruct`]),
//! * the Kempf–Ness functional and its descent flow ([`kempfness`]),
//! * exact Poincaré polynomials of `SL(2, ℂ)` character varieties
//!   ([`poincare`]).

pub mod error;
pub mod groups;
pub mod invariants;
pub mod kempfness;
pub mod linalg;
pub mod poincare;
pub mod reconstruct;
pub mod retraction;
pub mod semialgebraic;

pub use error::{Error, Result};
pub use groups::{Family, GroupDescriptor, RepTuple};
pub use linalg::{CMat, C64, DEFAULT_TOL};
