//! Generalized A_r quantum statistics.
//!
//! The algebra is generated by `2r` Jacobson operators `a_i^±` obeying triple
//! (not bilinear) relations with a sector sign `s = ±1`. This crate builds
//!
//! * the Fock representation of both sectors as sparse real matrices
//!   ([`fock`], [`sparse`]),
//! * commutator calculus and residual checks of the defining identities
//!   ([`algebra`]),
//! * the three analytic (Bargmann) realizations as differential operators on
//!   polynomials ([`poly`], [`bargmann`]),
//! * the associated coherent-state families ([`coherent`]),
//! * quadrature certificates of the inner-product measures ([`measures`],
//!   [`quadrature`], [`bessel`]).
//!
//! Everything is `no_std` with `alloc`; IO, reports and the command line live
//! in the companion `arstat` crate.
//!
//! Mode indices are zero-based throughout (`0..r`).

#![no_std]
// `!(x > 0.0)` style guards are used on purpose so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod algebra;
pub mod bargmann;
pub mod bessel;
pub mod coherent;
mod error;
mod exact;
pub mod fock;
pub mod measures;
mod params;
pub mod poly;
pub mod quadrature;
pub mod sparse;

pub use error::{Error, Result};
pub use params::{OccupationVector, Sector, SectorParams};

pub use algebra::VerificationReport;
pub use fock::FockBasis;
pub use poly::MultiPoly;
pub use sparse::SparseOperator;
