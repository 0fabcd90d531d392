//! Exact symbolic engine for generalized Frobenius manifold structures on
//! the orbit spaces of affine Weyl groups.
//!
//! Pipeline: root system -> Weyl group -> invariant lambda-Fourier ring ->
//! basic/pencil generators -> flat pencil of metrics -> flat chart ->
//! Frobenius data (potential, unit and Euler fields) -> monodromy bound,
//! plus a numeric period-series module. All modules except `periods` work
//! over arbitrary-precision rationals or a declared quadratic extension.

pub mod arith;
pub mod error;
pub mod poly;
pub mod ratfn;
pub mod rootsys;
pub mod weylgroup;
pub mod lfourier;
pub mod invariants;
pub mod geometry;
pub mod solver;
pub mod pencil;
pub mod flatcoords;
pub mod frobenius;
pub mod monodromy;
pub mod periods;
pub mod textform;
pub mod catalog;
pub mod report;

pub use error::{Error, Result};
