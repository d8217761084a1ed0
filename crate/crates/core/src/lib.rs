//! Heteroclinic connections of double-well systems by direct minimization of
//! the action functional
//!
//! ```text
//!     J[x] = ∫ ( ½|ẋ(t)|² + a(εt)·Ṽ(x(t)) ) dt,     x(±∞) = ±1,
//! ```
//!
//! on a truncated window `[-T, T]` with the endpoints clamped to the wells.
//! `Ṽ` is a quadratic-growth modification of a double-well potential `V`
//! (wells at ±1) and `a` is a positive time-dependent coefficient.
//!
//! Module map:
//! - [`potential`]: double-well potentials, the modification `Ṽ`, well constants
//! - [`coefficient`]: coefficient families `a(t)` and window-based class checks
//! - [`trajectory`]: uniform grids, clamped paths, tail and transition reports
//! - [`action`]: the discrete action, its exact gradient, grid-norm diagnostics
//! - [`oracle`]: closed-form and integrated references for the autonomous case
//! - [`solver`]: descent minimization, solution verification, level estimates
//! - [`cli`]: JSON-configured command runner used by the `heteroclinic` binary

// Validation guards are written as `!(x > 0.0)` on purpose: unlike `x <= 0.0`
// they are also true for NaN, so one comparison rejects both bad signs and
// non-numbers.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod action;
pub mod cli;
pub mod coefficient;
pub mod oracle;
pub mod potential;
pub mod solver;
pub mod trajectory;

mod error;
mod tabfile;

pub use error::{Error, Result};
