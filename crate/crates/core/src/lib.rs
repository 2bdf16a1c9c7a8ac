//! Fixed-point iteration laboratory.
//!
//! * [`space`]: `R^d` with `l_p` norms and the normalized duality mapping.
//! * [`operator`] and [`classes`]: self-maps, their powers, and horizon-bounded
//!   checkers for Lipschitz, uniformly Lipschitz, asymptotically pseudocontractive
//!   and fixed-point-penalty conditions.
//! * [`scheme`]: the multi-step Mann-type iteration with step-size schedules and
//!   per-step diagnostics.
//! * [`counterexample`]: exact rational verification of the doubling counterexample.
//!
//! The crate is `no_std` and only needs `alloc`.
#![no_std]

extern crate alloc;

pub mod classes;
pub mod counterexample;
pub mod error;
pub mod operator;
pub mod sampling;
pub mod scheme;
pub mod space;

pub use error::{Error, Result, Stage};
pub use operator::{OperatorKind, OperatorSpec};
pub use space::{DualVector, NormTag, Point};
