//! Numerical integral geometry on affine and compact Grassmannians.
//!
//! The crate evaluates k-plane and (j,k)-plane Radon transforms, their
//! Funk-type counterparts on spheres and Grassmannians, the sharp constants
//! of the associated weighted and unweighted norm inequalities, and the
//! dual volume functionals of star sets. Every estimator is driven by
//! counter-based random streams, so results are a pure function of the seed
//! and do not depend on how sample blocks are scheduled across workers.
//!
//! The crate is `no_std` and only requires `alloc`. Parallel execution, IO
//! and file formats live in the companion CLI crate, which plugs a thread
//! pool in through [`montecarlo::Executor`].

#![no_std]
#![deny(unsafe_code)]
// Negated float comparisons are used on purpose so that NaN fails the test.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod error;
pub mod fields;
pub mod functionals;
pub mod grassmann;
pub mod harness;
pub mod linalg;
pub mod montecarlo;
pub mod quadrature;
pub mod rng;
pub mod special;
pub mod transforms;

pub use error::{Error, Result};
pub use montecarlo::{Estimate, Executor, Sequential};
