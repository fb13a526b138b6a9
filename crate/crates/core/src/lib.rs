#![no_std]
#![forbid(unsafe_code)]
// `num_traits::Float` goes unused whenever std is linked into the build.
#![allow(unused_imports)]
//! Covering numbers of symmetric convex bodies and the duality of metric entropy.
//!
//! Bodies are oracle trees ([`Body`]) answering support, gauge and membership
//! queries. On top of those oracles the crate computes two-sided covering
//! number bounds ([`covering`]), the mean-width and sequence functionals used
//! by the duality argument ([`functionals`]), the executable pieces of the
//! constructive proofs ([`constructions`]) and the experiment drivers that
//! compare the staircases of `(K, D)` and `(D, K°)` ([`lab`]).
//!
//! Everything here is `no_std` + `alloc` and deterministic for a fixed seed.
//! File formats, parallel batch runners and the command line live in the
//! companion `entropy-lab` crate.

extern crate alloc;

pub mod body;
pub mod constructions;
pub mod covering;
mod error;
pub mod functionals;
pub mod lab;
mod linalg;
pub mod lp;
pub mod rng;
mod tolerance;
mod vector;

pub use body::{Body, BodyKind, Support};
pub use error::Error;
pub use tolerance::OracleTolerance;
pub use vector::Vector;

/// Absolute guard added to separation thresholds so boundary ties never count
/// as separated.
pub const SEPARATION_GUARD: f64 = 1e-12;

pub type Result<T, E = Error> = core::result::Result<T, E>;
