//! Analogue quantum associative memory.
//!
//! States of a finite quantum register are dense complex vectors taken up to
//! a nonzero scalar (rays). On top of that arithmetic the crate provides:
//!
//! - [`measurement`]: projective measurements with Born-rule sampling, rank-1
//!   filters and sequential filter chains;
//! - [`patterns`]: recognition by "number of the most activated channel" over
//!   a bank of stored pattern rays, deterministically, by a single
//!   measurement, or from many copies of the signal;
//! - [`aaam`]: auto-associative error correction by orthogonal projection onto
//!   the span of stored images;
//! - [`stats`]: the `N^{-1/2}` decay of overlaps between random rays, and Gram
//!   diagnostics;
//! - [`pgm`] and [`store`]: graymap ingestion and text persistence.
//!
//! Every stochastic routine takes an explicit generator, see [`rng`].

pub mod aaam;
pub mod error;
pub mod hilbert;
pub mod measurement;
pub mod patterns;
pub mod pgm;
pub mod rng;
pub mod stats;
pub mod store;
pub mod unitary;

pub use error::{QamError, Result};
pub use hilbert::{
    inner_product, norm, normalize, random_unit_vector, ray_equal, transition_probability, Field,
    StateVector, UnitState,
};
