//! Section, maximal-section and projection functions of convex bodies of
//! revolution, together with the constructions of non-ball bodies whose
//! maximal sections are all equal and of essentially different pairs sharing
//! all three functionals.
//!
//! The crate is `no_std` and only needs an allocator. Everything here is a
//! pure function of immutable inputs; sweeps over slope grids go through the
//! [`GridMap`] trait so a caller with threads can run them in parallel.

#![no_std]

extern crate alloc;

pub mod body;
pub mod counterexamples;
mod error;
pub mod functionals;
pub mod grid;
pub mod profile;
pub mod solvers;

pub use body::{BodyOfRevolution, Chord};
pub use error::{Error, Result};
pub use functionals::MaxSectionResult;
pub use grid::{GridMap, Sequential, SlopeGrid};
pub use profile::{BumpTerm, Profile, Sign, SignedTerm};
pub use solvers::{Bracket, QuadratureOptions};

/// The slope at which the maximal chords of the near-ball bodies cross the
/// window boundary: a central chord of the unit ball with this slope ends at
/// abscissas ±3/4.
pub const REGIME_SLOPE: f64 = 0.881_917_103_688_196_9; // sqrt(7)/3
