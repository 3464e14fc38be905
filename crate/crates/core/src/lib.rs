//! Perturbation construction of integer sequences that stay universally
//! good for one Orlicz space while sweeping out in a larger one, together
//! with finite-scale checks of every inequality the construction relies on.
//!
//! The crate is `no_std` (it needs `alloc`). File formats, the CLI and
//! reporting live in the `sweepout` companion crate.
//!
//! Module map:
//!
//! * [`gauge`]: Orlicz gauges `φ`, Young functionals and the modular integral.
//! * [`base_sequence`]: zero-density base sequences with exact counting.
//! * [`schedule`]: block partition `A_u` and the functions `M`, `R`, `g`.
//! * [`construction`]: interval selection and the perturbed sequence `Δ`.
//! * [`density`]: the upper density functional on lattice functions.
//! * [`averages`]: ergodic averages along sequences and the sweep-out witness.
//! * [`series_bounds`]: term-wise and partial-sum checks of the goodness series.
//! * [`extrapolation`]: a step-by-step tracer for the Yano-type extrapolation.
#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod averages;
pub mod base_sequence;
pub mod bigmath;
pub mod construction;
pub mod density;
mod error;
pub mod extrapolation;
pub mod gauge;
pub mod real;
pub mod schedule;
pub mod series_bounds;
pub mod step;

pub use error::{Error, Result};
