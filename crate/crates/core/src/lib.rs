//! Continuous g-frames over finite weighted atomic measure spaces.
//!
//! A family assigns each atom of a [`MeasureSpace`] a matrix `Λ_i : H → K_i`.
//! [`analysis`] computes frame operators, bounds and duals, [`disjoint`]
//! relates two families through their analysis ranges, [`riesz`] decides
//! Riesz-type questions, and [`construct`] builds new frames from pairs.
//! The guide under `book/` walks through each module with tested examples.

pub mod analysis;
pub mod cli;
pub mod construct;
pub mod disjoint;
pub mod document;
pub mod error;
pub mod linalg;
pub mod model;
pub mod random;
pub mod report;
pub mod riesz;
pub mod verify;

pub use error::{Error, Result};
pub use model::{GFrameFamily, KHatVector, MeasureSpace, TolerancePolicy};

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/introduction.md")]
mod book_introduction {}

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/measure-spaces.md")]
mod book_measure_spaces {}

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/frame-operator.md")]
mod book_frame_operator {}

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/duals.md")]
mod book_duals {}

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/disjointness.md")]
mod book_disjointness {}

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/riesz-type.md")]
mod book_riesz_type {}

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/constructions.md")]
mod book_constructions {}

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/cli.md")]
mod book_cli {}

#[cfg(doctest)]
#[doc = include_str!("../../../README.md")]
mod readme {}
