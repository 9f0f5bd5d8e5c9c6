//! Pseudospectral solvers and numerical inequality checks for the fractional
//! cubic Schrödinger family on the torus `𝕋 = ℝ/2πℤ`.

// `!(x > 0.0)` is used on purpose so NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod dispersion;
pub mod dynamics;
pub mod energies;
pub mod error;
pub mod experiment;
mod fft;
pub mod inequality;
pub mod initial;
pub mod record;
pub mod torus;

pub use dynamics::{evolve, EvolutionSpec, PairField, Sampling, State};
pub use error::{Error, Result};
pub use fft::smooth_size;
pub use record::TrajectoryRecord;
pub use torus::TorusField;
