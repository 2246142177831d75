//! Scaled Hermite-function approximation on the real line.
#![cfg_attr(not(feature = "std"), no_std)]
// `!(x > 0.0)` rejects NaN along with non-positive values
#![allow(clippy::neg_cmp_op_on_partial_ord)]
// rule tables keep their published digits
#![allow(clippy::excessive_precision)]
#![allow(clippy::needless_range_loop)]

extern crate alloc;

pub mod basis;
pub mod error;
pub mod experiment;
pub mod fourier;
pub mod galerkin;
pub mod integrate;
pub mod linalg;
pub mod operators;
pub mod quadrature;
pub mod roots;
pub mod special;

pub use error::{Error, Result};
