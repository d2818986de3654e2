//! Exact counting of hypercube decompositions and natural exact covering
//! systems.
//!
//! Decompositions of `(0,1)^d` built by repeatedly cutting a box into `p`
//! equal slabs along one axis are counted by the compositional inverse of
//! the series `M_d(z) = sum mu_d(n) z^n`, where `mu_d` is the `d`-fold
//! Dirichlet self-convolution of the Moebius function. This crate provides
//! the exact series machinery, brute-force enumerators that serve as
//! independent oracles, the bijection with natural exact covering systems,
//! the signed prime-sequence model of the coefficients of `z / M_d(z)`,
//! labelled plane trees, lcm-indexed counts and the saddle-point growth
//! constants.
//!
//! The crate is `no_std` and only needs `alloc`.

#![cfg_attr(not(test), no_std)]
// indexed loops mirror the coefficient recurrences
#![allow(clippy::needless_range_loop)]

extern crate alloc;

pub mod asymptotics;
pub mod covering;
mod error;
pub mod fraction;
pub mod geometry;
pub mod lcm_counts;
pub mod number_theory;
pub mod prime_sequences;
pub mod series;
pub mod trees;

pub use error::{Error, Result};
pub use fraction::Fraction;
pub use geometry::{Decomposition, Region};
pub use series::TruncatedSeries;
