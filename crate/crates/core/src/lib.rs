//! Continuous weak-measurement tomography driven by the quantum kicked top.

pub mod basis;
pub mod chaos;
pub mod dynamics;
pub mod error;
pub mod experiment;
pub mod linalg;
pub mod spin;
pub mod tomography;

pub use error::{Error, Result};


#[cfg(doctest)]
#[doc = include_str!("../../../book/src/introduction.md")]
mod book_introduction {}

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/spin-algebra.md")]
mod book_spin_algebra {}

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/kicked-top.md")]
mod book_kicked_top {}

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/tomography.md")]
mod book_tomography {}

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/chaos-metrics.md")]
mod book_chaos_metrics {}

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/experiments.md")]
mod book_experiments {}
