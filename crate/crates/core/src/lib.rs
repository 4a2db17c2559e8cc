//! Multidegree analysis and reduction of tame automorphisms of affine
//! 3-space over the rationals.

pub mod analysis;
pub mod cli;
pub mod complex;
pub mod error;
pub mod forms;
pub mod io;
pub mod linalg;
pub mod poly;
pub mod reduction;

pub use error::{Error, Result};
