#![no_std]

extern crate alloc;

pub mod combinatorics;
pub mod error;
pub mod euler;
pub mod moments;
pub mod optimize;
pub mod poly;
pub mod ratio;
pub mod rational;
pub mod real;

pub use error::{Error, Result};
pub use num_bigint;
