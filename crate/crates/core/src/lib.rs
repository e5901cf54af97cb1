//! Exact computational kernels for Hochschild, cyclic and periodic cyclic
//! homology of finite-dimensional algebras, twisted cohomology of finite
//! graded-commutative models, Chern characters and the Čech
//! Dixmier–Douady pipeline.
//!
//! Everything is computed over the rationals (or the integers, for Čech
//! classes); there is no floating point anywhere in this crate. The crate is
//! `no_std` and only needs `alloc`.

#![no_std]
#![forbid(unsafe_code)]
#![allow(clippy::needless_range_loop)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod algebra;
pub mod cdga;
pub mod chern;
pub mod complex;
pub mod cyclic;
pub mod dd;
mod error;
pub mod linalg;

pub use error::{Error, Result};
pub use linalg::{Rational, SparseMatrix};
