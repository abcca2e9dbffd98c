//! Random-matrix models for low-lying zeros of elliptic-curve L-functions:
//! orthogonal-group sampling, hard-edge kernels and Fredholm determinants,
//! the statistics used to compare families, and elliptic-curve data
//! handling.

pub mod ecdata;
pub mod ensembles;
pub mod error;
pub mod fredholm;
pub mod histogram;
pub mod kernels;
pub mod quadrature;
pub mod stats;

pub use error::{Error, Result};
