//! Numerical laboratory for the eigenangle correlation kernels of
//! Haar-random matrices on the classical compact groups.
//!
//! The crate evaluates the determinantal kernels of the circular ensembles
//! and their bulk rescalings, discretizes the associated integral operators
//! on an interval, computes trace-class and Hilbert–Schmidt norms, derives
//! exact counting-number laws, samples Haar-distributed matrices for Monte
//! Carlo cross-checks, and measures how fast each ensemble's bulk counting
//! law approaches the sine process as the matrix size grows.

pub mod counting;
pub mod experiments;
pub mod haar;
pub mod kernels;
pub mod opcalc;
pub mod series;

mod error;

pub use error::Error;

pub type Result<T> = std::result::Result<T, Error>;
