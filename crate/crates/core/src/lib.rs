//! Degrees-of-freedom bounds for band-limited wavefields observed over a
//! sphere of radius `R` for a time `T`, plus a brute-force simulation engine
//! that checks each ingredient of the bound numerically.

pub mod cli;
pub mod dofcore;
pub mod error;
pub mod integrate;
pub mod sampling;
pub mod simulation;
pub mod specfun;
pub mod verify;
pub mod wavefield;

pub use error::{Error, Result};
