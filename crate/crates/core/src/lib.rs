//! Distilling non-Markovianity from many copies of a qubit collisional
//! model.
//!
//! The crate is layered bottom-up: [`matcore`] (dense complex algebra),
//! [`channels`] (superoperators, Choi matrices, divisibility),
//! [`collisional`] (the two-collision dynamics), [`coarse`] (n-copy
//! coarse-graining maps), [`witness`] (distinguishability backflow and
//! Choi negativity), and [`experiments`] (sweeps, scans, optimizer).

pub mod channels;
pub mod checks;
pub mod coarse;
pub mod collisional;
pub mod error;
pub mod experiments;
pub mod io;
pub mod matcore;
pub mod tolerance;
pub mod witness;

pub use error::{Error, Result};
