//! Iterated function systems over tuples of paravectors in real Clifford
//! algebras: contractivity certificates, stationary attractors, backward
//! trajectories of non-stationary systems, and deterministic rendering.

pub mod cli_io;
pub mod clifford;
pub mod error;
pub mod hmodule;
pub mod ifs;
pub mod trajectory;

pub use error::{Error, Result};
