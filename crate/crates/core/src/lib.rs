//! Generalized concurrence for two qutrits.
//!
//! The crate builds the qutrit flip operator, evaluates pure- and
//! mixed-state concurrence alongside negativity, robustness and Cereceda's
//! concurrence, and provides a numerical convex-roof minimizer that checks
//! the closed-form mixed-state value against explicit ensemble
//! decompositions.

pub mod decomp;
pub mod error;
pub mod linalg;
pub mod measures;
pub mod operators;
#[cfg(test)]
mod proptests;
pub mod state_file;
pub mod states;
pub mod sweep;
pub mod verify;

pub use error::{Error, Result};
