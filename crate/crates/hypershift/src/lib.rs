//! Finite-resolution symbolic dynamics: admissible-word languages for a few
//! subshift families, chaos-style property certificates for the base system,
//! and the induced dynamics on finite trace sets (the hyperspace side), all
//! with exact arithmetic and deterministic, serializable outputs.

pub mod analysis;
pub mod certificate;
pub mod cli;
pub mod error;
pub mod hyperspace;
pub mod shiftspace;
pub mod tilde;

pub use error::{Error, Result};
