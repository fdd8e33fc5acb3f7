pub mod chain_model;
pub mod cli;
pub mod compiler;
pub mod dd;
pub mod error;
pub mod evolution;
pub mod gate_synthesis;
pub mod phase_align;

pub use error::{Error, Result};
