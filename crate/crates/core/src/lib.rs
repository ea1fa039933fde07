//! Generalized categorial grammar learning and language-agent simulation.

pub mod categorial;
pub mod error;
pub mod evolution;
pub mod experiments;
pub mod language;
pub mod learner;
pub mod parser;
pub mod psetting;

pub use error::{Error, Result};
