pub mod cli;
pub mod error;
pub mod expectation;
pub mod experiments;
pub mod family;
pub mod graph;
pub mod oracles;
pub mod random;

pub use error::{Error, Result};
