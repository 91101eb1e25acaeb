pub mod cli;
pub mod error;
pub mod groups;
pub mod harness;
pub mod metrics;
pub mod solvers;
pub mod linalg;

pub use error::{Error, Result};
