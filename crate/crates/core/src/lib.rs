pub mod cli;
pub mod config;
pub mod error;
pub mod linalg;
pub mod mixedchar;
pub mod partition;
pub mod paving;
pub mod par;
pub mod realstable;
pub mod sample;
pub mod unipoly;

pub use config::{Budgets, Config, Tolerances};
pub use error::{Error, Result};
