pub mod chern;
pub mod cli;
pub mod error;
pub mod exponent;
pub mod fga;
pub mod fgl;
pub mod invariants;
pub mod rootsys;
pub mod series;

pub use error::{Error, Result};
