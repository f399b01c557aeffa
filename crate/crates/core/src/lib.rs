pub mod conditions;
pub mod error;
pub mod extension;
pub mod interpolation;
pub mod markov;
pub mod numerics;

pub use error::{Error, Result};
