pub mod action;
pub mod constructions;
pub mod error;
pub mod format;
pub mod graph;
pub mod lm;
pub mod products;
pub mod ratio;

pub use error::{Error, Result};
