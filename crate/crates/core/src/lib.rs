pub mod error;
pub mod field_core;
pub mod harness;
pub mod restriction;
pub mod resultant;
pub mod sphere;
pub mod transform;

pub use error::{Error, Result};
