pub mod algebra;
pub mod error;
pub mod laws;
pub mod models;
pub mod report;
pub mod script;
pub mod set;

pub use error::{Error, Result};
