pub mod analyzer;
pub mod bernoulli;
pub mod characters;
pub mod error;
pub mod exec;
pub mod kubota_leopoldt;
pub mod lfunction_orders;
pub mod padic;
pub mod qexp;
pub mod weight;

pub use error::{Error, Result};
