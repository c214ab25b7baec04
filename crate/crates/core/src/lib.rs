pub mod binary_form;
pub mod config;
pub mod cycle;
pub mod enumerative;
pub mod cover;
pub mod error;
pub mod linalg;
pub mod locus;
pub mod poly;
pub mod projective;
pub mod scalar;

pub use error::{Error, Result};
