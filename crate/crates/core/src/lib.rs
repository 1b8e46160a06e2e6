pub mod cli;
pub mod error;
pub mod io;
pub mod limits;
pub mod linalg;
mod logdomain;
pub mod maps;
pub mod means;
pub mod renyi;
pub mod sweep;

pub use error::{Error, Result};
