pub mod algebra;
pub mod cli;
pub mod complex;
pub mod detect;
pub mod error;
pub mod gorenstein;
pub mod hom;
pub mod io;
pub mod linalg;
pub mod module;
pub mod report;
pub mod resolution;
pub mod sample;
pub mod stable;
pub mod standard;
pub mod tensor;

pub use error::{Error, Result};
