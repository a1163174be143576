pub mod error;
pub mod numkernel;
pub mod spectra;
pub mod branches;
pub mod topology;
pub mod sampler;
pub mod cli;

pub use error::{ErrorClass, LogError, Result};
pub use numkernel::{ComplexMatrix, Matrix};
