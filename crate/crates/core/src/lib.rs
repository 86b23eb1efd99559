//! Mutually unbiased frames, circulant constructions and Weyl-Heisenberg
//! fiducial states.

pub mod cli;
pub mod constructions;
pub mod error;
pub mod frames;
pub mod linalg;
pub mod muf;
pub mod optimize;
pub mod sic;
pub mod uncertainty;

pub use error::{MufError, Result};
pub use linalg::{CirculantMatrix, ComplexMatrix, ComplexVector, Tolerance, C64};
