//! Exact verification of quantum dilogarithm identities attached to square
//! products `A_n □ A_n'` of type A quivers.

pub mod error;
pub mod linalg;
pub mod qalgebra;
pub mod qseries;
pub mod quiver;
pub mod roots;
pub mod strata;
pub mod verify;

pub use error::{Error, Result};
