//! Exact computation of Bondal–Orlov transforms `BO_k` on the localized
//! torus-equivariant K-theory of a crepant toric wall crossing.

pub mod bo;
pub mod error;
pub mod field;
pub mod fixed;
pub mod git;
pub mod kring;
pub mod lattice;
pub mod simplex;
pub mod twist;
pub mod wall;

pub use error::{Error, Result};
