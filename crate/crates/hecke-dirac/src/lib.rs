//! Exact Dirac operators for Drinfeld graded Hecke algebras and rational
//! Cherednik algebras of small complex reflection groups.

pub mod clifford;
pub mod cm;
pub mod dirac;
pub mod error;
pub mod group;
pub mod linalg;
pub mod modules;
pub mod pbw;
pub mod poly;
pub mod report;
pub mod scalar;

pub use error::{Error, Result};
pub use scalar::Cyclo;
