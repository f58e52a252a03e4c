//! Determinant lines and torsion sections of finite graded complexes with two differentials,
//! spectral truncation and gluing, and Fried zeta functions of suspension flows.

pub mod detline;
pub mod error;
pub mod fried;
pub mod graded;
pub mod linalg;
pub mod report;
pub mod spectral;
pub mod variation;

pub use error::{Error, Result};
