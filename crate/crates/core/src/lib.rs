//! Exact Bernstein-Lusztig-Hecke algebras of Kac-Moody root generating
//! systems, their principal series representations, and irreducibility
//! diagnostics.

pub mod coxeter;
pub mod cli;
pub mod criteria;
pub mod error;
pub mod hecke;
pub mod laurent;
pub mod linalg;
pub mod scalars;
pub mod series;

pub use error::{Error, Result};
