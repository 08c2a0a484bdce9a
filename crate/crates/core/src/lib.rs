//! Numerical toolkit for the symmetrized bidisc: commuting operator pairs
//! `(S, P)`, their scalar geometry, symmetrization, and unitary dilations.

pub mod dilation;
pub mod error;
pub mod geometry;
pub mod io;
pub mod linalg;
pub mod pair;
pub mod repro;
pub mod sample;
pub mod symmetrization;

pub use error::{Error, Result};
pub use linalg::{ComplexMatrix, Tolerances};
