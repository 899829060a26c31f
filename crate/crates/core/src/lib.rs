//! Spectral sets and GMRES convergence bounds for dense complex matrices.

pub mod adaptive;
pub mod analysis;
pub mod bounds;
pub mod error;
pub mod gallery;
pub mod geometry;
pub mod io;
pub mod krylov;
pub mod linalg;
pub mod minimax;
pub mod projectors;
pub mod report;
pub mod sets;
pub mod verify;

pub use error::{Error, Result};
pub use linalg::{c64, ComplexMatrix};
