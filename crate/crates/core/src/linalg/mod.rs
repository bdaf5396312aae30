//! Exact linear algebra over ℚ and ℤ: matrices, lattices, quadratic eigendata and
//! Cartan projections.

pub mod cartan;
pub mod eigen;
pub mod matrix;
pub mod quadratic;
pub mod rational;

pub use cartan::{cartan_projection, CartanProjection};
pub use eigen::{eigen_directions, EigenDirections};
pub use matrix::{IntMatrix, QMatrix};
pub use quadratic::{ProjPoint, QuadraticNumber};
pub use rational::Rational;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LinalgError {
    #[error("edge inclusion not injective")]
    NotInjective,
    #[error("matrix is singular")]
    Singular,
    #[error("matrix is not square")]
    NotSquare,
    #[error("matrix rows have different lengths")]
    Ragged,
    #[error("eigendata is only available for 2×2 matrices (got {0}×{0})")]
    UnsupportedDimension(usize),
}
