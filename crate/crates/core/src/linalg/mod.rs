//! Exact arithmetic over prime fields and canonical subspace algebra.
//!
//! Every subspace is kept in reduced row-echelon form, which makes equality
//! structural and results independent of evaluation order.

mod echelon;
mod field;
mod matrix;
mod subspace;

pub use echelon::Echelon;
pub use field::{is_prime, prime_divisors, PrimeField};
pub use matrix::Matrix;
pub use subspace::{solve_constraints, QuotientData, QuotientMap, Subspace};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LinalgError {
    #[error("{0} is not a prime")]
    NotPrime(u32),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("row {row} has length {found}, expected {expected}")]
    RowLength { row: usize, expected: usize, found: usize },
    #[error("ambient dimensions differ: {left} vs {right}")]
    AmbientMismatch { left: usize, right: usize },
    #[error("fields differ: F_{left} vs F_{right}")]
    FieldMismatch { left: u32, right: u32 },
    #[error("subspace is not contained in the enclosing space")]
    NotContained,
}

/// Kernel of `f`, viewed as a map `F^cols → F^rows`.
pub fn kernel(field: PrimeField, f: &Matrix) -> Subspace {
    f.kernel(field)
}

/// Reduced row-echelon form with zero rows removed.
pub fn rref(field: PrimeField, m: &Matrix) -> Matrix {
    m.rref(field)
}
