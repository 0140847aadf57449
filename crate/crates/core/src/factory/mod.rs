//! Generators of valid instances: matrix-unit algebras, truncated path
//! algebras with gradings and actions, and seeded random families.

mod quiver;
mod random;

pub use quiver::{
    gen_path_algebra, linear_characters, Arrow, ArrowType, BasisPath, OrbitQuiver, PathAlgebra, QuiverSpec,
};
pub use random::{gen_random, Family, RandomParams};

use thiserror::Error;

use crate::algebra::{Algebra, AlgebraError};
use crate::grading::{GradingError, Grading, GroupAction};
use crate::group::FiniteGroup;
use crate::linalg::{is_prime, prime_divisors, Matrix, PrimeField};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FactoryError {
    #[error("invalid quiver: {0}")]
    InvalidQuiver(String),
    #[error("scalar {scalar} is not a root of unity of order dividing {order}")]
    NotRootOfUnity { scalar: u32, order: usize },
    #[error("group of order {0} is not cyclic")]
    NotCyclic(usize),
    #[error("no suitable prime below the search limit")]
    NoPrime,
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Grading(#[from] GradingError),
}

/// Which matrix units `E_ij` span the algebra.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum MatrixShape {
    Full,
    Upper,
    StrictUpper,
    Diagonal,
}

/// Index pairs `(i, j)` of the basis, row-major.
pub fn matrix_units(k: usize, shape: MatrixShape) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for i in 0..k {
        for j in 0..k {
            let keep = match shape {
                MatrixShape::Full => true,
                MatrixShape::Upper => i <= j,
                MatrixShape::StrictUpper => i < j,
                MatrixShape::Diagonal => i == j,
            };
            if keep {
                out.push((i, j));
            }
        }
    }
    out
}

/// Span of the chosen matrix units with `E_ij E_jl = E_il`.
pub fn matrix_algebra(field: PrimeField, k: usize, shape: MatrixShape) -> Algebra {
    let units = matrix_units(k, shape);
    let names = units
        .iter()
        .map(|&(i, j)| {
            if k > 9 {
                format!("E{},{}", i + 1, j + 1)
            } else {
                format!("E{}{}", i + 1, j + 1)
            }
        })
        .collect();
    let index = |i: usize, j: usize| units.iter().position(|&u| u == (i, j));
    let mut products = Vec::new();
    for (a, &(i, j)) in units.iter().enumerate() {
        for (b, &(j2, l)) in units.iter().enumerate() {
            if j != j2 {
                continue;
            }
            if let Some(c) = index(i, l) {
                products.push((a, b, c, 1));
            }
        }
    }
    Algebra::new(field, names, products).expect("indices in range")
}

/// Upper-triangular `k × k` matrices (strictly upper if `strict`).
pub fn triangular(field: PrimeField, k: usize, strict: bool) -> Algebra {
    let shape = if strict {
        MatrixShape::StrictUpper
    } else {
        MatrixShape::Upper
    };
    matrix_algebra(field, k, shape)
}

pub fn full_matrix(field: PrimeField, k: usize) -> Algebra {
    matrix_algebra(field, k, MatrixShape::Full)
}

pub fn diagonal(field: PrimeField, k: usize) -> Algebra {
    matrix_algebra(field, k, MatrixShape::Diagonal)
}

/// `C2`-grading of a matrix-unit algebra with `E_ij` of degree `(j − i) mod 2`.
pub fn parity_grading(algebra: &Algebra, k: usize, shape: MatrixShape) -> Grading {
    let labels: Vec<usize> = matrix_units(k, shape)
        .into_iter()
        .map(|(i, j)| (i + j) % 2)
        .collect();
    Grading::from_labels(algebra, FiniteGroup::cyclic(2), &labels).expect("labels match the basis")
}

/// Conjugation by `diag(d_1, …, d_k)`, which scales `E_ij` by `d_i / d_j`,
/// as an action of the cyclic group it generates.
pub fn diagonal_conjugation(algebra: &Algebra, shape: MatrixShape, diag: &[u32]) -> GroupAction {
    let f = algebra.field();
    let units = matrix_units(diag.len(), shape);
    let mut m = Matrix::zeros(units.len(), units.len());
    for (a, &(i, j)) in units.iter().enumerate() {
        let dj = f.inv(diag[j] % f.p()).expect("diagonal entries are nonzero");
        m.set(a, a, f.mul(diag[i] % f.p(), dj));
    }
    cyclic_action(algebra, &m)
}

/// Action of the cyclic group generated by the automorphism `m`.
pub fn cyclic_action(algebra: &Algebra, m: &Matrix) -> GroupAction {
    let f = algebra.field();
    let mut powers = vec![Matrix::identity(algebra.dim())];
    loop {
        let next = powers.last().expect("nonempty").mul(f, m).expect("square");
        if next.is_identity() {
            break;
        }
        powers.push(next);
    }
    let group = FiniteGroup::cyclic(powers.len());
    GroupAction::new(group, powers).expect("one matrix per element")
}

/// Smallest prime `p` with `p ∤ n` and `p ≡ 1 (mod q)` for every prime `q | n`.
pub fn default_prime(n: usize) -> Result<u32, FactoryError> {
    let qs = prime_divisors(n as u64);
    (2u32..100_000)
        .find(|&p| is_prime(p as u64) && n as u64 % p as u64 != 0 && qs.iter().all(|&q| (p as u64 - 1) % q == 0))
        .ok_or(FactoryError::NoPrime)
}

/// Smallest prime `p ≡ 1 (mod r)`, so that `F_p` has a primitive `r`-th root of unity.
pub fn roots_prime(r: usize) -> Result<u32, FactoryError> {
    (2u32..100_000)
        .find(|&p| is_prime(p as u64) && (p as u64 - 1) % r as u64 == 0)
        .ok_or(FactoryError::NoPrime)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f5() -> PrimeField {
        PrimeField::new(5).unwrap()
    }

    #[test]
    fn triangular_family() {
        let s3 = triangular(f5(), 3, true);
        assert_eq!(s3.dim(), 3);
        assert_eq!(s3.algebra_nilpotency().index(), Some(3));
        let u2 = triangular(f5(), 2, false);
        assert_eq!(u2.dim(), 3);
        assert_eq!(u2.names(), ["E11", "E12", "E22"]);
        let s4 = triangular(f5(), 4, true);
        let g = parity_grading(&s4, 4, MatrixShape::StrictUpper);
        assert!(g.validate(&s4).is_valid());
        assert_eq!(g.identity_component().dim(), 2);
        assert_eq!(g.component(1).dim(), 4);
        let ae = g.identity_component();
        assert!(s4.subspace_product(ae, ae).unwrap().is_zero());
        for k in 1..4 {
            assert!(full_matrix(f5(), k).validate_associativity().is_empty());
        }
    }

    #[test]
    fn conjugation_actions() {
        let f = f5();
        let a = full_matrix(f, 2);
        let act = diagonal_conjugation(&a, MatrixShape::Full, &[1, 4]);
        assert_eq!(act.group().order(), 2);
        assert!(act.validate(&a).is_valid());
        let t = triangular(f, 3, true);
        let act = diagonal_conjugation(&t, MatrixShape::StrictUpper, &[1, 4, 1]);
        assert_eq!(act.group().order(), 2);
        assert_eq!(act.fixed_subalgebra(&t).basis_vectors(), vec![vec![0, 1, 0]]);
        let triv = diagonal_conjugation(&a, MatrixShape::Full, &[2, 2]);
        assert_eq!(triv.group().order(), 1);
    }

    #[test]
    fn field_rules() {
        assert_eq!(default_prime(2).unwrap(), 3);
        assert_eq!(default_prime(3).unwrap(), 7);
        assert_eq!(default_prime(4).unwrap(), 3);
        assert_eq!(default_prime(6).unwrap(), 7);
        assert_eq!(default_prime(1).unwrap(), 2);
        assert_eq!(roots_prime(4).unwrap(), 5);
        assert_eq!(roots_prime(3).unwrap(), 7);
    }
}
