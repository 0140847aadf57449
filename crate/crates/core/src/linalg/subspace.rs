use std::fmt;

use super::{Echelon, LinalgError, Matrix, PrimeField};

/// A linear subspace of `F_p^n`, stored as its unique reduced row-echelon
/// basis. Two values compare equal iff they are the same subspace.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Subspace {
    field: PrimeField,
    ambient: usize,
    basis: Matrix,
}

impl fmt::Debug for Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Subspace(dim {} in F_{}^{}) ", self.dim(), self.field.p(), self.ambient)?;
        f.debug_list().entries(self.basis.row_iter()).finish()
    }
}

/// Result of choosing a complement of `U` inside `V`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuotientData {
    pub codim: usize,
    /// Vectors of `V` whose images form a basis of `V/U`.
    pub lifts: Vec<Vec<u32>>,
}

/// Coordinates on `V/U`, valid for vectors of `V`.
#[derive(Clone, Debug)]
pub struct QuotientMap {
    reducer: Echelon,
    cols: Vec<usize>,
}

impl QuotientMap {
    pub fn codim(&self) -> usize {
        self.cols.len()
    }

    /// Coordinates of `v + U`; zero iff `v ∈ U` (for `v ∈ V`).
    pub fn coords(&self, v: &[u32]) -> Vec<u32> {
        let r = self.reducer.reduce(v);
        self.cols.iter().map(|&c| r[c]).collect()
    }

    /// Append the coordinates of `v + U` to `out`.
    pub fn coords_into(&self, v: &[u32], out: &mut Vec<u32>) {
        let r = self.reducer.reduce(v);
        out.extend(self.cols.iter().map(|&c| r[c]));
    }
}

impl Subspace {
    pub(crate) fn from_rref(field: PrimeField, ambient: usize, basis: Matrix) -> Self {
        debug_assert_eq!(basis.cols(), ambient);
        Subspace {
            field,
            ambient,
            basis,
        }
    }

    pub fn zero(field: PrimeField, ambient: usize) -> Self {
        Subspace::from_rref(field, ambient, Matrix::zeros(0, ambient))
    }

    pub fn full(field: PrimeField, ambient: usize) -> Self {
        Subspace::from_rref(field, ambient, Matrix::identity(ambient))
    }

    /// Span of the given vectors.
    pub fn span<I, V>(field: PrimeField, ambient: usize, vectors: I) -> Result<Self, LinalgError>
    where
        I: IntoIterator<Item = V>,
        V: AsRef<[u32]>,
    {
        let mut e = Echelon::new(field, ambient);
        for v in vectors {
            let v = v.as_ref();
            if v.len() != ambient {
                return Err(LinalgError::DimensionMismatch {
                    expected: ambient,
                    found: v.len(),
                });
            }
            e.insert(v.to_vec());
        }
        Ok(e.into_subspace())
    }

    /// Span of coordinate unit vectors.
    pub fn coordinate(field: PrimeField, ambient: usize, indices: &[usize]) -> Self {
        let mut e = Echelon::new(field, ambient);
        for &i in indices {
            let mut v = vec![0; ambient];
            v[i] = 1;
            e.insert(v);
        }
        e.into_subspace()
    }

    #[inline]
    pub fn field(&self) -> PrimeField {
        self.field
    }

    #[inline]
    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.basis.rows()
    }

    pub fn is_zero(&self) -> bool {
        self.dim() == 0
    }

    pub fn is_full(&self) -> bool {
        self.dim() == self.ambient
    }

    pub fn basis(&self) -> &Matrix {
        &self.basis
    }

    pub fn basis_vectors(&self) -> Vec<Vec<u32>> {
        self.basis.to_rows()
    }

    pub fn basis_iter(&self) -> impl Iterator<Item = &[u32]> + '_ {
        self.basis.row_iter()
    }

    pub fn pivots(&self) -> Vec<usize> {
        self.basis
            .row_iter()
            .map(|r| r.iter().position(|&x| x != 0).expect("rref rows are nonzero"))
            .collect()
    }

    pub fn echelon(&self) -> Echelon {
        Echelon::from_subspace(self)
    }

    fn check_ambient(&self, other: &Subspace) -> Result<(), LinalgError> {
        if self.ambient != other.ambient {
            return Err(LinalgError::AmbientMismatch {
                left: self.ambient,
                right: other.ambient,
            });
        }
        if self.field != other.field {
            return Err(LinalgError::FieldMismatch {
                left: self.field.p(),
                right: other.field.p(),
            });
        }
        Ok(())
    }

    /// Is `v` an element of this subspace?
    pub fn member(&self, v: &[u32]) -> bool {
        if v.len() != self.ambient {
            return false;
        }
        self.echelon().contains(v)
    }

    /// Does this subspace contain `other`?
    pub fn contains(&self, other: &Subspace) -> Result<bool, LinalgError> {
        self.check_ambient(other)?;
        if other.dim() > self.dim() {
            return Ok(false);
        }
        let e = self.echelon();
        Ok(other.basis_iter().all(|v| e.contains(v)))
    }

    pub fn sum(&self, other: &Subspace) -> Result<Subspace, LinalgError> {
        self.check_ambient(other)?;
        let mut e = self.echelon();
        for v in other.basis_iter() {
            if e.is_full() {
                break;
            }
            e.insert(v.to_vec());
        }
        Ok(e.into_subspace())
    }

    pub fn intersect(&self, other: &Subspace) -> Result<Subspace, LinalgError> {
        self.check_ambient(other)?;
        if self.dim() > other.dim() {
            return other.intersect(self);
        }
        // x ∈ self with x ≡ 0 modulo other
        let q = Subspace::full(self.field, self.ambient).quotient_map(other)?;
        Ok(solve_constraints(self, |x| q.coords(x)))
    }

    /// Residual of `v` after reduction by this basis.
    pub fn reduce(&self, v: &[u32]) -> Vec<u32> {
        self.echelon().reduce(v)
    }

    /// Lift a basis of `self / sub` by greedily completing `sub` with the
    /// rows of this subspace's RREF basis, in order.
    pub fn quotient_data(&self, sub: &Subspace) -> Result<QuotientData, LinalgError> {
        if !self.contains(sub)? {
            return Err(LinalgError::NotContained);
        }
        let mut e = sub.echelon();
        let mut lifts = Vec::new();
        for v in self.basis_iter() {
            if e.rank() == self.dim() {
                break;
            }
            if e.insert(v.to_vec()) {
                lifts.push(v.to_vec());
            }
        }
        Ok(QuotientData {
            codim: self.dim() - sub.dim(),
            lifts,
        })
    }

    /// A coordinate map for `self / sub`.
    pub fn quotient_map(&self, sub: &Subspace) -> Result<QuotientMap, LinalgError> {
        let data = self.quotient_data(sub)?;
        let reducer = sub.echelon();
        let mut lifted = Echelon::new(self.field, self.ambient);
        for v in data.lifts {
            lifted.insert(reducer.reduce(&v));
        }
        let mut cols = lifted.to_matrix().row_iter().map(first_nonzero).collect::<Vec<_>>();
        cols.sort_unstable();
        Ok(QuotientMap { reducer, cols })
    }

    /// Image under a linear map given as a matrix acting on column vectors.
    pub fn image(&self, m: &Matrix) -> Result<Subspace, LinalgError> {
        if m.cols() != self.ambient {
            return Err(LinalgError::DimensionMismatch {
                expected: self.ambient,
                found: m.cols(),
            });
        }
        let mut e = Echelon::new(self.field, m.rows());
        for v in self.basis_iter() {
            e.insert(m.apply(self.field, v)?);
        }
        Ok(e.into_subspace())
    }

    /// `Σ c_i b_i` over the RREF basis.
    pub fn combination(&self, coeffs: &[u32]) -> Vec<u32> {
        let f = self.field;
        let mut out = vec![0u32; self.ambient];
        for (row, &c) in self.basis_iter().zip(coeffs) {
            if c == 0 {
                continue;
            }
            for (o, &x) in out.iter_mut().zip(row) {
                *o = f.mul_add(*o, c, x);
            }
        }
        out
    }
}

fn first_nonzero(r: &[u32]) -> usize {
    r.iter().position(|&x| x != 0).expect("rref rows are nonzero")
}

/// `{ x ∈ domain : constraint(x) = 0 }` for a linear `constraint`.
///
/// `constraint` is evaluated once per basis vector of `domain`; it must
/// return vectors of one common length.
pub fn solve_constraints<F>(domain: &Subspace, constraint: F) -> Subspace
where
    F: Fn(&[u32]) -> Vec<u32>,
{
    let field = domain.field();
    let k = domain.dim();
    if k == 0 {
        return domain.clone();
    }
    let images: Vec<Vec<u32>> = domain.basis_iter().map(|b| constraint(b)).collect();
    let width = images[0].len();
    debug_assert!(images.iter().all(|v| v.len() == width));
    // coefficient vectors a with Σ a_i images_i = 0
    let mut e = Echelon::new(field, k);
    for c in 0..width {
        if e.is_full() {
            break;
        }
        let col: Vec<u32> = images.iter().map(|v| v[c]).collect();
        e.insert(col);
    }
    if e.rank() == 0 {
        return domain.clone();
    }
    let coeffs = e.null_space();
    let mut out = Echelon::new(field, domain.ambient_dim());
    for a in coeffs.basis_iter() {
        out.insert(domain.combination(a));
    }
    out.into_subspace()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f5() -> PrimeField {
        PrimeField::new(5).unwrap()
    }

    fn span(vs: &[&[u32]]) -> Subspace {
        Subspace::span(f5(), vs[0].len(), vs.iter().copied()).unwrap()
    }

    #[test]
    fn span_examples() {
        let s = span(&[&[1, 1], &[2, 2]]);
        assert_eq!(s.basis_vectors(), vec![vec![1, 1]]);
        let empty: Vec<Vec<u32>> = vec![];
        assert!(Subspace::span(f5(), 2, empty).unwrap().is_zero());
        assert!(span(&[&[1, 0], &[1, 1]]).is_full());
        assert!(Subspace::span(f5(), 2, [vec![1, 0, 0]]).is_err());
    }

    #[test]
    fn lattice_examples() {
        let x = span(&[&[1, 0]]);
        let y = span(&[&[0, 1]]);
        assert!(x.intersect(&y).unwrap().is_zero());
        assert_eq!(x.intersect(&x).unwrap(), x);
        let plane = span(&[&[1, 0], &[0, 1]]);
        let diag = span(&[&[1, 1]]);
        assert_eq!(plane.intersect(&diag).unwrap(), diag);
        assert!(plane.contains(&diag).unwrap());
        assert!(!diag.contains(&plane).unwrap());
        assert!(diag.member(&[3, 3]));
        assert!(!diag.member(&[3, 1]));
        assert_eq!(x.sum(&y).unwrap(), plane);
        let other = Subspace::zero(f5(), 3);
        assert!(x.sum(&other).is_err());
    }

    #[test]
    fn quotient_examples() {
        let f = f5();
        let plane = Subspace::full(f, 2);
        let q = plane.quotient_data(&Subspace::zero(f, 2)).unwrap();
        assert_eq!(q.codim, 2);
        assert_eq!(q.lifts, vec![vec![1, 0], vec![0, 1]]);
        let q = plane.quotient_data(&plane).unwrap();
        assert_eq!(q.codim, 0);
        assert!(q.lifts.is_empty());
        let diag = span(&[&[1, 1]]);
        let q = plane.quotient_data(&diag).unwrap();
        assert_eq!(q.codim, 1);
        assert_eq!(q.lifts, vec![vec![1, 0]]);
        assert!(diag.quotient_data(&plane).is_err());
    }

    #[test]
    fn quotient_map_detects_membership() {
        let f = f5();
        let v = span(&[&[1, 0, 0], &[0, 1, 1]]);
        let u = span(&[&[1, 1, 1]]);
        let q = v.quotient_map(&u).unwrap();
        assert_eq!(q.codim(), 1);
        assert_eq!(q.coords(&[2, 2, 2]), vec![0]);
        assert_ne!(q.coords(&[1, 0, 0]), vec![0]);
        let _ = f;
    }
}
