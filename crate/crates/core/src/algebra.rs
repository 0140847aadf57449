//! Finite-dimensional associative algebras presented by structure constants.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg::{Echelon, LinalgError, Matrix, PrimeField, Subspace};
use crate::par;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AlgebraError {
    #[error("basis index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },
    #[error("expected {expected} basis names, found {found}")]
    NameCount { expected: usize, found: usize },
    #[error("element has length {found}, algebra has dimension {expected}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("subspace is not closed under multiplication (S·S ⊄ S)")]
    NotMultiplicativelyClosed,
    #[error("subspace is not a two-sided ideal")]
    NotAnIdeal,
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// Basis triple `(i, j, k)` with `(e_i e_j) e_k ≠ e_i (e_j e_k)`; `coordinate`
/// is the first coordinate where the two sides differ.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct AssociativityViolation {
    pub i: usize,
    pub j: usize,
    pub k: usize,
    pub coordinate: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Algebra {
    field: PrimeField,
    dim: usize,
    names: Vec<String>,
    // e_i · e_j at index i * dim + j, sparse (k, c) with c ≠ 0, sorted by k
    table: Vec<Vec<(usize, u32)>>,
    // for each i, the j with e_i · e_j ≠ 0
    row_support: Vec<Vec<usize>>,
}

/// A two-sided (or one-sided) ideal candidate together with its closure flags.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdealHandle {
    pub carrier: Subspace,
    pub left_closed: bool,
    pub right_closed: bool,
}

impl IdealHandle {
    pub fn is_two_sided(&self) -> bool {
        self.left_closed && self.right_closed
    }
}

/// Outcome of a nilpotency computation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "value", rename_all = "snake_case")]
pub enum Nilpotency {
    /// Least `d` with `S^d = 0`.
    Index(usize),
    /// The power chain stabilised at a nonzero subspace of this dimension.
    NotNilpotent { stable_dim: usize },
}

impl Nilpotency {
    pub fn index(&self) -> Option<usize> {
        match *self {
            Nilpotency::Index(d) => Some(d),
            Nilpotency::NotNilpotent { .. } => None,
        }
    }
}

/// `A / K` with a projection and a section of the projection.
#[derive(Clone, Debug)]
pub struct Quotient {
    pub algebra: Algebra,
    /// `dim(A/K) × dim(A)`.
    pub projection: Matrix,
    /// Lifted basis: `section[i] ∈ A` projects to the i-th quotient basis vector.
    pub section: Vec<Vec<u32>>,
}

impl Quotient {
    pub fn project(&self, x: &[u32]) -> Vec<u32> {
        self.projection
            .apply(self.algebra.field, x)
            .expect("projection width matches the algebra")
    }

    pub fn lift(&self, x: &[u32]) -> Vec<u32> {
        let f = self.algebra.field;
        let n = self.projection.cols();
        let mut out = vec![0u32; n];
        for (s, &c) in self.section.iter().zip(x) {
            if c == 0 {
                continue;
            }
            for (o, &v) in out.iter_mut().zip(s) {
                *o = f.mul_add(*o, c, v);
            }
        }
        out
    }
}

impl Algebra {
    /// Build from sparse products `(i, j, k, c)` meaning `e_i e_j += c e_k`.
    /// Repeated entries accumulate.
    pub fn new<I>(field: PrimeField, names: Vec<String>, products: I) -> Result<Self, AlgebraError>
    where
        I: IntoIterator<Item = (usize, usize, usize, u32)>,
    {
        let dim = names.len();
        let mut dense: Vec<Vec<u32>> = vec![Vec::new(); dim * dim];
        for (i, j, k, c) in products {
            for index in [i, j, k] {
                if index >= dim {
                    return Err(AlgebraError::IndexOutOfRange { index, dim });
                }
            }
            let slot = &mut dense[i * dim + j];
            if slot.is_empty() {
                slot.resize(dim, 0);
            }
            slot[k] = field.add(slot[k], c % field.p());
        }
        let table = dense
            .into_iter()
            .map(|v| {
                v.into_iter()
                    .enumerate()
                    .filter(|&(_, c)| c != 0)
                    .collect::<Vec<_>>()
            })
            .collect();
        Ok(Algebra::from_table(field, names, table))
    }

    fn from_table(field: PrimeField, names: Vec<String>, table: Vec<Vec<(usize, u32)>>) -> Self {
        let dim = names.len();
        let row_support = (0..dim)
            .map(|i| (0..dim).filter(|&j| !table[i * dim + j].is_empty()).collect())
            .collect();
        Algebra {
            field,
            dim,
            names,
            table,
            row_support,
        }
    }

    /// Algebra on the given basis names whose products are given as full
    /// coordinate vectors `e_i e_j`.
    pub fn from_products<F>(field: PrimeField, names: Vec<String>, mut product: F) -> Self
    where
        F: FnMut(usize, usize) -> Vec<u32>,
    {
        let dim = names.len();
        let mut table = Vec::with_capacity(dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                let v = product(i, j);
                table.push(
                    v.into_iter()
                        .enumerate()
                        .filter(|&(_, c)| c != 0)
                        .collect(),
                );
            }
        }
        Algebra::from_table(field, names, table)
    }

    pub fn zero_algebra(field: PrimeField, dim: usize) -> Self {
        let names = (0..dim).map(|i| format!("x{i}")).collect();
        Algebra::from_table(field, names, vec![Vec::new(); dim * dim])
    }

    #[inline]
    pub fn field(&self) -> PrimeField {
        self.field
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    /// Sparse coordinates of `e_i e_j`.
    pub fn basis_product(&self, i: usize, j: usize) -> &[(usize, u32)] {
        &self.table[i * self.dim + j]
    }

    /// All nonzero structure constants `(i, j, k, c)` in lexicographic order.
    pub fn structure_constants(&self) -> impl Iterator<Item = (usize, usize, usize, u32)> + '_ {
        (0..self.dim).flat_map(move |i| {
            (0..self.dim).flat_map(move |j| {
                self.basis_product(i, j)
                    .iter()
                    .map(move |&(k, c)| (i, j, k, c))
            })
        })
    }

    pub fn unit_vector(&self, i: usize) -> Vec<u32> {
        let mut v = vec![0; self.dim];
        v[i] = 1;
        v
    }

    pub fn zero_vector(&self) -> Vec<u32> {
        vec![0; self.dim]
    }

    pub fn whole(&self) -> Subspace {
        Subspace::full(self.field, self.dim)
    }

    pub fn zero_subspace(&self) -> Subspace {
        Subspace::zero(self.field, self.dim)
    }

    pub fn span<I, V>(&self, vectors: I) -> Result<Subspace, AlgebraError>
    where
        I: IntoIterator<Item = V>,
        V: AsRef<[u32]>,
    {
        Ok(Subspace::span(self.field, self.dim, vectors)?)
    }

    /// Bilinear product, checking lengths.
    pub fn multiply(&self, x: &[u32], y: &[u32]) -> Result<Vec<u32>, AlgebraError> {
        for v in [x, y] {
            if v.len() != self.dim {
                return Err(AlgebraError::DimensionMismatch {
                    expected: self.dim,
                    found: v.len(),
                });
            }
        }
        Ok(self.mul(x, y))
    }

    /// Bilinear product; lengths must equal `dim`.
    pub fn mul(&self, x: &[u32], y: &[u32]) -> Vec<u32> {
        let p = self.field.p() as u64;
        let mut acc = vec![0u64; self.dim];
        let mut dirty = false;
        for (i, &xi) in x.iter().enumerate() {
            if xi == 0 {
                continue;
            }
            for &j in &self.row_support[i] {
                let yj = y[j];
                if yj == 0 {
                    continue;
                }
                let s = (xi as u64 * yj as u64) % p;
                for &(k, c) in &self.table[i * self.dim + j] {
                    acc[k] = (acc[k] + s * c as u64) % p;
                    dirty = true;
                }
            }
        }
        if !dirty {
            return vec![0; self.dim];
        }
        acc.into_iter().map(|v| v as u32).collect()
    }

    /// Product of a tuple of elements, left to right. Empty product is `None`
    /// (the formal unit).
    pub fn mul_chain<'a, I>(&self, factors: I) -> Option<Vec<u32>>
    where
        I: IntoIterator<Item = &'a [u32]>,
    {
        let mut it = factors.into_iter();
        let first = it.next()?.to_vec();
        Some(it.fold(first, |acc, f| self.mul(&acc, f)))
    }

    /// Exhaustive check of `(e_i e_j) e_k = e_i (e_j e_k)`.
    pub fn validate_associativity(&self) -> Vec<AssociativityViolation> {
        let n = self.dim;
        let rows: Vec<usize> = (0..n).collect();
        let found = par::map(&rows, |&i| {
            let mut out = Vec::new();
            let ei = self.unit_vector(i);
            for j in 0..n {
                let ej = self.unit_vector(j);
                let eij = self.mul(&ei, &ej);
                for k in 0..n {
                    let ek = self.unit_vector(k);
                    let left = self.mul(&eij, &ek);
                    let right = self.mul(&ei, &self.mul(&ej, &ek));
                    if let Some(coordinate) = (0..n).find(|&l| left[l] != right[l]) {
                        out.push(AssociativityViolation { i, j, k, coordinate });
                    }
                }
            }
            out
        });
        found.into_iter().flatten().collect()
    }

    fn check_subspace(&self, s: &Subspace) -> Result<(), AlgebraError> {
        if s.ambient_dim() != self.dim {
            return Err(AlgebraError::DimensionMismatch {
                expected: self.dim,
                found: s.ambient_dim(),
            });
        }
        Ok(())
    }

    /// Span of all products `u v` with `u ∈ U`, `v ∈ V`.
    pub fn subspace_product(&self, u: &Subspace, v: &Subspace) -> Result<Subspace, AlgebraError> {
        self.check_subspace(u)?;
        self.check_subspace(v)?;
        Ok(self.product_of(u, v))
    }

    pub(crate) fn product_of(&self, u: &Subspace, v: &Subspace) -> Subspace {
        let mut e = Echelon::new(self.field, self.dim);
        'outer: for a in u.basis_iter() {
            for b in v.basis_iter() {
                if e.is_full() {
                    break 'outer;
                }
                e.insert(self.mul(a, b));
            }
        }
        e.into_subspace()
    }

    /// `U1 U2 ... Uk`, left-normed.
    pub fn product_chain(&self, factors: &[&Subspace]) -> Subspace {
        let mut it = factors.iter();
        let Some(first) = it.next() else {
            return self.whole();
        };
        it.fold((*first).clone(), |acc, s| self.product_of(&acc, s))
    }

    pub fn is_multiplicatively_closed(&self, s: &Subspace) -> bool {
        s.contains(&self.product_of(s, s)).unwrap_or(false)
    }

    /// Least `d` with `S^d = 0`, powers taken as `S^{k+1} = S^k · S`.
    pub fn nilpotency_index(&self, s: &Subspace) -> Result<Nilpotency, AlgebraError> {
        self.check_subspace(s)?;
        let square = self.product_of(s, s);
        if !s.contains(&square)? {
            return Err(AlgebraError::NotMultiplicativelyClosed);
        }
        let mut power = s.clone();
        let mut k = 1usize;
        loop {
            if power.is_zero() {
                return Ok(Nilpotency::Index(k));
            }
            let next = self.product_of(&power, s);
            if next == power {
                return Ok(Nilpotency::NotNilpotent {
                    stable_dim: power.dim(),
                });
            }
            power = next;
            k += 1;
        }
    }

    /// Index of the whole algebra.
    pub fn algebra_nilpotency(&self) -> Nilpotency {
        self.nilpotency_index(&self.whole())
            .expect("the whole algebra is closed")
    }

    /// Left and right closure flags of `s` inside the subalgebra `within`.
    pub fn classify_ideal(&self, s: &Subspace, within: &Subspace) -> Result<IdealHandle, AlgebraError> {
        self.check_subspace(s)?;
        self.check_subspace(within)?;
        let left = s.contains(&self.product_of(within, s))?;
        let right = s.contains(&self.product_of(s, within))?;
        Ok(IdealHandle {
            carrier: s.clone(),
            left_closed: left,
            right_closed: right,
        })
    }

    /// Least two-sided ideal containing `s`, i.e. `A# s A#`.
    pub fn ideal_closure(&self, s: &Subspace) -> Result<IdealHandle, AlgebraError> {
        self.check_subspace(s)?;
        let carrier = self.closure_within(s, &self.whole());
        Ok(IdealHandle {
            carrier,
            left_closed: true,
            right_closed: true,
        })
    }

    /// Least subspace containing `s` and closed under left and right
    /// multiplication by `within` (which should be a subalgebra).
    pub(crate) fn closure_within(&self, s: &Subspace, within: &Subspace) -> Subspace {
        let mut current = s.clone();
        loop {
            let mut e = current.echelon();
            let before = e.rank();
            for a in within.basis_iter() {
                for x in current.basis_iter() {
                    if e.is_full() {
                        break;
                    }
                    e.insert(self.mul(a, x));
                    e.insert(self.mul(x, a));
                }
            }
            if e.rank() == before {
                return current;
            }
            current = e.into_subspace();
        }
    }

    /// `A/K` on the deterministic complement of `K`.
    pub fn quotient_algebra(&self, k: &IdealHandle) -> Result<Quotient, AlgebraError> {
        self.check_subspace(&k.carrier)?;
        let verified = self.classify_ideal(&k.carrier, &self.whole())?;
        if !(k.is_two_sided() && verified.is_two_sided()) {
            return Err(AlgebraError::NotAnIdeal);
        }
        let whole = self.whole();
        let data = whole.quotient_data(&k.carrier)?;
        let r = data.codim;
        // coordinates w.r.t. [lifts; K basis]
        let mut rows = data.lifts.clone();
        rows.extend(k.carrier.basis_vectors());
        let b = Matrix::from_rows(self.field, self.dim, &rows)?;
        let b_inv = b.inverse(self.field).expect("lifts complete the ideal to a basis");
        let mut projection = Matrix::zeros(r, self.dim);
        for i in 0..r {
            for j in 0..self.dim {
                projection.set(i, j, b_inv.get(j, i));
            }
        }
        let names: Vec<String> = data
            .lifts
            .iter()
            .enumerate()
            .map(|(i, v)| match single_support(v) {
                Some(j) => self.names[j].clone(),
                None => format!("q{i}"),
            })
            .collect();
        let field = self.field;
        let section = data.lifts;
        let algebra = Algebra::from_products(field, names, |i, j| {
            let prod = self.mul(&section[i], &section[j]);
            projection.apply(field, &prod).expect("width matches")
        });
        Ok(Quotient {
            algebra,
            projection,
            section,
        })
    }

    /// `A#`: the algebra with an identity adjoined as the last basis vector.
    pub fn unital_extension(&self) -> Algebra {
        let n = self.dim;
        let mut names = self.names.clone();
        names.push("1".to_string());
        let mut products: Vec<(usize, usize, usize, u32)> = self.structure_constants().collect();
        for i in 0..=n {
            products.push((n, i, i, 1));
            if i < n {
                products.push((i, n, i, 1));
            }
        }
        Algebra::new(self.field, names, products).expect("indices in range")
    }

    /// The subalgebra `s` re-presented on its RREF basis, with the inclusion
    /// map's images (`embedding[i]` is the i-th basis vector in `A`).
    pub fn restrict_to(&self, s: &Subspace) -> Result<(Algebra, Vec<Vec<u32>>), AlgebraError> {
        self.check_subspace(s)?;
        if !s.contains(&self.product_of(s, s))? {
            return Err(AlgebraError::NotMultiplicativelyClosed);
        }
        let embedding = s.basis_vectors();
        let names = embedding
            .iter()
            .enumerate()
            .map(|(i, v)| match single_support(v) {
                Some(j) => self.names[j].clone(),
                None => format!("c{i}"),
            })
            .collect();
        let echelon = s.echelon();
        let pivots = s.pivots();
        let algebra = Algebra::from_products(self.field, names, |i, j| {
            let prod = self.mul(&embedding[i], &embedding[j]);
            debug_assert!(echelon.contains(&prod));
            // RREF basis: coordinates are the pivot entries
            pivots.iter().map(|&c| prod[c]).collect()
        });
        Ok((algebra, embedding))
    }
}

/// Coordinates of `v ∈ S` in the RREF basis of `S`.
pub fn coordinates_in(s: &Subspace, v: &[u32]) -> Vec<u32> {
    s.pivots().iter().map(|&c| v[c]).collect()
}

fn single_support(v: &[u32]) -> Option<usize> {
    let mut it = v.iter().enumerate().filter(|(_, &c)| c != 0);
    match (it.next(), it.next()) {
        (Some((j, &1)), None) => Some(j),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::factory;

    fn f5() -> PrimeField {
        PrimeField::new(5).unwrap()
    }

    #[test]
    fn matrix_unit_products() {
        let a = factory::triangular(f5(), 3, true);
        // basis E12, E13, E23
        let e12 = a.unit_vector(0);
        let e13 = a.unit_vector(1);
        let e23 = a.unit_vector(2);
        assert_eq!(a.multiply(&e12, &e23).unwrap(), e13);
        assert_eq!(a.multiply(&e23, &e12).unwrap(), a.zero_vector());
        let s: Vec<u32> = e12.iter().zip(&e23).map(|(x, y)| x + y).collect();
        assert_eq!(a.multiply(&s, &s).unwrap(), e13);
        assert!(a.multiply(&[1, 0], &e12).is_err());
    }

    #[test]
    fn associativity_reports() {
        assert!(factory::full_matrix(f5(), 2).validate_associativity().is_empty());
        assert!(Algebra::zero_algebra(f5(), 3).validate_associativity().is_empty());
        let bad = Algebra::new(
            f5(),
            vec!["e1".into(), "e2".into()],
            [(0, 0, 1, 1), (1, 0, 0, 1)],
        )
        .unwrap();
        let v = bad.validate_associativity();
        assert!(v.iter().any(|w| (w.i, w.j, w.k) == (0, 0, 0)));
    }

    #[test]
    fn subspace_products() {
        let a = factory::triangular(f5(), 3, true);
        let u = Subspace::coordinate(f5(), 3, &[0]);
        let v = Subspace::coordinate(f5(), 3, &[2]);
        assert_eq!(a.subspace_product(&u, &v).unwrap(), Subspace::coordinate(f5(), 3, &[1]));
        assert!(a.subspace_product(&u, &a.zero_subspace()).unwrap().is_zero());
        // upper-triangular 2×2: E11, E12, E22
        let t = factory::triangular(f5(), 2, false);
        let diag = Subspace::coordinate(f5(), 3, &[0, 2]);
        let e12 = Subspace::coordinate(f5(), 3, &[1]);
        assert_eq!(t.subspace_product(&diag, &e12).unwrap(), e12);
    }

    #[test]
    fn nilpotency_examples() {
        for k in 1..=5 {
            let a = factory::triangular(f5(), k, true);
            let expected = if k == 1 { 1 } else { k };
            assert_eq!(a.algebra_nilpotency(), Nilpotency::Index(expected));
        }
        assert_eq!(Algebra::zero_algebra(f5(), 2).algebra_nilpotency(), Nilpotency::Index(2));
        let t = factory::triangular(f5(), 2, false);
        let e11 = Subspace::coordinate(f5(), 3, &[0]);
        assert_eq!(
            t.nilpotency_index(&e11).unwrap(),
            Nilpotency::NotNilpotent { stable_dim: 1 }
        );
        let e12 = Subspace::coordinate(f5(), 3, &[1]);
        let full = factory::full_matrix(f5(), 2);
        let off = Subspace::coordinate(f5(), 4, &[1]);
        assert_eq!(full.nilpotency_index(&off).unwrap(), Nilpotency::Index(2));
        let anti = Subspace::coordinate(f5(), 4, &[1, 2]);
        assert_eq!(
            full.nilpotency_index(&anti),
            Err(AlgebraError::NotMultiplicativelyClosed)
        );
        assert_eq!(t.nilpotency_index(&e12).unwrap(), Nilpotency::Index(2));
    }

    #[test]
    fn ideal_closure_examples() {
        let t = factory::triangular(f5(), 2, false);
        let e12 = Subspace::coordinate(f5(), 3, &[1]);
        assert_eq!(t.ideal_closure(&e12).unwrap().carrier, e12);
        assert!(t.ideal_closure(&t.zero_subspace()).unwrap().carrier.is_zero());
        let full = factory::full_matrix(f5(), 2);
        let e12 = Subspace::coordinate(f5(), 4, &[1]);
        assert!(full.ideal_closure(&e12).unwrap().carrier.is_full());
    }

    #[test]
    fn quotient_examples() {
        let t = factory::triangular(f5(), 2, false);
        let zero = t.ideal_closure(&t.zero_subspace()).unwrap();
        let q = t.quotient_algebra(&zero).unwrap();
        assert_eq!(q.algebra, t);
        let all = t.ideal_closure(&t.whole()).unwrap();
        assert_eq!(t.quotient_algebra(&all).unwrap().algebra.dim(), 0);
        let k = t.ideal_closure(&Subspace::coordinate(f5(), 3, &[1])).unwrap();
        let q = t.quotient_algebra(&k).unwrap();
        let expected = factory::diagonal(f5(), 2);
        assert_eq!(q.algebra.dim(), 2);
        assert_eq!(
            q.algebra.structure_constants().collect::<Vec<_>>(),
            expected.structure_constants().collect::<Vec<_>>()
        );
        assert!(q.algebra.validate_associativity().is_empty());
        for (i, s) in q.section.iter().enumerate() {
            assert_eq!(q.project(s), q.algebra.unit_vector(i));
        }
        let not_ideal = IdealHandle {
            carrier: Subspace::coordinate(f5(), 3, &[0]),
            left_closed: true,
            right_closed: true,
        };
        assert_eq!(t.quotient_algebra(&not_ideal).unwrap_err(), AlgebraError::NotAnIdeal);
    }

    #[test]
    fn unital_extension_examples() {
        let z = Algebra::zero_algebra(f5(), 1);
        let u = z.unital_extension();
        assert_eq!(u.dim(), 2);
        let x = u.unit_vector(0);
        let one = u.unit_vector(1);
        assert_eq!(u.mul(&one, &x), x);
        assert_eq!(u.mul(&x, &one), x);
        assert_eq!(u.mul(&x, &x), u.zero_vector());
        let t = factory::triangular(f5(), 2, false);
        let tu = t.unital_extension();
        assert!(tu.validate_associativity().is_empty());
        let embedded = Subspace::coordinate(f5(), 4, &[0, 1, 2]);
        assert!(tu.classify_ideal(&embedded, &tu.whole()).unwrap().is_two_sided());
    }
}
