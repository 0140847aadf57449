use std::fmt;

use super::{Echelon, LinalgError, PrimeField, Subspace};

/// Dense row-major matrix over a prime field. The field is supplied by the
/// caller for every arithmetic operation.
///
/// As a linear map, a `rows × cols` matrix sends a column vector in `F^cols`
/// to `F^rows`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<u32>,
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.row_iter()).finish()
    }
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        m
    }

    /// Build from explicit rows, reducing every entry into the field.
    pub fn from_rows(field: PrimeField, cols: usize, rows: &[Vec<u32>]) -> Result<Self, LinalgError> {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for (i, r) in rows.iter().enumerate() {
            if r.len() != cols {
                return Err(LinalgError::RowLength {
                    row: i,
                    expected: cols,
                    found: r.len(),
                });
            }
            data.extend(r.iter().map(|&x| x % field.p()));
        }
        Ok(Matrix {
            rows: rows.len(),
            cols,
            data,
        })
    }

    pub(crate) fn from_raw(rows: usize, cols: usize, data: Vec<u32>) -> Self {
        debug_assert_eq!(data.len(), rows * cols);
        Matrix { rows, cols, data }
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> u32 {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: u32) {
        self.data[r * self.cols + c] = v;
    }

    #[inline]
    pub fn row(&self, r: usize) -> &[u32] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn row_iter(&self) -> impl Iterator<Item = &[u32]> + '_ {
        (0..self.rows).map(move |r| self.row(r))
    }

    pub fn to_rows(&self) -> Vec<Vec<u32>> {
        self.row_iter().map(|r| r.to_vec()).collect()
    }

    pub fn column(&self, c: usize) -> Vec<u32> {
        (0..self.rows).map(|r| self.get(r, c)).collect()
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.data[c * self.rows + r] = self.data[r * self.cols + c];
            }
        }
        t
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|r| (0..self.cols).all(|c| self.get(r, c) == u32::from(r == c)))
    }

    /// Matrix product `self · other`.
    pub fn mul(&self, field: PrimeField, other: &Matrix) -> Result<Matrix, LinalgError> {
        if self.cols != other.rows {
            return Err(LinalgError::DimensionMismatch {
                expected: self.cols,
                found: other.rows,
            });
        }
        let p = field.p() as u64;
        let mut out = vec![0u64; self.rows * other.cols];
        for r in 0..self.rows {
            let acc = &mut out[r * other.cols..(r + 1) * other.cols];
            for k in 0..self.cols {
                let a = self.get(r, k) as u64;
                if a == 0 {
                    continue;
                }
                for (slot, &b) in acc.iter_mut().zip(other.row(k)) {
                    *slot = (*slot + a * b as u64) % p;
                }
            }
        }
        Ok(Matrix::from_raw(
            self.rows,
            other.cols,
            out.into_iter().map(|x| x as u32).collect(),
        ))
    }

    /// Apply to a column vector: `self · v`.
    pub fn apply(&self, field: PrimeField, v: &[u32]) -> Result<Vec<u32>, LinalgError> {
        if v.len() != self.cols {
            return Err(LinalgError::DimensionMismatch {
                expected: self.cols,
                found: v.len(),
            });
        }
        let p = field.p() as u64;
        Ok((0..self.rows)
            .map(|r| {
                let s = self
                    .row(r)
                    .iter()
                    .zip(v)
                    .fold(0u64, |acc, (&a, &b)| (acc + a as u64 * b as u64) % p);
                s as u32
            })
            .collect())
    }

    /// `self - λ·I` for square matrices.
    pub fn minus_scalar(&self, field: PrimeField, lambda: u32) -> Matrix {
        let mut m = self.clone();
        for i in 0..self.rows.min(self.cols) {
            let v = m.get(i, i);
            m.set(i, i, field.sub(v, lambda));
        }
        m
    }

    /// Unique reduced row-echelon form with zero rows removed.
    pub fn rref(&self, field: PrimeField) -> Matrix {
        let mut e = Echelon::new(field, self.cols);
        for r in self.row_iter() {
            e.insert(r.to_vec());
        }
        e.to_matrix()
    }

    pub fn rank(&self, field: PrimeField) -> usize {
        self.rref(field).rows()
    }

    /// Null space of the map `v ↦ self · v`.
    pub fn kernel(&self, field: PrimeField) -> Subspace {
        let mut e = Echelon::new(field, self.cols);
        for r in self.row_iter() {
            e.insert(r.to_vec());
        }
        e.null_space()
    }

    pub fn inverse(&self, field: PrimeField) -> Option<Matrix> {
        if self.rows != self.cols {
            return None;
        }
        let n = self.rows;
        let mut aug = Matrix::zeros(n, 2 * n);
        for r in 0..n {
            for c in 0..n {
                aug.set(r, c, self.get(r, c));
            }
            aug.set(r, n + r, 1);
        }
        let red = aug.rref(field);
        if red.rows() < n {
            return None;
        }
        let mut inv = Matrix::zeros(n, n);
        for r in 0..n {
            if red.get(r, r) != 1 || (0..n).any(|c| c != r && red.get(r, c) != 0) {
                return None;
            }
            for c in 0..n {
                inv.set(r, c, red.get(r, n + c));
            }
        }
        Some(inv)
    }
}
