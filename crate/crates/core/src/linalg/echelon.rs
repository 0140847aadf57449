use super::{Matrix, PrimeField, Subspace};

/// Incrementally maintained reduced row-echelon basis.
///
/// Every stored row has a leading 1 in its pivot column and zeros in the
/// pivot columns of all other rows, so reduction by the stored rows can be
/// done in any order.
#[derive(Clone, Debug)]
pub struct Echelon {
    field: PrimeField,
    width: usize,
    rows: Vec<Vec<u32>>,
    pivots: Vec<usize>,
    row_of_col: Vec<Option<usize>>,
}

impl Echelon {
    pub fn new(field: PrimeField, width: usize) -> Self {
        Echelon {
            field,
            width,
            rows: Vec::new(),
            pivots: Vec::new(),
            row_of_col: vec![None; width],
        }
    }

    pub fn from_subspace(s: &Subspace) -> Self {
        let mut e = Echelon::new(s.field(), s.ambient_dim());
        for r in s.basis().row_iter() {
            e.push_reduced_row(r.to_vec());
        }
        e
    }

    #[inline]
    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    #[inline]
    pub fn width(&self) -> usize {
        self.width
    }

    pub fn is_full(&self) -> bool {
        self.rows.len() == self.width
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn is_pivot(&self, col: usize) -> bool {
        self.row_of_col[col].is_some()
    }

    /// Reduce `v` in place against the stored rows; the residual is zero
    /// exactly when `v` lies in their span.
    pub fn reduce_in_place(&self, v: &mut [u32]) {
        debug_assert_eq!(v.len(), self.width);
        let f = self.field;
        let p = f.p() as u64;
        for (row, &pc) in self.rows.iter().zip(&self.pivots) {
            let c = v[pc];
            if c == 0 {
                continue;
            }
            let neg = p - c as u64;
            for (x, &r) in v.iter_mut().zip(row.iter()) {
                if r != 0 {
                    *x = ((*x as u64 + neg * r as u64) % p) as u32;
                }
            }
        }
    }

    pub fn reduce(&self, v: &[u32]) -> Vec<u32> {
        let mut w = v.to_vec();
        self.reduce_in_place(&mut w);
        w
    }

    pub fn contains(&self, v: &[u32]) -> bool {
        self.reduce(v).iter().all(|&x| x == 0)
    }

    /// Insert a vector; returns `true` when it increased the rank.
    pub fn insert(&mut self, mut v: Vec<u32>) -> bool {
        if self.is_full() {
            return false;
        }
        let p = self.field.p();
        for x in v.iter_mut() {
            *x %= p;
        }
        self.reduce_in_place(&mut v);
        let Some(lead) = v.iter().position(|&x| x != 0) else {
            return false;
        };
        let inv = self.field.inv(v[lead]).expect("nonzero pivot");
        for x in v.iter_mut() {
            if *x != 0 {
                *x = self.field.mul(*x, inv);
            }
        }
        // clear the new pivot column from existing rows
        let pp = p as u64;
        for row in self.rows.iter_mut() {
            let c = row[lead];
            if c == 0 {
                continue;
            }
            let neg = pp - c as u64;
            for (x, &r) in row.iter_mut().zip(v.iter()) {
                if r != 0 {
                    *x = ((*x as u64 + neg * r as u64) % pp) as u32;
                }
            }
        }
        self.row_of_col[lead] = Some(self.rows.len());
        self.rows.push(v);
        self.pivots.push(lead);
        true
    }

    /// Append a row known to be reduced against the current rows with a
    /// leading 1 that is zero in all existing rows (e.g. rows of an RREF).
    fn push_reduced_row(&mut self, v: Vec<u32>) {
        let lead = v.iter().position(|&x| x != 0).expect("nonzero row");
        self.row_of_col[lead] = Some(self.rows.len());
        self.rows.push(v);
        self.pivots.push(lead);
    }

    /// Canonical RREF matrix (rows sorted by pivot column).
    pub fn to_matrix(&self) -> Matrix {
        let mut order: Vec<usize> = (0..self.rows.len()).collect();
        order.sort_by_key(|&i| self.pivots[i]);
        let mut data = Vec::with_capacity(order.len() * self.width);
        for i in order {
            data.extend_from_slice(&self.rows[i]);
        }
        Matrix::from_raw(self.rows.len(), self.width, data)
    }

    pub fn into_subspace(self) -> Subspace {
        let m = self.to_matrix();
        Subspace::from_rref(self.field, self.width, m)
    }

    /// Solutions of `row · v = 0` for every stored row.
    pub fn null_space(&self) -> Subspace {
        let f = self.field;
        let mut basis = Vec::new();
        for free in 0..self.width {
            if self.row_of_col[free].is_some() {
                continue;
            }
            let mut v = vec![0u32; self.width];
            v[free] = 1;
            for (row, &pc) in self.rows.iter().zip(&self.pivots) {
                v[pc] = f.neg(row[free]);
            }
            basis.push(v);
        }
        let mut e = Echelon::new(f, self.width);
        for v in basis {
            e.insert(v);
        }
        e.into_subspace()
    }
}
