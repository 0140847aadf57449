//! Finite groups given by Cayley tables.

use std::collections::{BTreeSet, HashSet, VecDeque};

use serde::Serialize;
use thiserror::Error;

use crate::linalg::is_prime;

#[derive(Debug, Error, Clone, PartialEq, Eq, Serialize)]
pub enum GroupError {
    #[error("empty table")]
    Empty,
    #[error("table is not square: row {row} has {found} entries, expected {expected}")]
    NotSquare { row: usize, expected: usize, found: usize },
    #[error("entry {value} at ({row}, {col}) is out of range")]
    EntryOutOfRange { row: usize, col: usize, value: usize },
    #[error("no two-sided identity element")]
    NoIdentity,
    #[error("element {0} has no inverse")]
    NoInverse(usize),
    #[error("associativity fails at ({0}, {1}, {2})")]
    NotAssociative(usize, usize, usize),
    #[error("expected {expected} names, found {found}")]
    NameCount { expected: usize, found: usize },
    #[error("subset is not a subgroup")]
    NotSubgroup,
    #[error("subgroup is not normal")]
    NotNormal,
    #[error("group is not soluble")]
    NotSoluble,
    #[error("group order {order} exceeds the search bound {bound}")]
    TooLarge { order: usize, bound: usize },
    #[error("invalid series: {0}")]
    InvalidSeries(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteGroup {
    table: Vec<Vec<usize>>,
    identity: usize,
    inverses: Vec<usize>,
    names: Vec<String>,
}

/// `{e} = G_0 ⊲ G_1 ⊲ … ⊲ G_k = G` with every `|G_{i+1} : G_i|` prime.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PrimeSeries {
    /// Sorted element lists, bottom (trivial subgroup) first.
    pub chain: Vec<Vec<usize>>,
}

impl PrimeSeries {
    /// Number of prime steps.
    pub fn len(&self) -> usize {
        self.chain.len().saturating_sub(1)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn quotient_orders(&self) -> Vec<usize> {
        self.chain.windows(2).map(|w| w[1].len() / w[0].len()).collect()
    }

    /// Check the series against `group`.
    pub fn validate(&self, group: &FiniteGroup) -> Result<(), GroupError> {
        let bad = |m: &str| Err(GroupError::InvalidSeries(m.to_string()));
        let Some(first) = self.chain.first() else {
            return bad("empty chain");
        };
        if first != &vec![group.identity()] {
            return bad("series must start at the trivial subgroup");
        }
        let top: Vec<usize> = (0..group.order()).collect();
        if self.chain.last() != Some(&top) {
            return bad("series must end at the whole group");
        }
        for (i, w) in self.chain.windows(2).enumerate() {
            let (lower, upper) = (&w[0], &w[1]);
            if !group.is_subgroup(upper) || !group.is_subgroup(lower) {
                return Err(GroupError::InvalidSeries(format!("step {i} is not a subgroup")));
            }
            let inner: BTreeSet<usize> = lower.iter().copied().collect();
            if !lower.iter().all(|x| upper.contains(x)) || lower.len() >= upper.len() {
                return Err(GroupError::InvalidSeries(format!("step {i} is not strictly nested")));
            }
            if upper.len() % lower.len() != 0 || !is_prime((upper.len() / lower.len()) as u64) {
                return Err(GroupError::InvalidSeries(format!("step {i} has non-prime index")));
            }
            // lower ⊲ upper
            for &g in upper {
                for &h in lower {
                    if !inner.contains(&group.conjugate(h, g)) {
                        return Err(GroupError::InvalidSeries(format!("step {i} is not normal")));
                    }
                }
            }
        }
        Ok(())
    }
}

impl FiniteGroup {
    /// Validate a Cayley table and build the group.
    pub fn from_table(table: Vec<Vec<usize>>, names: Option<Vec<String>>) -> Result<Self, GroupError> {
        let n = table.len();
        if n == 0 {
            return Err(GroupError::Empty);
        }
        for (row, r) in table.iter().enumerate() {
            if r.len() != n {
                return Err(GroupError::NotSquare {
                    row,
                    expected: n,
                    found: r.len(),
                });
            }
            if let Some((col, &value)) = r.iter().enumerate().find(|(_, &v)| v >= n) {
                return Err(GroupError::EntryOutOfRange { row, col, value });
            }
        }
        let identity = (0..n)
            .find(|&e| (0..n).all(|x| table[e][x] == x && table[x][e] == x))
            .ok_or(GroupError::NoIdentity)?;
        let mut inverses = vec![0; n];
        for (x, inv) in inverses.iter_mut().enumerate() {
            *inv = (0..n)
                .find(|&y| table[x][y] == identity && table[y][x] == identity)
                .ok_or(GroupError::NoInverse(x))?;
        }
        for a in 0..n {
            for b in 0..n {
                let ab = table[a][b];
                for c in 0..n {
                    if table[ab][c] != table[a][table[b][c]] {
                        return Err(GroupError::NotAssociative(a, b, c));
                    }
                }
            }
        }
        let names = match names {
            Some(names) if names.len() != n => {
                return Err(GroupError::NameCount {
                    expected: n,
                    found: names.len(),
                })
            }
            Some(names) => names,
            None => (0..n).map(|i| format!("g{i}")).collect(),
        };
        Ok(FiniteGroup {
            table,
            identity,
            inverses,
            names,
        })
    }

    /// Cyclic group `Z/n` with element `k` standing for `g^k`.
    pub fn cyclic(n: usize) -> Self {
        let table = (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect();
        let names = (0..n)
            .map(|k| match k {
                0 => "e".to_string(),
                1 => "g".to_string(),
                _ => format!("g^{k}"),
            })
            .collect();
        FiniteGroup::from_table(table, Some(names)).expect("cyclic table is a group")
    }

    /// Group of permutations, closed under composition; `(σ·τ)(x) = σ(τ(x))`.
    /// Elements are sorted lexicographically, so the identity comes first.
    pub fn from_permutations(generators: &[Vec<usize>]) -> Self {
        let degree = generators.first().map_or(0, |g| g.len());
        let id: Vec<usize> = (0..degree).collect();
        let mut seen: BTreeSet<Vec<usize>> = BTreeSet::new();
        let mut queue = VecDeque::from([id.clone()]);
        seen.insert(id);
        while let Some(x) = queue.pop_front() {
            for g in generators {
                let y: Vec<usize> = (0..degree).map(|i| g[x[i]]).collect();
                if seen.insert(y.clone()) {
                    queue.push_back(y);
                }
            }
        }
        let elems: Vec<Vec<usize>> = seen.into_iter().collect();
        let index = |p: &Vec<usize>| elems.binary_search(p).expect("closed under composition");
        let table = elems
            .iter()
            .map(|s| {
                elems
                    .iter()
                    .map(|t| index(&(0..degree).map(|i| s[t[i]]).collect()))
                    .collect()
            })
            .collect();
        let names = elems
            .iter()
            .map(|p| p.iter().map(|x| x.to_string()).collect::<String>())
            .collect();
        FiniteGroup::from_table(table, Some(names)).expect("permutation table is a group")
    }

    /// Symmetric group on `k` points.
    pub fn symmetric(k: usize) -> Self {
        if k <= 1 {
            return FiniteGroup::cyclic(1);
        }
        let mut swap: Vec<usize> = (0..k).collect();
        swap.swap(0, 1);
        let cycle: Vec<usize> = (0..k).map(|i| (i + 1) % k).collect();
        FiniteGroup::from_permutations(&[swap, cycle])
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.table.len()
    }

    #[inline]
    pub fn identity(&self) -> usize {
        self.identity
    }

    #[inline]
    pub fn op(&self, a: usize, b: usize) -> usize {
        self.table[a][b]
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inverses[a]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn table(&self) -> &[Vec<usize>] {
        &self.table
    }

    /// `g h g⁻¹`
    pub fn conjugate(&self, h: usize, g: usize) -> usize {
        self.op(self.op(g, h), self.inv(g))
    }

    pub fn elements(&self) -> impl Iterator<Item = usize> {
        0..self.order()
    }

    pub fn non_identity(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.order()).filter(move |&g| g != self.identity)
    }

    pub fn element_order(&self, a: usize) -> usize {
        let mut x = a;
        let mut k = 1;
        while x != self.identity {
            x = self.op(x, a);
            k += 1;
        }
        k
    }

    pub fn power(&self, a: usize, k: usize) -> usize {
        (0..k).fold(self.identity, |acc, _| self.op(acc, a))
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.order()).all(|a| (0..self.order()).all(|b| self.op(a, b) == self.op(b, a)))
    }

    /// Is the group cyclic of prime order?
    pub fn is_prime_cyclic(&self) -> bool {
        is_prime(self.order() as u64)
    }

    /// Smallest-index element generating the whole group, if cyclic.
    pub fn generator(&self) -> Option<usize> {
        (0..self.order()).find(|&g| self.element_order(g) == self.order())
    }

    pub fn is_subgroup(&self, subset: &[usize]) -> bool {
        if subset.is_empty() || subset.iter().any(|&x| x >= self.order()) {
            return false;
        }
        let set: HashSet<usize> = subset.iter().copied().collect();
        set.contains(&self.identity)
            && subset
                .iter()
                .all(|&a| subset.iter().all(|&b| set.contains(&self.op(a, self.inv(b)))))
    }

    pub fn is_normal(&self, subset: &[usize]) -> Result<bool, GroupError> {
        if !self.is_subgroup(subset) {
            return Err(GroupError::NotSubgroup);
        }
        let set: HashSet<usize> = subset.iter().copied().collect();
        Ok(self
            .elements()
            .all(|g| subset.iter().all(|&h| set.contains(&self.conjugate(h, g)))))
    }

    /// Subgroup generated by `gens`, as a sorted element list.
    pub fn generated(&self, gens: &[usize]) -> Vec<usize> {
        let mut seen: BTreeSet<usize> = BTreeSet::from([self.identity]);
        let mut queue: VecDeque<usize> = VecDeque::from([self.identity]);
        while let Some(x) = queue.pop_front() {
            for &g in gens {
                let y = self.op(x, g);
                if seen.insert(y) {
                    queue.push_back(y);
                }
            }
        }
        seen.into_iter().collect()
    }

    /// `G/H` with cosets ordered by their least element; returns the quotient
    /// group and the map `g ↦ gH`.
    pub fn quotient(&self, subgroup: &[usize]) -> Result<(FiniteGroup, Vec<usize>), GroupError> {
        if !self.is_normal(subgroup)? {
            return Err(GroupError::NotNormal);
        }
        let n = self.order();
        let mut coset_of = vec![usize::MAX; n];
        let mut reps = Vec::new();
        for g in 0..n {
            if coset_of[g] != usize::MAX {
                continue;
            }
            let c = reps.len();
            reps.push(g);
            for &h in subgroup {
                coset_of[self.op(g, h)] = c;
            }
        }
        let table = reps
            .iter()
            .map(|&a| reps.iter().map(|&b| coset_of[self.op(a, b)]).collect())
            .collect();
        let names = reps.iter().map(|&r| format!("{}H", self.names[r])).collect();
        let q = FiniteGroup::from_table(table, Some(names))?;
        Ok((q, coset_of))
    }

    /// A subgroup as a standalone group, with the embedding of its elements.
    pub fn subgroup(&self, subset: &[usize]) -> Result<(FiniteGroup, Vec<usize>), GroupError> {
        if !self.is_subgroup(subset) {
            return Err(GroupError::NotSubgroup);
        }
        let mut elems = subset.to_vec();
        elems.sort_unstable();
        elems.dedup();
        let pos = |x: usize| elems.binary_search(&x).expect("closed");
        let table = elems
            .iter()
            .map(|&a| elems.iter().map(|&b| pos(self.op(a, b))).collect())
            .collect();
        let names = elems.iter().map(|&x| self.names[x].clone()).collect();
        Ok((FiniteGroup::from_table(table, Some(names))?, elems))
    }

    /// All subgroups, each as a sorted element list, in lexicographic order.
    pub fn subgroups(&self) -> Vec<Vec<usize>> {
        let trivial = vec![self.identity];
        let mut seen: BTreeSet<Vec<usize>> = BTreeSet::from([trivial.clone()]);
        let mut queue = VecDeque::from([trivial]);
        while let Some(h) = queue.pop_front() {
            for g in 0..self.order() {
                if h.binary_search(&g).is_ok() {
                    continue;
                }
                let mut gens = h.clone();
                gens.push(g);
                let k = self.generated(&gens);
                if seen.insert(k.clone()) {
                    queue.push_back(k);
                }
            }
        }
        seen.into_iter().collect()
    }

    /// Find a subnormal series with prime quotients; at each step downward the
    /// lexicographically least admissible subgroup is taken.
    pub fn find_prime_series(&self, bound: usize) -> Result<PrimeSeries, GroupError> {
        if self.order() > bound {
            return Err(GroupError::TooLarge {
                order: self.order(),
                bound,
            });
        }
        let subgroups = self.subgroups();
        let top: Vec<usize> = (0..self.order()).collect();
        let mut chain = vec![top];
        if self.descend(&subgroups, &mut chain) {
            chain.reverse();
            Ok(PrimeSeries { chain })
        } else {
            Err(GroupError::NotSoluble)
        }
    }

    fn descend(&self, subgroups: &[Vec<usize>], chain: &mut Vec<Vec<usize>>) -> bool {
        let current = chain.last().expect("nonempty").clone();
        if current.len() == 1 {
            return true;
        }
        let current_set: HashSet<usize> = current.iter().copied().collect();
        for h in subgroups {
            if h.len() >= current.len()
                || current.len() % h.len() != 0
                || !is_prime((current.len() / h.len()) as u64)
                || !h.iter().all(|x| current_set.contains(x))
            {
                continue;
            }
            let hs: HashSet<usize> = h.iter().copied().collect();
            let normal = current
                .iter()
                .all(|&g| h.iter().all(|&x| hs.contains(&self.conjugate(x, g))));
            if !normal {
                continue;
            }
            chain.push(h.clone());
            if self.descend(subgroups, chain) {
                return true;
            }
            chain.pop();
        }
        false
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validates_tables() {
        let c2 = FiniteGroup::from_table(vec![vec![0, 1], vec![1, 0]], None).unwrap();
        assert_eq!(c2.identity(), 0);
        assert_eq!(
            FiniteGroup::from_table(vec![vec![1, 0], vec![1, 0]], None),
            Err(GroupError::NoIdentity)
        );
        let s3 = FiniteGroup::symmetric(3);
        assert_eq!(s3.order(), 6);
        assert!(!s3.is_abelian());
        // tamper one entry
        let mut t = s3.table().to_vec();
        t[3][4] = t[3][5];
        assert!(FiniteGroup::from_table(t, None).is_err());
    }

    #[test]
    fn normality_and_quotients() {
        let s3 = FiniteGroup::symmetric(3);
        let subs = s3.subgroups();
        assert_eq!(subs.len(), 6);
        let c3 = subs.iter().find(|h| h.len() == 3).unwrap().clone();
        assert!(s3.is_normal(&c3).unwrap());
        let (q, map) = s3.quotient(&c3).unwrap();
        assert_eq!(q.order(), 2);
        for a in 0..6 {
            for b in 0..6 {
                assert_eq!(map[s3.op(a, b)], q.op(map[a], map[b]));
            }
        }
        assert!(s3.is_normal(&[s3.identity()]).unwrap());
        let (q, _) = s3.quotient(&[s3.identity()]).unwrap();
        assert_eq!(q.order(), 6);
        let order2 = subs.iter().find(|h| h.len() == 2).unwrap();
        assert!(!s3.is_normal(order2).unwrap());
        assert_eq!(s3.quotient(order2).unwrap_err(), GroupError::NotNormal);
        assert_eq!(s3.is_normal(&[1, 2]), Err(GroupError::NotSubgroup));
    }

    #[test]
    fn prime_series_examples() {
        let c6 = FiniteGroup::cyclic(6);
        let s = c6.find_prime_series(64).unwrap();
        assert_eq!(s.chain, vec![vec![0], vec![0, 2, 4], vec![0, 1, 2, 3, 4, 5]]);
        s.validate(&c6).unwrap();
        let s3 = FiniteGroup::symmetric(3);
        let s = s3.find_prime_series(64).unwrap();
        assert_eq!(s.quotient_orders(), vec![3, 2]);
        s.validate(&s3).unwrap();
        let c2 = FiniteGroup::cyclic(2);
        assert_eq!(c2.find_prime_series(64).unwrap().chain, vec![vec![0], vec![0, 1]]);
        assert!(matches!(
            FiniteGroup::cyclic(70).find_prime_series(64),
            Err(GroupError::TooLarge { .. })
        ));
    }

    #[test]
    fn a5_is_not_soluble() {
        // even permutations of 5 points
        let g = FiniteGroup::from_permutations(&[vec![1, 2, 0, 3, 4], vec![1, 2, 3, 4, 0]]);
        assert_eq!(g.order(), 60);
        assert_eq!(g.find_prime_series(64), Err(GroupError::NotSoluble));
    }

    #[test]
    fn series_validation_rejects_bad_chains() {
        let s3 = FiniteGroup::symmetric(3);
        let order2 = s3.subgroups().into_iter().find(|h| h.len() == 2).unwrap();
        let bad = PrimeSeries {
            chain: vec![vec![s3.identity()], order2, (0..6).collect()],
        };
        assert!(bad.validate(&s3).is_err());
    }
}
