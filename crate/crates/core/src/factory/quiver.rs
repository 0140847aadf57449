use std::collections::HashMap;

use crate::algebra::Algebra;
use crate::grading::{Grading, GroupAction};
use crate::group::FiniteGroup;
use crate::linalg::{Matrix, PrimeField, Subspace};

use super::FactoryError;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Arrow {
    pub source: usize,
    pub target: usize,
    /// Grade of the arrow, a group element index.
    pub label: usize,
}

/// Quiver with graded arrows; paths of length `≥ truncation` are zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuiverSpec {
    pub vertices: usize,
    pub arrows: Vec<Arrow>,
    pub truncation: usize,
    pub idempotents: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum BasisPath {
    Vertex(usize),
    /// Arrow indices, read left to right.
    Path(Vec<usize>),
}

impl BasisPath {
    pub fn len(&self) -> usize {
        match self {
            BasisPath::Vertex(_) => 0,
            BasisPath::Path(p) => p.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// A truncated path algebra with its grading by arrow labels.
#[derive(Clone, Debug)]
pub struct PathAlgebra {
    pub spec: QuiverSpec,
    pub algebra: Algebra,
    pub basis: Vec<BasisPath>,
    pub grading: Grading,
    index: HashMap<BasisPath, usize>,
}

fn enumerate_paths(q: &QuiverSpec) -> Vec<BasisPath> {
    let mut basis: Vec<BasisPath> = Vec::new();
    if q.idempotents {
        basis.extend((0..q.vertices).map(BasisPath::Vertex));
    }
    let mut layer: Vec<Vec<usize>> = (0..q.arrows.len()).map(|a| vec![a]).collect();
    let mut len = 1;
    while len < q.truncation && !layer.is_empty() {
        basis.extend(layer.iter().cloned().map(BasisPath::Path));
        let mut next = Vec::new();
        for p in &layer {
            let end = q.arrows[*p.last().expect("nonempty")].target;
            for (a, arrow) in q.arrows.iter().enumerate() {
                if arrow.source == end {
                    let mut ext = p.clone();
                    ext.push(a);
                    next.push(ext);
                }
            }
        }
        layer = next;
        len += 1;
    }
    basis
}

/// Number of basis elements `gen_path_algebra` would produce.
pub(crate) fn path_count(q: &QuiverSpec) -> usize {
    let mut count = if q.idempotents { q.vertices } else { 0 };
    // paths ending at each vertex, by length
    let mut ending = vec![0usize; q.vertices];
    for a in &q.arrows {
        ending[a.target] += 1;
    }
    let mut len = 1;
    while len < q.truncation {
        let layer: usize = ending.iter().sum();
        if layer == 0 {
            break;
        }
        count = count.saturating_add(layer);
        let mut next = vec![0usize; q.vertices];
        for a in &q.arrows {
            next[a.target] = next[a.target].saturating_add(ending[a.source]);
        }
        ending = next;
        len += 1;
    }
    count
}

/// Build the truncated path algebra of `q`, graded by `group`.
pub fn gen_path_algebra(q: &QuiverSpec, group: &FiniteGroup, field: PrimeField) -> Result<PathAlgebra, FactoryError> {
    if q.truncation == 0 {
        return Err(FactoryError::InvalidQuiver("truncation length must be at least 1".into()));
    }
    for (i, a) in q.arrows.iter().enumerate() {
        if a.source >= q.vertices || a.target >= q.vertices {
            return Err(FactoryError::InvalidQuiver(format!("arrow {i} has an endpoint out of range")));
        }
        if a.label >= group.order() {
            return Err(FactoryError::InvalidQuiver(format!("arrow {i} has label {} outside the group", a.label)));
        }
    }
    let basis = enumerate_paths(q);
    let index: HashMap<BasisPath, usize> = basis.iter().cloned().enumerate().map(|(i, b)| (b, i)).collect();
    let ends = |b: &BasisPath| match b {
        BasisPath::Vertex(v) => (*v, *v),
        BasisPath::Path(p) => (q.arrows[p[0]].source, q.arrows[*p.last().expect("nonempty")].target),
    };
    let mut products = Vec::new();
    for (i, x) in basis.iter().enumerate() {
        for (j, y) in basis.iter().enumerate() {
            let (_, tx) = ends(x);
            let (sy, _) = ends(y);
            if tx != sy {
                continue;
            }
            let k = match (x, y) {
                (BasisPath::Vertex(_), _) => Some(j),
                (_, BasisPath::Vertex(_)) => Some(i),
                (BasisPath::Path(p), BasisPath::Path(r)) => {
                    if p.len() + r.len() >= q.truncation {
                        None
                    } else {
                        let mut c = p.clone();
                        c.extend_from_slice(r);
                        index.get(&BasisPath::Path(c)).copied()
                    }
                }
            };
            if let Some(k) = k {
                products.push((i, j, k, 1));
            }
        }
    }
    let names = basis
        .iter()
        .map(|b| match b {
            BasisPath::Vertex(v) => format!("v{v}"),
            BasisPath::Path(p) => p.iter().map(|a| format!("a{a}")).collect::<Vec<_>>().join("."),
        })
        .collect();
    let algebra = Algebra::new(field, names, products)?;
    let labels: Vec<usize> = basis
        .iter()
        .map(|b| match b {
            BasisPath::Vertex(_) => group.identity(),
            BasisPath::Path(p) => p.iter().fold(group.identity(), |g, &a| group.op(g, q.arrows[a].label)),
        })
        .collect();
    let grading = Grading::from_labels(&algebra, group.clone(), &labels)?;
    Ok(PathAlgebra {
        spec: q.clone(),
        algebra,
        basis,
        grading,
        index,
    })
}

impl PathAlgebra {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn index_of(&self, b: &BasisPath) -> Option<usize> {
        self.index.get(b).copied()
    }

    fn span_where(&self, keep: impl Fn(usize, &BasisPath) -> bool) -> Subspace {
        let idx: Vec<usize> = (0..self.basis.len()).filter(|&i| keep(i, &self.basis[i])).collect();
        Subspace::coordinate(self.algebra.field(), self.dim(), &idx)
    }

    /// Grade-`e` paths of length at least `min_len`: an ideal of the identity
    /// component, nilpotent because of the truncation.
    pub fn identity_ideal(&self, min_len: usize) -> Subspace {
        let min_len = min_len.max(1);
        let e = self.grading.group().identity();
        let labels = self.grading.basis_labels().expect("basis-aligned grading");
        self.span_where(|i, b| labels[i] == e && b.len() >= min_len)
    }

    /// The suggested ideal: all grade-`e` paths of positive length.
    pub fn suggested_ideal(&self) -> Subspace {
        self.identity_ideal(1)
    }

    /// Span of all paths of length at least `min_len`.
    pub fn length_at_least(&self, min_len: usize) -> Subspace {
        self.span_where(|_, b| b.len() >= min_len)
    }

    /// Diagonal action of `C_r` scaling each arrow by `character[a]`; a path is
    /// scaled by the product over its arrows.
    pub fn scaling_action(&self, character: &[u32], order: usize) -> Result<GroupAction, FactoryError> {
        let f = self.algebra.field();
        if character.len() != self.spec.arrows.len() {
            return Err(FactoryError::InvalidQuiver(format!(
                "expected {} character values, found {}",
                self.spec.arrows.len(),
                character.len()
            )));
        }
        for &c in character {
            if c % f.p() == 0 || f.pow(c, order as u64) != 1 {
                return Err(FactoryError::NotRootOfUnity { scalar: c, order });
            }
        }
        let group = FiniteGroup::cyclic(order);
        let matrices = (0..order)
            .map(|k| {
                let mut m = Matrix::zeros(self.dim(), self.dim());
                for (i, b) in self.basis.iter().enumerate() {
                    let s = match b {
                        BasisPath::Vertex(_) => 1,
                        BasisPath::Path(p) => p.iter().fold(1, |acc, &a| f.mul(acc, f.pow(character[a], k as u64))),
                    };
                    m.set(i, i, s);
                }
                m
            })
            .collect();
        Ok(GroupAction::new(group, matrices)?)
    }

    /// Matrix of the algebra map induced by a quiver automorphism: vertices
    /// move by `vertex`, arrow `a` goes to `arrow(a) = (a', c)` meaning `c·a'`.
    pub(crate) fn induced_matrix(&self, vertex: impl Fn(usize) -> usize, arrow: impl Fn(usize) -> (usize, u32)) -> Matrix {
        let f = self.algebra.field();
        let mut m = Matrix::zeros(self.dim(), self.dim());
        for (j, b) in self.basis.iter().enumerate() {
            let (image, coeff) = match b {
                BasisPath::Vertex(v) => (BasisPath::Vertex(vertex(*v)), 1),
                BasisPath::Path(p) => {
                    let mut c = 1;
                    let mut q = Vec::with_capacity(p.len());
                    for &a in p {
                        let (a2, s) = arrow(a);
                        q.push(a2);
                        c = f.mul(c, s);
                    }
                    (BasisPath::Path(q), c)
                }
            };
            let i = self.index_of(&image).expect("quiver automorphisms permute paths");
            m.set(i, j, coeff);
        }
        m
    }
}

/// Homomorphisms `G → F_p^×`, each as its table of values, sorted.
pub fn linear_characters(group: &FiniteGroup, field: PrimeField) -> Vec<Vec<u32>> {
    let mut gens: Vec<usize> = Vec::new();
    let mut reached = vec![group.identity()];
    for g in group.elements() {
        if !reached.contains(&g) {
            gens.push(g);
            reached = group.generated(&gens);
        }
    }
    let candidates: Vec<Vec<u32>> = gens
        .iter()
        .map(|&g| {
            let k = group.element_order(g) as u64;
            (1..field.p()).filter(|&x| field.pow(x, k) == 1).collect()
        })
        .collect();
    let mut out = Vec::new();
    let mut choice = vec![0usize; gens.len()];
    loop {
        let values: Vec<u32> = choice.iter().zip(&candidates).map(|(&i, c)| c[i]).collect();
        if let Some(table) = extend_character(group, field, &gens, &values) {
            out.push(table);
        }
        // odometer over candidate choices
        let mut pos = 0;
        loop {
            if pos == gens.len() {
                out.sort();
                out.dedup();
                return out;
            }
            choice[pos] += 1;
            if choice[pos] < candidates[pos].len() {
                break;
            }
            choice[pos] = 0;
            pos += 1;
        }
    }
}

fn extend_character(group: &FiniteGroup, f: PrimeField, gens: &[usize], values: &[u32]) -> Option<Vec<u32>> {
    let n = group.order();
    let mut table: Vec<Option<u32>> = vec![None; n];
    table[group.identity()] = Some(1);
    let mut stack = vec![group.identity()];
    while let Some(x) = stack.pop() {
        let vx = table[x].expect("visited");
        for (&g, &vg) in gens.iter().zip(values) {
            let y = group.op(x, g);
            let vy = f.mul(vx, vg);
            match table[y] {
                Some(v) if v != vy => return None,
                Some(_) => {}
                None => {
                    table[y] = Some(vy);
                    stack.push(y);
                }
            }
        }
    }
    let table: Vec<u32> = table.into_iter().collect::<Option<_>>()?;
    let hom = (0..n).all(|a| (0..n).all(|b| table[group.op(a, b)] == f.mul(table[a], table[b])));
    hom.then_some(table)
}

/// One `G`-orbit of arrows: arrow `(b, g)` runs from vertex
/// `(source_orbit, g·source_shift)` to `(target_orbit, g·target_shift)`,
/// and `h` sends it to `character[h]·(b, h·g)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ArrowType {
    pub source_orbit: usize,
    pub source_shift: usize,
    pub target_orbit: usize,
    pub target_shift: usize,
    pub character: Vec<u32>,
}

/// A quiver on `orbits` regular `G`-orbits of vertices, with `G` acting by
/// left multiplication and linear characters.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrbitQuiver {
    pub group: FiniteGroup,
    pub orbits: usize,
    pub arrow_types: Vec<ArrowType>,
    pub truncation: usize,
    pub idempotents: bool,
}

impl OrbitQuiver {
    pub fn spec(&self) -> QuiverSpec {
        let g = &self.group;
        let n = g.order();
        let mut arrows = Vec::with_capacity(self.arrow_types.len() * n);
        for t in &self.arrow_types {
            for x in g.elements() {
                arrows.push(Arrow {
                    source: t.source_orbit * n + g.op(x, t.source_shift),
                    target: t.target_orbit * n + g.op(x, t.target_shift),
                    label: 0,
                });
            }
        }
        QuiverSpec {
            vertices: self.orbits * n,
            arrows,
            truncation: self.truncation,
            idempotents: self.idempotents,
        }
    }

    /// The path algebra (trivially graded) and the induced `G`-action.
    pub fn build(&self, field: PrimeField) -> Result<(PathAlgebra, GroupAction), FactoryError> {
        let g = &self.group;
        let n = g.order();
        for (i, t) in self.arrow_types.iter().enumerate() {
            if t.source_orbit >= self.orbits || t.target_orbit >= self.orbits || t.source_shift >= n || t.target_shift >= n {
                return Err(FactoryError::InvalidQuiver(format!("arrow type {i} is out of range")));
            }
            if extend_character(g, field, &g.elements().collect::<Vec<_>>(), &t.character).is_none()
                || t.character.len() != n
            {
                return Err(FactoryError::InvalidQuiver(format!("arrow type {i} has no linear character")));
            }
        }
        let trivial = FiniteGroup::cyclic(1);
        let pa = gen_path_algebra(&self.spec(), &trivial, field)?;
        let matrices = g
            .elements()
            .map(|h| {
                pa.induced_matrix(
                    |v| (v / n) * n + g.op(h, v % n),
                    |a| {
                        let (b, x) = (a / n, a % n);
                        (b * n + g.op(h, x), self.arrow_types[b].character[h])
                    },
                )
            })
            .collect();
        let action = GroupAction::new(g.clone(), matrices)?;
        Ok((pa, action))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f5() -> PrimeField {
        PrimeField::new(5).unwrap()
    }

    fn loop_quiver(label: usize, truncation: usize) -> QuiverSpec {
        QuiverSpec {
            vertices: 1,
            arrows: vec![Arrow {
                source: 0,
                target: 0,
                label,
            }],
            truncation,
            idempotents: true,
        }
    }

    #[test]
    fn single_loop() {
        let c2 = FiniteGroup::cyclic(2);
        let pa = gen_path_algebra(&loop_quiver(1, 3), &c2, f5()).unwrap();
        assert_eq!(pa.algebra.names(), ["v0", "a0", "a0.a0"]);
        assert!(pa.algebra.validate_associativity().is_empty());
        assert!(pa.grading.validate(&pa.algebra).is_valid());
        assert_eq!(*pa.grading.identity_component(), Subspace::coordinate(f5(), 3, &[0, 2]));
        assert_eq!(*pa.grading.component(1), Subspace::coordinate(f5(), 3, &[1]));
        let ie = pa.suggested_ideal();
        assert_eq!(ie, Subspace::coordinate(f5(), 3, &[2]));
        assert_eq!(pa.algebra.nilpotency_index(&ie).unwrap().index(), Some(2));
    }

    #[test]
    fn two_cycle() {
        let c2 = FiniteGroup::cyclic(2);
        let q = QuiverSpec {
            vertices: 2,
            arrows: vec![
                Arrow { source: 0, target: 1, label: 1 },
                Arrow { source: 1, target: 0, label: 1 },
            ],
            truncation: 3,
            idempotents: true,
        };
        let pa = gen_path_algebra(&q, &c2, f5()).unwrap();
        assert_eq!(pa.dim(), 6);
        let ae = pa.grading.identity_component();
        assert_eq!(ae.dim(), 4);
        let ie = pa.suggested_ideal();
        assert_eq!(ie.dim(), 2);
        assert_eq!(ae.dim() - ie.dim(), 2);
        assert_eq!(pa.algebra.nilpotency_index(&ie).unwrap().index(), Some(2));
        assert!(pa.algebra.classify_ideal(&ie, ae).unwrap().is_two_sided());
    }

    #[test]
    fn truncation_bounds_nilpotency() {
        let c3 = FiniteGroup::cyclic(3);
        let q = QuiverSpec {
            vertices: 2,
            arrows: vec![
                Arrow { source: 0, target: 1, label: 1 },
                Arrow { source: 1, target: 0, label: 2 },
                Arrow { source: 1, target: 1, label: 1 },
            ],
            truncation: 4,
            idempotents: false,
        };
        let pa = gen_path_algebra(&q, &c3, PrimeField::new(7).unwrap()).unwrap();
        assert_eq!(path_count(&q), pa.dim());
        let idx = pa.algebra.algebra_nilpotency().index().unwrap();
        assert!(idx <= 4);
        assert!(pa.grading.validate(&pa.algebra).is_valid());
    }

    #[test]
    fn scaling_actions() {
        let c1 = FiniteGroup::cyclic(1);
        let mut q = loop_quiver(0, 4);
        let pa = gen_path_algebra(&q, &c1, f5()).unwrap();
        let act = pa.scaling_action(&[4], 2).unwrap();
        assert!(act.validate(&pa.algebra).is_valid());
        // v, a, a², a³ → fixed: v, a²
        assert_eq!(act.fixed_subalgebra(&pa.algebra), Subspace::coordinate(f5(), 4, &[0, 2]));
        let triv = pa.scaling_action(&[1], 2).unwrap();
        assert!(triv.fixed_subalgebra(&pa.algebra).is_full());
        assert!(pa.scaling_action(&[2], 2).is_err());

        q.arrows.push(Arrow { source: 0, target: 0, label: 0 });
        q.truncation = 3;
        let f7 = PrimeField::new(7).unwrap();
        let pa = gen_path_algebra(&q, &c1, f7).unwrap();
        let act = pa.scaling_action(&[2, 4], 3).unwrap();
        assert_eq!(act.group().order(), 3);
        assert!(act.validate(&pa.algebra).is_valid());
    }

    #[test]
    fn characters_of_small_groups() {
        let f7 = PrimeField::new(7).unwrap();
        assert_eq!(linear_characters(&FiniteGroup::cyclic(3), f7).len(), 3);
        assert_eq!(linear_characters(&FiniteGroup::symmetric(3), f7).len(), 2);
        assert_eq!(linear_characters(&FiniteGroup::cyclic(6), f7).len(), 6);
        let f3 = PrimeField::new(3).unwrap();
        assert_eq!(linear_characters(&FiniteGroup::cyclic(4), f3).len(), 2);
    }

    #[test]
    fn orbit_quiver_action() {
        let s3 = FiniteGroup::symmetric(3);
        let f7 = PrimeField::new(7).unwrap();
        let chars = linear_characters(&s3, f7);
        let oq = OrbitQuiver {
            group: s3.clone(),
            orbits: 1,
            arrow_types: vec![ArrowType {
                source_orbit: 0,
                source_shift: 0,
                target_orbit: 0,
                target_shift: 1,
                character: chars[1].clone(),
            }],
            truncation: 3,
            idempotents: true,
        };
        let (pa, act) = oq.build(f7).unwrap();
        assert!(pa.algebra.validate_associativity().is_empty());
        let report = act.validate(&pa.algebra);
        assert!(report.is_valid(), "{:?}", report.violations.first());
        let fixed = act.fixed_subalgebra(&pa.algebra);
        assert!(pa.algebra.is_multiplicatively_closed(&fixed));
    }
}
