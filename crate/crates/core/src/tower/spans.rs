use std::collections::HashMap;

use crate::algebra::Algebra;
use crate::grading::Grading;
use crate::linalg::{solve_constraints, QuotientMap, Subspace};

use super::{Representative, TowerError};

/// One factor of a θ-constraint: a span of products of a fixed grade,
/// optionally together with the formal unit (grade `e` only).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Side {
    pub grade: usize,
    pub span: Subspace,
    pub unit: bool,
}

impl Side {
    pub fn unit(algebra: &Algebra, identity: usize) -> Self {
        Side {
            grade: identity,
            span: algebra.zero_subspace(),
            unit: true,
        }
    }

    pub fn is_empty(&self) -> bool {
        !self.unit && self.span.is_zero()
    }
}

/// Spans of products of exactly `t` pool elements, per grade, for `t ≤ W`.
/// Row 0 is zero; the formal unit of length 0 is implicit at grade `e`.
#[derive(Clone, Debug)]
pub struct ProductSpanTable {
    identity: usize,
    exact: Vec<Vec<Subspace>>,
    cumulative: Vec<Vec<Subspace>>,
}

impl ProductSpanTable {
    pub fn width(&self) -> usize {
        self.exact.len() - 1
    }

    /// Span of products of exactly `t` factors with grade product `h`.
    pub fn exact(&self, t: usize, h: usize) -> &Subspace {
        &self.exact[t][h]
    }

    /// Span of products of at most `t` factors (units excluded).
    pub fn cumulative(&self, t: usize, h: usize) -> &Subspace {
        &self.cumulative[t][h]
    }

    pub fn side(&self, t: usize, h: usize) -> Side {
        Side {
            grade: h,
            span: self.cumulative[t][h].clone(),
            unit: h == self.identity,
        }
    }

    /// Least `u ≤ t` whose cumulative span at `h` equals the one at `t`.
    pub fn canonical(&self, t: usize, h: usize) -> usize {
        let dim = self.cumulative[t][h].dim();
        (0..=t).find(|&u| self.cumulative[u][h].dim() == dim).unwrap_or(t)
    }
}

pub fn product_span_table(
    algebra: &Algebra,
    grading: &Grading,
    pool: &[Representative],
    width: usize,
) -> ProductSpanTable {
    let group = grading.group();
    let n = group.order();
    let field = algebra.field();
    let zero_row = vec![algebra.zero_subspace(); n];
    let singles: Vec<Subspace> = (0..n)
        .map(|h| {
            Subspace::span(
                field,
                algebra.dim(),
                pool.iter().filter(|r| r.grade == h).map(|r| r.element.as_slice()),
            )
            .expect("representatives live in the algebra")
        })
        .collect();
    let mut exact = vec![zero_row.clone()];
    let mut seen: HashMap<Vec<Subspace>, usize> = HashMap::new();
    for t in 1..=width {
        let prev = &exact[t - 1];
        let row = if t == 1 {
            singles.clone()
        } else if let Some(&j) = seen.get(prev) {
            exact[j + 1].clone()
        } else {
            (0..n)
                .map(|h| {
                    let mut acc = algebra.zero_subspace();
                    for h1 in 0..n {
                        let h2 = group.op(group.inv(h1), h);
                        if prev[h1].is_zero() || singles[h2].is_zero() {
                            continue;
                        }
                        let prod = algebra.product_of(&prev[h1], &singles[h2]);
                        acc = acc.sum(&prod).expect("same ambient");
                    }
                    acc
                })
                .collect()
        };
        seen.entry(exact[t - 1].clone()).or_insert(t - 1);
        exact.push(row);
    }
    let mut cumulative = vec![zero_row];
    for t in 1..=width {
        let row = (0..n)
            .map(|h| cumulative[t - 1][h].sum(&exact[t][h]).expect("same ambient"))
            .collect();
        cumulative.push(row);
    }
    ProductSpanTable {
        identity: group.identity(),
        exact,
        cumulative,
    }
}

/// `{ z ∈ A_{h⁻¹} : L z ∈ I_e for all L in left }`, `h` the grade of `left`.
fn left_annihilator(algebra: &Algebra, grading: &Grading, qe: &QuotientMap, left: &Side) -> Subspace {
    let group = grading.group();
    let target = grading.component(group.inv(left.grade));
    let ls = left.span.basis_vectors();
    solve_constraints(target, |z| {
        let mut out = Vec::new();
        for l in &ls {
            qe.coords_into(&algebra.mul(l, z), &mut out);
        }
        if left.unit {
            qe.coords_into(z, &mut out);
        }
        out
    })
}

/// `{ y ∈ domain : y R ∈ K for all R in right }`, `K ⊆ A_{g h2}`.
fn right_constraint(
    algebra: &Algebra,
    grading: &Grading,
    domain: &Subspace,
    g: usize,
    left_kernel: &Subspace,
    right: &Side,
) -> Subspace {
    let group = grading.group();
    let middle = grading.component(group.op(g, right.grade));
    let qk = middle.quotient_map(left_kernel).expect("kernel lies in its component");
    let rs = right.span.basis_vectors();
    solve_constraints(domain, |y| {
        let mut out = Vec::new();
        for r in &rs {
            qk.coords_into(&algebra.mul(y, r), &mut out);
        }
        if right.unit {
            qk.coords_into(y, &mut out);
        }
        out
    })
}

/// `{ y ∈ A_g : L y R ∈ I_e }` over all `L` in `left`, `R` in `right`, with
/// the formal unit standing for an empty factor.
pub fn theta_kernel(
    algebra: &Algebra,
    grading: &Grading,
    ideal: &Subspace,
    g: usize,
    left: &Side,
    right: &Side,
) -> Result<Subspace, TowerError> {
    let group = grading.group();
    let e = group.identity();
    if g == e {
        return Err(TowerError::IdentityGrade);
    }
    if group.op(group.op(left.grade, g), right.grade) != e {
        return Err(TowerError::GradeCondition {
            left: left.grade,
            g,
            right: right.grade,
        });
    }
    if (left.unit && left.grade != e) || (right.unit && right.grade != e) {
        return Err(TowerError::MisplacedUnit);
    }
    let qe = grading
        .identity_component()
        .quotient_map(ideal)
        .map_err(|_| TowerError::IdealOutsideIdentity)?;
    let k = left_annihilator(algebra, grading, &qe, left);
    Ok(right_constraint(algebra, grading, grading.component(g), g, &k, right))
}

/// Intersection of θ-kernels over all length splits `a + b ≤ W` and grade
/// pairs `h1 g h2 = e`, computed on the span table.
pub fn kernel_stage(
    algebra: &Algebra,
    grading: &Grading,
    qe: &QuotientMap,
    table: &ProductSpanTable,
    g: usize,
) -> Subspace {
    let group = grading.group();
    let n = group.order();
    let w = table.width();
    let ginv = group.inv(g);
    let mut splits: Vec<(usize, usize, usize)> = Vec::new();
    for h1 in 0..n {
        let h2 = group.op(ginv, group.inv(h1));
        for a in 0..=w {
            let (ca, cb) = (table.canonical(a, h1), table.canonical(w - a, h2));
            if table.side(ca, h1).is_empty() || table.side(cb, h2).is_empty() {
                continue;
            }
            splits.push((h1, ca, cb));
        }
    }
    splits.sort_unstable();
    splits.dedup();
    let kept: Vec<(usize, usize, usize)> = splits
        .iter()
        .copied()
        .filter(|&(h1, a, b)| {
            !splits
                .iter()
                .any(|&(k1, a2, b2)| k1 == h1 && a2 >= a && b2 >= b && (a2, b2) != (a, b))
        })
        .collect();
    let mut domain = grading.component(g).clone();
    let mut left_cache: HashMap<(usize, usize), Subspace> = HashMap::new();
    for (h1, a, b) in kept {
        if domain.is_zero() {
            break;
        }
        let h2 = group.op(ginv, group.inv(h1));
        let k = left_cache
            .entry((h1, a))
            .or_insert_with(|| left_annihilator(algebra, grading, qe, &table.side(a, h1)))
            .clone();
        domain = right_constraint(algebra, grading, &domain, g, &k, &table.side(b, h2));
    }
    domain
}
