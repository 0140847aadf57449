use num_bigint::BigUint;
use serde_json::json;

use crate::algebra::{coordinates_in, Algebra, Nilpotency};
use crate::check::Check;
use crate::grading::{GradedHypotheses, GroupAction};
use crate::group::PrimeSeries;
use crate::linalg::{Matrix, Subspace};
use crate::tower::TowerConfig;

use super::lift::translate_closure;
use super::theorem2::theorem2_construct;
use super::{
    check_roots_of_unity, index_within, ConstructionKind, ConstructionReport, InvariantHypotheses, PipelineError,
    StageRecord,
};

struct Outcome {
    ideal: Subspace,
    bound: BigUint,
    stages: Vec<StageRecord>,
    checks: Vec<Check>,
}

fn tagged(prefix: &str, checks: Vec<Check>) -> impl Iterator<Item = Check> + '_ {
    checks.into_iter().map(move |mut c| {
        c.name = format!("{prefix}: {}", c.name);
        c
    })
}

fn span(algebra: &Algebra, vs: impl IntoIterator<Item = Vec<u32>>) -> Subspace {
    Subspace::span(algebra.field(), algebra.dim(), vs).expect("same ambient")
}

/// Matrix of `x ↦ coords(ρ(x))` on a basis, columns indexed by basis vectors.
fn induced(rows: usize, images: impl Iterator<Item = Vec<u32>>) -> Matrix {
    let cols: Vec<Vec<u32>> = images.collect();
    let mut m = Matrix::zeros(rows, cols.len());
    for (j, col) in cols.iter().enumerate() {
        for (i, &v) in col.iter().enumerate() {
            m.set(i, j, v);
        }
    }
    m
}

fn recurse(
    algebra: &Algebra,
    hyp: &InvariantHypotheses,
    series: &PrimeSeries,
    depth: usize,
    config: &TowerConfig,
) -> Result<Outcome, PipelineError> {
    let action = &hyp.action;
    let group = action.group();
    let i = &hyp.ideal.carrier;
    if group.order() == 1 {
        return Ok(Outcome {
            ideal: i.clone(),
            bound: BigUint::from(hyp.index),
            stages: Vec::new(),
            checks: Vec::new(),
        });
    }
    if series.len() == 1 {
        let grading = action.eigen_grading_default(algebra)?;
        let graded = GradedHypotheses::new(algebra, grading, i.clone())?;
        let out = theorem2_construct(algebra, &graded, config)?;
        let r = out.report;
        let bound = r.index_bound.clone();
        let prefix = format!("stage {depth} graded |G|={}", group.order());
        return Ok(Outcome {
            ideal: out.ideal.carrier,
            stages: vec![StageRecord {
                depth,
                group_order: group.order(),
                algebra_dim: algebra.dim(),
                ideal_index: hyp.index,
                achieved_index: r.achieved_index,
                bound: bound.clone(),
            }],
            bound,
            checks: tagged(&prefix, r.checks).collect(),
        });
    }

    let k = series.len();
    let h_elems = &series.chain[k - 1];
    let f = algebra.field();
    let prefix = format!("stage {depth} lift");
    let mut checks = Vec::new();

    // C = A^H with the quotient G/H acting on it
    let mut c = algebra.whole();
    for &h in h_elems {
        let ker = action.matrix(h).minus_scalar(f, 1).kernel(f);
        c = c.intersect(&ker).expect("same ambient");
    }
    let (c_alg, emb) = algebra.restrict_to(&c)?;
    let trivial_on_c = h_elems
        .iter()
        .all(|&h| emb.iter().all(|v| action.apply(algebra, h, v) == *v));
    checks.push(Check::from_witness(
        format!("{prefix}: H acts trivially on A^H"),
        (!trivial_on_c).then(|| json!(null)),
    ));
    let (quot, coset_of) = group.quotient(h_elems)?;
    let mut mats = Vec::with_capacity(quot.order());
    for q in 0..quot.order() {
        let g = (0..group.order()).find(|&g| coset_of[g] == q).expect("every coset is inhabited");
        let images = emb.iter().map(|v| {
            let w = action.apply(algebra, g, v);
            debug_assert!(c.member(&w));
            coordinates_in(&c, &w)
        });
        mats.push(induced(c.dim(), images));
    }
    let quot_action = GroupAction::new(quot.clone(), mats)?;
    let i_c = Subspace::span(f, c.dim(), i.basis_iter().map(|v| coordinates_in(&c, v))).expect("I ⊆ A^H");
    let hyp_c = InvariantHypotheses::new(&c_alg, quot_action, i_c)?;
    let quot_series = PrimeSeries {
        chain: vec![vec![quot.identity()], (0..quot.order()).collect()],
    };
    let inner = recurse(&c_alg, &hyp_c, &quot_series, depth + 1, config)?;

    // K: ideal of A generated by the G-translates of J ⊆ A^H
    let combine = |coeffs: &[u32]| {
        let mut out = vec![0u32; algebra.dim()];
        for (b, &x) in emb.iter().zip(coeffs) {
            for (o, &y) in out.iter_mut().zip(b) {
                *o = f.mul_add(*o, x, y);
            }
        }
        out
    };
    let j = span(algebra, inner.ideal.basis_iter().map(combine));
    let (k_handle, k_index, lift_checks) = translate_closure(algebra, action, &j)?;
    checks.extend(tagged(&prefix, lift_checks));

    // Ā = A/K with H acting on it
    let quotient = algebra.quotient_algebra(&k_handle)?;
    let r = quotient.algebra.dim();
    let (h_group, h_map) = group.subgroup(h_elems)?;
    let mats = h_map
        .iter()
        .map(|&h| induced(r, quotient.section.iter().map(|s| quotient.project(&action.apply(algebra, h, s)))))
        .collect();
    let bar_action = GroupAction::new(h_group, mats)?;
    let local = |x: usize| h_map.binary_search(&x).expect("series is nested");
    let h_series = PrimeSeries {
        chain: series.chain[..k]
            .iter()
            .map(|sub| {
                let mut v: Vec<usize> = sub.iter().map(|&x| local(x)).collect();
                v.sort_unstable();
                v
            })
            .collect(),
    };
    let zero = quotient.algebra.zero_subspace();
    let hyp_bar = InvariantHypotheses::new(&quotient.algebra, bar_action, zero)?;
    let outer = recurse(&quotient.algebra, &hyp_bar, &h_series, depth + 1, config)?;

    let ideal = k_handle
        .carrier
        .sum(&span(algebra, outer.ideal.basis_iter().map(|v| quotient.lift(v))))
        .expect("same ambient");
    let k_bound = BigUint::from(k_index.index().unwrap_or(0));
    let mut all = inner.checks;
    all.extend(checks);
    all.extend(outer.checks);
    let mut stages = inner.stages;
    stages.extend(outer.stages);
    Ok(Outcome {
        ideal,
        bound: k_bound * outer.bound,
        stages,
        checks: all,
    })
}

/// Recursion over a prime series: graded stages at prime order, lifts of
/// fixed-point ideals in between.
pub fn theorem1_construct(
    algebra: &Algebra,
    hyp: &InvariantHypotheses,
    series: &PrimeSeries,
    config: &TowerConfig,
) -> Result<ConstructionReport, PipelineError> {
    let group = hyp.action.group();
    series
        .validate(group)
        .map_err(|e| PipelineError::SeriesMismatch(e.to_string()))?;
    check_roots_of_unity(algebra.field().p(), group.order())?;
    let out = recurse(algebra, hyp, series, 0, config)?;
    let z = out.ideal;
    let mut checks = out.checks;
    let verified = algebra.classify_ideal(&z, &algebra.whole())?;
    checks.push(if verified.is_two_sided() {
        Check::pass("two-sided")
    } else {
        Check::fail("two-sided", json!({"left": verified.left_closed, "right": verified.right_closed}))
    });
    let achieved = algebra.nilpotency_index(&z)?;
    checks.push(if index_within(achieved, &out.bound) {
        Check::pass("index ≤ composed bound")
    } else {
        Check::fail("index ≤ composed bound", json!({"index": achieved, "bound": out.bound.to_string()}))
    });
    checks.push(if z.contains(&hyp.ideal.carrier).unwrap_or(false) {
        Check::pass("I ⊆ Z")
    } else {
        Check::fail("I ⊆ Z", json!(null))
    });
    checks.push(if out.stages.len() == series.len() {
        Check::pass("stage count")
    } else {
        Check::fail("stage count", json!({"stages": out.stages.len(), "series": series.len()}))
    });
    let mut notes = Vec::new();
    if series.len() > 1 {
        notes.push("intermediate ideals are closed under all group translates before passing to the quotient".into());
    }
    if matches!(achieved, Nilpotency::NotNilpotent { .. }) {
        notes.push("constructed ideal is not nilpotent".into());
    }
    Ok(ConstructionReport {
        kind: ConstructionKind::Theorem1,
        bounds: None,
        ideal: z.basis_vectors(),
        ideal_dim: z.dim(),
        achieved_index: achieved,
        achieved_codim: algebra.dim() - z.dim(),
        index_bound: out.bound,
        checks,
        tower_summary: Vec::new(),
        stages: out.stages,
        samples: None,
        notes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::factory::{self, Family, MatrixShape, RandomParams};
    use crate::group::FiniteGroup;
    use crate::linalg::PrimeField;

    fn f5() -> PrimeField {
        PrimeField::new(5).unwrap()
    }

    #[test]
    fn conjugation_base_case() {
        let a = factory::full_matrix(f5(), 2);
        let act = factory::diagonal_conjugation(&a, MatrixShape::Full, &[1, 4]);
        let series = act.group().find_prime_series(64).unwrap();
        let hyp = InvariantHypotheses::new(&a, act, a.zero_subspace()).unwrap();
        let r = theorem1_construct(&a, &hyp, &series, &TowerConfig::default()).unwrap();
        assert!(r.passed(), "{:?}", r.failed_checks().collect::<Vec<_>>());
        assert_eq!(r.ideal_dim, 0);
        assert_eq!(r.achieved_codim, 4);
        assert_eq!(r.stages.len(), 1);
    }

    #[test]
    fn trivial_action() {
        let t = factory::triangular(f5(), 3, true);
        let act = GroupAction::trivial(&t, FiniteGroup::cyclic(2));
        let series = act.group().find_prime_series(64).unwrap();
        let hyp = InvariantHypotheses::new(&t, act, t.whole()).unwrap();
        assert_eq!(hyp.index, 3);
        let r = theorem1_construct(&t, &hyp, &series, &TowerConfig::default()).unwrap();
        assert!(r.passed());
        assert_eq!(r.ideal_dim, 3);
        assert_eq!(r.achieved_index, Nilpotency::Index(3));
    }

    #[test]
    fn soluble_groups() {
        for (group, seed) in [(FiniteGroup::symmetric(3), 1u64), (FiniteGroup::cyclic(4), 2), (FiniteGroup::cyclic(6), 3)] {
            let p = RandomParams {
                family: Family::Orbit,
                max_vertices: group.order(),
                max_dim: 30,
                ..RandomParams::default()
            };
            let inst = factory::gen_random(seed, &p, &group, None).unwrap();
            let act = inst.action.unwrap();
            let hyp = InvariantHypotheses::new(&inst.algebra, act, inst.ideal.unwrap()).unwrap();
            let series = inst.series.unwrap();
            let r = theorem1_construct(&inst.algebra, &hyp, &series, &TowerConfig::default()).unwrap();
            assert!(r.passed(), "{:?}", r.failed_checks().collect::<Vec<_>>());
            assert_eq!(r.stages.len(), series.len());
        }
    }

    #[test]
    fn missing_roots() {
        let a = factory::full_matrix(f5(), 2);
        let act = GroupAction::trivial(&a, FiniteGroup::cyclic(3));
        let series = act.group().find_prime_series(64).unwrap();
        let hyp = InvariantHypotheses::new(&a, act, a.zero_subspace()).unwrap();
        assert_eq!(
            theorem1_construct(&a, &hyp, &series, &TowerConfig::default()).unwrap_err(),
            PipelineError::MissingRoot { q: 3, p: 5 }
        );
    }
}
