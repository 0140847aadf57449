use num_bigint::BigUint;
use serde_json::json;

use crate::algebra::{Algebra, IdealHandle};
use crate::check::Check;
use crate::grading::GradedHypotheses;
use crate::linalg::Subspace;
use crate::tower::{build_tower, verify, CentralizerTower, TowerConfig};

use super::{index_within, ConstructionKind, ConstructionReport, LevelSummary, PipelineError};

#[derive(Clone, Debug)]
pub struct Theorem2Output {
    pub report: ConstructionReport,
    pub tower: CentralizerTower,
    pub ideal: IdealHandle,
}

fn sum(a: &Subspace, b: &Subspace) -> Subspace {
    a.sum(b).expect("same ambient")
}

/// `Z ∩ A_e ⊆ Σ_{h≠e} A_{h⁻¹}(N−2) A_h(N−2) + Σ_g A_{g⁻¹} I_e A_g + I_e`.
fn lemma6_check(algebra: &Algebra, tower: &CentralizerTower, z: &Subspace) -> Check {
    let name = "lemma 6";
    let top = tower.top();
    if top < 2 {
        return Check::pass(name).with_detail("fewer than two levels");
    }
    let grading = tower.grading();
    let group = grading.group();
    let ie = tower.ideal();
    let mut target = ie.clone();
    for h in group.non_identity() {
        let prod = algebra.product_of(tower.component(group.inv(h), top - 2), tower.component(h, top - 2));
        target = sum(&target, &prod);
    }
    for g in group.elements() {
        let prod = algebra.product_chain(&[grading.component(group.inv(g)), ie, grading.component(g)]);
        target = sum(&target, &prod);
    }
    let ze = z.intersect(grading.identity_component()).expect("same ambient");
    if target.contains(&ze).unwrap_or(false) {
        Check::pass(name)
    } else {
        let w = ze.basis_iter().find(|v| !target.member(v)).map(|v| v.to_vec());
        Check::fail(name, json!({ "element": w }))
    }
}

fn summarize(tower: &CentralizerTower) -> Vec<LevelSummary> {
    tower
        .levels
        .iter()
        .map(|l| LevelSummary {
            level: l.index,
            width: l.width,
            dims: l.components.iter().map(Subspace::dim).collect(),
            reps: l.reps.len(),
            pairs: l.pairs.len(),
        })
        .collect()
}

/// Build the tower, form `Z = ⟨A_g(N) (g ≠ e), I_e⟩` and verify it.
pub fn theorem2_construct(
    algebra: &Algebra,
    hypotheses: &GradedHypotheses,
    config: &TowerConfig,
) -> Result<Theorem2Output, PipelineError> {
    let tower = build_tower(algebra, hypotheses, config)?;
    let grading = &hypotheses.grading;
    let group = grading.group();
    let top = tower.top();
    let ie = &hypotheses.ideal.carrier;
    let mut generators = ie.clone();
    for g in group.non_identity() {
        generators = sum(&generators, tower.component(g, top));
    }
    let ideal = algebra.ideal_closure(&generators)?;
    let z = &ideal.carrier;
    let bounds = tower.bounds.clone();
    let mut checks = Vec::new();

    let (tower_checks, stats) = verify(algebra, &tower);
    checks.extend(tower_checks);

    let verified = algebra.classify_ideal(z, &algebra.whole())?;
    checks.push(if verified.is_two_sided() {
        Check::pass("two-sided")
    } else {
        Check::fail("two-sided", json!({"left": verified.left_closed, "right": verified.right_closed}))
    });

    let pieces: Vec<Subspace> = group
        .elements()
        .map(|g| z.intersect(grading.component(g)).expect("same ambient"))
        .collect();
    let graded_dim: usize = pieces.iter().map(Subspace::dim).sum();
    checks.push(if graded_dim == z.dim() {
        Check::pass("homogeneous")
    } else {
        Check::fail("homogeneous", json!({"graded_dim": graded_dim, "dim": z.dim()}))
    });

    checks.push(if z.contains(ie).unwrap_or(false) {
        Check::pass("I_e ⊆ Z")
    } else {
        Check::fail("I_e ⊆ Z", json!(null))
    });

    let ze = &pieces[group.identity()];
    let ze_index = algebra.nilpotency_index(ze)?;
    let q = BigUint::from(bounds.q);
    checks.push(if index_within(ze_index, &q) {
        Check::pass("(Z_e)^Q = 0").with_detail(format!("index {:?}, Q = {}", ze_index, bounds.q))
    } else {
        Check::fail("(Z_e)^Q = 0", json!({"index": ze_index, "Q": bounds.q}))
    });

    let achieved = algebra.nilpotency_index(z)?;
    let nq = BigUint::from(bounds.nq);
    checks.push(if index_within(achieved, &nq) {
        Check::pass("Z^{nQ} = 0")
    } else {
        Check::fail("Z^{nQ} = 0", json!({"index": achieved, "nQ": bounds.nq}))
    });

    checks.push(lemma6_check(algebra, &tower, z));

    let report = ConstructionReport {
        kind: ConstructionKind::Theorem2,
        bounds: Some(bounds),
        ideal: z.basis_vectors(),
        ideal_dim: z.dim(),
        achieved_index: achieved,
        achieved_codim: algebra.dim() - z.dim(),
        index_bound: nq,
        checks,
        tower_summary: summarize(&tower),
        stages: Vec::new(),
        samples: Some(stats),
        notes: Vec::new(),
    };
    Ok(Theorem2Output { report, tower, ideal })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Nilpotency;
    use crate::factory::{self, MatrixShape};
    use crate::linalg::PrimeField;

    fn f5() -> PrimeField {
        PrimeField::new(5).unwrap()
    }

    fn run(a: &Algebra, k: usize, shape: MatrixShape, full_ideal: bool) -> Theorem2Output {
        let gr = factory::parity_grading(a, k, shape);
        let ie = if full_ideal {
            gr.identity_component().clone()
        } else {
            a.zero_subspace()
        };
        let h = GradedHypotheses::new(a, gr, ie).unwrap();
        theorem2_construct(a, &h, &TowerConfig::default()).unwrap()
    }

    #[test]
    fn upper_triangular() {
        let a = factory::triangular(f5(), 2, false);
        let out = run(&a, 2, MatrixShape::Upper, false);
        assert!(out.report.passed(), "{:?}", out.report.checks);
        assert_eq!(out.ideal.carrier, a.span([a.unit_vector(1)]).unwrap());
        assert_eq!(out.report.achieved_index, Nilpotency::Index(2));
        assert_eq!(out.report.index_bound, BigUint::from(8u32));
    }

    #[test]
    fn full_matrices() {
        let a = factory::full_matrix(f5(), 2);
        let out = run(&a, 2, MatrixShape::Full, false);
        assert!(out.report.passed());
        assert!(out.ideal.carrier.is_zero());
        assert_eq!(out.report.achieved_index, Nilpotency::Index(1));
        assert_eq!(out.report.achieved_codim, 4);
    }

    #[test]
    fn strict_four() {
        let a = factory::triangular(f5(), 4, true);
        let out = run(&a, 4, MatrixShape::StrictUpper, true);
        assert!(out.report.passed());
        assert!(out.ideal.carrier.is_full());
        assert_eq!(out.report.achieved_index, Nilpotency::Index(4));
        assert_eq!(out.report.index_bound, BigUint::from(82u32));
        let json = serde_json::to_string(&out.report).unwrap();
        let back: ConstructionReport = serde_json::from_str(&json).unwrap();
        assert_eq!(back, out.report);
    }
}
