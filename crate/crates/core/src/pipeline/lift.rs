use num_bigint::BigUint;
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::algebra::{Algebra, IdealHandle, Nilpotency};
use crate::check::Check;
use crate::grading::GroupAction;
use crate::linalg::Subspace;
use crate::tower::bergman_isaacs_h;

use super::{index_within, InvariantHypotheses, PipelineError};

#[derive(Clone, Debug)]
pub struct LiftReport {
    pub ideal: IdealHandle,
    pub index: Nilpotency,
    /// `h(|G|)^d`, reported for comparison only.
    pub reference_bound: BigUint,
    pub within_reference: bool,
    pub checks: Vec<Check>,
}

impl LiftReport {
    pub fn passed(&self) -> bool {
        crate::check::all_pass(&self.checks)
    }
}

/// The two-sided ideal generated by all translates `ρ(g) S`, with checks
/// that it is invariant, contains `S`, is two-sided and is nilpotent.
pub(crate) fn translate_closure(
    algebra: &Algebra,
    action: &GroupAction,
    s: &Subspace,
) -> Result<(IdealHandle, Nilpotency, Vec<Check>), PipelineError> {
    let ideal = algebra.ideal_closure(&action.orbit_span(s))?;
    let k = &ideal.carrier;
    let mut checks = Vec::new();
    checks.push(if action.is_invariant(k) {
        Check::pass("G-invariant")
    } else {
        Check::fail("G-invariant", json!(null))
    });
    checks.push(if k.contains(s).unwrap_or(false) {
        Check::pass("I ⊆ K")
    } else {
        Check::fail("I ⊆ K", json!(null))
    });
    let verified = algebra.classify_ideal(k, &algebra.whole())?;
    checks.push(if verified.is_two_sided() {
        Check::pass("two-sided")
    } else {
        Check::fail("two-sided", json!({"left": verified.left_closed, "right": verified.right_closed}))
    });
    let index = algebra.nilpotency_index(k)?;
    checks.push(match index {
        Nilpotency::Index(_) => Check::pass("nilpotent"),
        Nilpotency::NotNilpotent { stable_dim } => Check::fail("nilpotent", json!({"stable_dim": stable_dim})),
    });
    Ok((ideal, index, checks))
}

/// `K = ⟨ρ(g) I : g ∈ G⟩`, the two-sided ideal generated by every translate
/// of `I`, with its invariance and nilpotency checked directly.
pub fn invariant_ideal_lift(algebra: &Algebra, hyp: &InvariantHypotheses) -> Result<LiftReport, PipelineError> {
    let (ideal, index, checks) = translate_closure(algebra, &hyp.action, &hyp.ideal.carrier)?;
    let reference_bound = bergman_isaacs_h(hyp.group_order() as u64).pow(hyp.index as u32);
    let within_reference = index_within(index, &reference_bound);
    Ok(LiftReport {
        ideal,
        index,
        reference_bound,
        within_reference,
        checks,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BergmanIsaacsReport {
    pub group_order: usize,
    /// Nilpotency index of `A^G`.
    pub fixed_index: usize,
    pub algebra_index: Nilpotency,
    #[serde(with = "crate::big")]
    pub h: BigUint,
    #[serde(with = "crate::big")]
    pub bound: BigUint,
    pub holds: bool,
}

/// `index(A) ≤ h^d` with `d = index(A^G)`.
pub fn bergman_isaacs_check(algebra: &Algebra, action: &GroupAction) -> Result<BergmanIsaacsReport, PipelineError> {
    let order = action.group().order();
    let p = algebra.field().p();
    if algebra.field().divides(order as u64) {
        return Err(PipelineError::CharacteristicDivides { p, order });
    }
    let fixed = action.fixed_subalgebra(algebra);
    let fixed_index = algebra
        .nilpotency_index(&fixed)?
        .index()
        .ok_or(PipelineError::NotNilpotent("the fixed subalgebra"))?;
    let h = bergman_isaacs_h(order as u64);
    let bound = h.pow(fixed_index as u32);
    let algebra_index = algebra.algebra_nilpotency();
    Ok(BergmanIsaacsReport {
        group_order: order,
        fixed_index,
        algebra_index,
        holds: index_within(algebra_index, &bound),
        h,
        bound,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::factory::{self, MatrixShape};
    use crate::group::FiniteGroup;
    use crate::linalg::PrimeField;

    fn f5() -> PrimeField {
        PrimeField::new(5).unwrap()
    }

    #[test]
    fn lift_examples() {
        let t = factory::triangular(f5(), 3, true);
        let act = factory::diagonal_conjugation(&t, MatrixShape::StrictUpper, &[1, 4, 1]);
        let fixed = act.fixed_subalgebra(&t);
        let hyp = InvariantHypotheses::new(&t, act, fixed.clone()).unwrap();
        assert_eq!(hyp.index, 2);
        let out = invariant_ideal_lift(&t, &hyp).unwrap();
        assert!(out.passed());
        assert_eq!(out.ideal.carrier, fixed);
        assert_eq!(out.index, Nilpotency::Index(2));

        let d = factory::diagonal(f5(), 2);
        let swap = crate::linalg::Matrix::from_rows(f5(), 2, &[vec![0, 1], vec![1, 0]]).unwrap();
        let act = factory::cyclic_action(&d, &swap);
        let hyp = InvariantHypotheses::new(&d, act, d.zero_subspace()).unwrap();
        let out = invariant_ideal_lift(&d, &hyp).unwrap();
        assert!(out.ideal.carrier.is_zero());

        let act = GroupAction::trivial(&t, FiniteGroup::cyclic(2));
        let e13 = t.span([t.unit_vector(1)]).unwrap();
        let hyp = InvariantHypotheses::new(&t, act, e13.clone()).unwrap();
        assert_eq!(invariant_ideal_lift(&t, &hyp).unwrap().ideal.carrier, t.ideal_closure(&e13).unwrap().carrier);
    }

    #[test]
    fn bergman_isaacs_examples() {
        let t = factory::triangular(f5(), 3, true);
        let act = factory::diagonal_conjugation(&t, MatrixShape::StrictUpper, &[1, 4, 1]);
        let r = bergman_isaacs_check(&t, &act).unwrap();
        assert_eq!((r.fixed_index, r.bound.clone()), (2, BigUint::from(169u32)));
        assert_eq!(r.algebra_index, Nilpotency::Index(3));
        assert!(r.holds);
        let z = Algebra::zero_algebra(f5(), 3);
        let r = bergman_isaacs_check(&z, &GroupAction::trivial(&z, FiniteGroup::cyclic(1))).unwrap();
        assert_eq!(r.h, BigUint::from(5u32));
        assert!(r.holds);
        let full = factory::full_matrix(f5(), 2);
        let act = factory::diagonal_conjugation(&full, MatrixShape::Full, &[1, 4]);
        assert_eq!(bergman_isaacs_check(&full, &act), Err(PipelineError::NotNilpotent("the fixed subalgebra")));
    }
}
