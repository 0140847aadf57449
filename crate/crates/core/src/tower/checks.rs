use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::algebra::Algebra;
use crate::check::Check;
use crate::linalg::Subspace;

use super::CentralizerTower;

/// Outcome counts of the randomized insertion test.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SampleStats {
    pub requested: usize,
    pub drawn: usize,
    /// Draws with no admissible tuple (empty pool or identity grade).
    pub vacuous: usize,
    pub failures: usize,
}

/// `A_g(k+1) ⊆ A_g(k)` for every grade and level.
pub fn chain_check(tower: &CentralizerTower) -> Check {
    let group = tower.grading().group();
    for k in 0..tower.top() {
        for g in group.non_identity() {
            if !tower.component(g, k).contains(tower.component(g, k + 1)).unwrap_or(false) {
                return Check::fail("chain", json!({"grade": g, "level": k + 1}));
            }
        }
    }
    Check::pass("chain")
}

fn sum(a: &Subspace, b: &Subspace) -> Subspace {
    a.sum(b).expect("same ambient")
}

fn contains(big: &Subspace, small: &Subspace) -> bool {
    big.contains(small).unwrap_or(false)
}

/// Random representative tuples with a random `y ∈ A_g(s)` inserted; every
/// product of grade `e` must land in `I_e`.
pub fn property3_check(algebra: &Algebra, tower: &CentralizerTower, samples: usize, seed: u64) -> (Check, SampleStats) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let group = tower.grading().group();
    let e = group.identity();
    let field = algebra.field();
    let qe = tower.identity_quotient();
    let pools: Vec<_> = (0..=tower.top()).map(|s| tower.pool_below(s)).collect();
    let mut stats = SampleStats {
        requested: samples,
        ..SampleStats::default()
    };
    let mut witness = None;
    if tower.top() == 0 {
        stats.vacuous = samples;
        return (Check::pass("property (3)").with_detail("no levels above 0"), stats);
    }
    for _ in 0..samples {
        let s = rng.gen_range(1..=tower.top());
        let pool = &pools[s];
        if pool.is_empty() {
            stats.vacuous += 1;
            continue;
        }
        let w = tower.levels[s].width.max(1) as usize;
        let mut drawn = None;
        for _ in 0..16 {
            let k = if rng.gen_bool(0.5) {
                rng.gen_range(1..=w.min(6))
            } else {
                rng.gen_range(1..=w)
            };
            let tuple: Vec<usize> = (0..k).map(|_| rng.gen_range(0..pool.len())).collect();
            let l = rng.gen_range(0..=k);
            let gp = tuple[..l].iter().fold(e, |a, &i| group.op(a, pool[i].grade));
            let gs = tuple[l..].iter().fold(e, |a, &i| group.op(a, pool[i].grade));
            let g = group.op(group.inv(gp), group.inv(gs));
            if g != e {
                drawn = Some((tuple, l, g));
                break;
            }
        }
        let Some((tuple, l, g)) = drawn else {
            stats.vacuous += 1;
            continue;
        };
        stats.drawn += 1;
        let comp = tower.component(g, s);
        let coeffs: Vec<u32> = (0..comp.dim()).map(|_| rng.gen_range(0..field.p())).collect();
        let y = comp.combination(&coeffs);
        let mut factors: Vec<&[u32]> = tuple[..l].iter().map(|&i| pool[i].element.as_slice()).collect();
        factors.push(&y);
        factors.extend(tuple[l..].iter().map(|&i| pool[i].element.as_slice()));
        let product = algebra.mul_chain(factors).expect("nonempty");
        if qe.coords(&product).iter().any(|&c| c != 0) {
            stats.failures += 1;
            witness.get_or_insert_with(|| json!({"level": s, "grade": g, "tuple": tuple, "position": l, "y": y}));
        }
    }
    let check = Check::from_witness("property (3)", witness).with_detail(format!(
        "{} of {} samples drawn, {} vacuous",
        stats.drawn, stats.requested, stats.vacuous
    ));
    (check, stats)
}

/// `A_g(l+1)·span{b_h(l)} ⊆ A_{gh}(l)` and `span{b_h(l)}·A_g(l+1) ⊆ A_{hg}(l)`
/// for `g, h, gh ≠ e` (resp. `hg`), `l ≥ 1`.
pub fn lemma4_check(algebra: &Algebra, tower: &CentralizerTower) -> Check {
    let group = tower.grading().group();
    let e = group.identity();
    for l in 1..tower.top() {
        for h in group.non_identity() {
            let bs: Vec<&[u32]> = tower.levels[l]
                .reps
                .iter()
                .filter(|r| r.grade == h && r.kind == super::RepKind::QuotientLift)
                .map(|r| r.element.as_slice())
                .collect();
            if bs.is_empty() {
                continue;
            }
            let b = Subspace::span(algebra.field(), algebra.dim(), bs).expect("same ambient");
            for g in group.non_identity() {
                let y = tower.component(g, l + 1);
                let gh = group.op(g, h);
                if gh != e && !contains(tower.component(gh, l), &algebra.product_of(y, &b)) {
                    return Check::fail("lemma 4", json!({"level": l, "g": g, "h": h, "side": "right"}));
                }
                let hg = group.op(h, g);
                if hg != e && !contains(tower.component(hg, l), &algebra.product_of(&b, y)) {
                    return Check::fail("lemma 4", json!({"level": l, "g": g, "h": h, "side": "left"}));
                }
            }
        }
    }
    Check::pass("lemma 4")
}

/// `A_{g⁻¹}·A_g(k+1) ⊆ A_{g⁻¹}(k)·A_g(k) + I_e` and the mirror image.
pub fn lemma5_check(algebra: &Algebra, tower: &CentralizerTower) -> Check {
    let group = tower.grading().group();
    let ideal = tower.ideal();
    for k in 0..tower.top() {
        for g in group.non_identity() {
            let gi = group.inv(g);
            let whole_inv = tower.component(gi, 0);
            let next = tower.component(g, k + 1);
            let target = sum(&algebra.product_of(tower.component(gi, k), tower.component(g, k)), ideal);
            if !contains(&target, &algebra.product_of(whole_inv, next)) {
                return Check::fail("lemma 5", json!({"level": k, "grade": g, "side": "left"}));
            }
            let target = sum(&algebra.product_of(tower.component(g, k), tower.component(gi, k)), ideal);
            if !contains(&target, &algebra.product_of(next, whole_inv)) {
                return Check::fail("lemma 5", json!({"level": k, "grade": g, "side": "right"}));
            }
        }
    }
    Check::pass("lemma 5")
}

/// The representatives span what they were selected to span modulo `I_e`.
pub fn lemma_l2_check(algebra: &Algebra, tower: &CentralizerTower) -> Check {
    let grading = tower.grading();
    let group = grading.group();
    let ideal = tower.ideal();
    let field = algebra.field();
    let xe: Vec<&[u32]> = tower.levels[0]
        .reps
        .iter()
        .filter(|r| r.kind == super::RepKind::IdentityBasis)
        .map(|r| r.element.as_slice())
        .collect();
    let span_xe = sum(&Subspace::span(field, algebra.dim(), xe).expect("same ambient"), ideal);
    if !contains(&span_xe, grading.identity_component()) {
        return Check::fail("representatives span", json!({"part": "identity"}));
    }
    for level in &tower.levels {
        for g in group.non_identity() {
            let products = level
                .pairs
                .iter()
                .filter(|p| p.grade == g)
                .map(|p| algebra.mul(&p.left, &p.right));
            let target = sum(&Subspace::span(field, algebra.dim(), products).expect("same ambient"), ideal);
            let actual = algebra.product_of(&level.components[g], &level.components[group.inv(g)]);
            if !contains(&target, &actual) {
                return Check::fail("representatives span", json!({"part": "pairs", "level": level.index, "grade": g}));
            }
        }
    }
    Check::pass("representatives span")
}

/// Level-0 pool `≤ 2(n−1)m + m`, pattern factors per level `≤ 2(n−1)m`.
pub fn rep_bound_check(tower: &CentralizerTower) -> Check {
    let n = tower.grading().group().order();
    let m = tower.hypotheses.codim;
    let level0 = tower.levels[0].reps.len();
    if level0 > 2 * (n - 1) * m + m {
        return Check::fail("representative bounds", json!({"level": 0, "count": level0}));
    }
    for level in &tower.levels {
        let factors = 2 * level.pairs.len();
        if factors > 2 * (n - 1) * m {
            return Check::fail("representative bounds", json!({"level": level.index, "pair_factors": factors}));
        }
    }
    Check::pass("representative bounds")
}

/// Every structural check; Lemma 4 only when the level widths are `W_s`.
pub fn verify(algebra: &Algebra, tower: &CentralizerTower) -> (Vec<Check>, SampleStats) {
    let (p3, stats) = property3_check(algebra, tower, tower.config.samples, tower.config.seed);
    let mut checks = vec![chain_check(tower), p3, lemma5_check(algebra, tower), lemma_l2_check(algebra, tower)];
    if tower.uses_default_widths() {
        checks.push(lemma4_check(algebra, tower));
    }
    checks.push(rep_bound_check(tower));
    (checks, stats)
}
