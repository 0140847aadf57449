#![allow(dead_code)]

use nilgrade::algebra::Algebra;
use nilgrade::factory::{self, gen_random, Family, MatrixShape, RandomParams};
use nilgrade::grading::{GradedHypotheses, GroupAction};
use nilgrade::group::{FiniteGroup, PrimeSeries};
use nilgrade::instance::Instance;
use nilgrade::linalg::{PrimeField, Subspace};

pub struct Graded {
    pub label: String,
    pub algebra: Algebra,
    pub hyp: GradedHypotheses,
}

pub struct Acted {
    pub label: String,
    pub algebra: Algebra,
    pub action: GroupAction,
    pub ideal: Subspace,
    pub series: PrimeSeries,
}

pub fn f5() -> PrimeField {
    PrimeField::new(5).unwrap()
}

fn graded(label: String, inst: Instance) -> Graded {
    let hyp = GradedHypotheses::new(&inst.algebra, inst.grading.unwrap(), inst.ideal.unwrap()).unwrap();
    Graded {
        label,
        algebra: inst.algebra,
        hyp,
    }
}

fn acted(label: String, inst: Instance) -> Acted {
    Acted {
        label,
        series: inst.series.unwrap(),
        action: inst.action.unwrap(),
        ideal: inst.ideal.unwrap(),
        algebra: inst.algebra,
    }
}

pub fn group_name(g: &FiniteGroup) -> String {
    match (g.order(), g.is_abelian()) {
        (6, false) => "S3".into(),
        (n, _) => format!("C{n}"),
    }
}

/// Upper-triangular parity-graded matrices with `I_e` the strict part of `A_e`
/// (`m = k`), and strictly upper-triangular ones with `I_e = A_e` (`m = 0`).
pub fn triangular_family() -> Vec<Graded> {
    let f = f5();
    let mut out = Vec::new();
    for k in 2..=4 {
        let a = factory::triangular(f, k, true);
        let gr = factory::parity_grading(&a, k, MatrixShape::StrictUpper);
        let ie = gr.identity_component().clone();
        out.push(graded(format!("strict {k}x{k}"), Instance::graded(a, gr, ie)));
    }
    for k in 2..=3 {
        let a = factory::triangular(f, k, false);
        let gr = factory::parity_grading(&a, k, MatrixShape::Upper);
        let units = factory::matrix_units(k, MatrixShape::Upper);
        let off: Vec<usize> = (0..units.len()).filter(|&i| units[i].0 < units[i].1).collect();
        let ie = gr
            .identity_component()
            .intersect(&Subspace::coordinate(f, a.dim(), &off))
            .unwrap();
        out.push(graded(format!("upper {k}x{k}"), Instance::graded(a, gr, ie)));
    }
    out
}

pub fn micro_instances() -> Vec<Graded> {
    let f = f5();
    let u = factory::triangular(f, 2, false);
    let gu = factory::parity_grading(&u, 2, MatrixShape::Upper);
    let z = u.zero_subspace();
    let full = factory::full_matrix(f, 2);
    let gf = factory::parity_grading(&full, 2, MatrixShape::Full);
    let zf = full.zero_subspace();
    let s = factory::triangular(f, 4, true);
    let gs = factory::parity_grading(&s, 4, MatrixShape::StrictUpper);
    let ie = gs.identity_component().clone();
    vec![
        graded("upper 2x2, I_e = 0".into(), Instance::graded(u, gu, z)),
        graded("full 2x2, I_e = 0".into(), Instance::graded(full, gf, zf)),
        graded("strict 4x4, I_e = A_e".into(), Instance::graded(s, gs, ie)),
    ]
}

/// Path algebras without idempotents graded by `C2`, `C3`, `C6`.
pub fn nilpotent_graded(per_group: u64) -> Vec<(FiniteGroup, Instance)> {
    let mut out = Vec::new();
    for n in [2usize, 3, 6] {
        let g = FiniteGroup::cyclic(n);
        for seed in 0..per_group {
            let p = RandomParams {
                family: Family::Graded,
                max_vertices: 4,
                max_arrows: 5,
                truncation: 3 + (seed % 3) as usize,
                idempotents: false,
                max_dim: 60,
                ideal_min_len: Some(1),
            };
            out.push((g.clone(), gen_random(seed, &p, &g, None).unwrap()));
        }
    }
    out
}

/// `C2`-graded hypotheses with `d ≤ 2`: ideal of long grade-`e` paths, the
/// zero ideal, and `m = 0` instances without idempotents.
pub fn theorem2_corpus(count: u64) -> Vec<Graded> {
    let c2 = FiniteGroup::cyclic(2);
    let mut out = triangular_family();
    for seed in 0..count {
        let (idempotents, ideal_min_len, truncation, kind) = match seed % 4 {
            0 | 1 => (true, Some(2), 4, "long paths"),
            2 => (true, Some(usize::MAX), 4, "I_e = 0"),
            _ => (false, Some(1), 3, "m = 0"),
        };
        let p = RandomParams {
            family: Family::Graded,
            max_vertices: 3,
            max_arrows: 4,
            truncation,
            idempotents,
            max_dim: 40,
            ideal_min_len,
        };
        let inst = gen_random(1000 + seed, &p, &c2, None).unwrap();
        out.push(graded(format!("C2 graded seed {} ({kind})", 1000 + seed), inst));
    }
    out
}

/// Small graded instances for literal tuple enumeration.
pub fn oracle_corpus(count: u64) -> Vec<Graded> {
    let mut out = micro_instances();
    for seed in 0..count {
        let g = FiniteGroup::cyclic(if seed % 3 == 2 { 3 } else { 2 });
        let p = RandomParams {
            family: Family::Graded,
            max_vertices: 2,
            max_arrows: 3,
            truncation: 3,
            idempotents: seed % 4 != 3,
            max_dim: 12,
            ideal_min_len: Some(if seed % 2 == 0 { 2 } else { usize::MAX }),
        };
        let inst = gen_random(2000 + seed, &p, &g, None).unwrap();
        out.push(graded(format!("{} graded seed {}", group_name(&g), 2000 + seed), inst));
    }
    out
}

/// Scaling actions of cyclic groups and orbit actions of `C2, C3, S3, C6`.
pub fn action_corpus(per_kind: u64, max_dim: usize) -> Vec<Acted> {
    let mut out = Vec::new();
    let kinds: Vec<(Family, FiniteGroup)> = vec![
        (Family::Scaling, FiniteGroup::cyclic(2)),
        (Family::Scaling, FiniteGroup::cyclic(3)),
        (Family::Scaling, FiniteGroup::cyclic(4)),
        (Family::Orbit, FiniteGroup::cyclic(2)),
        (Family::Orbit, FiniteGroup::cyclic(3)),
        (Family::Orbit, FiniteGroup::symmetric(3)),
        (Family::Orbit, FiniteGroup::cyclic(6)),
    ];
    for (family, g) in kinds {
        for seed in 0..per_kind {
            let p = RandomParams {
                family,
                max_vertices: if family == Family::Orbit { 2 * g.order() } else { 3 },
                max_arrows: 4,
                truncation: 4,
                idempotents: seed % 3 != 2,
                max_dim,
                ideal_min_len: None,
            };
            let inst = gen_random(3000 + seed, &p, &g, None).unwrap();
            out.push(acted(format!("{family:?} {} seed {}", group_name(&g), 3000 + seed), inst));
        }
    }
    out
}
