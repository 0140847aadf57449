use super::*;
use crate::factory::{self, MatrixShape};
use crate::linalg::PrimeField;

fn f5() -> PrimeField {
    PrimeField::new(5).unwrap()
}

fn full2() -> (Algebra, GradedHypotheses) {
    let a = factory::full_matrix(f5(), 2);
    let gr = factory::parity_grading(&a, 2, MatrixShape::Full);
    let h = GradedHypotheses::new(&a, gr, a.zero_subspace()).unwrap();
    (a, h)
}

fn upper2() -> (Algebra, GradedHypotheses) {
    let a = factory::triangular(f5(), 2, false);
    let gr = factory::parity_grading(&a, 2, MatrixShape::Upper);
    let h = GradedHypotheses::new(&a, gr, a.zero_subspace()).unwrap();
    (a, h)
}

fn strict4() -> (Algebra, GradedHypotheses) {
    let a = factory::triangular(f5(), 4, true);
    let gr = factory::parity_grading(&a, 4, MatrixShape::StrictUpper);
    let ie = gr.identity_component().clone();
    let h = GradedHypotheses::new(&a, gr, ie).unwrap();
    (a, h)
}

fn span(a: &Algebra, idx: &[usize]) -> Subspace {
    a.span(idx.iter().map(|&i| a.unit_vector(i))).unwrap()
}

fn rep(a: &Algebra, i: usize, grade: usize) -> Representative {
    Representative {
        element: a.unit_vector(i),
        grade,
        level: 0,
        kind: RepKind::PairFactor,
    }
}

#[test]
fn span_table_examples() {
    let (a, h) = full2();
    let gr = &h.grading;
    let t = product_span_table(&a, gr, &[rep(&a, 1, 1), rep(&a, 2, 1)], 2);
    assert_eq!(t.exact(2, 0), &span(&a, &[0, 3]));
    assert_eq!(t.exact(1, 1), &span(&a, &[1, 2]));
    assert!(t.exact(2, 1).is_zero());
    let empty = product_span_table(&a, gr, &[], 3);
    assert!((1..=3).all(|k| empty.exact(k, 0).is_zero() && empty.exact(k, 1).is_zero()));
    let idem = product_span_table(&a, gr, &[rep(&a, 0, 0), rep(&a, 3, 0)], 3);
    assert!((1..=3).all(|k| idem.exact(k, 0) == &span(&a, &[0, 3])));
}

#[test]
fn theta_examples() {
    let (a, h) = full2();
    let unit = Side::unit(&a, 0);
    let right = Side {
        grade: 1,
        span: span(&a, &[2]),
        unit: false,
    };
    let k = theta_kernel(&a, &h.grading, &a.zero_subspace(), 1, &unit, &right).unwrap();
    assert_eq!(k, span(&a, &[2]));
    assert_eq!(
        theta_kernel(&a, &h.grading, &a.zero_subspace(), 0, &unit, &unit),
        Err(TowerError::IdentityGrade)
    );
    assert!(matches!(
        theta_kernel(&a, &h.grading, &a.zero_subspace(), 1, &unit, &unit),
        Err(TowerError::GradeCondition { .. })
    ));
    let ae = h.grading.identity_component().clone();
    let k = theta_kernel(&a, &h.grading, &ae, 1, &unit, &right).unwrap();
    assert_eq!(&k, h.grading.component(1));
}

#[test]
fn level_zero_examples() {
    let (a, h) = full2();
    let l0 = level_zero(&a, &h);
    let xe: Vec<_> = l0.reps.iter().filter(|r| r.kind == RepKind::IdentityBasis).map(|r| r.element.clone()).collect();
    assert_eq!(xe, vec![a.unit_vector(0), a.unit_vector(3)]);
    assert_eq!(l0.pairs.len(), 2);
    assert_eq!((l0.pairs[0].left.clone(), l0.pairs[0].right.clone()), (a.unit_vector(1), a.unit_vector(2)));
    assert_eq!((l0.pairs[1].left.clone(), l0.pairs[1].right.clone()), (a.unit_vector(2), a.unit_vector(1)));
    let graded: Vec<_> = l0.reps.iter().filter(|r| r.grade == 1).map(|r| r.element.clone()).collect();
    assert_eq!(graded, vec![a.unit_vector(1), a.unit_vector(2)]);

    let (a, h) = strict4();
    assert!(level_zero(&a, &h).reps.is_empty());

    let (a, h) = upper2();
    let l0 = level_zero(&a, &h);
    assert_eq!(l0.reps.len(), 2);
    assert!(l0.pairs.is_empty());
}

#[test]
fn tower_examples() {
    let (a, h) = full2();
    let t = build_tower(&a, &h, &TowerConfig::default()).unwrap();
    assert_eq!(t.top(), 4);
    assert_eq!(t.levels[1].width, 4);
    assert!((1..=4).all(|s| t.component(1, s).is_zero()));
    let b1: Vec<_> = t.levels[1].reps.iter().filter(|r| r.kind == RepKind::QuotientLift).map(|r| r.element.clone()).collect();
    assert_eq!(b1, vec![a.unit_vector(1), a.unit_vector(2)]);
    assert!(t.levels[1].pairs.is_empty());

    let (a, h) = upper2();
    let t = build_tower(&a, &h, &TowerConfig::default()).unwrap();
    assert!((0..=t.top()).all(|s| t.component(1, s) == &span(&a, &[1])));
    assert!(t.levels.iter().all(|l| l.reps.iter().all(|r| r.kind != RepKind::QuotientLift)));

    let (a, h) = strict4();
    let t = build_tower(&a, &h, &TowerConfig::default()).unwrap();
    assert!((0..=t.top()).all(|s| t.component(1, s) == h.grading.component(1)));

    for (a, h) in [full2(), upper2(), strict4()] {
        let t = build_tower(&a, &h, &TowerConfig::default()).unwrap();
        let (checks, _) = verify(&a, &t);
        assert!(crate::check::all_pass(&checks), "{checks:?}");
    }
}

#[test]
fn oracle_matches_spans() {
    for (a, h) in [full2(), upper2(), strict4()] {
        for w in 1..=3u64 {
            let cfg = TowerConfig {
                width: Some(w),
                levels: Some(2),
                ..TowerConfig::default()
            };
            let t = build_tower(&a, &h, &cfg).unwrap();
            for s in 1..=2 {
                let brute = brute_force_level(&a, &t, s, w as usize, DEFAULT_BUDGET).unwrap();
                assert_eq!(brute, t.levels[s].components);
            }
        }
    }
}

#[test]
fn oracle_budget() {
    let (a, h) = full2();
    let t = build_tower(&a, &h, &TowerConfig { levels: Some(1), ..TowerConfig::default() }).unwrap();
    assert!(matches!(brute_force_level(&a, &t, 1, 4, 10), Err(TowerError::Budget { .. })));
    assert!(matches!(brute_force_level(&a, &t, 2, 1, 10), Err(TowerError::LevelOutOfRange(2))));
}

#[test]
fn dump_round_trips() {
    let (a, h) = full2();
    let t = build_tower(&a, &h, &TowerConfig::default()).unwrap();
    let d = t.dump(&a);
    let s = serde_json::to_string(&d).unwrap();
    assert!(s.contains("\"x_identity\""));
    let back: TowerDump = serde_json::from_str(&s).unwrap();
    assert_eq!(back, d);
}
