mod common;

use proptest::prelude::*;

use nilgrade::factory::{gen_random, Family, RandomParams};
use nilgrade::group::FiniteGroup;
use nilgrade::io::{emit_instance, parse_instance, to_pretty};
use nilgrade::linalg::{solve_constraints, Matrix, PrimeField, Subspace};
use nilgrade::par;
use nilgrade::pipeline::theorem2_construct;
use nilgrade::tower::{brute_force_level, build_tower, verify, TowerConfig, DEFAULT_BUDGET};

const P: u32 = 7;

fn vectors(n: usize, count: usize) -> impl Strategy<Value = Vec<Vec<u32>>> {
    prop::collection::vec(prop::collection::vec(0..P, n), 0..=count)
}

fn field() -> PrimeField {
    PrimeField::new(P).unwrap()
}

fn graded_params(seed: u64) -> (FiniteGroup, RandomParams) {
    let g = FiniteGroup::cyclic(if seed.is_multiple_of(2) { 2 } else { 3 });
    let p = RandomParams {
        family: Family::Graded,
        max_vertices: 2,
        max_arrows: 3,
        truncation: 3,
        idempotents: !seed.is_multiple_of(3),
        max_dim: 12,
        ideal_min_len: Some(if seed.is_multiple_of(5) { usize::MAX } else { 2 }),
    };
    (g, p)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn span_is_canonical(mut vs in vectors(6, 5)) {
        let f = field();
        let a = Subspace::span(f, 6, &vs).unwrap();
        vs.reverse();
        let b = Subspace::span(f, 6, &vs).unwrap();
        prop_assert_eq!(&a, &b);
        for v in &vs {
            prop_assert!(a.member(v));
        }
    }

    #[test]
    fn sum_and_intersection_dimensions(us in vectors(6, 4), vs in vectors(6, 4)) {
        let f = field();
        let u = Subspace::span(f, 6, &us).unwrap();
        let v = Subspace::span(f, 6, &vs).unwrap();
        let s = u.sum(&v).unwrap();
        let i = u.intersect(&v).unwrap();
        prop_assert_eq!(s.dim() + i.dim(), u.dim() + v.dim());
        prop_assert!(s.contains(&u).unwrap() && s.contains(&v).unwrap());
        prop_assert!(u.contains(&i).unwrap() && v.contains(&i).unwrap());
    }

    #[test]
    fn solve_constraints_is_the_kernel(rows in prop::collection::vec(prop::collection::vec(0..P, 6), 1..5), dom in vectors(6, 5)) {
        let f = field();
        let m = Matrix::from_rows(f, 6, &rows).unwrap();
        let domain = Subspace::span(f, 6, &dom).unwrap();
        let k = solve_constraints(&domain, |v| m.apply(f, v).unwrap());
        prop_assert!(domain.contains(&k).unwrap());
        for b in k.basis_iter() {
            prop_assert!(m.apply(f, b).unwrap().iter().all(|&x| x == 0));
        }
        let image = domain.image(&m).unwrap();
        prop_assert_eq!(k.dim() + image.dim(), domain.dim());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn towers_are_chains_and_match_enumeration(seed in 0u64..10_000, w in 1u64..=2) {
        let (g, p) = graded_params(seed);
        let inst = gen_random(seed, &p, &g, None).unwrap();
        let hyp = nilgrade::grading::GradedHypotheses::new(&inst.algebra, inst.grading.unwrap(), inst.ideal.unwrap()).unwrap();
        let cfg = TowerConfig { levels: Some(3), width: Some(w), ..TowerConfig::default() };
        let t = build_tower(&inst.algebra, &hyp, &cfg).unwrap();
        for s in 1..t.levels.len() {
            for (lo, hi) in t.levels[s].components.iter().zip(&t.levels[s - 1].components) {
                prop_assert!(hi.contains(lo).unwrap());
            }
            let brute = brute_force_level(&inst.algebra, &t, s, w as usize, DEFAULT_BUDGET).unwrap();
            prop_assert_eq!(&brute, &t.levels[s].components);
        }
    }

    #[test]
    fn default_towers_verify(seed in 0u64..10_000) {
        let (g, p) = graded_params(seed);
        let inst = gen_random(seed, &p, &g, None).unwrap();
        let hyp = nilgrade::grading::GradedHypotheses::new(&inst.algebra, inst.grading.unwrap(), inst.ideal.unwrap()).unwrap();
        let t = build_tower(&inst.algebra, &hyp, &TowerConfig { samples: 200, ..TowerConfig::default() }).unwrap();
        let (checks, _) = verify(&inst.algebra, &t);
        let failed: Vec<_> = checks.iter().filter(|c| !c.passed).map(|c| c.name.clone()).collect();
        prop_assert!(failed.is_empty(), "{:?}", failed);
    }

    #[test]
    fn instances_round_trip(seed in 0u64..10_000, orbit in any::<bool>()) {
        let (g, mut p) = graded_params(seed);
        if orbit {
            p.family = Family::Orbit;
            p.max_vertices = 4;
            p.ideal_min_len = None;
        }
        let inst = gen_random(seed, &p, &g, None).unwrap();
        let text = emit_instance(&inst).unwrap();
        let back = parse_instance(&text).unwrap();
        prop_assert_eq!(emit_instance(&back).unwrap(), text.clone());
        let again = gen_random(seed, &p, &g, None).unwrap();
        prop_assert_eq!(emit_instance(&again).unwrap(), text);
    }

    #[test]
    fn reports_do_not_depend_on_threads(seed in 0u64..10_000) {
        let (g, p) = graded_params(seed);
        let inst = gen_random(seed, &p, &g, None).unwrap();
        let hyp = nilgrade::grading::GradedHypotheses::new(&inst.algebra, inst.grading.unwrap(), inst.ideal.unwrap()).unwrap();
        let run = |threads| par::with_threads(threads, || {
            to_pretty(&theorem2_construct(&inst.algebra, &hyp, &TowerConfig::default()).unwrap().report)
        });
        prop_assert_eq!(run(1), run(4));
    }
}
