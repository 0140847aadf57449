use std::collections::HashSet;

use crate::algebra::Algebra;
use crate::linalg::{solve_constraints, Subspace};

use super::{CentralizerTower, TowerError};

pub const DEFAULT_BUDGET: u128 = 2_000_000;

type Factor = Option<Vec<u32>>;

/// `A_g(s)` by literal enumeration of every ordered tuple of representatives
/// of levels `< s` of length `≤ w` and every insertion position.
pub fn brute_force_level(
    algebra: &Algebra,
    tower: &CentralizerTower,
    s: usize,
    w: usize,
    budget: u128,
) -> Result<Vec<Subspace>, TowerError> {
    if s == 0 || s > tower.top() {
        return Err(TowerError::LevelOutOfRange(s));
    }
    let pool = tower.pool_below(s);
    let p = pool.len() as u128;
    let needed: u128 = (1..=w as u32).map(|k| p.pow(k) * (k as u128 + 1)).sum();
    if needed > budget {
        return Err(TowerError::Budget { needed, budget });
    }
    let grading = tower.grading();
    let group = grading.group();
    let e = group.identity();
    let n = group.order();
    let mut constraints: Vec<HashSet<(Factor, Factor)>> = vec![HashSet::new(); n];
    let mut idx = Vec::new();
    for k in 1..=w {
        if pool.is_empty() {
            break;
        }
        idx.clear();
        idx.resize(k, 0usize);
        loop {
            for l in 0..=k {
                let (pre, suf) = idx.split_at(l);
                let gp = pre.iter().fold(e, |acc, &i| group.op(acc, pool[i].grade));
                let gs = suf.iter().fold(e, |acc, &i| group.op(acc, pool[i].grade));
                let g = group.op(group.inv(gp), group.inv(gs));
                if g == e {
                    continue;
                }
                let left = algebra.mul_chain(pre.iter().map(|&i| pool[i].element.as_slice()));
                let right = algebra.mul_chain(suf.iter().map(|&i| pool[i].element.as_slice()));
                let zero = |f: &Factor| f.as_ref().is_some_and(|v| v.iter().all(|&c| c == 0));
                if zero(&left) || zero(&right) {
                    continue;
                }
                constraints[g].insert((left, right));
            }
            let mut pos = k;
            let exhausted = loop {
                if pos == 0 {
                    break true;
                }
                pos -= 1;
                idx[pos] += 1;
                if idx[pos] < pool.len() {
                    break false;
                }
                idx[pos] = 0;
            };
            if exhausted {
                break;
            }
        }
    }
    let qe = tower.identity_quotient();
    let mut out = Vec::with_capacity(n);
    for (g, set) in constraints.into_iter().enumerate() {
        if g == e {
            out.push(grading.identity_component().clone());
            continue;
        }
        let mut list: Vec<(Factor, Factor)> = set.into_iter().collect();
        list.sort();
        let mut domain = grading.component(g).clone();
        for chunk in list.chunks(64) {
            if domain.is_zero() {
                break;
            }
            domain = solve_constraints(&domain, |y| {
                let mut c = Vec::new();
                for (l, r) in chunk {
                    let ly = match l {
                        Some(l) => algebra.mul(l, y),
                        None => y.to_vec(),
                    };
                    let lyr = match r {
                        Some(r) => algebra.mul(&ly, r),
                        None => ly,
                    };
                    qe.coords_into(&lyr, &mut c);
                }
                c
            });
        }
        out.push(domain);
    }
    Ok(out)
}
