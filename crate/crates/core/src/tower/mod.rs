//! Descending chains of generalized centralizers `A_g(s)` with their
//! representatives, built level by level from spans of representative
//! products.

mod bounds;
mod checks;
mod oracle;
mod spans;

pub use bounds::{bergman_isaacs_h, bounds_for, BoundSet};
pub use checks::{
    chain_check, lemma4_check, lemma5_check, lemma_l2_check, property3_check, rep_bound_check, verify, SampleStats,
};
pub use oracle::{brute_force_level, DEFAULT_BUDGET};
pub use spans::{kernel_stage, product_span_table, theta_kernel, ProductSpanTable, Side};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::Algebra;
use crate::grading::{GradedHypotheses, Grading};
use crate::linalg::{Echelon, QuotientMap, Subspace};
use crate::par;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TowerError {
    #[error("θ-maps are defined for non-identity grades only")]
    IdentityGrade,
    #[error("grade condition fails: {left}·{g}·{right} ≠ e")]
    GradeCondition { left: usize, g: usize, right: usize },
    #[error("formal unit at a non-identity grade")]
    MisplacedUnit,
    #[error("ideal is not contained in the identity component")]
    IdealOutsideIdentity,
    #[error("grading does not match the algebra dimension")]
    DimensionMismatch,
    #[error("level {0} is out of range")]
    LevelOutOfRange(usize),
    #[error("enumeration needs {needed} tuples, budget is {budget}")]
    Budget { needed: u128, budget: u128 },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RepKind {
    /// `x_e(0)`: lifted basis of `A_e / I_e`.
    #[serde(rename = "x_identity")]
    IdentityBasis,
    /// `x_g(s)`: factor of a selected pattern pair.
    #[serde(rename = "x_pair")]
    PairFactor,
    /// `b_g(s)`: lifted basis of `A_g / A_g(s)`.
    #[serde(rename = "b")]
    QuotientLift,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Representative {
    pub element: Vec<u32>,
    pub grade: usize,
    pub level: usize,
    pub kind: RepKind,
}

/// A selected pattern pair `(x_g, x_{g⁻¹})`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairRecord {
    pub grade: usize,
    pub left: Vec<u32>,
    pub right: Vec<u32>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Level {
    pub index: usize,
    /// Tuple length bound used to cut this level (0 for level 0).
    pub width: u64,
    /// `A_g(s)` per grade; the identity slot holds `A_e`.
    pub components: Vec<Subspace>,
    pub reps: Vec<Representative>,
    pub pairs: Vec<PairRecord>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TowerConfig {
    /// Highest level; defaults to `N`.
    pub levels: Option<usize>,
    /// Uniform width for every level; defaults to `W_s`.
    pub width: Option<u64>,
    pub samples: usize,
    pub seed: u64,
}

impl Default for TowerConfig {
    fn default() -> Self {
        TowerConfig {
            levels: None,
            width: None,
            samples: 1000,
            seed: 0,
        }
    }
}

#[derive(Clone, Debug)]
pub struct CentralizerTower {
    pub hypotheses: GradedHypotheses,
    pub bounds: BoundSet,
    pub config: TowerConfig,
    pub levels: Vec<Level>,
}

impl CentralizerTower {
    pub fn grading(&self) -> &Grading {
        &self.hypotheses.grading
    }

    pub fn ideal(&self) -> &Subspace {
        &self.hypotheses.ideal.carrier
    }

    pub fn top(&self) -> usize {
        self.levels.len() - 1
    }

    /// `A_g(s)`.
    pub fn component(&self, g: usize, s: usize) -> &Subspace {
        &self.levels[s].components[g]
    }

    pub fn uses_default_widths(&self) -> bool {
        self.config.width.is_none()
    }

    /// Representatives of levels `< s`, each `(grade, element)` once.
    pub fn pool_below(&self, s: usize) -> Vec<Representative> {
        pool_of(&self.levels[..s])
    }

    pub(crate) fn identity_quotient(&self) -> QuotientMap {
        self.grading()
            .identity_component()
            .quotient_map(self.ideal())
            .expect("hypotheses place I_e inside A_e")
    }

    pub fn dump(&self, algebra: &Algebra) -> TowerDump {
        let group = self.grading().group();
        TowerDump {
            levels: self
                .levels
                .iter()
                .map(|l| LevelDump {
                    level: l.index,
                    width: l.width,
                    components: group
                        .non_identity()
                        .map(|g| ComponentDump {
                            grade: g,
                            name: group.names()[g].clone(),
                            dim: l.components[g].dim(),
                            basis: l.components[g].basis_vectors(),
                        })
                        .collect(),
                    reps: l.reps.clone(),
                })
                .collect(),
            algebra_dim: algebra.dim(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComponentDump {
    pub grade: usize,
    pub name: String,
    pub dim: usize,
    pub basis: Vec<Vec<u32>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LevelDump {
    pub level: usize,
    pub width: u64,
    pub components: Vec<ComponentDump>,
    pub reps: Vec<Representative>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TowerDump {
    pub algebra_dim: usize,
    pub levels: Vec<LevelDump>,
}

fn pool_of(levels: &[Level]) -> Vec<Representative> {
    let mut seen = std::collections::HashSet::new();
    levels
        .iter()
        .flat_map(|l| l.reps.iter())
        .filter(|r| seen.insert((r.grade, r.element.clone())))
        .cloned()
        .collect()
}

/// Pairs `(u, v)` over the two RREF bases in lexicographic order, kept when
/// `u v` is independent modulo `I_e` of the products kept so far.
fn greedy_pairs(algebra: &Algebra, qe: &QuotientMap, left: &Subspace, right: &Subspace) -> Vec<(Vec<u32>, Vec<u32>)> {
    let mut echelon = Echelon::new(algebra.field(), qe.codim());
    let mut out = Vec::new();
    'outer: for u in left.basis_iter() {
        for v in right.basis_iter() {
            if echelon.is_full() {
                break 'outer;
            }
            if echelon.insert(qe.coords(&algebra.mul(u, v))) {
                out.push((u.to_vec(), v.to_vec()));
            }
        }
    }
    out
}

fn pair_reps(
    grading: &Grading,
    level: usize,
    per_grade: Vec<(usize, Vec<(Vec<u32>, Vec<u32>)>)>,
    reps: &mut Vec<Representative>,
    pairs: &mut Vec<PairRecord>,
) {
    let group = grading.group();
    for (g, ps) in per_grade {
        for (u, v) in ps {
            for (grade, element) in [(g, &u), (group.inv(g), &v)] {
                if !reps.iter().any(|r| r.grade == grade && &r.element == element) {
                    reps.push(Representative {
                        element: element.clone(),
                        grade,
                        level,
                        kind: RepKind::PairFactor,
                    });
                }
            }
            pairs.push(PairRecord {
                grade: g,
                left: u,
                right: v,
            });
        }
    }
}

pub fn level_zero(algebra: &Algebra, hypotheses: &GradedHypotheses) -> Level {
    let grading = &hypotheses.grading;
    let group = grading.group();
    let ae = grading.identity_component();
    let qe = ae.quotient_map(&hypotheses.ideal.carrier).expect("I_e ⊆ A_e");
    let mut reps: Vec<Representative> = ae
        .quotient_data(&hypotheses.ideal.carrier)
        .expect("I_e ⊆ A_e")
        .lifts
        .into_iter()
        .map(|element| Representative {
            element,
            grade: group.identity(),
            level: 0,
            kind: RepKind::IdentityBasis,
        })
        .collect();
    let grades: Vec<usize> = group.non_identity().collect();
    let selected = par::map(&grades, |&g| {
        (g, greedy_pairs(algebra, &qe, grading.component(g), grading.component(group.inv(g))))
    });
    let mut pairs = Vec::new();
    pair_reps(grading, 0, selected, &mut reps, &mut pairs);
    Level {
        index: 0,
        width: 0,
        components: grading.components().to_vec(),
        reps,
        pairs,
    }
}

/// Level `s = levels.len()` from the levels below it.
pub fn next_level(algebra: &Algebra, hypotheses: &GradedHypotheses, below: &[Level], width: u64) -> Level {
    let s = below.len();
    let grading = &hypotheses.grading;
    let group = grading.group();
    let e = group.identity();
    let qe = grading
        .identity_component()
        .quotient_map(&hypotheses.ideal.carrier)
        .expect("I_e ⊆ A_e");
    let pool = pool_of(below);
    let table = product_span_table(algebra, grading, &pool, width as usize);
    let grades: Vec<usize> = (0..group.order()).collect();
    let components = par::map(&grades, |&g| {
        if g == e {
            grading.identity_component().clone()
        } else {
            kernel_stage(algebra, grading, &qe, &table, g)
        }
    });
    let mut reps = Vec::new();
    for g in group.non_identity() {
        let lifts = grading
            .component(g)
            .quotient_data(&components[g])
            .expect("A_g(s) ⊆ A_g")
            .lifts;
        reps.extend(lifts.into_iter().map(|element| Representative {
            element,
            grade: g,
            level: s,
            kind: RepKind::QuotientLift,
        }));
    }
    let non_identity: Vec<usize> = group.non_identity().collect();
    let selected = par::map(&non_identity, |&g| {
        (g, greedy_pairs(algebra, &qe, &components[g], &components[group.inv(g)]))
    });
    let mut pairs = Vec::new();
    pair_reps(grading, s, selected, &mut reps, &mut pairs);
    Level {
        index: s,
        width,
        components,
        reps,
        pairs,
    }
}

pub fn build_tower(
    algebra: &Algebra,
    hypotheses: &GradedHypotheses,
    config: &TowerConfig,
) -> Result<CentralizerTower, TowerError> {
    if hypotheses.grading.identity_component().ambient_dim() != algebra.dim() {
        return Err(TowerError::DimensionMismatch);
    }
    let bounds = bounds_for(hypotheses.group_order() as u64, hypotheses.index as u64);
    let top = config.levels.unwrap_or(bounds.levels as usize);
    let mut levels = vec![level_zero(algebra, hypotheses)];
    for s in 1..=top {
        let width = config
            .width
            .unwrap_or_else(|| bounds.width(s));
        let level = next_level(algebra, hypotheses, &levels, width);
        levels.push(level);
    }
    Ok(CentralizerTower {
        hypotheses: hypotheses.clone(),
        bounds,
        config: config.clone(),
        levels,
    })
}

#[cfg(test)]
mod tests;
