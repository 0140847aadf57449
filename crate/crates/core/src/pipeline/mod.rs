//! End-to-end constructions: the graded ideal `Z`, the invariant-ideal lift,
//! the recursion over a prime series, and the Bergman–Isaacs comparison.

mod lift;
mod theorem1;
mod theorem2;

pub use lift::{bergman_isaacs_check, invariant_ideal_lift, BergmanIsaacsReport, LiftReport};
pub use theorem1::theorem1_construct;
pub use theorem2::{theorem2_construct, Theorem2Output};

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::{Algebra, AlgebraError, IdealHandle, Nilpotency};
use crate::check::Check;
use crate::grading::{GradingError, GroupAction};
use crate::group::GroupError;
use crate::linalg::{prime_divisors, Subspace};
use crate::tower::{BoundSet, SampleStats, TowerError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PipelineError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Grading(#[from] GradingError),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Tower(#[from] TowerError),
    #[error("characteristic {p} divides the group order {order}")]
    CharacteristicDivides { p: u32, order: usize },
    #[error("F_{p} has no primitive {q}-th root of unity")]
    MissingRoot { q: u64, p: u32 },
    #[error("invalid action: {0}")]
    InvalidAction(String),
    #[error("ideal is not contained in the fixed subalgebra")]
    IdealOutsideFixed,
    #[error("ideal is not a two-sided ideal of the fixed subalgebra")]
    IdealNotTwoSided,
    #[error("{0} is not nilpotent")]
    NotNilpotent(&'static str),
    #[error("series does not belong to the acting group: {0}")]
    SeriesMismatch(String),
}

/// An algebra with a group action whose fixed subalgebra carries a nilpotent
/// ideal of finite codimension.
#[derive(Clone, Debug)]
pub struct InvariantHypotheses {
    pub action: GroupAction,
    pub ideal: IdealHandle,
    pub fixed: Subspace,
    pub index: usize,
    pub codim: usize,
}

impl InvariantHypotheses {
    pub fn new(algebra: &Algebra, action: GroupAction, ideal: Subspace) -> Result<Self, PipelineError> {
        let report = action.validate(algebra);
        if let Some(v) = report.violations.first() {
            return Err(PipelineError::InvalidAction(format!("{v:?}")));
        }
        let p = algebra.field().p();
        let order = action.group().order();
        if algebra.field().divides(order as u64) {
            return Err(PipelineError::CharacteristicDivides { p, order });
        }
        let fixed = action.fixed_subalgebra(algebra);
        if ideal.ambient_dim() != algebra.dim() || !fixed.contains(&ideal).unwrap_or(false) {
            return Err(PipelineError::IdealOutsideFixed);
        }
        let handle = algebra.classify_ideal(&ideal, &fixed)?;
        if !handle.is_two_sided() {
            return Err(PipelineError::IdealNotTwoSided);
        }
        let index = algebra
            .nilpotency_index(&ideal)?
            .index()
            .ok_or(PipelineError::NotNilpotent("the hypothesis ideal"))?;
        Ok(InvariantHypotheses {
            codim: fixed.dim() - ideal.dim(),
            action,
            ideal: handle,
            fixed,
            index,
        })
    }

    pub fn group_order(&self) -> usize {
        self.action.group().order()
    }
}

/// `q | p − 1` for every prime `q` dividing `|G|`.
pub fn check_roots_of_unity(p: u32, order: usize) -> Result<(), PipelineError> {
    for q in prime_divisors(order as u64) {
        if (p as u64 - 1) % q != 0 {
            return Err(PipelineError::MissingRoot { q, p });
        }
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LevelSummary {
    pub level: usize,
    pub width: u64,
    /// `dim A_g(s)` per grade, identity slot `dim A_e`.
    pub dims: Vec<usize>,
    pub reps: usize,
    pub pairs: usize,
}

/// One graded stage of a recursive construction.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StageRecord {
    pub depth: usize,
    pub group_order: usize,
    pub algebra_dim: usize,
    pub ideal_index: usize,
    pub achieved_index: Nilpotency,
    #[serde(with = "crate::big")]
    pub bound: BigUint,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ConstructionKind {
    Theorem2,
    Theorem1,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConstructionReport {
    pub kind: ConstructionKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bounds: Option<BoundSet>,
    /// RREF basis of the constructed ideal.
    pub ideal: Vec<Vec<u32>>,
    pub ideal_dim: usize,
    pub achieved_index: Nilpotency,
    pub achieved_codim: usize,
    /// Verified bound on the nilpotency index.
    #[serde(with = "crate::big")]
    pub index_bound: BigUint,
    pub checks: Vec<Check>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub tower_summary: Vec<LevelSummary>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub stages: Vec<StageRecord>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub samples: Option<SampleStats>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl ConstructionReport {
    pub fn passed(&self) -> bool {
        crate::check::all_pass(&self.checks)
    }

    pub fn failed_checks(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

pub(crate) fn index_within(index: Nilpotency, bound: &BigUint) -> bool {
    matches!(index, Nilpotency::Index(k) if BigUint::from(k) <= *bound)
}
