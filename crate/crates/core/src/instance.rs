//! A bundle of an algebra with the optional structure a command may need.

use crate::algebra::Algebra;
use crate::grading::{Grading, GroupAction};
use crate::group::{FiniteGroup, PrimeSeries};
use crate::linalg::Subspace;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Instance {
    pub algebra: Algebra,
    pub group: Option<FiniteGroup>,
    pub grading: Option<Grading>,
    pub action: Option<GroupAction>,
    /// Hypothesis ideal: inside `A_e` for a grading, inside `A^G` for an action.
    pub ideal: Option<Subspace>,
    pub series: Option<PrimeSeries>,
}

impl Instance {
    pub fn bare(algebra: Algebra) -> Self {
        Instance {
            algebra,
            group: None,
            grading: None,
            action: None,
            ideal: None,
            series: None,
        }
    }

    pub fn graded(algebra: Algebra, grading: Grading, ideal: Subspace) -> Self {
        Instance {
            group: Some(grading.group().clone()),
            grading: Some(grading),
            ideal: Some(ideal),
            ..Instance::bare(algebra)
        }
    }

    pub fn acted(algebra: Algebra, action: GroupAction, ideal: Subspace) -> Self {
        Instance {
            group: Some(action.group().clone()),
            action: Some(action),
            ideal: Some(ideal),
            ..Instance::bare(algebra)
        }
    }
}
