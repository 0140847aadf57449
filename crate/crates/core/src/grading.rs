//! Group gradings, automorphism actions, fixed points and the eigenspace
//! grading of a prime-order action.

use std::collections::VecDeque;

use serde::Serialize;
use thiserror::Error;

use crate::algebra::{Algebra, AlgebraError, IdealHandle, Nilpotency};
use crate::group::FiniteGroup;
use crate::linalg::{Echelon, LinalgError, Matrix, Subspace};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GradingError {
    #[error("expected {expected} components, found {found}")]
    ComponentCount { expected: usize, found: usize },
    #[error("grade label {label} at basis vector {index} is not a group element")]
    BadLabel { index: usize, label: usize },
    #[error("expected {expected} matrices, found {found}")]
    MatrixCount { expected: usize, found: usize },
    #[error("matrix for element {element} is not {dim}×{dim}")]
    MatrixShape { element: usize, dim: usize },
    #[error("generators give conflicting matrices for element {0}")]
    InconsistentGenerators(usize),
    #[error("generators do not generate the group")]
    NotGenerating,
    #[error("characteristic {p} divides the group order {order}")]
    CharacteristicDividesOrder { p: u32, order: usize },
    #[error("group of order {0} is not cyclic of prime order")]
    NotPrimeCyclic(usize),
    #[error("{omega} is not a primitive {order}-th root of unity")]
    NotPrimitiveRoot { omega: u32, order: usize },
    #[error("no primitive {0}-th root of unity in the field")]
    NoPrimitiveRoot(usize),
    #[error("identity component is not nilpotent")]
    IdentityNotNilpotent,
    #[error("fixed-point subalgebra is not nilpotent")]
    FixedNotNilpotent,
    #[error("invalid grading: {0}")]
    InvalidGrading(String),
    #[error("invalid action: {0}")]
    InvalidAction(String),
    #[error("ideal is not contained in the identity component")]
    IdealOutsideComponent,
    #[error("ideal is not a two-sided ideal of the identity component")]
    IdealNotTwoSided,
    #[error("ideal is not nilpotent")]
    IdealNotNilpotent,
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Grading {
    group: FiniteGroup,
    components: Vec<Subspace>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GradingViolation {
    /// Component dimensions do not add up to the algebra, or components overlap.
    NotDirect { sum_dim: usize, total_dim: usize },
    /// `a · b ∉ A_{gh}` for basis vectors `a ∈ A_g`, `b ∈ A_h`.
    Product {
        g: usize,
        h: usize,
        left: Vec<u32>,
        right: Vec<u32>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GradingReport {
    pub component_dims: Vec<usize>,
    pub violations: Vec<GradingViolation>,
}

impl GradingReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

impl Grading {
    pub fn new(group: FiniteGroup, components: Vec<Subspace>) -> Result<Self, GradingError> {
        if components.len() != group.order() {
            return Err(GradingError::ComponentCount {
                expected: group.order(),
                found: components.len(),
            });
        }
        Ok(Grading { group, components })
    }

    /// Basis-aligned grading: basis vector `i` is homogeneous of grade `labels[i]`.
    pub fn from_labels(algebra: &Algebra, group: FiniteGroup, labels: &[usize]) -> Result<Self, GradingError> {
        if labels.len() != algebra.dim() {
            return Err(GradingError::ComponentCount {
                expected: algebra.dim(),
                found: labels.len(),
            });
        }
        if let Some((index, &label)) = labels.iter().enumerate().find(|(_, &l)| l >= group.order()) {
            return Err(GradingError::BadLabel { index, label });
        }
        let components = (0..group.order())
            .map(|g| {
                let idx: Vec<usize> = (0..labels.len()).filter(|&i| labels[i] == g).collect();
                Subspace::coordinate(algebra.field(), algebra.dim(), &idx)
            })
            .collect();
        Ok(Grading { group, components })
    }

    /// Everything in the identity component.
    pub fn trivial(algebra: &Algebra, group: FiniteGroup) -> Self {
        let labels = vec![group.identity(); algebra.dim()];
        Grading::from_labels(algebra, group, &labels).expect("identity label is valid")
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn component(&self, g: usize) -> &Subspace {
        &self.components[g]
    }

    pub fn components(&self) -> &[Subspace] {
        &self.components
    }

    pub fn identity_component(&self) -> &Subspace {
        &self.components[self.group.identity()]
    }

    /// Grade labels per basis vector, if every basis vector is homogeneous.
    pub fn basis_labels(&self) -> Option<Vec<usize>> {
        let dim = self.components.first()?.ambient_dim();
        (0..dim)
            .map(|i| {
                let mut v = vec![0u32; dim];
                v[i] = 1;
                self.components.iter().position(|c| c.member(&v))
            })
            .collect()
    }

    /// Grade of a nonzero homogeneous element.
    pub fn grade_of(&self, x: &[u32]) -> Option<usize> {
        if x.iter().all(|&c| c == 0) {
            return None;
        }
        self.components.iter().position(|c| c.member(x))
    }

    pub fn validate(&self, algebra: &Algebra) -> GradingReport {
        let component_dims: Vec<usize> = self.components.iter().map(|c| c.dim()).collect();
        let mut violations = Vec::new();
        let sum_dim: usize = component_dims.iter().sum();
        let mut e = Echelon::new(algebra.field(), algebra.dim());
        for c in &self.components {
            for v in c.basis_iter() {
                e.insert(v.to_vec());
            }
        }
        if sum_dim != algebra.dim() || e.rank() != algebra.dim() {
            violations.push(GradingViolation::NotDirect {
                sum_dim,
                total_dim: algebra.dim(),
            });
        }
        let group = &self.group;
        for g in group.elements() {
            for h in group.elements() {
                let target = self.components[group.op(g, h)].echelon();
                for a in self.components[g].basis_iter() {
                    for b in self.components[h].basis_iter() {
                        if !target.contains(&algebra.mul(a, b)) {
                            violations.push(GradingViolation::Product {
                                g,
                                h,
                                left: a.to_vec(),
                                right: b.to_vec(),
                            });
                        }
                    }
                }
            }
        }
        GradingReport {
            component_dims,
            violations,
        }
    }
}

/// A representation `g ↦ ρ(g)` of a finite group by matrices acting on
/// coordinate column vectors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupAction {
    group: FiniteGroup,
    matrices: Vec<Matrix>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ActionViolation {
    IdentityNotTrivial,
    /// `ρ(g)ρ(h) ≠ ρ(gh)`
    NotHomomorphism { g: usize, h: usize },
    /// `ρ(g)(e_i e_j) ≠ ρ(g)(e_i) ρ(g)(e_j)`
    NotMultiplicative { g: usize, i: usize, j: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ActionReport {
    pub violations: Vec<ActionViolation>,
}

impl ActionReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

impl GroupAction {
    pub fn new(group: FiniteGroup, matrices: Vec<Matrix>) -> Result<Self, GradingError> {
        if matrices.len() != group.order() {
            return Err(GradingError::MatrixCount {
                expected: group.order(),
                found: matrices.len(),
            });
        }
        let dim = matrices[0].rows();
        if let Some(element) = matrices
            .iter()
            .position(|m| m.rows() != dim || m.cols() != dim)
        {
            return Err(GradingError::MatrixShape { element, dim });
        }
        Ok(GroupAction { group, matrices })
    }

    /// Extend matrices given on generators to the whole group by
    /// `ρ(x·g) = ρ(x)ρ(g)`.
    pub fn from_generators(
        algebra: &Algebra,
        group: FiniteGroup,
        generators: &[(usize, Matrix)],
    ) -> Result<Self, GradingError> {
        let field = algebra.field();
        let dim = algebra.dim();
        let n = group.order();
        for (g, m) in generators {
            if *g >= n {
                return Err(GradingError::BadLabel { index: 0, label: *g });
            }
            if m.rows() != dim || m.cols() != dim {
                return Err(GradingError::MatrixShape { element: *g, dim });
            }
        }
        let mut mats: Vec<Option<Matrix>> = vec![None; n];
        mats[group.identity()] = Some(Matrix::identity(dim));
        let mut queue = VecDeque::from([group.identity()]);
        while let Some(x) = queue.pop_front() {
            let mx = mats[x].clone().expect("visited");
            for (g, mg) in generators {
                let y = group.op(x, *g);
                let my = mx.mul(field, mg)?;
                match &mats[y] {
                    Some(existing) if *existing != my => {
                        return Err(GradingError::InconsistentGenerators(y))
                    }
                    Some(_) => {}
                    None => {
                        mats[y] = Some(my);
                        queue.push_back(y);
                    }
                }
            }
        }
        let matrices = mats
            .into_iter()
            .collect::<Option<Vec<_>>>()
            .ok_or(GradingError::NotGenerating)?;
        GroupAction::new(group, matrices)
    }

    pub fn trivial(algebra: &Algebra, group: FiniteGroup) -> Self {
        let matrices = vec![Matrix::identity(algebra.dim()); group.order()];
        GroupAction { group, matrices }
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn matrix(&self, g: usize) -> &Matrix {
        &self.matrices[g]
    }

    pub fn matrices(&self) -> &[Matrix] {
        &self.matrices
    }

    pub fn apply(&self, algebra: &Algebra, g: usize, x: &[u32]) -> Vec<u32> {
        self.matrices[g]
            .apply(algebra.field(), x)
            .expect("action matrices match the algebra")
    }

    pub fn validate(&self, algebra: &Algebra) -> ActionReport {
        let f = algebra.field();
        let group = &self.group;
        let mut violations = Vec::new();
        if !self.matrices[group.identity()].is_identity() {
            violations.push(ActionViolation::IdentityNotTrivial);
        }
        for g in group.elements() {
            for h in group.elements() {
                let lhs = self.matrices[g].mul(f, &self.matrices[h]);
                if lhs.as_ref() != Ok(&self.matrices[group.op(g, h)]) {
                    violations.push(ActionViolation::NotHomomorphism { g, h });
                }
            }
        }
        let n = algebra.dim();
        for g in group.elements() {
            let images: Vec<Vec<u32>> = (0..n).map(|i| self.matrices[g].column(i)).collect();
            for i in 0..n {
                for j in 0..n {
                    let lhs = self.apply(algebra, g, &algebra.mul(&algebra.unit_vector(i), &algebra.unit_vector(j)));
                    let rhs = algebra.mul(&images[i], &images[j]);
                    if lhs != rhs {
                        violations.push(ActionViolation::NotMultiplicative { g, i, j });
                    }
                }
            }
        }
        ActionReport { violations }
    }

    /// `A^G = ⋂_g ker(ρ(g) − 1)`.
    pub fn fixed_subalgebra(&self, algebra: &Algebra) -> Subspace {
        let f = algebra.field();
        let mut fixed = algebra.whole();
        for g in self.group.non_identity() {
            let k = self.matrices[g].minus_scalar(f, 1).kernel(f);
            fixed = fixed.intersect(&k).expect("same ambient");
        }
        debug_assert!(algebra.is_multiplicatively_closed(&fixed));
        fixed
    }

    /// Reynolds average `(1/n) Σ_g ρ(g) x`.
    pub fn average(&self, algebra: &Algebra, x: &[u32]) -> Result<Vec<u32>, GradingError> {
        let f = algebra.field();
        let n = self.group.order();
        if f.divides(n as u64) {
            return Err(GradingError::CharacteristicDividesOrder { p: f.p(), order: n });
        }
        if x.len() != algebra.dim() {
            return Err(AlgebraError::DimensionMismatch {
                expected: algebra.dim(),
                found: x.len(),
            }
            .into());
        }
        let mut acc = vec![0u32; x.len()];
        for g in self.group.elements() {
            for (a, b) in acc.iter_mut().zip(self.apply(algebra, g, x)) {
                *a = f.add(*a, b);
            }
        }
        let inv = f.inv(f.reduce(n as i64)).expect("n is a unit");
        Ok(acc.into_iter().map(|a| f.mul(a, inv)).collect())
    }

    /// Eigenspace grading of a prime-order action: with the smallest-index
    /// generator `g`, the component of `g^k` is `ker(ρ(g) − ω^k)`.
    pub fn eigen_grading(&self, algebra: &Algebra, omega: u32) -> Result<Grading, GradingError> {
        let f = algebra.field();
        let p = self.group.order();
        if !self.group.is_prime_cyclic() {
            return Err(GradingError::NotPrimeCyclic(p));
        }
        if f.divides(p as u64) {
            return Err(GradingError::CharacteristicDividesOrder { p: f.p(), order: p });
        }
        if f.element_order(omega) != Some(p as u64) {
            return Err(GradingError::NotPrimitiveRoot { omega, order: p });
        }
        let g = self.group.generator().expect("prime order groups are cyclic");
        let rho = &self.matrices[g];
        let mut components = vec![algebra.zero_subspace(); p];
        for k in 0..p {
            let eigenvalue = f.pow(omega, k as u64);
            components[self.group.power(g, k)] = rho.minus_scalar(f, eigenvalue).kernel(f);
        }
        Grading::new(self.group.clone(), components)
    }

    /// Eigenspace grading using the smallest primitive root of unity.
    pub fn eigen_grading_default(&self, algebra: &Algebra) -> Result<Grading, GradingError> {
        let p = self.group.order();
        let omega = algebra
            .field()
            .primitive_root_of_unity(p as u64)
            .ok_or(GradingError::NoPrimitiveRoot(p))?;
        self.eigen_grading(algebra, omega)
    }

    /// Is the subspace mapped into itself by every `ρ(g)`?
    pub fn is_invariant(&self, s: &Subspace) -> bool {
        self.matrices
            .iter()
            .all(|m| s.image(m).map(|img| img == *s).unwrap_or(false))
    }

    /// Sum of all translates `ρ(g) S`.
    pub fn orbit_span(&self, s: &Subspace) -> Subspace {
        let mut e = s.echelon();
        for m in &self.matrices {
            for v in s.basis_iter() {
                e.insert(m.apply(s.field(), v).expect("matching sizes"));
            }
        }
        e.into_subspace()
    }
}

/// Direct check of the graded nilpotency bound `index(A) ≤ |G| · index(A_e)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GradedBoundReport {
    pub group_order: usize,
    pub identity_index: usize,
    pub algebra_index: Nilpotency,
    pub bound: usize,
    pub holds: bool,
}

pub fn graded_nilpotency_bound_check(algebra: &Algebra, grading: &Grading) -> Result<GradedBoundReport, GradingError> {
    let d = algebra
        .nilpotency_index(grading.identity_component())?
        .index()
        .ok_or(GradingError::IdentityNotNilpotent)?;
    let n = grading.group().order();
    let algebra_index = algebra.algebra_nilpotency();
    let bound = n * d;
    let holds = matches!(algebra_index, Nilpotency::Index(k) if k <= bound);
    Ok(GradedBoundReport {
        group_order: n,
        identity_index: d,
        algebra_index,
        bound,
        holds,
    })
}

/// A graded algebra whose identity component carries a nilpotent ideal of
/// finite codimension.
#[derive(Clone, Debug)]
pub struct GradedHypotheses {
    pub grading: Grading,
    pub ideal: IdealHandle,
    /// Nilpotency index of the ideal.
    pub index: usize,
    /// Codimension of the ideal in the identity component.
    pub codim: usize,
}

impl GradedHypotheses {
    pub fn new(algebra: &Algebra, grading: Grading, ideal: Subspace) -> Result<Self, GradingError> {
        let report = grading.validate(algebra);
        if !report.is_valid() {
            return Err(GradingError::InvalidGrading(format!("{:?}", report.violations[0])));
        }
        let identity = grading.identity_component();
        if !identity.contains(&ideal)? {
            return Err(GradingError::IdealOutsideComponent);
        }
        let handle = algebra.classify_ideal(&ideal, identity)?;
        if !handle.is_two_sided() {
            return Err(GradingError::IdealNotTwoSided);
        }
        let index = algebra
            .nilpotency_index(&ideal)?
            .index()
            .ok_or(GradingError::IdealNotNilpotent)?;
        let codim = identity.dim() - ideal.dim();
        Ok(GradedHypotheses {
            grading,
            ideal: handle,
            index,
            codim,
        })
    }

    pub fn group_order(&self) -> usize {
        self.grading.group().order()
    }
}
