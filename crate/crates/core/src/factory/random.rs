use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::group::FiniteGroup;
use crate::instance::Instance;
use crate::linalg::{PrimeField, Subspace};

use super::quiver::path_count;
use super::{default_prime, gen_path_algebra, linear_characters, roots_prime, Arrow, ArrowType, FactoryError, OrbitQuiver, QuiverSpec};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Family {
    /// Path algebra graded by arrow labels; ideal of grade-`e` paths.
    Graded,
    /// Path algebra with a cyclic group scaling arrows by roots of unity.
    Scaling,
    /// Path algebra on regular vertex orbits, any group.
    Orbit,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RandomParams {
    pub family: Family,
    pub max_vertices: usize,
    pub max_arrows: usize,
    pub truncation: usize,
    pub idempotents: bool,
    pub max_dim: usize,
    /// Minimum path length of the hypothesis ideal; `None` draws it at random.
    pub ideal_min_len: Option<usize>,
}

impl Default for RandomParams {
    fn default() -> Self {
        RandomParams {
            family: Family::Graded,
            max_vertices: 3,
            max_arrows: 4,
            truncation: 4,
            idempotents: true,
            max_dim: 40,
            ideal_min_len: Some(1),
        }
    }
}

/// Shrink the truncation, then drop trailing arrows, until the dimension fits.
fn fit(q: &mut QuiverSpec, max_dim: usize, min_arrows: usize) {
    while path_count(q) > max_dim && q.truncation > 2 {
        q.truncation -= 1;
    }
    while path_count(q) > max_dim && q.arrows.len() > min_arrows {
        q.arrows.pop();
    }
}

fn ideal_len(rng: &mut ChaCha8Rng, params: &RandomParams, truncation: usize) -> usize {
    params
        .ideal_min_len
        .unwrap_or_else(|| rng.gen_range(1..=truncation.max(1)))
}

/// Seeded instance of the chosen family. The field defaults to the smallest
/// prime satisfying the characteristic and root-of-unity conditions.
pub fn gen_random(
    seed: u64,
    params: &RandomParams,
    group: &FiniteGroup,
    field: Option<PrimeField>,
) -> Result<Instance, FactoryError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = group.order();
    match params.family {
        Family::Graded => {
            let field = match field {
                Some(f) => f,
                None => PrimeField::new(default_prime(n)?).expect("prime"),
            };
            let vertices = rng.gen_range(1..=params.max_vertices.max(1));
            let count = rng.gen_range(1..=params.max_arrows.max(1));
            let arrows = (0..count)
                .map(|_| Arrow {
                    source: rng.gen_range(0..vertices),
                    target: rng.gen_range(0..vertices),
                    label: rng.gen_range(0..n),
                })
                .collect();
            let mut q = QuiverSpec {
                vertices,
                arrows,
                truncation: params.truncation.max(1),
                idempotents: params.idempotents,
            };
            fit(&mut q, params.max_dim, 1);
            let pa = gen_path_algebra(&q, group, field)?;
            let l = ideal_len(&mut rng, params, q.truncation);
            let ideal = if l >= q.truncation {
                pa.algebra.zero_subspace()
            } else {
                pa.identity_ideal(l)
            };
            Ok(Instance::graded(pa.algebra, pa.grading, ideal))
        }
        Family::Scaling => {
            if group.generator().is_none() {
                return Err(FactoryError::NotCyclic(n));
            }
            let field = match field {
                Some(f) => f,
                None => PrimeField::new(roots_prime(n)?).expect("prime"),
            };
            let omega = field
                .primitive_root_of_unity(n as u64)
                .ok_or(FactoryError::NotRootOfUnity { scalar: 0, order: n })?;
            let vertices = rng.gen_range(1..=params.max_vertices.max(1));
            let count = rng.gen_range(1..=params.max_arrows.max(1));
            let mut arrows = Vec::with_capacity(count);
            let mut exponents = Vec::with_capacity(count);
            for a in 0..count {
                arrows.push(Arrow {
                    source: rng.gen_range(0..vertices),
                    target: rng.gen_range(0..vertices),
                    label: 0,
                });
                exponents.push(if a == 0 { 1 } else { rng.gen_range(0..n) as u64 });
            }
            let mut q = QuiverSpec {
                vertices,
                arrows,
                truncation: params.truncation.max(1),
                idempotents: params.idempotents,
            };
            fit(&mut q, params.max_dim, 1);
            let character: Vec<u32> = exponents[..q.arrows.len()].iter().map(|&k| field.pow(omega, k)).collect();
            let pa = gen_path_algebra(&q, &FiniteGroup::cyclic(1), field)?;
            let action = pa.scaling_action(&character, n)?;
            let l = ideal_len(&mut rng, params, q.truncation);
            let ideal = fixed_ideal(&pa.algebra, &action, &pa.length_at_least(l.max(1)));
            let mut inst = Instance::acted(pa.algebra, action, ideal);
            inst.series = FiniteGroup::cyclic(n).find_prime_series(64).ok();
            Ok(inst)
        }
        Family::Orbit => {
            let field = match field {
                Some(f) => f,
                None => PrimeField::new(default_prime(n)?).expect("prime"),
            };
            let chars = linear_characters(group, field);
            let orbits = rng.gen_range(1..=(params.max_vertices / n).max(1));
            let types = rng.gen_range(1..=params.max_arrows.clamp(1, 3));
            let arrow_types: Vec<ArrowType> = (0..types)
                .map(|_| ArrowType {
                    source_orbit: rng.gen_range(0..orbits),
                    source_shift: rng.gen_range(0..n),
                    target_orbit: rng.gen_range(0..orbits),
                    target_shift: rng.gen_range(0..n),
                    character: chars[rng.gen_range(0..chars.len())].clone(),
                })
                .collect();
            let mut oq = OrbitQuiver {
                group: group.clone(),
                orbits,
                arrow_types,
                truncation: params.truncation.max(1),
                idempotents: params.idempotents,
            };
            while path_count(&oq.spec()) > params.max_dim && oq.truncation > 2 {
                oq.truncation -= 1;
            }
            while path_count(&oq.spec()) > params.max_dim && oq.arrow_types.len() > 1 {
                oq.arrow_types.pop();
            }
            let (pa, action) = oq.build(field)?;
            let l = ideal_len(&mut rng, params, oq.truncation);
            let ideal = fixed_ideal(&pa.algebra, &action, &pa.length_at_least(l.max(1)));
            let mut inst = Instance::acted(pa.algebra, action, ideal);
            inst.series = group.find_prime_series(64).ok();
            Ok(inst)
        }
    }
}

/// `A^G ∩ filtration`: an ideal of `A^G` when the filtration piece is an
/// ideal of `A` preserved by the action.
fn fixed_ideal(
    algebra: &crate::algebra::Algebra,
    action: &crate::grading::GroupAction,
    filtration: &Subspace,
) -> Subspace {
    action
        .fixed_subalgebra(algebra)
        .intersect(filtration)
        .expect("same ambient space")
}
