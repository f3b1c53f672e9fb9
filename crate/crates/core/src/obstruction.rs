//! Nonvanishing cup products that rule out special generic maps.
//!
//! A closed `m`-manifold satisfies `CohP(n0)` when some classes of degrees at
//! most `m − n0`, with degree sum at least `n0`, have a nonzero cup product;
//! it then admits no special generic map into any connected non-closed
//! `n0`-manifold without boundary.
//!
//! Over free graded pieces the search may be restricted to basis classes:
//! expanding any product by multilinearity writes it as a combination of
//! basis-tuple products, so a nonzero product forces a nonzero basis tuple.
//! Graded commutativity further lets each tuple be sorted by (degree, index),
//! so tuples are enumerated as multisets.

use alloc::vec::Vec;

use rand::Rng;
use thiserror::Error;

use crate::builders::ManifoldModel;
use crate::ring::{BasisClass, CohomologyRing, RingElement, RingError};
use crate::scalar::{CoefficientSpec, Scalar};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ObstructionError {
    #[error("cohomology is not free over the integers")]
    UnsupportedRing,
    #[error("target dimension {n0} outside 1..{m}")]
    TargetOutOfRange { n0: u32, m: u32 },
    #[error(transparent)]
    Ring(#[from] RingError),
}

/// Basis classes whose cup product is nonzero, certifying `CohP(target_n0)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ObstructionWitness {
    pub classes: Vec<BasisClass>,
    pub product: RingElement,
    pub target_n0: u32,
    pub total_degree: u32,
}

impl ObstructionWitness {
    pub fn degrees(&self) -> Vec<u32> {
        self.classes.iter().map(|c| c.degree).collect()
    }

    /// Re-multiplies the classes and checks every bound of the condition.
    pub fn replay(&self, model: &ManifoldModel) -> bool {
        let ring = model.ring();
        let m = model.dimension();
        if self.classes.is_empty() || self.target_n0 == 0 || self.target_n0 >= m {
            return false;
        }
        let bounds = self
            .classes
            .iter()
            .all(|c| c.degree >= 1 && c.degree <= m - self.target_n0 && ring.basis().contains(*c));
        let total: u32 = self.degrees().iter().sum();
        bounds && total >= self.target_n0 && self.replay_product(model)
    }

    /// Re-multiplies the classes: the product must match and be nonzero.
    pub fn replay_product(&self, model: &ManifoldModel) -> bool {
        let ring = model.ring();
        if self.classes.is_empty() || !self.classes.iter().all(|c| ring.basis().contains(*c)) {
            return false;
        }
        if self.degrees().iter().sum::<u32>() != self.total_degree {
            return false;
        }
        let elements: Vec<RingElement> = self.classes.iter().map(|c| ring.basis_element(*c)).collect();
        match ring.product_of_sequence(&elements) {
            Ok(p) => !p.is_zero() && p == self.product,
            Err(_) => false,
        }
    }
}

fn check_model(model: &ManifoldModel, n0: u32) -> Result<(), ObstructionError> {
    if !model.free_homology() && !model.coeff().is_field() {
        return Err(ObstructionError::UnsupportedRing);
    }
    let m = model.dimension();
    if n0 < 1 || n0 >= m {
        return Err(ObstructionError::TargetOutOfRange { n0, m });
    }
    Ok(())
}

/// Multisets with parts in `1..=max_part` and sum in `min_sum..=max_sum`, each
/// as a non-decreasing vector, ordered by length and then lexicographically.
pub fn degree_multisets(max_part: u32, min_sum: u32, max_sum: u32) -> impl Iterator<Item = Vec<u32>> {
    let max_len = if max_part == 0 { 0 } else { max_sum };
    (1..=max_len).flat_map(move |len| {
        let mut out = Vec::new();
        let mut current = Vec::with_capacity(len as usize);
        extend_multisets(&mut current, len, 1, 0, max_part, min_sum, max_sum, &mut out);
        out
    })
}

#[allow(clippy::too_many_arguments)]
fn extend_multisets(
    current: &mut Vec<u32>,
    len: u32,
    min_part: u32,
    sum: u32,
    max_part: u32,
    min_sum: u32,
    max_sum: u32,
    out: &mut Vec<Vec<u32>>,
) {
    let remaining = len - current.len() as u32;
    if remaining == 0 {
        if sum >= min_sum {
            out.push(current.clone());
        }
        return;
    }
    for part in min_part..=max_part {
        // the rest is at least `part` each and at most `max_part` each
        if sum + part * remaining > max_sum {
            break;
        }
        if sum + part + max_part * (remaining - 1) < min_sum {
            continue;
        }
        current.push(part);
        extend_multisets(current, len, part, sum + part, max_part, min_sum, max_sum, out);
        current.pop();
    }
}

/// Every degree multiset that could certify `CohP(n0)` on an `m`-manifold.
/// Sums above `m` are pruned: such products vanish.
pub fn enumerate_degree_multisets(m: u32, n0: u32) -> impl Iterator<Item = Vec<u32>> {
    degree_multisets(m.saturating_sub(n0), n0, m)
}

/// Lexicographically least sorted basis tuple with the given degrees and a
/// nonzero product. Zero partial products prune their whole subtree.
fn first_nonzero_tuple(ring: &CohomologyRing, degrees: &[u32]) -> Option<Vec<BasisClass>> {
    if degrees.iter().any(|&d| ring.basis().rank(d) == 0) {
        return None;
    }
    let mut chosen = Vec::with_capacity(degrees.len());
    descend(ring, degrees, ring.unit(), &mut chosen).then_some(chosen)
}

fn descend(
    ring: &CohomologyRing,
    degrees: &[u32],
    acc: RingElement,
    chosen: &mut Vec<BasisClass>,
) -> bool {
    let pos = chosen.len();
    if pos == degrees.len() {
        return true;
    }
    let d = degrees[pos];
    let start = match chosen.last() {
        Some(prev) if prev.degree == d => prev.index,
        _ => 0,
    };
    for i in start..ring.basis().rank(d) as u32 {
        let class = BasisClass::new(d, i);
        let next = ring.cup(&acc, &ring.basis_element(class)).expect("same ring");
        if next.is_zero() {
            continue;
        }
        chosen.push(class);
        if descend(ring, degrees, next, chosen) {
            return true;
        }
        chosen.pop();
    }
    false
}

fn witness_from(
    ring: &CohomologyRing,
    classes: Vec<BasisClass>,
    target_n0: u32,
) -> Result<ObstructionWitness, ObstructionError> {
    let elements: Vec<RingElement> = classes.iter().map(|c| ring.basis_element(*c)).collect();
    let product = ring.product_of_sequence(&elements)?;
    let total_degree = classes.iter().map(|c| c.degree).sum();
    Ok(ObstructionWitness { classes, product, target_n0, total_degree })
}

/// Searches multisets in order and returns the first nonzero basis tuple.
fn search(
    ring: &CohomologyRing,
    multisets: impl Iterator<Item = Vec<u32>>,
    target_n0: u32,
) -> Result<Option<ObstructionWitness>, ObstructionError> {
    for degrees in multisets {
        if let Some(classes) = first_nonzero_tuple(ring, &degrees) {
            return witness_from(ring, classes, target_n0).map(Some);
        }
    }
    Ok(None)
}

/// Decides `CohP(n0)`. The witness is the least one in (length, degree
/// multiset, basis indices); `None` means no sequence of classes at all works.
pub fn cohp_check(model: &ManifoldModel, n0: u32) -> Result<Option<ObstructionWitness>, ObstructionError> {
    check_model(model, n0)?;
    search(model.ring(), enumerate_degree_multisets(model.dimension(), n0), n0)
}

/// Largest `n0` with `CohP(n0)`, or 0. Every smaller positive `n0` is
/// obstructed as well, since a witness for `n0` also serves any `n0' < n0`.
pub fn obstructed_max(model: &ManifoldModel) -> Result<u32, ObstructionError> {
    let m = model.dimension();
    if !model.free_homology() && !model.coeff().is_field() {
        return Err(ObstructionError::UnsupportedRing);
    }
    for n0 in (1..m).rev() {
        if cohp_check(model, n0)?.is_some() {
            return Ok(n0);
        }
    }
    Ok(0)
}

/// Nonzero product of classes with every degree at most `max_part` and degree
/// sum exactly `sum` (the product-closure hypothesis on the fibre factor).
pub fn exact_sum_witness(
    model: &ManifoldModel,
    max_part: u32,
    sum: u32,
) -> Result<Option<ObstructionWitness>, ObstructionError> {
    if !model.free_homology() && !model.coeff().is_field() {
        return Err(ObstructionError::UnsupportedRing);
    }
    // No target dimension applies; target_n0 records the required sum.
    search(model.ring(), degree_multisets(max_part.min(sum), sum, sum), sum)
}

/// A nonzero product of arbitrary (not necessarily basis) classes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SampledWitness {
    pub classes: Vec<RingElement>,
    pub product: RingElement,
    pub target_n0: u32,
}

fn random_scalar<R: Rng + ?Sized>(coeff: CoefficientSpec, rng: &mut R) -> Scalar {
    match coeff {
        CoefficientSpec::PrimeField(p) => coeff.from_i64(rng.gen_range(0..p.get().min(i64::MAX as u64)) as i64),
        _ => coeff.from_i64(rng.gen_range(-3..=3)),
    }
}

/// A uniformly random element of the given degree with small exact coefficients.
pub fn random_element<R: Rng + ?Sized>(ring: &CohomologyRing, degree: u32, rng: &mut R) -> RingElement {
    let coefficients = (0..ring.basis().rank(degree)).map(|_| random_scalar(ring.coeff(), rng)).collect();
    ring.element(degree, coefficients).expect("rank-sized coefficients")
}

/// Multiplies random classes of the given degrees, up to `trials` times.
pub fn sample_with_degrees<R: Rng + ?Sized>(
    model: &ManifoldModel,
    degrees: &[u32],
    target_n0: u32,
    trials: usize,
    rng: &mut R,
) -> Option<SampledWitness> {
    let ring = model.ring();
    if degrees.is_empty() || degrees.iter().any(|&d| ring.basis().rank(d) == 0) {
        return None;
    }
    for _ in 0..trials {
        let classes: Vec<RingElement> = degrees.iter().map(|&d| random_element(ring, d, rng)).collect();
        let product = ring.product_of_sequence(&classes).expect("same ring");
        if !product.is_zero() {
            return Some(SampledWitness { classes, product, target_n0 });
        }
    }
    None
}

/// Independent check of the basis reduction: multiplies random classes of
/// random admissible degrees. Any hit implies `cohp_check` succeeds.
pub fn random_sampling_oracle<R: Rng + ?Sized>(
    model: &ManifoldModel,
    n0: u32,
    trials: usize,
    rng: &mut R,
) -> Result<Option<SampledWitness>, ObstructionError> {
    check_model(model, n0)?;
    let ring = model.ring();
    let candidates: Vec<Vec<u32>> = enumerate_degree_multisets(model.dimension(), n0)
        .filter(|ds| ds.iter().all(|&d| ring.basis().rank(d) > 0))
        .collect();
    if candidates.is_empty() {
        return Ok(None);
    }
    for _ in 0..trials {
        let degrees = &candidates[rng.gen_range(0..candidates.len())];
        if let Some(hit) = sample_with_degrees(model, degrees, n0, 1, rng) {
            return Ok(Some(hit));
        }
    }
    Ok(None)
}
