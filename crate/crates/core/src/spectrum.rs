//! Per-dimension verdicts: obstructed, certified, or unknown.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use thiserror::Error;

use crate::admissibility::{derive_sp, r2_threshold_gaps, SpDerivation};
use crate::builders::{build, BuildError, BuilderRecipe};
use crate::obstruction::{cohp_check, obstructed_max, ObstructionError, ObstructionWitness};
use crate::scalar::CoefficientSpec;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Status {
    Obstructed(ObstructionWitness),
    Admits(SpDerivation),
    Unknown,
}

impl Status {
    pub fn name(&self) -> &'static str {
        match self {
            Status::Obstructed(_) => "obstructed",
            Status::Admits(_) => "admits",
            Status::Unknown => "unknown",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpectrumEntry {
    pub n: u32,
    pub status: Status,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Spectrum {
    pub dimension: u32,
    pub n_max: u32,
    pub derivation: Option<SpDerivation>,
    pub entries: Vec<SpectrumEntry>,
    pub notes: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SpectrumError {
    #[error(transparent)]
    Build(#[from] BuildError),
    #[error(transparent)]
    Obstruction(#[from] ObstructionError),
    #[error("internal inconsistency: certified from {n0} but obstructed up to {n_max}")]
    InternalInconsistency { n0: u32, n_max: u32 },
}

pub const OBSTRUCTION_SCOPE: &str =
    "obstructed n: no special generic map into ANY connected non-closed n-manifold without boundary, Euclidean space included";

/// Computes every verdict for `1 <= n < m`. With `admissibility` off no
/// derivation is searched for and non-obstructed entries are unknown.
pub fn compute_spectrum(
    recipe: &BuilderRecipe,
    coeff: CoefficientSpec,
    admissibility: bool,
) -> Result<Spectrum, SpectrumError> {
    let model = build(recipe, coeff)?;
    let m = model.dimension();
    let n_max = obstructed_max(&model)?;
    let derivation = if admissibility { derive_sp(recipe, coeff)? } else { None };
    if let Some(d) = &derivation {
        if d.n0 <= n_max {
            return Err(SpectrumError::InternalInconsistency { n0: d.n0, n_max });
        }
    }

    let mut entries = Vec::new();
    for n in 1..m {
        let status = if n <= n_max {
            let w = cohp_check(&model, n)?.expect("monotone below n_max");
            Status::Obstructed(w)
        } else {
            match &derivation {
                Some(d) if d.admits(n) => Status::Admits(d.clone()),
                _ => Status::Unknown,
            }
        };
        entries.push(SpectrumEntry { n, status });
    }

    let mut notes = Vec::new();
    if n_max > 0 {
        notes.push(String::from(OBSTRUCTION_SCOPE));
    }
    if let Some(d) = &derivation {
        for (lo, hi) in r2_threshold_gaps(d) {
            notes.push(format!(
                "sphere-product sum: the smallest summand would suggest n0 = {lo}, but every summand must satisfy k_j < n, so n0 = {hi}"
            ));
        }
    }
    if entries.iter().any(|e| e.status == Status::Unknown) {
        notes.push(String::from("unknown: neither the obstruction nor a certificate applies; this is not a non-existence claim"));
    }
    Ok(Spectrum { dimension: m, n_max, derivation, entries, notes })
}

#[cfg(test)]
mod tests {
    use super::*;
    use BuilderRecipe::*;

    fn statuses(s: &Spectrum) -> Vec<&'static str> {
        s.entries.iter().map(|e| e.status.name()).collect()
    }

    #[test]
    fn triple_sphere_product() {
        let r = BuilderRecipe::product(BuilderRecipe::product(Sphere(2), Sphere(2)), Sphere(2));
        let s = compute_spectrum(&r, CoefficientSpec::Rationals, true).unwrap();
        assert_eq!(statuses(&s), ["obstructed", "obstructed", "obstructed", "obstructed", "admits"]);
    }

    #[test]
    fn sphere_over_integers() {
        let s = compute_spectrum(&Sphere(3), CoefficientSpec::Integers, true).unwrap();
        assert_eq!(statuses(&s), ["admits", "admits"]);
        assert!(s.notes.is_empty());
    }

    #[test]
    fn admissibility_can_be_switched_off() {
        let s = compute_spectrum(&Sphere(3), CoefficientSpec::Rationals, false).unwrap();
        assert_eq!(statuses(&s), ["unknown", "unknown"]);
    }

    #[test]
    fn projective_space_is_fully_obstructed() {
        let s = compute_spectrum(&RealProjective(5), CoefficientSpec::MOD2, true).unwrap();
        assert_eq!(s.n_max, 4);
        assert!(s.notes[0].contains("ANY connected non-closed"));
    }
}
