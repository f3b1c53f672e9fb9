//! Cup-product obstructions to special generic maps, and a certificate
//! calculus for their existence, on closed manifolds assembled from spheres,
//! tori and projective spaces.
//!
//! The crate is `no_std` (it needs `alloc`). Parsing, reports and the
//! command-line tool live in `sgm-cli`.

#![no_std]

extern crate alloc;

pub mod admissibility;
pub mod builders;
pub mod obstruction;
mod linalg;
pub mod ring;
pub mod scalar;
pub mod spectrum;

pub use admissibility::{derive_sp, verify_derivation, NotApplicable, Rule, SideCondition, SpDerivation};
pub use builders::{build, BuildError, BuilderRecipe, ManifoldModel, Orientability};
pub use ring::{
    validate_ring, BasisClass, CohomologyRing, CupTable, GradedBasis, RingElement, RingError,
    ValidationReport, Violation,
};
pub use obstruction::{cohp_check, obstructed_max, ObstructionWitness};
pub use scalar::{CoefficientSpec, Prime, Scalar};
pub use spectrum::{compute_spectrum, Spectrum, SpectrumEntry, SpectrumError, Status};
