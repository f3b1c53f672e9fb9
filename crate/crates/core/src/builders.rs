//! Cohomology models of spheres, tori and projective spaces, closed under
//! Künneth products and connected sums.

use alloc::boxed::Box;
use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use thiserror::Error;

use crate::ring::{BasisClass, CohomologyRing, CupTable, GradedBasis, RingError, Terms};
use crate::scalar::{CoefficientSpec, Scalar};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BuildError {
    #[error("{what} must have parameter >= {min}, got {got}")]
    InvalidDimension { what: &'static str, min: u32, got: u32 },
    #[error("{what} is only modeled over Z2, not {coeff}")]
    UnsupportedCoefficients { what: &'static str, coeff: CoefficientSpec },
    #[error("coefficient rings differ: {0} vs {1}")]
    CoefficientMismatch(CoefficientSpec, CoefficientSpec),
    #[error("Künneth products need free homology on both factors")]
    TorsionUnsupported,
    #[error("connected sum of manifolds of dimensions {0} and {1}")]
    DimensionMismatch(u32, u32),
    #[error("connected sum needs dimension >= 2, got {0}")]
    DimensionTooSmall(u32),
    #[error("connected sum of a non-orientable manifold over {0}")]
    OrientabilityViolation(CoefficientSpec),
    #[error("summand has no fundamental class")]
    MissingFundamentalClass,
    #[error(transparent)]
    Ring(#[from] RingError),
}

/// How a manifold is assembled from atoms.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum BuilderRecipe {
    Sphere(u32),
    Torus(u32),
    RealProjective(u32),
    ComplexProjective(u32),
    Product(Box<BuilderRecipe>, Box<BuilderRecipe>),
    ConnectedSum(Box<BuilderRecipe>, Box<BuilderRecipe>),
}

impl BuilderRecipe {
    pub fn product(a: BuilderRecipe, b: BuilderRecipe) -> Self {
        BuilderRecipe::Product(Box::new(a), Box::new(b))
    }

    pub fn connected_sum(a: BuilderRecipe, b: BuilderRecipe) -> Self {
        BuilderRecipe::ConnectedSum(Box::new(a), Box::new(b))
    }

    /// Dimension of the manifold; for a malformed sum, that of the left summand.
    pub fn dimension(&self) -> u32 {
        match self {
            BuilderRecipe::Sphere(k) | BuilderRecipe::Torus(k) | BuilderRecipe::RealProjective(k) => *k,
            BuilderRecipe::ComplexProjective(k) => 2 * k,
            BuilderRecipe::Product(a, b) => a.dimension() + b.dimension(),
            BuilderRecipe::ConnectedSum(a, _) => a.dimension(),
        }
    }

    fn fmt_at(&self, f: &mut fmt::Formatter<'_>, level: Level) -> fmt::Result {
        let own = match self {
            BuilderRecipe::ConnectedSum(..) => Level::Sum,
            BuilderRecipe::Product(..) => Level::Product,
            _ => Level::Atom,
        };
        if own < level {
            f.write_str("(")?;
            self.fmt_at(f, Level::Sum)?;
            return f.write_str(")");
        }
        match self {
            BuilderRecipe::Sphere(k) => write!(f, "S({k})"),
            BuilderRecipe::Torus(k) => write!(f, "T({k})"),
            BuilderRecipe::RealProjective(k) => write!(f, "RP({k})"),
            BuilderRecipe::ComplexProjective(k) => write!(f, "CP({k})"),
            BuilderRecipe::Product(a, b) => {
                a.fmt_at(f, Level::Product)?;
                f.write_str(" x ")?;
                b.fmt_at(f, Level::Atom)
            }
            BuilderRecipe::ConnectedSum(a, b) => {
                a.fmt_at(f, Level::Sum)?;
                f.write_str(" # ")?;
                b.fmt_at(f, Level::Product)
            }
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum Level {
    Sum,
    Product,
    Atom,
}

/// Prints in the expression syntax: `x` binds tighter than `#`, both
/// associate to the left, and parentheses appear only where needed.
impl fmt::Display for BuilderRecipe {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_at(f, Level::Sum)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Orientability {
    Orientable,
    NonOrientable,
}

/// A closed connected manifold as seen through its cohomology ring, together
/// with the declared immersion data the certificate rules consume.
#[derive(Clone, Debug)]
pub struct ManifoldModel {
    dimension: u32,
    ring: CohomologyRing,
    orientability: Orientability,
    free_homology: bool,
    /// Least `n` with a declared immersion into `R^n` with trivial normal
    /// bundle; the declared set is everything from here up.
    immersion_threshold: Option<u32>,
    recipe: BuilderRecipe,
    source_expression: String,
    summands: u32,
}

impl ManifoldModel {
    pub fn dimension(&self) -> u32 {
        self.dimension
    }

    pub fn ring(&self) -> &CohomologyRing {
        &self.ring
    }

    pub fn coeff(&self) -> CoefficientSpec {
        self.ring.coeff()
    }

    pub fn orientability(&self) -> Orientability {
        self.orientability
    }

    pub fn is_orientable(&self) -> bool {
        self.orientability == Orientability::Orientable
    }

    pub fn free_homology(&self) -> bool {
        self.free_homology
    }

    pub fn immersion_threshold(&self) -> Option<u32> {
        self.immersion_threshold
    }

    /// Whether an immersion into `R^n` with trivial normal bundle is declared.
    pub fn immerses_with_trivial_normal(&self, n: u32) -> bool {
        self.immersion_threshold.is_some_and(|t| n >= t)
    }

    pub fn recipe(&self) -> &BuilderRecipe {
        &self.recipe
    }

    pub fn source_expression(&self) -> &str {
        &self.source_expression
    }

    pub fn with_source_expression(mut self, text: impl Into<String>) -> Self {
        self.source_expression = text.into();
        self
    }

    /// Euler characteristic from the ranks.
    pub fn euler_characteristic(&self) -> i64 {
        self.ring
            .basis()
            .ranks()
            .iter()
            .enumerate()
            .map(|(d, &r)| if d % 2 == 0 { r as i64 } else { -(r as i64) })
            .sum()
    }

    fn from_ring(
        ring: CohomologyRing,
        orientability: Orientability,
        immersion_threshold: Option<u32>,
        recipe: BuilderRecipe,
    ) -> Self {
        ManifoldModel {
            dimension: ring.top_degree(),
            free_homology: true,
            orientability,
            immersion_threshold,
            source_expression: recipe.to_string(),
            recipe,
            ring,
            summands: 1,
        }
    }
}

/// Builds the model a recipe describes.
pub fn build(recipe: &BuilderRecipe, coeff: CoefficientSpec) -> Result<ManifoldModel, BuildError> {
    match recipe {
        BuilderRecipe::Sphere(k) => build_sphere(*k, coeff),
        BuilderRecipe::Torus(k) => build_torus(*k, coeff),
        BuilderRecipe::RealProjective(m) => build_real_projective(*m, coeff),
        BuilderRecipe::ComplexProjective(k) => build_complex_projective(*k, coeff),
        BuilderRecipe::Product(a, b) => kunneth_product(&build(a, coeff)?, &build(b, coeff)?),
        BuilderRecipe::ConnectedSum(a, b) => connected_sum(&build(a, coeff)?, &build(b, coeff)?),
    }
}

fn at_least(what: &'static str, min: u32, got: u32) -> Result<(), BuildError> {
    if got < min {
        Err(BuildError::InvalidDimension { what, min, got })
    } else {
        Ok(())
    }
}

/// `Z[c]/(c^{n+1})` with `c` in degree `generator_degree`.
fn truncated_polynomial(
    coeff: CoefficientSpec,
    generator_degree: u32,
    n: u32,
    label: impl Fn(u32) -> String,
) -> Result<CohomologyRing, RingError> {
    let top = generator_degree * n;
    let mut labels = vec![Vec::new(); top as usize + 1];
    for j in 0..=n {
        labels[(j * generator_degree) as usize].push(if j == 0 { "1".to_string() } else { label(j) });
    }
    let basis = GradedBasis::new(labels)?;
    let mut cup = CupTable::new();
    let power = |j: u32| BasisClass::new(j * generator_degree, 0);
    for i in 0..=n {
        for j in 0..=n - i {
            cup.set_terms(&basis, power(i), power(j), vec![(0, coeff.one())])?;
        }
    }
    CohomologyRing::new(coeff, basis, cup, Some(power(n)))
}

pub fn build_sphere(k: u32, coeff: CoefficientSpec) -> Result<ManifoldModel, BuildError> {
    at_least("sphere", 1, k)?;
    let ring = truncated_polynomial(coeff, k, 1, |_| format!("s{k}"))?;
    Ok(ManifoldModel::from_ring(ring, Orientability::Orientable, Some(k + 1), BuilderRecipe::Sphere(k)))
}

pub fn build_torus(k: u32, coeff: CoefficientSpec) -> Result<ManifoldModel, BuildError> {
    at_least("torus", 1, k)?;
    let circle = build_sphere(1, coeff)?;
    let circle = relabel(circle, |_| "e".to_string())?;
    let mut torus = circle.clone();
    for _ in 1..k {
        torus = kunneth_product(&torus, &circle)?;
    }
    // "1⊗e⊗e" names e2e3.
    let mut torus = relabel(torus, |label| {
        let name: String = label
            .split('⊗')
            .enumerate()
            .filter(|(_, part)| *part == "e")
            .map(|(i, _)| format!("e{}", i + 1))
            .collect();
        if name.is_empty() {
            "1".to_string()
        } else {
            name
        }
    })?;
    torus.immersion_threshold = Some(k + 1);
    torus.recipe = BuilderRecipe::Torus(k);
    torus.source_expression = torus.recipe.to_string();
    Ok(torus)
}

pub fn build_real_projective(m: u32, coeff: CoefficientSpec) -> Result<ManifoldModel, BuildError> {
    at_least("real projective space", 1, m)?;
    if coeff != CoefficientSpec::MOD2 {
        return Err(BuildError::UnsupportedCoefficients { what: "real projective space", coeff });
    }
    let ring = truncated_polynomial(coeff, 1, m, |j| if j == 1 { "u".into() } else { format!("u^{j}") })?;
    let orientability =
        if m % 2 == 1 { Orientability::Orientable } else { Orientability::NonOrientable };
    // RP^1, RP^3 and RP^7 are parallelizable.
    let threshold = matches!(m, 1 | 3 | 7).then_some(m + 1);
    Ok(ManifoldModel::from_ring(ring, orientability, threshold, BuilderRecipe::RealProjective(m)))
}

pub fn build_complex_projective(k: u32, coeff: CoefficientSpec) -> Result<ManifoldModel, BuildError> {
    at_least("complex projective space", 1, k)?;
    let ring = truncated_polynomial(coeff, 2, k, |j| if j == 1 { "c".into() } else { format!("c^{j}") })?;
    // CP^1 is the 2-sphere.
    let threshold = (k == 1).then_some(3);
    Ok(ManifoldModel::from_ring(
        ring,
        Orientability::Orientable,
        threshold,
        BuilderRecipe::ComplexProjective(k),
    ))
}

fn relabel(model: ManifoldModel, f: impl Fn(&str) -> String) -> Result<ManifoldModel, BuildError> {
    let ring = &model.ring;
    let basis = ring.basis();
    let labels = (0..=basis.top_degree())
        .map(|d| (0..basis.rank(d) as u32).map(|i| f(basis.label(BasisClass::new(d, i)))).collect())
        .collect();
    let ring = CohomologyRing::new(
        ring.coeff(),
        GradedBasis::new(labels)?,
        ring.cup_table().clone(),
        ring.fundamental_class(),
    )?;
    Ok(ManifoldModel { ring, ..model })
}

/// Cohomology of `M1 × M2` for free graded pieces, with the Koszul sign
/// `(x⊗y)(x'⊗y') = (−1)^{|y||x'|} xx' ⊗ yy'`.
pub fn kunneth_product(m1: &ManifoldModel, m2: &ManifoldModel) -> Result<ManifoldModel, BuildError> {
    let (r1, r2) = (&m1.ring, &m2.ring);
    if r1.coeff() != r2.coeff() {
        return Err(BuildError::CoefficientMismatch(r1.coeff(), r2.coeff()));
    }
    if !m1.free_homology || !m2.free_homology {
        return Err(BuildError::TorsionUnsupported);
    }
    let coeff = r1.coeff();
    let (b1, b2) = (r1.basis(), r2.basis());
    let top = b1.top_degree() + b2.top_degree();
    let n2 = b2.total_rank();

    // position of x⊗y, indexed by global(x) * n2 + global(y)
    let mut position = vec![BasisClass::UNIT; b1.total_rank() * n2];
    let mut labels = vec![Vec::new(); top as usize + 1];
    for x in b1.classes() {
        for y in b2.classes() {
            let d = (x.degree + y.degree) as usize;
            position[b1.global(x) * n2 + b2.global(y)] = BasisClass::new(d as u32, labels[d].len() as u32);
            labels[d].push(format!("{}⊗{}", b1.label(x), b2.label(y)));
        }
    }
    let basis = GradedBasis::new(labels)?;
    let at = |x: usize, y: usize| position[x * n2 + y];

    let mut cup = CupTable::new();
    for ((x, x2), terms1) in r1.cup_table().iter() {
        let (cx, cx2) = (b1.address(x), b1.address(x2));
        let left_range = b1.degree_range(cx.degree + cx2.degree).start;
        for ((y, y2), terms2) in r2.cup_table().iter() {
            let (cy, cy2) = (b2.address(y), b2.address(y2));
            let right_range = b2.degree_range(cy.degree + cy2.degree).start;
            let sign = coeff.sign(cy.degree as u64 * cx2.degree as u64);
            let mut terms: Terms = Vec::with_capacity(terms1.len() * terms2.len());
            for (k1, c1) in terms1 {
                for (k2, c2) in terms2 {
                    let target = at(left_range + *k1 as usize, right_range + *k2 as usize);
                    terms.push((target.index, &sign * &(c1 * c2)));
                }
            }
            cup.set_terms(&basis, at(x, y), at(x2, y2), terms)?;
        }
    }
    let fundamental = match (r1.fundamental_class(), r2.fundamental_class()) {
        (Some(_), Some(_)) => Some(BasisClass::new(top, 0)),
        _ => None,
    };
    let ring = CohomologyRing::new(coeff, basis, cup, fundamental)?;
    let orientability = if m1.is_orientable() && m2.is_orientable() {
        Orientability::Orientable
    } else {
        Orientability::NonOrientable
    };
    let threshold = m1.immersion_threshold.zip(m2.immersion_threshold).map(|(a, b)| a + b);
    Ok(ManifoldModel::from_ring(
        ring,
        orientability,
        threshold,
        BuilderRecipe::product(m1.recipe.clone(), m2.recipe.clone()),
    ))
}

/// Cohomology of `M1 # M2`: units and fundamental classes identified, middle
/// degrees direct-summed, products across summands zero.
pub fn connected_sum(m1: &ManifoldModel, m2: &ManifoldModel) -> Result<ManifoldModel, BuildError> {
    let (r1, r2) = (&m1.ring, &m2.ring);
    if r1.coeff() != r2.coeff() {
        return Err(BuildError::CoefficientMismatch(r1.coeff(), r2.coeff()));
    }
    let coeff = r1.coeff();
    if m1.dimension != m2.dimension {
        return Err(BuildError::DimensionMismatch(m1.dimension, m2.dimension));
    }
    let m = m1.dimension;
    if m < 2 {
        return Err(BuildError::DimensionTooSmall(m));
    }
    if coeff.characteristic() != 2 && !(m1.is_orientable() && m2.is_orientable()) {
        return Err(BuildError::OrientabilityViolation(coeff));
    }
    if r1.fundamental_class().is_none() || r2.fundamental_class().is_none() {
        return Err(BuildError::MissingFundamentalClass);
    }
    let (b1, b2) = (r1.basis(), r2.basis());

    let tag = |label: &str, model: &ManifoldModel, offset: u32| -> String {
        if model.summands > 1 {
            // Sum labels end with the "@j" this function appended.
            let (base, j) = label.rsplit_once('@').expect("summand tag");
            format!("{base}@{}", j.parse::<u32>().expect("summand tag") + offset)
        } else {
            format!("{label}@{}", offset + 1)
        }
    };
    let mut labels = vec![vec!["1".to_string()]];
    for d in 1..m {
        let mut here = Vec::new();
        for i in 0..b1.rank(d) as u32 {
            here.push(tag(b1.label(BasisClass::new(d, i)), m1, 0));
        }
        for i in 0..b2.rank(d) as u32 {
            here.push(tag(b2.label(BasisClass::new(d, i)), m2, m1.summands));
        }
        labels.push(here);
    }
    labels.push(vec!["top".to_string()]);
    let basis = GradedBasis::new(labels)?;

    let mut cup = CupTable::new();
    let mut seen = BTreeSet::new();
    for (ring, shift) in [(r1, None), (r2, Some(b1))] {
        let b = ring.basis();
        let place = |c: BasisClass| match (c.degree, shift) {
            (0, _) => BasisClass::UNIT,
            (d, _) if d == m => BasisClass::new(m, 0),
            (_, None) => c,
            (d, Some(left)) => BasisClass::new(d, c.index + left.rank(d) as u32),
        };
        for ((gx, gy), terms) in ring.cup_table().iter() {
            let (x, y) = (place(b.address(gx)), place(b.address(gy)));
            if !seen.insert((x, y)) {
                continue;
            }
            let d = b.address(gx).degree + b.address(gy).degree;
            let moved: Vec<(u32, Scalar)> = terms
                .iter()
                .map(|(k, c)| (place(BasisClass::new(d, *k)).index, c.clone()))
                .collect();
            cup.set_terms(&basis, x, y, moved)?;
        }
    }
    let ring = CohomologyRing::new(coeff, basis, cup, Some(BasisClass::new(m, 0)))?;
    let orientability = if m1.is_orientable() && m2.is_orientable() {
        Orientability::Orientable
    } else {
        Orientability::NonOrientable
    };
    let threshold = m1
        .immersion_threshold
        .zip(m2.immersion_threshold)
        .map(|(a, b)| a.max(b).max(m + 1));
    let mut model = ManifoldModel::from_ring(
        ring,
        orientability,
        threshold,
        BuilderRecipe::connected_sum(m1.recipe.clone(), m2.recipe.clone()),
    );
    model.free_homology = m1.free_homology && m2.free_homology;
    model.summands = m1.summands + m2.summands;
    Ok(model)
}
