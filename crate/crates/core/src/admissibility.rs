//! Certificates that a manifold admits special generic maps into `R^n` for
//! every `n0 <= n < m`.
//!
//! Four rules build derivation trees:
//!
//! * **R1**: the canonical projection of `S^k` is special generic, so spheres
//!   of dimension at least 2 admit maps into every lower dimension.
//! * **R2**: a connected sum of products `S^{k_j} × S^{m−k_j}` with every
//!   `1 <= k_j < n` admits a map into `R^n`. With `k_j` canonicalized to
//!   `min(k_j, m − k_j)`, the threshold is `max_j k_j + 1`.
//! * **R3**: if `M1`, `M2` of dimension `m > 2` both admit maps from some
//!   `1 < n0 < m` on and both carry the obstruction one step below, so does
//!   `M1 # M2`.
//! * **R4**: if `M'` (free homology, threshold `n0' `, obstruction at
//!   `n0' − 1`) is multiplied by a fibre `F` of dimension `n0 − n0'` that has a
//!   nonzero product of classes of degree at most `m' − n0' + 1` summing to
//!   exactly `dim F`, has free homology, and immerses in `R^{n0}` with trivial
//!   normal bundle, then `M' × F` admits maps from `n0` on.
//!
//! The calculus is sound, not complete: no derivation means "unknown".

use alloc::vec::Vec;
use core::fmt;

use thiserror::Error;

use crate::builders::{build, connected_sum, kunneth_product, BuildError, BuilderRecipe, ManifoldModel};
use crate::obstruction::{cohp_check, exact_sum_witness, ObstructionError, ObstructionWitness};
use crate::scalar::CoefficientSpec;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Rule {
    R1Sphere,
    R2SphereProductSum,
    R3ConnectedSumClosure,
    R4ProductClosure,
}

impl Rule {
    pub fn name(self) -> &'static str {
        match self {
            Rule::R1Sphere => "R1_Sphere",
            Rule::R2SphereProductSum => "R2_SphereProductSum",
            Rule::R3ConnectedSumClosure => "R3_ConnectedSumClosure",
            Rule::R4ProductClosure => "R4_ProductClosure",
        }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Which manifold a side condition talks about.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Role {
    Conclusion,
    LeftSummand,
    RightSummand,
    Base,
    Fibre,
}

impl Role {
    pub fn name(self) -> &'static str {
        match self {
            Role::Conclusion => "conclusion",
            Role::LeftSummand => "left_summand",
            Role::RightSummand => "right_summand",
            Role::Base => "base",
            Role::Fibre => "fibre",
        }
    }
}

/// A checked fact a rule relied on.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SideCondition {
    SphereDimension { k: u32 },
    /// Factor dimensions of each summand and the canonical `min(a, b)` per summand.
    SphereProductTerms { terms: Vec<(u32, u32)>, canonical: Vec<u32> },
    /// `role` admits maps from `n0` on, `1 < n0 < dimension` where the rule needs it.
    Threshold { role: Role, n0: u32, dimension: u32 },
    /// `role` satisfies the obstruction at `n0`.
    CohP { role: Role, n0: u32, witness: ObstructionWitness },
    /// Nonzero product on the fibre: every degree at most `max_degree`, sum exactly `sum`.
    FibreProduct { max_degree: u32, sum: u32, witness: ObstructionWitness },
    FreeHomology { role: Role },
    /// Declared immersion of `role` into `R^n` with trivial normal bundle.
    Immersion { role: Role, n: u32, threshold: u32 },
}

/// A derivation of `Sp(>= n0)` for the manifold `recipe` describes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpDerivation {
    pub rule: Rule,
    pub recipe: BuilderRecipe,
    pub dimension: u32,
    pub n0: u32,
    pub premises: Vec<SpDerivation>,
    pub side_conditions: Vec<SideCondition>,
}

impl SpDerivation {
    pub fn node_count(&self) -> usize {
        1 + self.premises.iter().map(SpDerivation::node_count).sum::<usize>()
    }

    /// Whether the derivation certifies a special generic map into `R^n`.
    pub fn admits(&self, n: u32) -> bool {
        self.n0 <= n && n < self.dimension
    }

    /// Depth-first walk over this node and its premises.
    pub fn walk(&self) -> Vec<&SpDerivation> {
        let mut out = Vec::new();
        let mut stack = alloc::vec![self];
        while let Some(d) = stack.pop() {
            out.push(d);
            stack.extend(d.premises.iter().rev());
        }
        out
    }

    fn rank_key(&self) -> (u32, usize, Rule) {
        (self.n0, self.node_count(), self.rule)
    }
}

/// R4 hypotheses, for failure reports.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Hypothesis {
    /// `1 < n0' < m'` with `n0'` at or above the base derivation's threshold.
    BaseThreshold,
    BaseCohP,
    BaseFreeHomology,
    /// (a): nonzero fibre product with bounded degrees and exact sum.
    FibreProduct,
    /// (b)
    FibreFreeHomology,
    /// (c)
    FibreImmersion,
    /// The product itself must carry the obstruction at `n0 − 1`.
    ConclusionCohP,
}

impl fmt::Display for Hypothesis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Hypothesis::BaseThreshold => "base threshold",
            Hypothesis::BaseCohP => "base CohP",
            Hypothesis::BaseFreeHomology => "base free homology",
            Hypothesis::FibreProduct => "(a) fibre product",
            Hypothesis::FibreFreeHomology => "(b) fibre free homology",
            Hypothesis::FibreImmersion => "(c) fibre immersion",
            Hypothesis::ConclusionCohP => "conclusion CohP",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NotApplicable {
    #[error("{0}: recipe has the wrong shape")]
    Shape(Rule),
    #[error("{rule}: dimension {dimension} out of range")]
    Dimension { rule: Rule, dimension: u32 },
    #[error("{0}: coefficient ring differs from the models'")]
    Coefficients(Rule),
    #[error("{0}: premise does not describe the given model")]
    PremiseMismatch(Rule),
    #[error("{rule}: no threshold in range (would need {n0})")]
    Threshold { rule: Rule, n0: u32 },
    #[error("{rule}: {role:?} lacks CohP at {n0}")]
    CohP { rule: Rule, role: Role, n0: u32 },
    #[error("R4_ProductClosure: failed hypotheses {0:?}")]
    Hypotheses(Vec<Hypothesis>),
    #[error(transparent)]
    Build(#[from] BuildError),
    #[error(transparent)]
    Obstruction(#[from] ObstructionError),
}

/// R1: spheres of dimension `k >= 2` admit maps into every `R^n`, `1 <= n < k`.
pub fn rule_r1_sphere(model: &ManifoldModel) -> Result<SpDerivation, NotApplicable> {
    let BuilderRecipe::Sphere(k) = *model.recipe() else {
        return Err(NotApplicable::Shape(Rule::R1Sphere));
    };
    if k < 2 {
        return Err(NotApplicable::Dimension { rule: Rule::R1Sphere, dimension: k });
    }
    Ok(SpDerivation {
        rule: Rule::R1Sphere,
        recipe: model.recipe().clone(),
        dimension: k,
        n0: 1,
        premises: Vec::new(),
        side_conditions: alloc::vec![SideCondition::SphereDimension { k }],
    })
}

fn collect_summands<'a>(recipe: &'a BuilderRecipe, out: &mut Vec<&'a BuilderRecipe>) {
    match recipe {
        BuilderRecipe::ConnectedSum(a, b) => {
            collect_summands(a, out);
            collect_summands(b, out);
        }
        other => out.push(other),
    }
}

/// Factor dimensions of each `S^a × S^b` summand, or `None` if some summand
/// has another shape.
pub fn sphere_product_terms(recipe: &BuilderRecipe) -> Option<Vec<(u32, u32)>> {
    let mut summands = Vec::new();
    collect_summands(recipe, &mut summands);
    summands
        .into_iter()
        .map(|s| match s {
            BuilderRecipe::Product(a, b) => match (a.as_ref(), b.as_ref()) {
                (BuilderRecipe::Sphere(a), BuilderRecipe::Sphere(b)) => Some((*a, *b)),
                _ => None,
            },
            _ => None,
        })
        .collect()
}

/// R2: connected sums of two-sphere products; threshold `max_j min(k_j, m − k_j) + 1`.
pub fn rule_r2_sphere_product_sum(recipe: &BuilderRecipe) -> Result<SpDerivation, NotApplicable> {
    let rule = Rule::R2SphereProductSum;
    let terms = sphere_product_terms(recipe).ok_or(NotApplicable::Shape(rule))?;
    let m = terms[0].0 + terms[0].1;
    if terms.iter().any(|(a, b)| a + b != m) {
        return Err(NotApplicable::Shape(rule));
    }
    let canonical: Vec<u32> = terms.iter().map(|&(a, b)| a.min(b)).collect();
    let n0 = canonical.iter().max().copied().unwrap_or(0) + 1;
    if n0 >= m {
        return Err(NotApplicable::Threshold { rule, n0 });
    }
    Ok(SpDerivation {
        rule,
        recipe: recipe.clone(),
        dimension: m,
        n0,
        premises: Vec::new(),
        side_conditions: alloc::vec![SideCondition::SphereProductTerms { terms, canonical }],
    })
}

fn premise_matches(model: &ManifoldModel, derivation: &SpDerivation) -> bool {
    derivation.recipe == *model.recipe() && derivation.dimension == model.dimension()
}

/// R3: closure under connected sum at the least common threshold.
pub fn rule_r3_connected_sum(
    left: (&ManifoldModel, &SpDerivation),
    right: (&ManifoldModel, &SpDerivation),
    coeff: CoefficientSpec,
) -> Result<SpDerivation, NotApplicable> {
    let rule = Rule::R3ConnectedSumClosure;
    let ((m1, d1), (m2, d2)) = (left, right);
    if m1.coeff() != coeff || m2.coeff() != coeff {
        return Err(NotApplicable::Coefficients(rule));
    }
    if !premise_matches(m1, d1) || !premise_matches(m2, d2) {
        return Err(NotApplicable::PremiseMismatch(rule));
    }
    let m = m1.dimension();
    if m2.dimension() != m || m <= 2 {
        return Err(NotApplicable::Dimension { rule, dimension: m2.dimension().max(m) });
    }
    // A larger common threshold only makes the obstruction harder to meet.
    let n0 = d1.n0.max(d2.n0).max(2);
    if n0 >= m {
        return Err(NotApplicable::Threshold { rule, n0 });
    }
    let mut side_conditions = alloc::vec![
        SideCondition::Threshold { role: Role::LeftSummand, n0, dimension: m },
        SideCondition::Threshold { role: Role::RightSummand, n0, dimension: m },
    ];
    for (model, role) in [(m1, Role::LeftSummand), (m2, Role::RightSummand)] {
        let witness = cohp_check(model, n0 - 1)?.ok_or(NotApplicable::CohP { rule, role, n0: n0 - 1 })?;
        side_conditions.push(SideCondition::CohP { role, n0: n0 - 1, witness });
    }
    Ok(SpDerivation {
        rule,
        recipe: BuilderRecipe::connected_sum(m1.recipe().clone(), m2.recipe().clone()),
        dimension: m,
        n0,
        premises: alloc::vec![d1.clone(), d2.clone()],
        side_conditions,
    })
}

/// Order of the factors in the product the R4 conclusion is about.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FactorOrder {
    BaseFirst,
    FibreFirst,
}

/// R4: `M' × F` (or `F × M'`) admits maps from `n0` on, where `n0' = n0 − dim F`.
pub fn rule_r4_product(
    base: (&ManifoldModel, &SpDerivation),
    fibre: &ManifoldModel,
    n0: u32,
    coeff: CoefficientSpec,
    order: FactorOrder,
) -> Result<SpDerivation, NotApplicable> {
    let rule = Rule::R4ProductClosure;
    let (mp, dp) = base;
    if mp.coeff() != coeff || fibre.coeff() != coeff {
        return Err(NotApplicable::Coefficients(rule));
    }
    if !premise_matches(mp, dp) {
        return Err(NotApplicable::PremiseMismatch(rule));
    }
    let m_base = mp.dimension();
    let f_dim = fibre.dimension();
    if m_base <= 2 {
        return Err(NotApplicable::Dimension { rule, dimension: m_base });
    }
    let Some(n0_base) = n0.checked_sub(f_dim) else {
        return Err(NotApplicable::Hypotheses(alloc::vec![Hypothesis::BaseThreshold]));
    };
    if n0_base <= 1 || n0_base >= m_base || n0_base < dp.n0 {
        return Err(NotApplicable::Hypotheses(alloc::vec![Hypothesis::BaseThreshold]));
    }

    let mut failed = Vec::new();
    let base_cohp = cohp_check(mp, n0_base - 1)?;
    if base_cohp.is_none() {
        failed.push(Hypothesis::BaseCohP);
    }
    if !mp.free_homology() {
        failed.push(Hypothesis::BaseFreeHomology);
    }
    let max_degree = m_base - n0_base + 1;
    let fibre_product = exact_sum_witness(fibre, max_degree, f_dim)?;
    if fibre_product.is_none() {
        failed.push(Hypothesis::FibreProduct);
    }
    if !fibre.free_homology() {
        failed.push(Hypothesis::FibreFreeHomology);
    }
    if !fibre.immerses_with_trivial_normal(n0) {
        failed.push(Hypothesis::FibreImmersion);
    }
    if !failed.is_empty() {
        return Err(NotApplicable::Hypotheses(failed));
    }

    let product = match order {
        FactorOrder::BaseFirst => kunneth_product(mp, fibre)?,
        FactorOrder::FibreFirst => kunneth_product(fibre, mp)?,
    };
    let conclusion = cohp_check(&product, n0 - 1)?
        .ok_or_else(|| NotApplicable::Hypotheses(alloc::vec![Hypothesis::ConclusionCohP]))?;

    let threshold = fibre.immersion_threshold().expect("checked above");
    Ok(SpDerivation {
        rule,
        recipe: product.recipe().clone(),
        dimension: product.dimension(),
        n0,
        premises: alloc::vec![dp.clone()],
        side_conditions: alloc::vec![
            SideCondition::Threshold { role: Role::Base, n0: n0_base, dimension: m_base },
            SideCondition::CohP { role: Role::Base, n0: n0_base - 1, witness: base_cohp.expect("checked") },
            SideCondition::FreeHomology { role: Role::Base },
            SideCondition::FibreProduct {
                max_degree,
                sum: f_dim,
                witness: fibre_product.expect("checked"),
            },
            SideCondition::FreeHomology { role: Role::Fibre },
            SideCondition::Immersion { role: Role::Fibre, n: n0, threshold },
            SideCondition::CohP { role: Role::Conclusion, n0: n0 - 1, witness: conclusion },
        ],
    })
}

/// R4 at the least workable threshold for a fixed base and fibre.
fn best_r4(
    base: (&ManifoldModel, &SpDerivation),
    fibre: &ManifoldModel,
    coeff: CoefficientSpec,
    order: FactorOrder,
) -> Option<SpDerivation> {
    let (mp, dp) = base;
    let lowest = dp.n0.max(2);
    (lowest..mp.dimension())
        .find_map(|n0_base| rule_r4_product(base, fibre, n0_base + fibre.dimension(), coeff, order).ok())
}

fn better(current: Option<SpDerivation>, candidate: Option<SpDerivation>) -> Option<SpDerivation> {
    match (current, candidate) {
        (Some(a), Some(b)) => Some(if b.rank_key() < a.rank_key() { b } else { a }),
        (a, b) => a.or(b),
    }
}

fn derive_node(
    recipe: &BuilderRecipe,
    coeff: CoefficientSpec,
) -> Result<(ManifoldModel, Option<SpDerivation>), BuildError> {
    match recipe {
        BuilderRecipe::Sphere(_) => {
            let model = build(recipe, coeff)?;
            let derivation = rule_r1_sphere(&model).ok();
            Ok((model, derivation))
        }
        BuilderRecipe::Torus(_) | BuilderRecipe::RealProjective(_) | BuilderRecipe::ComplexProjective(_) => {
            Ok((build(recipe, coeff)?, None))
        }
        BuilderRecipe::Product(a, b) => {
            let (ma, da) = derive_node(a, coeff)?;
            let (mb, db) = derive_node(b, coeff)?;
            let model = kunneth_product(&ma, &mb)?;
            let mut best = rule_r2_sphere_product_sum(recipe).ok();
            if let Some(da) = &da {
                best = better(best, best_r4((&ma, da), &mb, coeff, FactorOrder::BaseFirst));
            }
            if let Some(db) = &db {
                best = better(best, best_r4((&mb, db), &ma, coeff, FactorOrder::FibreFirst));
            }
            Ok((model, best))
        }
        BuilderRecipe::ConnectedSum(a, b) => {
            let (ma, da) = derive_node(a, coeff)?;
            let (mb, db) = derive_node(b, coeff)?;
            let model = connected_sum(&ma, &mb)?;
            let mut best = rule_r2_sphere_product_sum(recipe).ok();
            if let (Some(da), Some(db)) = (&da, &db) {
                best = better(best, rule_r3_connected_sum((&ma, da), (&mb, db), coeff).ok());
            }
            Ok((model, best))
        }
    }
}

/// Proof search over the recipe tree: R1 at spheres, R2 wherever the subtree
/// is a sum of sphere products, R3 at sums and R4 at products (each factor in
/// turn as the fibre). Returns the derivation with the least threshold, then
/// fewest nodes, then lowest rule.
pub fn derive_sp(recipe: &BuilderRecipe, coeff: CoefficientSpec) -> Result<Option<SpDerivation>, BuildError> {
    derive_node(recipe, coeff).map(|(_, d)| d)
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReplayError {
    #[error("{rule} at {recipe}: {what}")]
    Invalid { rule: Rule, recipe: alloc::string::String, what: &'static str },
    #[error(transparent)]
    Build(#[from] BuildError),
}

/// Re-verifies a derivation from scratch: rebuilds every model from its recipe,
/// re-runs each rule's numeric checks and replays every recorded witness.
pub fn verify_derivation(d: &SpDerivation, coeff: CoefficientSpec) -> Result<(), ReplayError> {
    let fail = |what: &'static str| ReplayError::Invalid {
        rule: d.rule,
        recipe: alloc::string::ToString::to_string(&d.recipe),
        what,
    };
    let ensure = |ok: bool, what: &'static str| if ok { Ok(()) } else { Err(fail(what)) };
    let model = build(&d.recipe, coeff)?;
    ensure(model.dimension() == d.dimension, "dimension")?;
    ensure(1 <= d.n0 && d.n0 < d.dimension, "threshold range")?;
    for p in &d.premises {
        verify_derivation(p, coeff)?;
    }
    let cohp = |role: Role| {
        d.side_conditions.iter().find_map(|s| match s {
            SideCondition::CohP { role: r, n0, witness } if *r == role => Some((*n0, witness)),
            _ => None,
        })
    };
    match d.rule {
        Rule::R1Sphere => {
            ensure(matches!(d.recipe, BuilderRecipe::Sphere(k) if k >= 2), "sphere recipe")?;
            ensure(d.n0 == 1 && d.premises.is_empty(), "sphere threshold")
        }
        Rule::R2SphereProductSum => {
            let again = rule_r2_sphere_product_sum(&d.recipe).map_err(|_| fail("sphere products"))?;
            ensure(again.n0 == d.n0 && again.side_conditions == d.side_conditions, "sphere products")
        }
        Rule::R3ConnectedSumClosure => {
            let BuilderRecipe::ConnectedSum(a, b) = &d.recipe else {
                return Err(fail("connected sum recipe"));
            };
            ensure(d.premises.len() == 2, "two premises")?;
            ensure(d.premises[0].recipe == **a && d.premises[1].recipe == **b, "premise recipes")?;
            ensure(d.dimension > 2 && d.n0 > 1, "dimension and threshold")?;
            ensure(d.premises.iter().all(|p| p.n0 <= d.n0), "premise thresholds")?;
            for (summand, role) in [(a, Role::LeftSummand), (b, Role::RightSummand)] {
                let summand = build(summand, coeff)?;
                let (n0, w) = cohp(role).ok_or_else(|| fail("summand CohP missing"))?;
                ensure(n0 == d.n0 - 1 && w.target_n0 == n0 && w.replay(&summand), "summand CohP")?;
            }
            Ok(())
        }
        Rule::R4ProductClosure => {
            let BuilderRecipe::Product(a, b) = &d.recipe else {
                return Err(fail("product recipe"));
            };
            ensure(d.premises.len() == 1, "one premise")?;
            let premise = &d.premises[0];
            let (base_recipe, fibre_recipe) = if premise.recipe == **a {
                (a, b)
            } else if premise.recipe == **b {
                (b, a)
            } else {
                return Err(fail("premise is not a factor"));
            };
            let base = build(base_recipe, coeff)?;
            let fibre = build(fibre_recipe, coeff)?;
            let m_base = base.dimension();
            let n0_base = d.n0.checked_sub(fibre.dimension()).ok_or_else(|| fail("fibre dimension"))?;
            ensure(m_base > 2 && 1 < n0_base && n0_base < m_base, "base threshold range")?;
            ensure(premise.n0 <= n0_base, "base threshold")?;
            ensure(base.free_homology() && fibre.free_homology(), "free homology")?;
            let (n0, w) = cohp(Role::Base).ok_or_else(|| fail("base CohP missing"))?;
            ensure(n0 == n0_base - 1 && w.target_n0 == n0 && w.replay(&base), "base CohP")?;
            let (max_degree, sum, w) = d
                .side_conditions
                .iter()
                .find_map(|s| match s {
                    SideCondition::FibreProduct { max_degree, sum, witness } => Some((*max_degree, *sum, witness)),
                    _ => None,
                })
                .ok_or_else(|| fail("fibre product missing"))?;
            ensure(max_degree == m_base - n0_base + 1 && sum == fibre.dimension(), "fibre product bounds")?;
            ensure(
                w.total_degree == sum && w.degrees().iter().all(|&g| g >= 1 && g <= max_degree) && w.replay_product(&fibre),
                "fibre product",
            )?;
            ensure(fibre.immerses_with_trivial_normal(d.n0), "fibre immersion")?;
            let (n0, w) = cohp(Role::Conclusion).ok_or_else(|| fail("conclusion CohP missing"))?;
            ensure(n0 == d.n0 - 1 && w.target_n0 == n0 && w.replay(&model), "conclusion CohP")
        }
    }
}

/// Thresholds that the per-summand minimum would suggest but the sum of
/// sphere products cannot support: `(min_j k_j + 1, max_j k_j + 1)` for
/// every R2 node where they differ.
pub fn r2_threshold_gaps(d: &SpDerivation) -> Vec<(u32, u32)> {
    d.walk()
        .into_iter()
        .filter(|n| n.rule == Rule::R2SphereProductSum)
        .filter_map(|n| {
            n.side_conditions.iter().find_map(|s| match s {
                SideCondition::SphereProductTerms { canonical, .. } => {
                    let lo = canonical.iter().min()? + 1;
                    let hi = canonical.iter().max()? + 1;
                    (lo != hi).then_some((lo, hi))
                }
                _ => None,
            })
        })
        .collect()
}
