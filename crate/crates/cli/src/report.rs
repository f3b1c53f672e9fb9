//! Spectrum reports: orchestration, text rendering and canonical JSON.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde_json::{json, Map, Value};
use sgm_core::admissibility::{Role, SideCondition};
use sgm_core::spectrum::{compute_spectrum, SpectrumError};
use sgm_core::{
    build, BuildError, BuilderRecipe, CoefficientSpec, GradedBasis, ObstructionWitness, Prime, SpDerivation,
    SpectrumEntry, Status,
};
use thiserror::Error;

use crate::expr::{parse_expression, ParseError};

pub const TOOL: &str = "sgm";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Parses `Z`, `Q`, `Z2` or `Zp:<p>`.
pub fn parse_coefficients(text: &str) -> Result<CoefficientSpec, String> {
    match text {
        "Z" => Ok(CoefficientSpec::Integers),
        "Q" => Ok(CoefficientSpec::Rationals),
        "Z2" => Ok(CoefficientSpec::MOD2),
        _ => {
            let p = text
                .strip_prefix("Zp:")
                .ok_or_else(|| format!("unknown coefficients `{text}` (expected Z, Q, Z2 or Zp:<p>)"))?;
            let p: u64 = p.parse().map_err(|_| format!("`{p}` is not a natural number"))?;
            Prime::new(p).map(CoefficientSpec::PrimeField).map_err(|e| e.to_string())
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RunOptions {
    pub admissibility: bool,
    pub max_dim: u32,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions { admissibility: true, max_dim: 16 }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RunError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("dimension {dimension} exceeds --max-dim {max_dim}")]
    TooLarge { dimension: u32, max_dim: u32 },
    #[error("{0}")]
    Build(#[from] BuildError),
    #[error("{0}")]
    Spectrum(SpectrumError),
}

impl RunError {
    /// 1 for syntax errors, 2 for semantic ones, 3 for an internal inconsistency.
    pub fn exit_code(&self) -> i32 {
        match self {
            RunError::Parse(ParseError::Syntax { .. }) => 1,
            RunError::Spectrum(SpectrumError::InternalInconsistency { .. }) => 3,
            _ => 2,
        }
    }
}

impl From<SpectrumError> for RunError {
    fn from(e: SpectrumError) -> Self {
        match e {
            SpectrumError::Build(b) => RunError::Build(b),
            other => RunError::Spectrum(other),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpectrumReport {
    pub expression: String,
    pub recipe: BuilderRecipe,
    pub dimension: u32,
    pub coefficients: CoefficientSpec,
    pub n_max: u32,
    pub derivation: Option<SpDerivation>,
    pub entries: Vec<SpectrumEntry>,
    pub notes: Vec<String>,
    pub timing_ms: Option<u64>,
}

impl SpectrumReport {
    pub fn status(&self, n: u32) -> Option<&Status> {
        self.entries.iter().find(|e| e.n == n).map(|e| &e.status)
    }
}

/// Parses, builds, searches for obstructions and certificates, and checks
/// that the two never overlap. The expression is stored in canonical form.
pub fn run_spectrum(text: &str, coeff: CoefficientSpec, options: RunOptions) -> Result<SpectrumReport, RunError> {
    let expr = parse_expression(text)?;
    let dimension = expr.dimension();
    if dimension > options.max_dim {
        return Err(RunError::TooLarge { dimension, max_dim: options.max_dim });
    }
    let recipe = expr.to_recipe();
    let spectrum = compute_spectrum(&recipe, coeff, options.admissibility)?;
    Ok(SpectrumReport {
        expression: expr.to_string(),
        recipe,
        dimension,
        coefficients: coeff,
        n_max: spectrum.n_max,
        derivation: spectrum.derivation,
        entries: spectrum.entries,
        notes: spectrum.notes,
        timing_ms: None,
    })
}

/// Rebuilds bases on demand so witnesses can be printed with labels.
struct Labels {
    coeff: CoefficientSpec,
    bases: BTreeMap<String, GradedBasis>,
}

impl Labels {
    fn new(coeff: CoefficientSpec) -> Self {
        Labels { coeff, bases: BTreeMap::new() }
    }

    fn basis(&mut self, recipe: &BuilderRecipe) -> &GradedBasis {
        let coeff = self.coeff;
        self.bases.entry(recipe.to_string()).or_insert_with(|| {
            build(recipe, coeff).expect("recipes in a report build").ring().basis().clone()
        })
    }

    fn witness(&mut self, w: &ObstructionWitness, recipe: &BuilderRecipe) -> Value {
        let basis = self.basis(recipe);
        let classes: Vec<Value> = w
            .classes
            .iter()
            .map(|c| json!({"label": basis.label(*c), "degree": c.degree, "index": c.index}))
            .collect();
        let d = w.product.degree();
        let labels: Vec<&str> = (0..basis.rank(d) as u32)
            .map(|i| basis.label(sgm_core::BasisClass::new(d, i)))
            .collect();
        let coordinates: Vec<String> = w.product.coefficients().iter().map(|s| s.to_string()).collect();
        json!({
            "target_n0": w.target_n0,
            "total_degree": w.total_degree,
            "degrees": w.degrees(),
            "classes": classes,
            "product": {"degree": d, "labels": labels, "coordinates": coordinates},
        })
    }

    fn derivation(&mut self, d: &SpDerivation) -> Value {
        let role_recipe = |role: Role| -> BuilderRecipe {
            match (role, &d.recipe) {
                (Role::LeftSummand, BuilderRecipe::ConnectedSum(a, _)) => (**a).clone(),
                (Role::RightSummand, BuilderRecipe::ConnectedSum(_, b)) => (**b).clone(),
                (Role::Base, _) => d.premises[0].recipe.clone(),
                (Role::Fibre, BuilderRecipe::Product(a, b)) => {
                    if d.premises[0].recipe == **a { (**b).clone() } else { (**a).clone() }
                }
                _ => d.recipe.clone(),
            }
        };
        let side_conditions: Vec<Value> = d
            .side_conditions
            .iter()
            .map(|s| match s {
                SideCondition::SphereDimension { k } => json!({"kind": "sphere_dimension", "k": k}),
                SideCondition::SphereProductTerms { terms, canonical } => json!({
                    "kind": "sphere_product_terms",
                    "terms": terms.iter().map(|(a, b)| json!([a, b])).collect::<Vec<_>>(),
                    "canonical": canonical,
                }),
                SideCondition::Threshold { role, n0, dimension } => json!({
                    "kind": "threshold", "role": role.name(), "n0": n0, "dimension": dimension,
                }),
                SideCondition::CohP { role, n0, witness } => json!({
                    "kind": "cohp",
                    "role": role.name(),
                    "manifold": role_recipe(*role).to_string(),
                    "n0": n0,
                    "witness": self.witness(witness, &role_recipe(*role)),
                }),
                SideCondition::FibreProduct { max_degree, sum, witness } => json!({
                    "kind": "fibre_product",
                    "manifold": role_recipe(Role::Fibre).to_string(),
                    "max_degree": max_degree,
                    "sum": sum,
                    "witness": self.witness(witness, &role_recipe(Role::Fibre)),
                }),
                SideCondition::FreeHomology { role } => json!({
                    "kind": "free_homology", "role": role.name(), "manifold": role_recipe(*role).to_string(),
                }),
                SideCondition::Immersion { role, n, threshold } => json!({
                    "kind": "immersion",
                    "role": role.name(),
                    "manifold": role_recipe(*role).to_string(),
                    "n": n,
                    "threshold": threshold,
                }),
            })
            .collect();
        let premises: Vec<Value> = d.premises.iter().map(|p| self.derivation(p)).collect();
        json!({
            "rule": d.rule.name(),
            "recipe": d.recipe.to_string(),
            "dimension": d.dimension,
            "n0": d.n0,
            "premises": premises,
            "side_conditions": side_conditions,
        })
    }
}

pub fn report_json(report: &SpectrumReport) -> Value {
    let mut labels = Labels::new(report.coefficients);
    let entries: Vec<Value> = report
        .entries
        .iter()
        .map(|e| {
            let mut entry = Map::new();
            entry.insert("n".into(), json!(e.n));
            entry.insert("status".into(), json!(e.status.name()));
            match &e.status {
                Status::Obstructed(w) => {
                    entry.insert("witness".into(), labels.witness(w, &report.recipe));
                }
                Status::Admits(d) => {
                    entry.insert("derivation".into(), labels.derivation(d));
                }
                Status::Unknown => {}
            }
            Value::Object(entry)
        })
        .collect();
    let mut meta = Map::new();
    meta.insert("tool".into(), json!(TOOL));
    meta.insert("version".into(), json!(VERSION));
    if let Some(ms) = report.timing_ms {
        meta.insert("timing_ms".into(), json!(ms));
    }
    json!({
        "expression": report.expression,
        "dimension": report.dimension,
        "coefficients": report.coefficients.to_string(),
        "entries": entries,
        "notes": report.notes,
        "meta": meta,
    })
}

/// Compact JSON with sorted keys, newline-terminated.
pub fn emit_json(report: &SpectrumReport) -> Vec<u8> {
    let mut out = serde_json::to_vec(&report_json(report)).expect("values serialize");
    out.push(b'\n');
    out
}

fn witness_summary(w: &ObstructionWitness, basis: &GradedBasis) -> String {
    let labels: Vec<&str> = w.classes.iter().map(|c| basis.label(*c)).collect();
    format!("degrees {:?}: {}", w.degrees(), labels.join(" · "))
}

fn derivation_lines(d: &SpDerivation, depth: usize, out: &mut String) {
    let _ = writeln!(out, "{}{} ⊢ Sp(≥{}) for {}", "    ".repeat(depth + 2), d.rule, d.n0, d.recipe);
    for p in &d.premises {
        derivation_lines(p, depth + 1, out);
    }
}

/// One line per target dimension; `full` adds product coordinates and
/// derivation trees.
pub fn render_text(report: &SpectrumReport, full: bool) -> String {
    let mut labels = Labels::new(report.coefficients);
    let mut out = String::new();
    let _ = writeln!(
        out,
        "{}  (dimension {}, coefficients {})",
        report.expression, report.dimension, report.coefficients
    );
    let mut shown_tree = false;
    for e in &report.entries {
        match &e.status {
            Status::Obstructed(w) => {
                let basis = labels.basis(&report.recipe);
                let _ = writeln!(out, "  n = {:>2}  ✗ obstructed  {}", e.n, witness_summary(w, basis));
                if full {
                    let d = w.product.degree();
                    let terms: Vec<String> = w
                        .product
                        .coefficients()
                        .iter()
                        .enumerate()
                        .filter(|(_, c)| !c.is_zero())
                        .map(|(i, c)| format!("{c}·{}", basis.label(sgm_core::BasisClass::new(d, i as u32))))
                        .collect();
                    let _ = writeln!(out, "        product = {}", terms.join(" + "));
                }
            }
            Status::Admits(d) => {
                let _ = writeln!(out, "  n = {:>2}  ✓ admits      {} (n0 = {})", e.n, d.rule, d.n0);
                if full && !shown_tree {
                    derivation_lines(d, 0, &mut out);
                    shown_tree = true;
                }
            }
            Status::Unknown => {
                let _ = writeln!(out, "  n = {:>2}  ? unknown", e.n);
            }
        }
    }
    for note in &report.notes {
        let _ = writeln!(out, "note: {note}");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn coefficient_names() {
        assert_eq!(parse_coefficients("Z"), Ok(CoefficientSpec::Integers));
        assert_eq!(parse_coefficients("Z2"), Ok(CoefficientSpec::MOD2));
        assert_eq!(parse_coefficients("Zp:2"), Ok(CoefficientSpec::MOD2));
        assert_eq!(parse_coefficients("Zp:7").unwrap().to_string(), "Zp:7");
        assert!(parse_coefficients("Zp:8").is_err());
        assert!(parse_coefficients("R").is_err());
    }

    #[test]
    fn sphere_report_admits_everywhere() {
        let r = run_spectrum("S(3)", CoefficientSpec::Integers, RunOptions::default()).unwrap();
        let names: Vec<_> = r.entries.iter().map(|e| e.status.name()).collect();
        assert_eq!(names, ["admits", "admits"]);
    }

    #[test]
    fn exit_codes() {
        let q = CoefficientSpec::Rationals;
        let code = |t| run_spectrum(t, q, RunOptions::default()).unwrap_err().exit_code();
        assert_eq!(code("S(2"), 1);
        assert_eq!(code("S(1) # S(2)"), 2);
        assert_eq!(code("RP(3)"), 2);
        assert_eq!(code("S(17)"), 2);
    }

    #[test]
    fn json_is_sorted_and_terminated() {
        let r = run_spectrum("T(3)", CoefficientSpec::Rationals, RunOptions::default()).unwrap();
        let bytes = emit_json(&r);
        assert_eq!(bytes.last(), Some(&b'\n'));
        let text = String::from_utf8(bytes).unwrap();
        assert!(text.starts_with("{\"coefficients\":\"Q\",\"dimension\":3,\"entries\":"));
        assert!(!text.contains("timing_ms"));
    }

    #[test]
    fn text_has_one_line_per_dimension() {
        let r = run_spectrum("S(2) x S(2) x S(2)", CoefficientSpec::Rationals, RunOptions::default()).unwrap();
        let text = render_text(&r, false);
        assert_eq!(text.lines().filter(|l| l.trim_start().starts_with("n =")).count(), 5);
        assert!(text.contains("✓ admits      R4_ProductClosure (n0 = 5)"));
    }
}
