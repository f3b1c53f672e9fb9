//! Finitely generated graded-commutative rings given by a basis in each degree
//! and cup-product structure constants on basis pairs.
//!
//! Products are expanded by bilinearity from the stored basis-pair table, so
//! bilinearity holds by construction. The remaining ring axioms (graded
//! commutativity, associativity, the unit law and Poincaré duality) are checked
//! by [`validate_ring`], never by the constructors, so deliberately broken
//! tables can be built and inspected.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::hash::{Hash, Hasher};
use core::ops::Range;

use thiserror::Error;

use crate::linalg;
use crate::scalar::{CoefficientSpec, Scalar};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RingError {
    #[error("degree mismatch: {left} vs {right}")]
    DegreeMismatch { left: u32, right: u32 },
    #[error("elements belong to different rings")]
    RingMismatch,
    #[error("cup product of an empty sequence")]
    EmptySequence,
    #[error("invalid basis: {0}")]
    InvalidBasis(String),
    #[error("no basis class ({degree}, {index})")]
    NoSuchClass { degree: u32, index: u32 },
    #[error("expected {expected} coefficients in degree {degree}, got {got}")]
    WrongLength { degree: u32, expected: usize, got: usize },
    #[error("scalar does not belong to the coefficient ring {0}")]
    ForeignScalar(CoefficientSpec),
    #[error("product of degree {degree} exceeds the top degree {top}")]
    AboveTopDegree { degree: u32, top: u32 },
    #[error("fundamental class must be the single class in the top degree")]
    BadFundamentalClass,
}

/// Address of a basis class: its degree and its index within that degree.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BasisClass {
    pub degree: u32,
    pub index: u32,
}

impl BasisClass {
    pub const UNIT: BasisClass = BasisClass { degree: 0, index: 0 };

    pub fn new(degree: u32, index: u32) -> Self {
        BasisClass { degree, index }
    }
}

impl fmt::Display for BasisClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.degree, self.index)
    }
}

/// Graded basis of a connected ring: one unit class in degree 0 and finitely
/// many labelled classes in degrees `1..=top_degree`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedBasis {
    top_degree: u32,
    offsets: Vec<usize>,
    labels: Vec<String>,
}

impl GradedBasis {
    /// `labels[d]` names the classes of degree `d`; its length is the rank.
    pub fn new(labels: Vec<Vec<String>>) -> Result<Self, RingError> {
        if labels.is_empty() {
            return Err(RingError::InvalidBasis("no degrees given".into()));
        }
        if labels[0].len() != 1 {
            return Err(RingError::InvalidBasis("degree 0 must have rank 1".into()));
        }
        let top_degree = (labels.len() - 1) as u32;
        let mut offsets = Vec::with_capacity(labels.len() + 1);
        let mut flat = Vec::new();
        offsets.push(0);
        for degree in labels {
            flat.extend(degree);
            offsets.push(flat.len());
        }
        Ok(GradedBasis { top_degree, offsets, labels: flat })
    }

    pub fn top_degree(&self) -> u32 {
        self.top_degree
    }

    pub fn rank(&self, degree: u32) -> usize {
        if degree > self.top_degree {
            0
        } else {
            let d = degree as usize;
            self.offsets[d + 1] - self.offsets[d]
        }
    }

    pub fn ranks(&self) -> Vec<usize> {
        (0..=self.top_degree).map(|d| self.rank(d)).collect()
    }

    pub fn total_rank(&self) -> usize {
        self.labels.len()
    }

    pub fn contains(&self, class: BasisClass) -> bool {
        (class.index as usize) < self.rank(class.degree)
    }

    pub fn label(&self, class: BasisClass) -> &str {
        &self.labels[self.global(class)]
    }

    /// Every class in ascending (degree, index) order.
    pub fn classes(&self) -> impl Iterator<Item = BasisClass> + '_ {
        (0..=self.top_degree)
            .flat_map(move |d| (0..self.rank(d) as u32).map(move |i| BasisClass::new(d, i)))
    }

    pub(crate) fn global(&self, class: BasisClass) -> usize {
        self.offsets[class.degree as usize] + class.index as usize
    }

    pub(crate) fn address(&self, global: usize) -> BasisClass {
        let degree = self.offsets.partition_point(|&o| o <= global) - 1;
        BasisClass::new(degree as u32, (global - self.offsets[degree]) as u32)
    }

    pub(crate) fn degree_range(&self, degree: u32) -> Range<usize> {
        if degree > self.top_degree {
            let end = self.labels.len();
            end..end
        } else {
            self.offsets[degree as usize]..self.offsets[degree as usize + 1]
        }
    }
}

/// Sparse product of two basis classes: `(index in result degree, coefficient)`,
/// sorted, with no zero coefficients.
pub(crate) type Terms = Vec<(u32, Scalar)>;

/// Structure constants on basis pairs. Missing entries are zero, and so is
/// every product whose degree exceeds the top degree.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CupTable {
    entries: BTreeMap<(usize, usize), Terms>,
}

impl CupTable {
    pub fn new() -> Self {
        Self::default()
    }

    /// Sets `x ∪ y` to the element with the given coefficients in degree
    /// `deg x + deg y`. All-zero coefficients clear the entry.
    pub fn set(
        &mut self,
        basis: &GradedBasis,
        x: BasisClass,
        y: BasisClass,
        coefficients: Vec<Scalar>,
    ) -> Result<(), RingError> {
        let terms = coefficients
            .into_iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| (i as u32, c))
            .collect();
        self.set_terms(basis, x, y, terms)
    }

    pub(crate) fn set_terms(
        &mut self,
        basis: &GradedBasis,
        x: BasisClass,
        y: BasisClass,
        mut terms: Terms,
    ) -> Result<(), RingError> {
        for class in [x, y] {
            if !basis.contains(class) {
                return Err(RingError::NoSuchClass { degree: class.degree, index: class.index });
            }
        }
        let degree = x.degree + y.degree;
        terms.retain(|(_, c)| !c.is_zero());
        terms.sort_by_key(|(i, _)| *i);
        let key = (basis.global(x), basis.global(y));
        if terms.is_empty() {
            self.entries.remove(&key);
            return Ok(());
        }
        if degree > basis.top_degree() {
            return Err(RingError::AboveTopDegree { degree, top: basis.top_degree() });
        }
        let rank = basis.rank(degree);
        if let Some((i, _)) = terms.iter().find(|(i, _)| *i as usize >= rank) {
            return Err(RingError::NoSuchClass { degree, index: *i });
        }
        self.entries.insert(key, terms);
        Ok(())
    }

    pub(crate) fn get(&self, x: usize, y: usize) -> Option<&Terms> {
        self.entries.get(&(x, y))
    }

    /// Nonzero products `x ∪ y` with `y` in the given global index range.
    pub(crate) fn row(&self, x: usize, ys: Range<usize>) -> impl Iterator<Item = (usize, &Terms)> {
        self.entries.range((x, ys.start)..(x, ys.end)).map(|(&(_, y), t)| (y, t))
    }

    pub(crate) fn iter(&self) -> impl Iterator<Item = ((usize, usize), &Terms)> {
        self.entries.iter().map(|(&k, t)| (k, t))
    }

    pub fn nonzero_entries(&self) -> usize {
        self.entries.len()
    }
}

/// Identity of a ring, derived from its coefficients, ranks and structure
/// constants. Labels do not participate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RingId(u64);

struct Fnv(u64);

impl Hasher for Fnv {
    fn finish(&self) -> u64 {
        self.0
    }

    fn write(&mut self, bytes: &[u8]) {
        for &b in bytes {
            self.0 ^= b as u64;
            self.0 = self.0.wrapping_mul(0x0100_0000_01b3);
        }
    }
}

/// An element of a single degree, expressed in the basis of that degree.
/// Degrees above the top degree hold the canonical zero with no coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RingElement {
    ring: RingId,
    degree: u32,
    coefficients: Vec<Scalar>,
}

impl RingElement {
    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn coefficients(&self) -> &[Scalar] {
        &self.coefficients
    }

    pub fn is_zero(&self) -> bool {
        self.coefficients.iter().all(Scalar::is_zero)
    }

    pub fn ring_id(&self) -> RingId {
        self.ring
    }

    fn nonzero(&self) -> impl Iterator<Item = (usize, &Scalar)> {
        self.coefficients.iter().enumerate().filter(|(_, c)| !c.is_zero())
    }
}

/// A cohomology ring `H*(M; A)`.
#[derive(Clone, Debug)]
pub struct CohomologyRing {
    id: RingId,
    coeff: CoefficientSpec,
    basis: GradedBasis,
    cup: CupTable,
    fundamental_class: Option<BasisClass>,
}

impl PartialEq for CohomologyRing {
    fn eq(&self, other: &Self) -> bool {
        self.coeff == other.coeff
            && self.basis.ranks() == other.basis.ranks()
            && self.cup == other.cup
            && self.fundamental_class == other.fundamental_class
    }
}

impl CohomologyRing {
    pub fn new(
        coeff: CoefficientSpec,
        basis: GradedBasis,
        cup: CupTable,
        fundamental_class: Option<BasisClass>,
    ) -> Result<Self, RingError> {
        if let Some(f) = fundamental_class {
            if f.degree != basis.top_degree() || basis.rank(f.degree) != 1 || f.index != 0 {
                return Err(RingError::BadFundamentalClass);
            }
        }
        if cup.iter().any(|(_, terms)| terms.iter().any(|(_, s)| !coeff.contains(s))) {
            return Err(RingError::ForeignScalar(coeff));
        }
        let mut hasher = Fnv(0xcbf2_9ce4_8422_2325);
        coeff.hash(&mut hasher);
        basis.ranks().hash(&mut hasher);
        fundamental_class.hash(&mut hasher);
        for (key, terms) in cup.iter() {
            key.hash(&mut hasher);
            terms.hash(&mut hasher);
        }
        Ok(CohomologyRing { id: RingId(hasher.finish()), coeff, basis, cup, fundamental_class })
    }

    /// A copy with one structure constant replaced.
    pub fn with_cup_entry(
        &self,
        x: BasisClass,
        y: BasisClass,
        coefficients: Vec<Scalar>,
    ) -> Result<Self, RingError> {
        let mut cup = self.cup.clone();
        cup.set(&self.basis, x, y, coefficients)?;
        CohomologyRing::new(self.coeff, self.basis.clone(), cup, self.fundamental_class)
    }

    pub fn id(&self) -> RingId {
        self.id
    }

    pub fn coeff(&self) -> CoefficientSpec {
        self.coeff
    }

    pub fn basis(&self) -> &GradedBasis {
        &self.basis
    }

    pub fn cup_table(&self) -> &CupTable {
        &self.cup
    }

    pub fn top_degree(&self) -> u32 {
        self.basis.top_degree()
    }

    pub fn fundamental_class(&self) -> Option<BasisClass> {
        self.fundamental_class
    }

    pub fn zero(&self, degree: u32) -> RingElement {
        RingElement {
            ring: self.id,
            degree,
            coefficients: vec![self.coeff.zero(); self.basis.rank(degree)],
        }
    }

    pub fn unit(&self) -> RingElement {
        self.basis_element(BasisClass::UNIT)
    }

    /// The basis class as an element. Panics on an address outside the basis.
    pub fn basis_element(&self, class: BasisClass) -> RingElement {
        assert!(self.basis.contains(class), "no basis class {class}");
        let mut e = self.zero(class.degree);
        e.coefficients[class.index as usize] = self.coeff.one();
        e
    }

    pub fn element(&self, degree: u32, coefficients: Vec<Scalar>) -> Result<RingElement, RingError> {
        let expected = self.basis.rank(degree);
        if coefficients.len() != expected {
            return Err(RingError::WrongLength { degree, expected, got: coefficients.len() });
        }
        if !coefficients.iter().all(|s| self.coeff.contains(s)) {
            return Err(RingError::ForeignScalar(self.coeff));
        }
        Ok(RingElement { ring: self.id, degree, coefficients })
    }

    fn check(&self, x: &RingElement) -> Result<(), RingError> {
        if x.ring != self.id {
            return Err(RingError::RingMismatch);
        }
        Ok(())
    }

    pub fn add(&self, x: &RingElement, y: &RingElement) -> Result<RingElement, RingError> {
        self.check(x)?;
        self.check(y)?;
        if x.degree != y.degree {
            return Err(RingError::DegreeMismatch { left: x.degree, right: y.degree });
        }
        let coefficients = x.coefficients.iter().zip(&y.coefficients).map(|(a, b)| a + b).collect();
        Ok(RingElement { ring: self.id, degree: x.degree, coefficients })
    }

    pub fn scale(&self, s: &Scalar, x: &RingElement) -> Result<RingElement, RingError> {
        self.check(x)?;
        if !self.coeff.contains(s) {
            return Err(RingError::ForeignScalar(self.coeff));
        }
        let coefficients = x.coefficients.iter().map(|c| s * c).collect();
        Ok(RingElement { ring: self.id, degree: x.degree, coefficients })
    }

    pub fn cup(&self, x: &RingElement, y: &RingElement) -> Result<RingElement, RingError> {
        self.check(x)?;
        self.check(y)?;
        let degree = x.degree + y.degree;
        let mut out = self.zero(degree);
        if degree > self.top_degree() {
            return Ok(out);
        }
        let ys = self.basis.degree_range(y.degree);
        for (i, a) in x.nonzero() {
            let gx = self.basis.global(BasisClass::new(x.degree, i as u32));
            for (gy, terms) in self.cup.row(gx, ys.clone()) {
                let b = &y.coefficients[gy - ys.start];
                if b.is_zero() {
                    continue;
                }
                let ab = a * b;
                for (k, c) in terms {
                    let slot = &mut out.coefficients[*k as usize];
                    *slot = &*slot + &(&ab * c);
                }
            }
        }
        Ok(out)
    }

    /// Left-to-right iterated cup product.
    pub fn product_of_sequence(&self, classes: &[RingElement]) -> Result<RingElement, RingError> {
        let (first, rest) = classes.split_first().ok_or(RingError::EmptySequence)?;
        self.check(first)?;
        rest.iter().try_fold(first.clone(), |acc, x| self.cup(&acc, x))
    }

    /// Product of basis classes taken directly from the table.
    pub fn cup_basis(&self, x: BasisClass, y: BasisClass) -> RingElement {
        let mut out = self.zero(x.degree + y.degree);
        if let Some(terms) = self.cup.get(self.basis.global(x), self.basis.global(y)) {
            for (k, c) in terms {
                out.coefficients[*k as usize] = c.clone();
            }
        }
        out
    }

    /// Coefficient of the fundamental class in `x ∪ y`, for `deg x + deg y = m`.
    fn pairing(&self, x: usize, y: usize) -> Scalar {
        self.cup
            .get(x, y)
            .and_then(|t| t.first())
            .map_or_else(|| self.coeff.zero(), |(_, c)| c.clone())
    }
}

/// One violated ring axiom.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    /// `y ∪ x ≠ (−1)^{|x||y|} x ∪ y`.
    GradedCommutativity { x: BasisClass, y: BasisClass },
    /// `(x ∪ y) ∪ z ≠ x ∪ (y ∪ z)`.
    Associativity { x: BasisClass, y: BasisClass, z: BasisClass },
    /// The unit fails to act as the identity on `x`.
    UnitLaw { x: BasisClass },
    /// `H^j` and `H^{m−j}` have different ranks.
    PairingNotSquare { degree: u32, rows: usize, cols: usize },
    /// The pairing `H^j × H^{m−j} → H^m` is degenerate (not unimodular over `Z`).
    PairingDegenerate { degree: u32 },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::GradedCommutativity { x, y } => {
                write!(f, "graded commutativity fails on {x} and {y}")
            }
            Violation::Associativity { x, y, z } => {
                write!(f, "associativity fails on {x}, {y}, {z}")
            }
            Violation::UnitLaw { x } => write!(f, "unit law fails on {x}"),
            Violation::PairingNotSquare { degree, rows, cols } => {
                write!(f, "pairing in degree {degree} is {rows}x{cols}")
            }
            Violation::PairingDegenerate { degree } => {
                write!(f, "pairing in degree {degree} is degenerate")
            }
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks every ring axiom the table does not enforce by construction.
pub fn validate_ring(ring: &CohomologyRing) -> ValidationReport {
    let mut violations = Vec::new();
    check_unit_law(ring, &mut violations);
    check_commutativity(ring, &mut violations);
    check_associativity(ring, &mut violations);
    check_duality(ring, &mut violations);
    ValidationReport { violations }
}

fn check_unit_law(ring: &CohomologyRing, out: &mut Vec<Violation>) {
    let unit = BasisClass::UNIT;
    for x in ring.basis.classes() {
        let expected = ring.basis_element(x);
        if ring.cup_basis(unit, x) != expected || ring.cup_basis(x, unit) != expected {
            out.push(Violation::UnitLaw { x });
        }
    }
}

fn check_commutativity(ring: &CohomologyRing, out: &mut Vec<Violation>) {
    let basis = &ring.basis;
    let mut bad = BTreeSet::new();
    for ((gx, gy), _) in ring.cup.iter() {
        let (x, y) = (basis.address(gx), basis.address(gy));
        let sign = ring.coeff.sign(x.degree as u64 * y.degree as u64);
        let forward = ring.cup_basis(x, y);
        let backward = ring.cup_basis(y, x);
        let signed: Vec<Scalar> = forward.coefficients.iter().map(|c| &sign * c).collect();
        if signed != backward.coefficients {
            bad.insert(if x <= y { (x, y) } else { (y, x) });
        }
    }
    out.extend(bad.into_iter().map(|(x, y)| Violation::GradedCommutativity { x, y }));
}

/// Only triples where at least one side can be nonzero are evaluated: `z` must
/// multiply nontrivially with `y` or with a term of `x ∪ y`.
fn check_associativity(ring: &CohomologyRing, out: &mut Vec<Violation>) {
    let basis = &ring.basis;
    let top = basis.top_degree();
    let n = basis.total_rank();
    let everything = 0..n;
    for gx in 0..n {
        let x = basis.address(gx);
        for gy in 0..n {
            let y = basis.address(gy);
            if x.degree + y.degree > top {
                break;
            }
            let xy_degree = x.degree + y.degree;
            let xy_range = basis.degree_range(xy_degree);
            let xy: Vec<(usize, Scalar)> = ring
                .cup
                .get(gx, gy)
                .map(|t| t.iter().map(|(k, c)| (xy_range.start + *k as usize, c.clone())).collect())
                .unwrap_or_default();
            let mut candidates = BTreeSet::new();
            candidates.extend(ring.cup.row(gy, everything.clone()).map(|(z, _)| z));
            for (w, _) in &xy {
                candidates.extend(ring.cup.row(*w, everything.clone()).map(|(z, _)| z));
            }
            for gz in candidates {
                let z = basis.address(gz);
                let degree = xy_degree + z.degree;
                if degree > top {
                    continue;
                }
                let mut lhs = ring.zero(degree).coefficients;
                for (w, a) in &xy {
                    if let Some(terms) = ring.cup.get(*w, gz) {
                        accumulate(&mut lhs, a, terms);
                    }
                }
                let mut rhs = ring.zero(degree).coefficients;
                if let Some(yz) = ring.cup.get(gy, gz) {
                    let yz_start = basis.degree_range(y.degree + z.degree).start;
                    for (k, a) in yz {
                        if let Some(terms) = ring.cup.get(gx, yz_start + *k as usize) {
                            accumulate(&mut rhs, a, terms);
                        }
                    }
                }
                if lhs != rhs {
                    out.push(Violation::Associativity { x, y, z });
                }
            }
        }
    }
}

fn accumulate(target: &mut [Scalar], scale: &Scalar, terms: &Terms) {
    for (k, c) in terms {
        let slot = &mut target[*k as usize];
        *slot = &*slot + &(scale * c);
    }
}

fn check_duality(ring: &CohomologyRing, out: &mut Vec<Violation>) {
    if ring.fundamental_class.is_none() {
        return;
    }
    let basis = &ring.basis;
    let m = basis.top_degree();
    for j in 0..=m {
        let rows = basis.degree_range(j);
        let cols = basis.degree_range(m - j);
        if rows.len() != cols.len() {
            out.push(Violation::PairingNotSquare { degree: j, rows: rows.len(), cols: cols.len() });
            continue;
        }
        if rows.is_empty() {
            continue;
        }
        let matrix: Vec<Vec<Scalar>> = rows
            .clone()
            .map(|x| cols.clone().map(|y| ring.pairing(x, y)).collect())
            .collect();
        let size = matrix.len();
        let nondegenerate = if ring.coeff.is_field() {
            linalg::rank(matrix) == size
        } else {
            let det = linalg::determinant(matrix);
            det.is_one() || (-&det).is_one()
        };
        if !nondegenerate {
            out.push(Violation::PairingDegenerate { degree: j });
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;

    /// The exterior algebra on two degree-1 generators, over `coeff`.
    fn torus2(coeff: CoefficientSpec) -> CohomologyRing {
        let labels = vec![
            vec!["1".to_string()],
            vec!["a".to_string(), "b".to_string()],
            vec!["ab".to_string()],
        ];
        let basis = GradedBasis::new(labels).unwrap();
        let mut cup = CupTable::new();
        let one = coeff.one();
        let (u, a, b, ab) = (
            BasisClass::UNIT,
            BasisClass::new(1, 0),
            BasisClass::new(1, 1),
            BasisClass::new(2, 0),
        );
        for x in [u, a, b, ab] {
            let mut c = vec![coeff.zero(); basis.rank(x.degree)];
            c[x.index as usize] = one.clone();
            cup.set(&basis, u, x, c.clone()).unwrap();
            cup.set(&basis, x, u, c).unwrap();
        }
        cup.set(&basis, a, b, vec![one.clone()]).unwrap();
        cup.set(&basis, b, a, vec![-&one]).unwrap();
        CohomologyRing::new(coeff, basis, cup, Some(ab)).unwrap()
    }

    #[test]
    fn additive_identity_and_linearity() {
        let r = torus2(CoefficientSpec::Integers);
        let z = CoefficientSpec::Integers;
        let a = r.basis_element(BasisClass::new(1, 0));
        assert_eq!(r.add(&a, &r.zero(1)).unwrap(), a);
        let two_a = r.scale(&z.from_i64(2), &a).unwrap();
        let three_a = r.scale(&z.from_i64(3), &a).unwrap();
        assert_eq!(r.add(&two_a, &three_a).unwrap(), r.scale(&z.from_i64(5), &a).unwrap());
        assert_eq!(
            r.add(&a, &r.unit()),
            Err(RingError::DegreeMismatch { left: 1, right: 0 })
        );
    }

    #[test]
    fn characteristic_two_cancels() {
        let r = torus2(CoefficientSpec::MOD2);
        let a = r.basis_element(BasisClass::new(1, 0));
        assert_eq!(r.add(&a, &a).unwrap(), r.zero(1));
    }

    #[test]
    fn cup_products_and_clamping() {
        let r = torus2(CoefficientSpec::Rationals);
        let a = r.basis_element(BasisClass::new(1, 0));
        let b = r.basis_element(BasisClass::new(1, 1));
        let top = r.basis_element(BasisClass::new(2, 0));
        assert_eq!(r.cup(&a, &b).unwrap(), top);
        assert_eq!(r.cup(&r.unit(), &a).unwrap(), a);
        assert!(r.cup(&a, &a).unwrap().is_zero());
        let over = r.cup(&top, &a).unwrap();
        assert_eq!(over.degree(), 3);
        assert!(over.is_zero());
        assert_eq!(r.product_of_sequence(&[a.clone()]).unwrap(), a);
        assert_eq!(r.product_of_sequence(&[]), Err(RingError::EmptySequence));
    }

    #[test]
    fn elements_from_other_rings_are_rejected() {
        let r = torus2(CoefficientSpec::Rationals);
        let s = torus2(CoefficientSpec::MOD2);
        let a = s.basis_element(BasisClass::new(1, 0));
        assert_eq!(r.cup(&a, &a), Err(RingError::RingMismatch));
        // Identical structure gives the same identity.
        assert_eq!(torus2(CoefficientSpec::Rationals).id(), r.id());
    }

    #[test]
    fn valid_table_passes() {
        for coeff in [CoefficientSpec::Integers, CoefficientSpec::Rationals, CoefficientSpec::MOD2] {
            assert!(validate_ring(&torus2(coeff)).is_valid());
        }
    }

    #[test]
    fn broken_commutativity_is_reported() {
        let r = torus2(CoefficientSpec::Rationals);
        let q = CoefficientSpec::Rationals;
        let bad = r
            .with_cup_entry(BasisClass::new(1, 1), BasisClass::new(1, 0), vec![q.one()])
            .unwrap();
        let report = validate_ring(&bad);
        assert!(report.violations.contains(&Violation::GradedCommutativity {
            x: BasisClass::new(1, 0),
            y: BasisClass::new(1, 1),
        }));
    }

    #[test]
    fn broken_unit_and_duality_are_reported() {
        let r = torus2(CoefficientSpec::Rationals);
        let q = CoefficientSpec::Rationals;
        let a = BasisClass::new(1, 0);
        let bad = r.with_cup_entry(BasisClass::UNIT, a, vec![q.zero(), q.one()]).unwrap();
        assert!(validate_ring(&bad).violations.contains(&Violation::UnitLaw { x: a }));

        let degenerate = r
            .with_cup_entry(a, BasisClass::new(1, 1), vec![q.zero()])
            .unwrap()
            .with_cup_entry(BasisClass::new(1, 1), a, vec![q.zero()])
            .unwrap();
        let report = validate_ring(&degenerate);
        assert!(report.violations.contains(&Violation::PairingDegenerate { degree: 1 }));
    }

    #[test]
    fn integer_pairing_must_be_unimodular() {
        let r = torus2(CoefficientSpec::Integers);
        let z = CoefficientSpec::Integers;
        let (a, b) = (BasisClass::new(1, 0), BasisClass::new(1, 1));
        let doubled = r
            .with_cup_entry(a, b, vec![z.from_i64(2)])
            .unwrap()
            .with_cup_entry(b, a, vec![z.from_i64(-2)])
            .unwrap();
        let report = validate_ring(&doubled);
        assert!(report.violations.contains(&Violation::PairingDegenerate { degree: 1 }));
        // The same table over the rationals would be fine.
    }

    #[test]
    fn entries_above_top_degree_are_refused() {
        let r = torus2(CoefficientSpec::Rationals);
        let top = BasisClass::new(2, 0);
        let err = r.with_cup_entry(top, BasisClass::new(1, 0), vec![]).map(|_| ());
        assert_eq!(err, Ok(()));
        let mut cup = r.cup_table().clone();
        let err = cup.set_terms(r.basis(), top, top, vec![(0, CoefficientSpec::Rationals.one())]);
        assert_eq!(err, Err(RingError::AboveTopDegree { degree: 4, top: 2 }));
    }

    #[test]
    fn basis_addresses_round_trip() {
        let r = torus2(CoefficientSpec::Rationals);
        let b = r.basis();
        for (g, class) in b.classes().enumerate() {
            assert_eq!(b.global(class), g);
            assert_eq!(b.address(g), class);
        }
        assert_eq!(b.label(BasisClass::new(1, 1)), "b");
        assert_eq!(b.rank(7), 0);
        assert!(GradedBasis::new(vec![vec![]]).is_err());
    }
}
