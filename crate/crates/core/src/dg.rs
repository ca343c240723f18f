//! DG rings over ℤ presented by a finite graded basis and structure
//! constants, their elements and homomorphisms.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::linalg::{self, IntCochainComplex, IntMatrix};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DgError {
    #[error("duplicate basis symbol {0:?}")]
    DuplicateSymbol(String),
    #[error("unknown basis symbol {0:?}")]
    UnknownSymbol(String),
    #[error("basis index {0} is foreign to this ring")]
    ForeignIndex(usize),
    #[error("structure constant has wrong degree: {0}")]
    Degree(String),
    #[error("homomorphism shape: {0}")]
    Shape(String),
}

/// `(-1)^n`.
pub(crate) fn sign(n: i64) -> i64 {
    if n.rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BasisSymbol {
    pub id: String,
    pub degree: i64,
}

/// A finite integer combination of basis symbols, keyed by basis index.
/// Zero coefficients are never stored.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Element {
    terms: BTreeMap<usize, BigInt>,
}

impl Element {
    pub fn zero() -> Self {
        Element::default()
    }

    pub fn basis(index: usize) -> Self {
        Element::term(index, BigInt::one())
    }

    pub fn term(index: usize, coef: BigInt) -> Self {
        let mut e = Element::zero();
        e.add_term(index, coef);
        e
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (usize, BigInt)>) -> Self {
        let mut e = Element::zero();
        for (i, c) in terms {
            e.add_term(i, c);
        }
        e
    }

    pub fn add_term(&mut self, index: usize, coef: BigInt) {
        if coef.is_zero() {
            return;
        }
        let entry = self.terms.entry(index).or_insert_with(BigInt::zero);
        *entry += coef;
        if entry.is_zero() {
            self.terms.remove(&index);
        }
    }

    pub fn add_scaled(&mut self, other: &Element, factor: &BigInt) {
        if factor.is_zero() {
            return;
        }
        for (&i, c) in &other.terms {
            self.add_term(i, c * factor);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, index: usize) -> BigInt {
        self.terms.get(&index).cloned().unwrap_or_default()
    }

    pub fn terms(&self) -> impl Iterator<Item = (usize, &BigInt)> {
        self.terms.iter().map(|(&i, c)| (i, c))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn scale(&self, factor: &BigInt) -> Element {
        let mut out = Element::zero();
        out.add_scaled(self, factor);
        out
    }

    pub fn map_indices(&self, f: impl Fn(usize) -> usize) -> Element {
        Element::from_terms(self.terms().map(|(i, c)| (f(i), c.clone())))
    }
}

impl std::ops::Add<&Element> for &Element {
    type Output = Element;
    fn add(self, rhs: &Element) -> Element {
        let mut out = self.clone();
        out.add_scaled(rhs, &BigInt::one());
        out
    }
}

impl std::ops::Sub<&Element> for &Element {
    type Output = Element;
    fn sub(self, rhs: &Element) -> Element {
        let mut out = self.clone();
        out.add_scaled(rhs, &-BigInt::one());
        out
    }
}

impl std::ops::Neg for &Element {
    type Output = Element;
    fn neg(self) -> Element {
        self.scale(&-BigInt::one())
    }
}

impl std::ops::AddAssign<&Element> for Element {
    fn add_assign(&mut self, rhs: &Element) {
        self.add_scaled(rhs, &BigInt::one());
    }
}

impl std::ops::SubAssign<&Element> for Element {
    fn sub_assign(&mut self, rhs: &Element) {
        self.add_scaled(rhs, &-BigInt::one());
    }
}

/// Collects symbols and structure constants by id; `build` puts the basis
/// in canonical order `(degree, id)`.
#[derive(Clone, Debug, Default)]
pub struct RingBuilder {
    symbols: Vec<BasisSymbol>,
    unit: Vec<(String, BigInt)>,
    diff: Vec<(String, String, BigInt)>,
    mul: Vec<(String, String, String, BigInt)>,
}

impl RingBuilder {
    pub fn new() -> Self {
        RingBuilder::default()
    }

    pub fn symbol(&mut self, id: impl Into<String>, degree: i64) -> &mut Self {
        self.symbols.push(BasisSymbol { id: id.into(), degree });
        self
    }

    pub fn unit(&mut self, id: impl Into<String>, coef: impl Into<BigInt>) -> &mut Self {
        self.unit.push((id.into(), coef.into()));
        self
    }

    /// `coef · to` is added to `d(from)`.
    pub fn diff(&mut self, from: impl Into<String>, to: impl Into<String>, coef: impl Into<BigInt>) -> &mut Self {
        self.diff.push((from.into(), to.into(), coef.into()));
        self
    }

    /// `coef · to` is added to `left · right`.
    pub fn mul(
        &mut self,
        left: impl Into<String>,
        right: impl Into<String>,
        to: impl Into<String>,
        coef: impl Into<BigInt>,
    ) -> &mut Self {
        self.mul.push((left.into(), right.into(), to.into(), coef.into()));
        self
    }

    pub fn build(&self) -> Result<BasisDGRing, DgError> {
        let mut basis = self.symbols.clone();
        basis.sort_by(|a, b| (a.degree, &a.id).cmp(&(b.degree, &b.id)));
        let mut index = HashMap::with_capacity(basis.len());
        for (k, s) in basis.iter().enumerate() {
            if index.insert(s.id.clone(), k).is_some() {
                return Err(DgError::DuplicateSymbol(s.id.clone()));
            }
        }
        let lookup = |id: &str| {
            index
                .get(id)
                .copied()
                .ok_or_else(|| DgError::UnknownSymbol(id.to_string()))
        };
        let mut unit = Element::zero();
        for (id, c) in &self.unit {
            let k = lookup(id)?;
            if basis[k].degree != 0 {
                return Err(DgError::Degree(format!("unit term {id} is not in degree 0")));
            }
            unit.add_term(k, c.clone());
        }
        let mut diff = vec![Element::zero(); basis.len()];
        for (from, to, c) in &self.diff {
            let (f, t) = (lookup(from)?, lookup(to)?);
            if basis[t].degree != basis[f].degree + 1 {
                return Err(DgError::Degree(format!("d({from}) ∋ {to}")));
            }
            diff[f].add_term(t, c.clone());
        }
        let mut mul: HashMap<(usize, usize), Element> = HashMap::new();
        for (l, r, to, c) in &self.mul {
            let (li, ri, ti) = (lookup(l)?, lookup(r)?, lookup(to)?);
            if basis[ti].degree != basis[li].degree + basis[ri].degree {
                return Err(DgError::Degree(format!("{l}·{r} ∋ {to}")));
            }
            mul.entry((li, ri)).or_default().add_term(ti, c.clone());
        }
        mul.retain(|_, e| !e.is_zero());
        Ok(BasisDGRing::assemble(basis, index, unit, diff, mul))
    }
}

/// A DG ring whose underlying graded group is free of finite rank.
#[derive(Clone)]
pub struct BasisDGRing {
    basis: Vec<BasisSymbol>,
    index: HashMap<String, usize>,
    by_degree: BTreeMap<i64, Vec<usize>>,
    position: Vec<usize>,
    unit: Element,
    diff: Vec<Element>,
    mul: HashMap<(usize, usize), Element>,
}

impl PartialEq for BasisDGRing {
    fn eq(&self, other: &Self) -> bool {
        self.basis == other.basis && self.unit == other.unit && self.diff == other.diff && self.mul == other.mul
    }
}

impl Eq for BasisDGRing {}

impl fmt::Debug for BasisDGRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("BasisDGRing")
            .field("dim", &self.basis.len())
            .field("ranks", &self.ranks())
            .finish()
    }
}

impl BasisDGRing {
    fn assemble(
        basis: Vec<BasisSymbol>,
        index: HashMap<String, usize>,
        unit: Element,
        diff: Vec<Element>,
        mul: HashMap<(usize, usize), Element>,
    ) -> Self {
        let mut by_degree: BTreeMap<i64, Vec<usize>> = BTreeMap::new();
        let mut position = vec![0; basis.len()];
        for (k, s) in basis.iter().enumerate() {
            let slot = by_degree.entry(s.degree).or_default();
            position[k] = slot.len();
            slot.push(k);
        }
        BasisDGRing {
            basis,
            index,
            by_degree,
            position,
            unit,
            diff,
            mul,
        }
    }

    /// The ring ℤ: one symbol `"1"` in degree 0.
    pub fn integers() -> Self {
        let mut b = RingBuilder::new();
        b.symbol("1", 0).unit("1", 1).mul("1", "1", "1", 1);
        b.build().expect("ℤ is well formed")
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[BasisSymbol] {
        &self.basis
    }

    pub fn symbol(&self, index: usize) -> &BasisSymbol {
        &self.basis[index]
    }

    pub fn index_of(&self, id: &str) -> Result<usize, DgError> {
        self.index
            .get(id)
            .copied()
            .ok_or_else(|| DgError::UnknownSymbol(id.to_string()))
    }

    pub fn degree_of(&self, index: usize) -> i64 {
        self.basis[index].degree
    }

    pub fn unit(&self) -> &Element {
        &self.unit
    }

    /// Builds an element from `(id, coefficient)` pairs.
    pub fn element<C: Into<BigInt> + Clone>(&self, terms: &[(&str, C)]) -> Result<Element, DgError> {
        let mut e = Element::zero();
        for (id, c) in terms {
            e.add_term(self.index_of(id)?, c.clone().into());
        }
        Ok(e)
    }

    pub fn validate(&self, e: &Element) -> Result<(), DgError> {
        match e.terms().find(|(i, _)| *i >= self.dim()) {
            Some((i, _)) => Err(DgError::ForeignIndex(i)),
            None => Ok(()),
        }
    }

    pub fn diff_of(&self, index: usize) -> &Element {
        &self.diff[index]
    }

    /// The structure constants of `basis[l] · basis[r]`, if nonzero.
    pub fn product_of(&self, l: usize, r: usize) -> Option<&Element> {
        self.mul.get(&(l, r))
    }

    pub fn nonzero_products(&self) -> impl Iterator<Item = ((usize, usize), &Element)> {
        self.mul.iter().map(|(&k, v)| (k, v))
    }

    pub fn d(&self, e: &Element) -> Element {
        let mut out = Element::zero();
        for (i, c) in e.terms() {
            out.add_scaled(&self.diff[i], c);
        }
        out
    }

    pub fn mul(&self, a: &Element, b: &Element) -> Element {
        let mut out = Element::zero();
        for (i, ci) in a.terms() {
            for (j, cj) in b.terms() {
                if let Some(p) = self.mul.get(&(i, j)) {
                    out.add_scaled(p, &(ci * cj));
                }
            }
        }
        out
    }

    pub fn add(&self, a: &Element, b: &Element) -> Element {
        a + b
    }

    /// `Some(k)` when every term has degree `k`; the zero element has every degree.
    pub fn homogeneous_degree(&self, e: &Element) -> Option<i64> {
        let mut degrees = e.terms().map(|(i, _)| self.degree_of(i));
        let first = degrees.next()?;
        degrees.all(|k| k == first).then_some(first)
    }

    pub fn is_homogeneous_of(&self, e: &Element, degree: i64) -> bool {
        e.terms().all(|(i, _)| self.degree_of(i) == degree)
    }

    pub fn component(&self, e: &Element, degree: i64) -> Element {
        Element::from_terms(
            e.terms()
                .filter(|(i, _)| self.degree_of(*i) == degree)
                .map(|(i, c)| (i, c.clone())),
        )
    }

    pub fn degrees(&self) -> impl Iterator<Item = i64> + '_ {
        self.by_degree.keys().copied()
    }

    /// Smallest and largest degree carrying a basis symbol.
    pub fn degree_range(&self) -> Option<(i64, i64)> {
        let lo = *self.by_degree.keys().next()?;
        let hi = *self.by_degree.keys().next_back()?;
        Some((lo, hi))
    }

    pub fn indices_in_degree(&self, degree: i64) -> &[usize] {
        self.by_degree.get(&degree).map_or(&[], Vec::as_slice)
    }

    pub fn rank_in(&self, degree: i64) -> usize {
        self.indices_in_degree(degree).len()
    }

    /// Ranks per degree over the full degree range.
    pub fn ranks(&self) -> Vec<(i64, usize)> {
        match self.degree_range() {
            Some((lo, hi)) => (lo..=hi).map(|k| (k, self.rank_in(k))).collect(),
            None => Vec::new(),
        }
    }

    /// Position of a symbol among the symbols of its degree.
    pub fn position_in_degree(&self, index: usize) -> usize {
        self.position[index]
    }

    /// Coordinates of the degree-`degree` component.
    pub fn to_vector(&self, e: &Element, degree: i64) -> Vec<BigInt> {
        let mut v = vec![BigInt::zero(); self.rank_in(degree)];
        for (i, c) in e.terms() {
            if self.degree_of(i) == degree {
                v[self.position[i]] = c.clone();
            }
        }
        v
    }

    pub fn from_vector(&self, degree: i64, v: &[BigInt]) -> Element {
        Element::from_terms(
            self.indices_in_degree(degree)
                .iter()
                .zip(v)
                .map(|(&i, c)| (i, c.clone())),
        )
    }

    /// Matrix of `d` from `degree` to `degree + 1` in canonical bases.
    pub fn differential_matrix(&self, degree: i64) -> IntMatrix {
        let src = self.indices_in_degree(degree);
        let mut m = IntMatrix::zeros(self.rank_in(degree + 1), src.len());
        for (col, &i) in src.iter().enumerate() {
            for (j, c) in self.diff[i].terms() {
                m.set(self.position[j], col, c.clone());
            }
        }
        m
    }

    pub fn underlying_complex(&self) -> IntCochainComplex {
        let Some((lo, hi)) = self.degree_range() else {
            return IntCochainComplex::new(0, vec![], vec![]).expect("empty complex");
        };
        let ranks = (lo..=hi).map(|k| self.rank_in(k)).collect();
        let diffs = (lo..hi).map(|k| self.differential_matrix(k)).collect();
        IntCochainComplex::new(lo, ranks, diffs).expect("differential matrices are consistent")
    }

    /// Renders an element as `2·a - b + c`.
    pub fn show(&self, e: &Element) -> String {
        if e.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (k, (i, c)) in e.terms().enumerate() {
            let id = self.basis.get(i).map_or("?", |s| s.id.as_str());
            let negative = c < &BigInt::zero();
            let abs = if negative { -c } else { c.clone() };
            match (k, negative) {
                (0, true) => out.push('-'),
                (0, false) => {}
                (_, true) => out.push_str(" - "),
                (_, false) => out.push_str(" + "),
            }
            if !abs.is_one() {
                out.push_str(&format!("{abs}·"));
            }
            out.push_str(id);
        }
        out
    }

    /// Relabels every symbol id through `f`, keeping structure constants.
    pub fn relabel(&self, f: impl Fn(&str) -> String) -> Result<BasisDGRing, DgError> {
        let mut b = RingBuilder::new();
        let ids: Vec<String> = self.basis.iter().map(|s| f(&s.id)).collect();
        for (s, id) in self.basis.iter().zip(&ids) {
            b.symbol(id.clone(), s.degree);
        }
        for (i, c) in self.unit.terms() {
            b.unit(ids[i].clone(), c.clone());
        }
        for (from, e) in self.diff.iter().enumerate() {
            for (to, c) in e.terms() {
                b.diff(ids[from].clone(), ids[to].clone(), c.clone());
            }
        }
        for (&(l, r), e) in &self.mul {
            for (to, c) in e.terms() {
                b.mul(ids[l].clone(), ids[r].clone(), ids[to].clone(), c.clone());
            }
        }
        b.build()
    }
}

/// One failed ring axiom, with the basis symbols witnessing it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AxiomViolation {
    UnitNotClosed,
    UnitNotHomogeneous,
    LeftUnit(String),
    RightUnit(String),
    DSquared(String),
    DegreeOfDifferential(String),
    Leibniz(String, String),
    Associativity(String, String, String),
}

impl fmt::Display for AxiomViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AxiomViolation::UnitNotClosed => write!(f, "d(1) ≠ 0"),
            AxiomViolation::UnitNotHomogeneous => write!(f, "unit is not in degree 0"),
            AxiomViolation::LeftUnit(x) => write!(f, "1·{x} ≠ {x}"),
            AxiomViolation::RightUnit(x) => write!(f, "{x}·1 ≠ {x}"),
            AxiomViolation::DSquared(x) => write!(f, "d(d({x})) ≠ 0"),
            AxiomViolation::DegreeOfDifferential(x) => write!(f, "d({x}) has the wrong degree"),
            AxiomViolation::Leibniz(x, y) => write!(f, "Leibniz rule fails on ({x}, {y})"),
            AxiomViolation::Associativity(x, y, z) => {
                write!(f, "associativity fails on ({x}, {y}, {z})")
            }
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct AxiomReport {
    pub violations: Vec<AxiomViolation>,
    pub pairs_checked: usize,
    pub triples_checked: usize,
}

impl AxiomReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Exhaustive check of unit, `d² = 0`, graded Leibniz on all basis pairs
/// and associativity on all basis triples.
pub fn check_axioms(ring: &BasisDGRing) -> AxiomReport {
    let mut report = AxiomReport::default();
    let n = ring.dim();
    let id = |i: usize| ring.basis[i].id.clone();
    let unit = ring.unit();
    if !ring.is_homogeneous_of(unit, 0) {
        report.violations.push(AxiomViolation::UnitNotHomogeneous);
    }
    if !ring.d(unit).is_zero() {
        report.violations.push(AxiomViolation::UnitNotClosed);
    }
    for i in 0..n {
        let x = Element::basis(i);
        if ring.mul(unit, &x) != x {
            report.violations.push(AxiomViolation::LeftUnit(id(i)));
        }
        if ring.mul(&x, unit) != x {
            report.violations.push(AxiomViolation::RightUnit(id(i)));
        }
        let dx = ring.d(&x);
        if !ring.is_homogeneous_of(&dx, ring.degree_of(i) + 1) {
            report.violations.push(AxiomViolation::DegreeOfDifferential(id(i)));
        }
        if !ring.d(&dx).is_zero() {
            report.violations.push(AxiomViolation::DSquared(id(i)));
        }
    }
    for i in 0..n {
        let x = Element::basis(i);
        let dx = ring.d(&x);
        let s = BigInt::from(sign(ring.degree_of(i)));
        for j in 0..n {
            let y = Element::basis(j);
            report.pairs_checked += 1;
            let lhs = ring.d(&ring.mul(&x, &y));
            let mut rhs = ring.mul(&dx, &y);
            rhs.add_scaled(&ring.mul(&x, &ring.d(&y)), &s);
            if lhs != rhs {
                report.violations.push(AxiomViolation::Leibniz(id(i), id(j)));
            }
        }
    }
    for i in 0..n {
        for j in 0..n {
            let xy = ring.product_of(i, j).cloned().unwrap_or_default();
            for k in 0..n {
                report.triples_checked += 1;
                let z = Element::basis(k);
                let left = ring.mul(&xy, &z);
                let yz = ring.product_of(j, k).cloned().unwrap_or_default();
                let right = ring.mul(&Element::basis(i), &yz);
                if left != right {
                    report
                        .violations
                        .push(AxiomViolation::Associativity(id(i), id(j), id(k)));
                }
            }
        }
    }
    report
}

/// Graded tensor product `R ⊗ S` with Koszul signs. Symbol ids are
/// `"{r}|{s}"`.
pub fn tensor(r: &BasisDGRing, s: &BasisDGRing) -> BasisDGRing {
    let id = |a: usize, b: usize| format!("{}|{}", r.basis[a].id, s.basis[b].id);
    let mut b = RingBuilder::new();
    for (a, ra) in r.basis.iter().enumerate() {
        for (c, sc) in s.basis.iter().enumerate() {
            b.symbol(id(a, c), ra.degree + sc.degree);
        }
    }
    for (a, ca) in r.unit.terms() {
        for (c, cc) in s.unit.terms() {
            b.unit(id(a, c), ca * cc);
        }
    }
    for a in 0..r.dim() {
        for c in 0..s.dim() {
            let from = id(a, c);
            for (a2, coef) in r.diff[a].terms() {
                b.diff(from.clone(), id(a2, c), coef.clone());
            }
            let sg = BigInt::from(sign(r.degree_of(a)));
            for (c2, coef) in s.diff[c].terms() {
                b.diff(from.clone(), id(a, c2), coef * &sg);
            }
        }
    }
    for (&(a, a2), ra) in &r.mul {
        for (&(c, c2), sc) in &s.mul {
            // (a⊗c)(a2⊗c2) = (-1)^{|c||a2|} a a2 ⊗ c c2
            let sg = BigInt::from(sign(s.degree_of(c) * r.degree_of(a2)));
            for (t, x) in ra.terms() {
                for (u, y) in sc.terms() {
                    b.mul(id(a, c), id(a2, c2), id(t, u), x * y * &sg);
                }
            }
        }
    }
    b.build().expect("tensor product of well-formed rings is well formed")
}

/// A degree-preserving additive map between basis-presented rings, stored
/// as the images of the source basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DGRingHom {
    source: Arc<BasisDGRing>,
    target: Arc<BasisDGRing>,
    images: Vec<Element>,
}

impl DGRingHom {
    pub fn new(source: Arc<BasisDGRing>, target: Arc<BasisDGRing>, images: Vec<Element>) -> Result<Self, DgError> {
        if images.len() != source.dim() {
            return Err(DgError::Shape(format!(
                "{} images for a source of rank {}",
                images.len(),
                source.dim()
            )));
        }
        for e in &images {
            target.validate(e)?;
        }
        Ok(DGRingHom { source, target, images })
    }

    pub fn identity(ring: Arc<BasisDGRing>) -> Self {
        let images = (0..ring.dim()).map(Element::basis).collect();
        DGRingHom {
            source: ring.clone(),
            target: ring,
            images,
        }
    }

    /// From a `target.dim() × source.dim()` matrix in canonical bases.
    pub fn from_matrix(source: Arc<BasisDGRing>, target: Arc<BasisDGRing>, m: &IntMatrix) -> Result<Self, DgError> {
        if m.rows() != target.dim() || m.cols() != source.dim() {
            return Err(DgError::Shape(format!(
                "{}x{} matrix for {} -> {}",
                m.rows(),
                m.cols(),
                source.dim(),
                target.dim()
            )));
        }
        let images = (0..m.cols())
            .map(|c| Element::from_terms((0..m.rows()).map(|r| (r, m.get(r, c).clone()))))
            .collect();
        DGRingHom::new(source, target, images)
    }

    pub fn source(&self) -> &Arc<BasisDGRing> {
        &self.source
    }

    pub fn target(&self) -> &Arc<BasisDGRing> {
        &self.target
    }

    pub fn image_of(&self, index: usize) -> &Element {
        &self.images[index]
    }

    pub fn apply(&self, e: &Element) -> Element {
        let mut out = Element::zero();
        for (i, c) in e.terms() {
            out.add_scaled(&self.images[i], c);
        }
        out
    }

    pub fn matrix(&self) -> IntMatrix {
        let mut m = IntMatrix::zeros(self.target.dim(), self.source.dim());
        for (c, e) in self.images.iter().enumerate() {
            for (r, x) in e.terms() {
                m.set(r, c, x.clone());
            }
        }
        m
    }

    /// The block from source degree `degree` to target degree `degree`.
    pub fn degree_block(&self, degree: i64) -> IntMatrix {
        let src = self.source.indices_in_degree(degree);
        let mut m = IntMatrix::zeros(self.target.rank_in(degree), src.len());
        for (col, &i) in src.iter().enumerate() {
            for (j, x) in self.images[i].terms() {
                if self.target.degree_of(j) == degree {
                    m.set(self.target.position_in_degree(j), col, x.clone());
                }
            }
        }
        m
    }

    /// `next ∘ self`.
    pub fn then(&self, next: &DGRingHom) -> Result<DGRingHom, DgError> {
        if *self.target != *next.source {
            return Err(DgError::Shape("composite of non-composable maps".into()));
        }
        let images = self.images.iter().map(|e| next.apply(e)).collect();
        Ok(DGRingHom {
            source: self.source.clone(),
            target: next.target.clone(),
            images,
        })
    }

    /// The inverse, when the matrix is square and unimodular.
    pub fn inverse(&self) -> Option<DGRingHom> {
        let inv = linalg::inverse(&self.matrix())?;
        DGRingHom::from_matrix(self.target.clone(), self.source.clone(), &inv).ok()
    }

    pub fn is_identity(&self) -> bool {
        *self.source == *self.target && self.images.iter().enumerate().all(|(i, e)| *e == Element::basis(i))
    }
}

/// `f ∘ g`.
pub fn compose_hom(f: &DGRingHom, g: &DGRingHom) -> Result<DGRingHom, DgError> {
    g.then(f)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum HomViolation {
    DegreeShift(String),
    Differential(String),
    Multiplicative(String, String),
    Unit,
}

impl fmt::Display for HomViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            HomViolation::DegreeShift(x) => write!(f, "image of {x} has the wrong degree"),
            HomViolation::Differential(x) => write!(f, "f(d({x})) ≠ d(f({x}))"),
            HomViolation::Multiplicative(x, y) => write!(f, "f({x}·{y}) ≠ f({x})·f({y})"),
            HomViolation::Unit => write!(f, "f(1) ≠ 1"),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct HomReport {
    pub violations: Vec<HomViolation>,
}

impl HomReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Exhaustive check that `f` is a unital DG ring homomorphism.
pub fn check_hom(f: &DGRingHom) -> HomReport {
    let (src, tgt) = (&*f.source, &*f.target);
    let mut violations = Vec::new();
    let id = |i: usize| src.basis[i].id.clone();
    for i in 0..src.dim() {
        if !tgt.is_homogeneous_of(&f.images[i], src.degree_of(i)) {
            violations.push(HomViolation::DegreeShift(id(i)));
        }
        if f.apply(src.diff_of(i)) != tgt.d(&f.images[i]) {
            violations.push(HomViolation::Differential(id(i)));
        }
    }
    if f.apply(src.unit()) != *tgt.unit() {
        violations.push(HomViolation::Unit);
    }
    for i in 0..src.dim() {
        for j in 0..src.dim() {
            let lhs = src.product_of(i, j).map(|p| f.apply(p)).unwrap_or_default();
            let rhs = tgt.mul(&f.images[i], &f.images[j]);
            if lhs != rhs {
                violations.push(HomViolation::Multiplicative(id(i), id(j)));
            }
        }
    }
    HomReport { violations }
}

/// `f ⊗ g : R ⊗ S -> R' ⊗ S'` between the tensor rings built by [`tensor`].
pub fn tensor_hom(
    f: &DGRingHom,
    g: &DGRingHom,
    source: Arc<BasisDGRing>,
    target: Arc<BasisDGRing>,
) -> Result<DGRingHom, DgError> {
    let (r, s) = (&*f.source, &*g.source);
    let (r2, s2) = (&*f.target, &*g.target);
    let mut images = vec![Element::zero(); source.dim()];
    for a in 0..r.dim() {
        for c in 0..s.dim() {
            let from = source.index_of(&format!("{}|{}", r.basis[a].id, s.basis[c].id))?;
            let mut img = Element::zero();
            for (a2, x) in f.images[a].terms() {
                for (c2, y) in g.images[c].terms() {
                    let to = target.index_of(&format!("{}|{}", r2.basis[a2].id, s2.basis[c2].id))?;
                    img.add_term(to, x * y);
                }
            }
            images[from] = img;
        }
    }
    DGRingHom::new(source, target, images)
}

pub fn underlying_complex(ring: &BasisDGRing) -> IntCochainComplex {
    ring.underlying_complex()
}

#[cfg(test)]
mod tests {
    use super::*;

    /// `ℤ[ε]/ε²` with `|ε| = 1`, `d = 0`.
    fn dual_numbers() -> BasisDGRing {
        let mut b = RingBuilder::new();
        b.symbol("1", 0)
            .symbol("e", 1)
            .unit("1", 1)
            .mul("1", "1", "1", 1)
            .mul("1", "e", "e", 1)
            .mul("e", "1", "e", 1);
        b.build().unwrap()
    }

    #[test]
    fn integers_pass() {
        let z = BasisDGRing::integers();
        assert!(check_axioms(&z).passed());
        let x = Element::basis(0);
        assert_eq!(z.mul(&x, z.unit()), x);
    }

    #[test]
    fn canonical_order_by_degree_then_id() {
        let mut b = RingBuilder::new();
        b.symbol("b", 1)
            .symbol("z", 0)
            .symbol("a", 1)
            .unit("z", 1)
            .mul("z", "z", "z", 1);
        let r = b.build().unwrap();
        let ids: Vec<&str> = r.basis().iter().map(|s| s.id.as_str()).collect();
        assert_eq!(ids, ["z", "a", "b"]);
    }

    #[test]
    fn builder_rejects_bad_input() {
        let mut b = RingBuilder::new();
        b.symbol("x", 0).symbol("x", 1);
        assert!(matches!(b.build(), Err(DgError::DuplicateSymbol(_))));
        let mut b = RingBuilder::new();
        b.symbol("x", 0).diff("x", "x", 1);
        assert!(matches!(b.build(), Err(DgError::Degree(_))));
        let mut b = RingBuilder::new();
        b.symbol("x", 0).unit("y", 1);
        assert!(matches!(b.build(), Err(DgError::UnknownSymbol(_))));
        let z = BasisDGRing::integers();
        assert!(z.element(&[("nope", 1)]).is_err());
        assert!(z.validate(&Element::basis(3)).is_err());
    }

    #[test]
    fn negative_control_unit_not_closed() {
        let mut b = RingBuilder::new();
        b.symbol("1", 0)
            .symbol("e", 1)
            .unit("1", 1)
            .diff("1", "e", 1)
            .mul("1", "1", "1", 1)
            .mul("1", "e", "e", 1)
            .mul("e", "1", "e", 1);
        let report = check_axioms(&b.build().unwrap());
        assert!(!report.passed());
        assert!(report.violations.contains(&AxiomViolation::UnitNotClosed));
    }

    #[test]
    fn tensor_with_integers_is_relabeling() {
        let r = dual_numbers();
        let t = tensor(&r, &BasisDGRing::integers());
        let back = t.relabel(|id| id.trim_end_matches("|1").to_string()).unwrap();
        assert_eq!(back, r);
    }

    #[test]
    fn koszul_sign() {
        let r = dual_numbers();
        let t = tensor(&r, &r);
        assert!(check_axioms(&t).passed());
        let a = t.element(&[("e|1", 1)]).unwrap();
        let b = t.element(&[("1|e", 1)]).unwrap();
        // (1⊗e)(e⊗1) = (-1)^{1·1} e⊗e
        assert_eq!(t.mul(&b, &a), t.element(&[("e|e", -1)]).unwrap());
        assert_eq!(t.mul(&a, &b), t.element(&[("e|e", 1)]).unwrap());
    }

    #[test]
    fn homs() {
        let r = Arc::new(dual_numbers());
        let id = DGRingHom::identity(r.clone());
        assert!(check_hom(&id).passed());
        assert!(id.is_identity());
        // ε ↦ 2ε is a ring endomorphism
        let two = DGRingHom::new(
            r.clone(),
            r.clone(),
            vec![Element::basis(0), Element::term(1, BigInt::from(2))],
        )
        .unwrap();
        assert!(check_hom(&two).passed());
        let four = compose_hom(&two, &two).unwrap();
        assert!(check_hom(&four).passed());
        assert_eq!(four.image_of(1), &Element::term(1, BigInt::from(4)));
        assert!(two.inverse().is_none());
        // a degree-shifting map
        let bad = DGRingHom::new(r.clone(), r.clone(), vec![Element::basis(0), Element::basis(0)]).unwrap();
        let report = check_hom(&bad);
        assert!(report.violations.contains(&HomViolation::DegreeShift("e".into())));
    }

    #[test]
    fn tensor_of_homs_is_a_hom() {
        let r = Arc::new(dual_numbers());
        let two = DGRingHom::new(
            r.clone(),
            r.clone(),
            vec![Element::basis(0), Element::term(1, BigInt::from(2))],
        )
        .unwrap();
        let t = Arc::new(tensor(&r, &r));
        let h = tensor_hom(&two, &DGRingHom::identity(r.clone()), t.clone(), t.clone()).unwrap();
        assert!(check_hom(&h).passed());
    }

    #[test]
    fn show_elements() {
        let r = dual_numbers();
        let e = r.element(&[("1", 2), ("e", -1)]).unwrap();
        assert_eq!(r.show(&e), "2·1 - e");
        assert_eq!(r.show(&Element::zero()), "0");
    }
}
