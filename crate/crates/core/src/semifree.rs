//! Semi-free DG rings over ℤ and lifting along surjective
//! quasi-isomorphisms.
//!
//! A presentation lists graded generators with a filtration index; the
//! differential of a generator is a noncommutative polynomial in generators
//! of strictly smaller filtration. Homomorphisms out of such a ring are
//! determined by generator images, so lifting proceeds generator by
//! generator in filtration order.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::dg::{sign, BasisDGRing, DGRingHom, Element};
use crate::horn::{certify_surjective_quasi_iso, kernel_complex};
use crate::keller::{KellerCyl, KellerHomotopy, TriangularRing};
use crate::linalg::{smith, IntMatrix, SmithDecomposition};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SemiFreeError {
    #[error("duplicate generator {0:?}")]
    DuplicateVar(String),
    #[error("unknown generator {0:?}")]
    UnknownVar(String),
    #[error("d({var}) has a term of degree {found}, expected {expected}")]
    Degree { var: String, expected: i64, found: i64 },
    #[error("d({var}) uses {uses}, whose filtration is not below that of {var}")]
    Filtration { var: String, uses: String },
    #[error("d(d({0})) ≠ 0")]
    NotSquareZero(String),
    #[error("cyclic dependency among generator differentials at {0:?}")]
    Cyclic(String),
    #[error("image of {var} is not homogeneous of degree {degree}")]
    ImageDegree { var: String, degree: i64 },
    #[error("{0} images for {1} generators")]
    ImageCount(usize, usize),
    #[error("d-compatibility fails on {0}")]
    NotCompatible(String),
    #[error("target mismatch: {0}")]
    TargetMismatch(String),
}

/// A generator with its degree and filtration index.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GradedVar {
    pub name: String,
    pub degree: i64,
    pub filt: usize,
}

/// A noncommutative polynomial: words in generator indices with integer
/// coefficients. The empty word is the unit.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct NCPoly {
    terms: BTreeMap<Vec<usize>, BigInt>,
}

impl NCPoly {
    pub fn zero() -> Self {
        NCPoly::default()
    }

    pub fn one() -> Self {
        NCPoly::word(Vec::new())
    }

    pub fn var(index: usize) -> Self {
        NCPoly::word(vec![index])
    }

    pub fn word(word: Vec<usize>) -> Self {
        NCPoly::term(word, BigInt::one())
    }

    pub fn term(word: Vec<usize>, coef: BigInt) -> Self {
        let mut p = NCPoly::zero();
        p.add_term(word, coef);
        p
    }

    pub fn add_term(&mut self, word: Vec<usize>, coef: BigInt) {
        if coef.is_zero() {
            return;
        }
        let entry = self.terms.entry(word.clone()).or_insert_with(BigInt::zero);
        *entry += coef;
        if entry.is_zero() {
            self.terms.remove(&word);
        }
    }

    pub fn add_scaled(&mut self, other: &NCPoly, factor: &BigInt) {
        for (w, c) in &other.terms {
            self.add_term(w.clone(), c * factor);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[usize], &BigInt)> {
        self.terms.iter().map(|(w, c)| (w.as_slice(), c))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn mul(&self, other: &NCPoly) -> NCPoly {
        let mut out = NCPoly::zero();
        for (a, x) in &self.terms {
            for (b, y) in &other.terms {
                let mut w = a.clone();
                w.extend_from_slice(b);
                out.add_term(w, x * y);
            }
        }
        out
    }

    /// Generator indices occurring in some word.
    pub fn variables(&self) -> impl Iterator<Item = usize> + '_ {
        self.terms.keys().flatten().copied()
    }
}

impl std::ops::Add<&NCPoly> for &NCPoly {
    type Output = NCPoly;

    fn add(self, rhs: &NCPoly) -> NCPoly {
        let mut out = self.clone();
        out.add_scaled(rhs, &BigInt::one());
        out
    }
}

impl std::ops::Sub<&NCPoly> for &NCPoly {
    type Output = NCPoly;

    fn sub(self, rhs: &NCPoly) -> NCPoly {
        let mut out = self.clone();
        out.add_scaled(rhs, &-BigInt::one());
        out
    }
}

/// A finite semi-free DG ring `ℤ⟨X⟩` with `d` given on generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SemiFreePresentation {
    vars: Vec<GradedVar>,
    d: Vec<NCPoly>,
    index: HashMap<String, usize>,
}

impl SemiFreePresentation {
    /// Validates names, degrees, the filtration condition and `d² = 0`.
    pub fn new(vars: Vec<GradedVar>, d: Vec<NCPoly>) -> Result<Self, SemiFreeError> {
        let mut index = HashMap::new();
        for (k, v) in vars.iter().enumerate() {
            if index.insert(v.name.clone(), k).is_some() {
                return Err(SemiFreeError::DuplicateVar(v.name.clone()));
            }
        }
        if d.len() != vars.len() {
            return Err(SemiFreeError::ImageCount(d.len(), vars.len()));
        }
        let p = SemiFreePresentation { vars, d, index };
        for (k, x) in p.vars.iter().enumerate() {
            for (word, _) in p.d[k].terms() {
                if let Some(&bad) = word.iter().find(|&&u| u >= p.vars.len()) {
                    return Err(SemiFreeError::UnknownVar(format!("#{bad}")));
                }
                let found = p.word_degree(word);
                if found != x.degree + 1 {
                    return Err(SemiFreeError::Degree {
                        var: x.name.clone(),
                        expected: x.degree + 1,
                        found,
                    });
                }
                if x.filt == 0 {
                    return Err(SemiFreeError::Filtration {
                        var: x.name.clone(),
                        uses: if word.is_empty() {
                            "the unit".into()
                        } else {
                            p.vars[word[0]].name.clone()
                        },
                    });
                }
                if let Some(&u) = word.iter().find(|&&u| p.vars[u].filt >= x.filt) {
                    return Err(SemiFreeError::Filtration {
                        var: x.name.clone(),
                        uses: p.vars[u].name.clone(),
                    });
                }
            }
        }
        for (k, x) in p.vars.iter().enumerate() {
            if !p.extend_d(&p.d[k]).is_zero() {
                return Err(SemiFreeError::NotSquareZero(x.name.clone()));
            }
        }
        Ok(p)
    }

    /// Builds a presentation whose filtration is computed from `d`:
    /// closed generators sit in filtration 0 and every other generator one
    /// above the generators its differential uses.
    pub fn with_inferred_filtration(vars: Vec<(String, i64)>, d: Vec<NCPoly>) -> Result<Self, SemiFreeError> {
        let filt = infer_filtration(&vars, &d)?;
        let vars = vars
            .into_iter()
            .zip(filt)
            .map(|((name, degree), filt)| GradedVar { name, degree, filt })
            .collect();
        SemiFreePresentation::new(vars, d)
    }

    pub fn vars(&self) -> &[GradedVar] {
        &self.vars
    }

    pub fn var(&self, index: usize) -> &GradedVar {
        &self.vars[index]
    }

    pub fn len(&self) -> usize {
        self.vars.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vars.is_empty()
    }

    pub fn index_of(&self, name: &str) -> Result<usize, SemiFreeError> {
        self.index
            .get(name)
            .copied()
            .ok_or_else(|| SemiFreeError::UnknownVar(name.to_string()))
    }

    /// `d` of generator `index`.
    pub fn d_of(&self, index: usize) -> &NCPoly {
        &self.d[index]
    }

    pub fn word_degree(&self, word: &[usize]) -> i64 {
        word.iter().map(|&u| self.vars[u].degree).sum()
    }

    /// Generator indices sorted by filtration, stable in declaration order.
    pub fn filtration_order(&self) -> Vec<usize> {
        let mut order: Vec<usize> = (0..self.vars.len()).collect();
        order.sort_by_key(|&k| self.vars[k].filt);
        order
    }

    pub fn max_filtration(&self) -> usize {
        self.vars.iter().map(|v| v.filt).max().unwrap_or(0)
    }

    /// `d` extended to words by the graded Leibniz rule.
    pub fn extend_d(&self, poly: &NCPoly) -> NCPoly {
        let mut out = NCPoly::zero();
        for (word, coef) in poly.terms() {
            let mut prefix_degree = 0;
            for (k, &x) in word.iter().enumerate() {
                let left = NCPoly::word(word[..k].to_vec());
                let right = NCPoly::word(word[k + 1..].to_vec());
                let term = left.mul(&self.d[x]).mul(&right);
                out.add_scaled(&term, &(coef * sign(prefix_degree)));
                prefix_degree += self.vars[x].degree;
            }
        }
        out
    }

    /// Text form `2·x·y - z`.
    pub fn show(&self, poly: &NCPoly) -> String {
        if poly.is_zero() {
            return "0".into();
        }
        let mut out = String::new();
        for (k, (word, c)) in poly.terms().enumerate() {
            let negative = c < &BigInt::zero();
            let abs = if negative { -c } else { c.clone() };
            out.push_str(match (k, negative) {
                (0, true) => "-",
                (0, false) => "",
                (_, true) => " - ",
                (_, false) => " + ",
            });
            let w: Vec<&str> = word.iter().map(|&u| self.vars[u].name.as_str()).collect();
            match (abs.is_one(), w.is_empty()) {
                (_, true) => out.push_str(&abs.to_string()),
                (true, false) => out.push_str(&w.join("·")),
                (false, false) => out.push_str(&format!("{abs}·{}", w.join("·"))),
            }
        }
        out
    }
}

pub fn extend_d(p: &SemiFreePresentation, poly: &NCPoly) -> NCPoly {
    p.extend_d(poly)
}

/// Filtration indices from the dependency graph of `d`.
pub fn infer_filtration(vars: &[(String, i64)], d: &[NCPoly]) -> Result<Vec<usize>, SemiFreeError> {
    let n = vars.len();
    let mut filt: Vec<Option<usize>> = vec![None; n];
    for _ in 0..=n {
        let mut progress = false;
        for k in 0..n {
            if filt[k].is_some() {
                continue;
            }
            if d[k].is_zero() {
                filt[k] = Some(0);
                progress = true;
                continue;
            }
            let deps: Option<Vec<usize>> = d[k].variables().map(|u| filt.get(u).copied().flatten()).collect();
            if let Some(deps) = deps {
                filt[k] = Some(deps.into_iter().max().map_or(1, |m| m + 1));
                progress = true;
            }
        }
        if !progress {
            break;
        }
    }
    filt.iter()
        .enumerate()
        .map(|(k, f)| f.ok_or_else(|| SemiFreeError::Cyclic(vars[k].0.clone())))
        .collect()
}

/// A homomorphism `ℤ⟨X⟩ -> C` given by the images of the generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SemiFreeHom {
    source: Arc<SemiFreePresentation>,
    target: Arc<BasisDGRing>,
    images: Vec<Element>,
}

impl SemiFreeHom {
    /// Checks image degrees only; see [`SemiFreeHom::check`] for `d`.
    pub fn new(
        source: Arc<SemiFreePresentation>,
        target: Arc<BasisDGRing>,
        images: Vec<Element>,
    ) -> Result<Self, SemiFreeError> {
        if images.len() != source.len() {
            return Err(SemiFreeError::ImageCount(images.len(), source.len()));
        }
        for (x, e) in source.vars.iter().zip(&images) {
            target
                .validate(e)
                .map_err(|err| SemiFreeError::TargetMismatch(err.to_string()))?;
            if !target.is_homogeneous_of(e, x.degree) {
                return Err(SemiFreeError::ImageDegree {
                    var: x.name.clone(),
                    degree: x.degree,
                });
            }
        }
        Ok(SemiFreeHom { source, target, images })
    }

    /// A homomorphism that also passes [`SemiFreeHom::check`].
    pub fn validated(
        source: Arc<SemiFreePresentation>,
        target: Arc<BasisDGRing>,
        images: Vec<Element>,
    ) -> Result<Self, SemiFreeError> {
        let h = SemiFreeHom::new(source, target, images)?;
        h.check()?;
        Ok(h)
    }

    pub fn source(&self) -> &Arc<SemiFreePresentation> {
        &self.source
    }

    pub fn target(&self) -> &Arc<BasisDGRing> {
        &self.target
    }

    pub fn images(&self) -> &[Element] {
        &self.images
    }

    pub fn image(&self, var: usize) -> &Element {
        &self.images[var]
    }

    pub fn eval(&self, poly: &NCPoly) -> Element {
        eval_with(&self.target, &self.images, poly)
    }

    /// The first generator on which `d` fails to commute.
    pub fn check(&self) -> Result<(), SemiFreeError> {
        for (k, x) in self.source.vars.iter().enumerate() {
            if self.eval(&self.source.d[k]) != self.target.d(&self.images[k]) {
                return Err(SemiFreeError::NotCompatible(x.name.clone()));
            }
        }
        Ok(())
    }

    pub fn is_valid(&self) -> bool {
        self.check().is_ok()
    }

    /// `f ∘ self`.
    pub fn then(&self, f: &DGRingHom) -> Result<SemiFreeHom, SemiFreeError> {
        if **f.source() != *self.target {
            return Err(SemiFreeError::TargetMismatch("composite of non-composable maps".into()));
        }
        Ok(SemiFreeHom {
            source: self.source.clone(),
            target: f.target().clone(),
            images: self.images.iter().map(|e| f.apply(e)).collect(),
        })
    }

    /// Generator images rendered in the target's basis.
    pub fn show(&self) -> Vec<(String, String)> {
        self.source
            .vars
            .iter()
            .zip(&self.images)
            .map(|(x, e)| (x.name.clone(), self.target.show(e)))
            .collect()
    }
}

/// Evaluates `poly` with generator `k` sent to `images[k]`.
pub(crate) fn eval_with(target: &BasisDGRing, images: &[Element], poly: &NCPoly) -> Element {
    let mut out = Element::zero();
    for (word, coef) in poly.terms() {
        let mut value = target.unit().clone();
        for &x in word {
            value = target.mul(&value, &images[x]);
            if value.is_zero() {
                break;
            }
        }
        out.add_scaled(&value, coef);
    }
    out
}

pub fn check_sf_hom(h: &SemiFreeHom) -> Result<(), SemiFreeError> {
    h.check()
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LiftError {
    #[error("v is not surjective in degree {0}")]
    NotSurjective(i64),
    #[error("v is not a quasi-isomorphism: {0}")]
    NotQuasiIso(String),
    #[error("v is not a DG ring homomorphism: {0}")]
    InvalidHom(String),
    #[error("u is not a valid homomorphism: {0}")]
    InvalidInput(#[from] SemiFreeError),
    #[error("no integral solution while {step} for {var}")]
    NoSolution { step: &'static str, var: String },
    #[error("lift of {var} fails {what}")]
    PostCondition { var: String, what: &'static str },
    #[error("perturbation of {0} is not a cocycle in ker v")]
    Perturbation(String),
}

/// Solvers attached to a map `v : C̃ -> C`, precomputed degree by degree.
#[derive(Clone, Debug)]
pub struct Lifter {
    v: DGRingHom,
    // for v(x) = m
    preimage: BTreeMap<i64, SmithDecomposition>,
    // for [d; v] x = [0; m]
    cocycle: BTreeMap<i64, SmithDecomposition>,
    // columns: a basis of ker v in each degree
    kernel: BTreeMap<i64, IntMatrix>,
    // for d(K y) = c, indexed by the degree of the unknown
    boundary: BTreeMap<i64, SmithDecomposition>,
}

impl Lifter {
    /// Certifies `v` as a surjective quasi-isomorphism first.
    pub fn new(v: DGRingHom) -> Result<Self, LiftError> {
        let cert = certify_surjective_quasi_iso(&v);
        if let Some(violation) = cert.hom_violations.first() {
            return Err(LiftError::InvalidHom(violation.clone()));
        }
        if let Some((k, _)) = cert.surjective.iter().find(|(_, ok)| !ok) {
            return Err(LiftError::NotSurjective(*k));
        }
        if !cert.kernel_acyclic() {
            return Err(LiftError::NotQuasiIso("ker v is not acyclic".into()));
        }
        if !cert.cohomology_agrees() {
            return Err(LiftError::NotQuasiIso("cohomology differs".into()));
        }
        Ok(Lifter::unchecked(v))
    }

    /// Builds the solvers without certifying `v`; solver failures then
    /// surface as [`LiftError::NoSolution`].
    pub fn unchecked(v: DGRingHom) -> Self {
        let src = v.source().clone();
        let (lo, hi) = src.degree_range().unwrap_or((0, 0));
        let mut lifter = Lifter {
            v,
            preimage: BTreeMap::new(),
            cocycle: BTreeMap::new(),
            kernel: BTreeMap::new(),
            boundary: BTreeMap::new(),
        };
        for k in lo..=hi {
            let block = lifter.v.degree_block(k);
            lifter.preimage.insert(k, smith(&block));
            let d = src.differential_matrix(k);
            lifter.cocycle.insert(k, smith(&d.vstack(&block).expect("same width")));
            let basis = lifter.preimage[&k].kernel_basis();
            lifter.kernel.insert(k, IntMatrix::from_columns(src.rank_in(k), &basis));
        }
        for k in lo..=hi {
            let dk = src.differential_matrix(k).mul(&lifter.kernel[&k]).expect("shapes");
            lifter.boundary.insert(k, smith(&dk));
        }
        lifter
    }

    pub fn map(&self) -> &DGRingHom {
        &self.v
    }

    pub fn source(&self) -> &Arc<BasisDGRing> {
        self.v.source()
    }

    pub fn target(&self) -> &Arc<BasisDGRing> {
        self.v.target()
    }

    /// A ℤ-basis of `ker v` in `degree`, as source elements.
    pub fn kernel_basis(&self, degree: i64) -> Vec<Element> {
        let Some(k) = self.kernel.get(&degree) else {
            return Vec::new();
        };
        (0..k.cols())
            .map(|c| self.source().from_vector(degree, &k.column(c)))
            .collect()
    }

    fn degree_of(&self, ring: &BasisDGRing, m: &Element) -> Option<i64> {
        ring.homogeneous_degree(m)
    }

    /// Some `x` with `v(x) = m`.
    pub fn preimage(&self, m: &Element) -> Option<Element> {
        let Some(k) = self.degree_of(self.target(), m) else {
            return Some(Element::zero());
        };
        let snf = self.preimage.get(&k)?;
        let x = snf.solve(&self.target().to_vector(m, k))?;
        Some(self.source().from_vector(k, &x))
    }

    /// `m̃` with `d(m̃) = 0` and `v(m̃) = m`, for a cocycle `m`.
    pub fn lift_cocycle(&self, m: &Element) -> Result<Element, LiftError> {
        let fail = || LiftError::NoSolution {
            step: "lifting a cocycle",
            var: self.target().show(m),
        };
        let Some(k) = self.degree_of(self.target(), m) else {
            return Ok(Element::zero());
        };
        let snf = self.cocycle.get(&k).ok_or_else(fail)?;
        let mut rhs = vec![BigInt::zero(); self.source().rank_in(k + 1)];
        rhs.extend(self.target().to_vector(m, k));
        let x = snf.solve(&rhs).ok_or_else(fail)?;
        let lift = self.source().from_vector(k, &x);
        if !self.source().d(&lift).is_zero() || self.v.apply(&lift) != *m {
            return Err(LiftError::PostCondition {
                var: self.target().show(m),
                what: "the cocycle lifting equations",
            });
        }
        Ok(lift)
    }

    /// `m̃′` with `d(m̃′) = m̃` and `v(m̃′) = 0`, for a cocycle `m̃ ∈ ker v`.
    pub fn lift_boundary_in_kernel(&self, m: &Element) -> Result<Element, LiftError> {
        let src = self.source();
        let fail = || LiftError::NoSolution {
            step: "bounding in ker v",
            var: src.show(m),
        };
        let Some(k) = self.degree_of(src, m) else {
            return Ok(Element::zero());
        };
        let (Some(snf), Some(basis)) = (self.boundary.get(&(k - 1)), self.kernel.get(&(k - 1))) else {
            return Err(fail());
        };
        let y = snf.solve(&src.to_vector(m, k)).ok_or_else(fail)?;
        let x = basis.mul_vec(&y).expect("shapes");
        let lift = src.from_vector(k - 1, &x);
        if src.d(&lift) != *m || !self.v.apply(&lift).is_zero() {
            return Err(LiftError::PostCondition {
                var: src.show(m),
                what: "the kernel bounding equations",
            });
        }
        Ok(lift)
    }

    /// `ũ` with `v ∘ ũ = u`. `perturb[x]`, when given, is added to the
    /// image of generator `x`; it must be a cocycle in `ker v`.
    pub fn lift_hom(&self, u: &SemiFreeHom, perturb: Option<&[Element]>) -> Result<SemiFreeHom, LiftError> {
        if **u.target() != **self.target() {
            return Err(SemiFreeError::TargetMismatch("u does not land in the target of v".into()).into());
        }
        u.check()?;
        let a = u.source();
        let src = self.source();
        let mut images = vec![Element::zero(); a.len()];
        for x in a.filtration_order() {
            let var = &a.vars[x];
            let no = |step| LiftError::NoSolution {
                step,
                var: var.name.clone(),
            };
            let mut lift = if var.filt == 0 {
                self.lift_cocycle(u.image(x)).map_err(|_| no("lifting a cocycle"))?
            } else {
                let c = self.preimage(u.image(x)).ok_or_else(|| no("solving v(c) = u(x)"))?;
                let dx = eval_with(src, &images, a.d_of(x));
                let c1 = &dx - &src.d(&c);
                if !src.d(&c1).is_zero() || !self.v.apply(&c1).is_zero() {
                    return Err(LiftError::PostCondition {
                        var: var.name.clone(),
                        what: "ũ(dx) - d(c) ∈ Z(ker v)",
                    });
                }
                let c2 = self.lift_boundary_in_kernel(&c1).map_err(|_| no("bounding in ker v"))?;
                &c + &c2
            };
            if let Some(z) = perturb.and_then(|p| p.get(x)) {
                if !src.is_homogeneous_of(z, var.degree) || !src.d(z).is_zero() || !self.v.apply(z).is_zero() {
                    return Err(LiftError::Perturbation(var.name.clone()));
                }
                lift += z;
            }
            if self.v.apply(&lift) != *u.image(x) {
                return Err(LiftError::PostCondition {
                    var: var.name.clone(),
                    what: "v(ũ(x)) = u(x)",
                });
            }
            if src.d(&lift) != eval_with(src, &images, a.d_of(x)) {
                return Err(LiftError::PostCondition {
                    var: var.name.clone(),
                    what: "d(ũ(x)) = ũ(dx)",
                });
            }
            images[x] = lift;
        }
        let lifted = SemiFreeHom::new(a.clone(), src.clone(), images)?;
        lifted.check()?;
        if lifted.then(&self.v).map_err(LiftError::from)? != *u {
            return Err(LiftError::PostCondition {
                var: "the generators".into(),
                what: "v ∘ ũ = u",
            });
        }
        Ok(lifted)
    }
}

pub fn lift_cocycle(v: &DGRingHom, m: &Element) -> Result<Element, LiftError> {
    Lifter::unchecked(v.clone()).lift_cocycle(m)
}

pub fn lift_boundary_in_kernel(v: &DGRingHom, m: &Element) -> Result<Element, LiftError> {
    Lifter::unchecked(v.clone()).lift_boundary_in_kernel(m)
}

/// Certifies `v` and lifts `u` through it.
pub fn lift_hom(v: &DGRingHom, u: &SemiFreeHom) -> Result<SemiFreeHom, LiftError> {
    Lifter::new(v.clone())?.lift_hom(u, None)
}

/// A homotopy `γ : ũ₀ ⇒ ũ₁` with `v ∘ γ = 0`, for two lifts of the same
/// `u` along `v : C̃ -> C`.
///
/// `ũ₀` and `ũ₁` assemble into `u′ = diag(ũ₀, ũ₁)` with values in the ring
/// `D` of upper triangular matrices `[C̃, C[-1]; 0, C̃]`. The map
/// `w : Cyl_Kel(C̃) -> D`, which is `v` in the corner, is a surjective
/// quasi-isomorphism, and the corner of a lift of `u′` along `w` is `γ`.
pub fn homotopy_between_lifts(
    v: &DGRingHom,
    u: &SemiFreeHom,
    lift0: &SemiFreeHom,
    lift1: &SemiFreeHom,
) -> Result<KellerHomotopy, LiftError> {
    for lift in [lift0, lift1] {
        lift.check()?;
        if lift.then(v)? != *u {
            return Err(LiftError::PostCondition {
                var: "the generators".into(),
                what: "v ∘ ũ = u for the given lifts",
            });
        }
    }
    let cyl = KellerCyl::new(v.source().clone());
    let tri = TriangularRing::new(v.clone());
    let w = tri.comparison(&cyl);
    let diagonal = tri.diagonal(lift0, lift1)?;
    let lifted = Lifter::new(w)?.lift_hom(&diagonal, None)?;
    let h = cyl.decode(&lifted)?;
    if h.f0 != *lift0 || h.f1 != *lift1 {
        return Err(LiftError::PostCondition {
            var: "the generators".into(),
            what: "the diagonal of the lifted matrix",
        });
    }
    if h.gamma.iter().any(|g| !v.apply(g).is_zero()) {
        return Err(LiftError::PostCondition {
            var: "the generators".into(),
            what: "v ∘ γ = 0",
        });
    }
    if let Some(x) = h.failing_generator() {
        return Err(LiftError::PostCondition {
            var: x,
            what: "dγ + γd = ũ₁ - ũ₀",
        });
    }
    Ok(h)
}

/// Random cocycles of `ker v` that are boundaries there, in `degree`:
/// `d(K y)` for the given coefficients `y`.
pub fn kernel_boundary(lifter: &Lifter, degree: i64, coeffs: &[BigInt]) -> Element {
    let basis = lifter.kernel_basis(degree - 1);
    let mut e = Element::zero();
    for (b, c) in basis.iter().zip(coeffs) {
        e.add_scaled(b, c);
    }
    lifter.source().d(&e)
}

/// Kernel complex bookkeeping for callers that only hold a map.
pub fn kernel_is_acyclic(v: &DGRingHom) -> bool {
    kernel_complex(v).is_some_and(|k| crate::linalg::cohomology(&k.complex).is_acyclic())
}

impl fmt::Display for SemiFreePresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, x) in self.vars.iter().enumerate() {
            writeln!(
                f,
                "{} (degree {}, filtration {}): d = {}",
                x.name,
                x.degree,
                x.filt,
                self.show(&self.d[k])
            )?;
        }
        Ok(())
    }
}

type Monomial = (BigInt, Vec<String>);

/// Collects generators and differentials by name.
#[derive(Clone, Debug, Default)]
pub struct PresentationBuilder {
    vars: Vec<GradedVar>,
    d: Vec<(String, Vec<Monomial>)>,
}

impl PresentationBuilder {
    pub fn new() -> Self {
        PresentationBuilder::default()
    }

    pub fn var(&mut self, name: &str, degree: i64, filt: usize) -> &mut Self {
        self.vars.push(GradedVar {
            name: name.to_string(),
            degree,
            filt,
        });
        self
    }

    /// Adds `Σ coef · word` to `d(name)`.
    pub fn d(&mut self, name: &str, terms: &[(i64, &[&str])]) -> &mut Self {
        let terms = terms
            .iter()
            .map(|(c, w)| (BigInt::from(*c), w.iter().map(ToString::to_string).collect()))
            .collect();
        self.d.push((name.to_string(), terms));
        self
    }

    pub fn build(&self) -> Result<SemiFreePresentation, SemiFreeError> {
        let index: HashMap<&str, usize> = self
            .vars
            .iter()
            .enumerate()
            .map(|(k, v)| (v.name.as_str(), k))
            .collect();
        let lookup = |name: &str| {
            index
                .get(name)
                .copied()
                .ok_or_else(|| SemiFreeError::UnknownVar(name.to_string()))
        };
        let mut d = vec![NCPoly::zero(); self.vars.len()];
        for (name, terms) in &self.d {
            let k = lookup(name)?;
            for (c, w) in terms {
                let word = w.iter().map(|u| lookup(u)).collect::<Result<Vec<_>, _>>()?;
                d[k].add_term(word, c.clone());
            }
        }
        SemiFreePresentation::new(self.vars.clone(), d)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::horn::HornSetting;
    use crate::nerve::cyl;
    use crate::simplex::{HornId, MonotoneMap};

    fn z() -> Arc<BasisDGRing> {
        Arc::new(BasisDGRing::integers())
    }

    fn xy() -> SemiFreePresentation {
        PresentationBuilder::new()
            .var("x", 1, 0)
            .var("y", 0, 1)
            .d("y", &[(1, &["x"])])
            .build()
            .unwrap()
    }

    fn idempotent_pair() -> Arc<SemiFreePresentation> {
        // x² - x is closed for closed x of degree 0, so y bounds it
        Arc::new(
            PresentationBuilder::new()
                .var("x", 0, 0)
                .var("y", -1, 1)
                .d("y", &[(1, &["x", "x"]), (-1, &["x"])])
                .build()
                .unwrap(),
        )
    }

    #[test]
    fn leibniz_on_words() {
        let p = xy();
        assert!(p.extend_d(&NCPoly::one()).is_zero());
        // d(x·y) = -x·x
        let d = p.extend_d(&NCPoly::word(vec![0, 1]));
        assert_eq!(d, NCPoly::term(vec![0, 0], BigInt::from(-1)));
        assert_eq!(p.show(&d), "-x·x");
        // d(y·y) = x·y + y·x
        let d = p.extend_d(&NCPoly::word(vec![1, 1]));
        assert_eq!(p.show(&d), "x·y + y·x");
        assert!(p.extend_d(&d).is_zero());
    }

    #[test]
    fn validation() {
        let dup = PresentationBuilder::new().var("x", 0, 0).var("x", 1, 0).build();
        assert_eq!(dup, Err(SemiFreeError::DuplicateVar("x".into())));
        let degree = PresentationBuilder::new()
            .var("x", 0, 0)
            .var("y", 0, 1)
            .d("y", &[(1, &["x"])])
            .build();
        assert!(matches!(degree, Err(SemiFreeError::Degree { .. })));
        let filt = PresentationBuilder::new()
            .var("x", 1, 1)
            .var("y", 0, 1)
            .d("y", &[(1, &["x"])])
            .build();
        assert!(matches!(filt, Err(SemiFreeError::Filtration { .. })));
        let closed = PresentationBuilder::new().var("y", -1, 0).d("y", &[(1, &[])]).build();
        assert!(matches!(closed, Err(SemiFreeError::Filtration { .. })));
        // d(y) = x·x with x of degree 0 and d(x) = z: d²(y) = z·x + x·z ≠ 0
        let square = PresentationBuilder::new()
            .var("z", 1, 0)
            .var("x", 0, 1)
            .var("y", -1, 2)
            .d("x", &[(1, &["z"])])
            .d("y", &[(1, &["x", "x"])])
            .build();
        assert_eq!(square, Err(SemiFreeError::NotSquareZero("y".into())));
        assert!(PresentationBuilder::new().d("w", &[]).build().is_err());
    }

    #[test]
    fn inferred_filtration() {
        let p = xy();
        let vars = p.vars().iter().map(|v| (v.name.clone(), v.degree)).collect();
        let d = (0..p.len()).map(|k| p.d_of(k).clone()).collect();
        assert_eq!(SemiFreePresentation::with_inferred_filtration(vars, d).unwrap(), p);
        let cyc = infer_filtration(&[("a".into(), 0), ("b".into(), 1)], &[NCPoly::var(1), NCPoly::var(0)]);
        assert_eq!(cyc, Err(SemiFreeError::Cyclic("a".into())));
    }

    #[test]
    fn evaluation_and_checking() {
        let a = idempotent_pair();
        let c = cyl(1, z());
        let ring = c.ring().clone();
        let d0 = c.delta(&MonotoneMap::parse_in("(0)", 1).unwrap()).unwrap();
        let h = SemiFreeHom::new(a.clone(), ring.clone(), vec![d0.clone(), Element::zero()]).unwrap();
        assert_eq!(h.eval(&NCPoly::one()), *ring.unit());
        assert_eq!(h.eval(&NCPoly::word(vec![0, 0])), d0);
        // δ_(0) is not closed in Cyl_1
        assert_eq!(h.check(), Err(SemiFreeError::NotCompatible("x".into())));
        let good = SemiFreeHom::validated(a.clone(), ring.clone(), vec![ring.unit().clone(), Element::zero()]);
        assert!(good.is_ok());
        let wrong_degree = SemiFreeHom::new(a, ring.clone(), vec![Element::zero(), ring.unit().clone()]);
        assert!(matches!(wrong_degree, Err(SemiFreeError::ImageDegree { .. })));
    }

    #[test]
    fn lifting_against_the_identity() {
        let a = idempotent_pair();
        let c = cyl(2, z());
        let id = DGRingHom::identity(c.ring().clone());
        let u = SemiFreeHom::validated(a, c.ring().clone(), vec![c.ring().unit().clone(), Element::zero()]).unwrap();
        assert_eq!(lift_hom(&id, &u).unwrap(), u);
    }

    #[test]
    fn lifting_units_over_the_inner_two_horn() {
        let s = HornSetting::new(HornId::new(2, 1).unwrap(), z());
        let v = s.restriction();
        let horn = s.horn_ring().ring().clone();
        let cylinder = s.cylinder().ring().clone();
        assert_eq!(lift_cocycle(&v, horn.unit()).unwrap(), *cylinder.unit());
        let e01 = s
            .horn_ring()
            .delta(&MonotoneMap::parse_in("(0,1)", 2).unwrap())
            .unwrap();
        let lift = lift_cocycle(&v, &e01).unwrap();
        assert!(cylinder.d(&lift).is_zero());
        assert_eq!(v.apply(&lift), e01);
        assert!(lift_boundary_in_kernel(&v, &Element::zero()).unwrap().is_zero());
        let d02 = cylinder.d(&s.cylinder().delta(&MonotoneMap::parse_in("(0,2)", 2).unwrap()).unwrap());
        let lifter = Lifter::new(v.clone()).unwrap();
        let b = lifter.lift_boundary_in_kernel(&d02).unwrap();
        assert_eq!(cylinder.d(&b), d02);
        assert!(v.apply(&b).is_zero());

        let t = Arc::new(PresentationBuilder::new().var("t", 0, 0).build().unwrap());
        let u = SemiFreeHom::validated(t, horn.clone(), vec![horn.unit().clone()]).unwrap();
        let lifted = lifter.lift_hom(&u, None).unwrap();
        assert!(cylinder.d(lifted.image(0)).is_zero());
        assert_eq!(lifted.then(&v).unwrap(), u);
    }

    #[test]
    fn lifting_an_idempotent_over_a_three_horn() {
        let a = idempotent_pair();
        let s = HornSetting::new(HornId::new(3, 1).unwrap(), z());
        let v = s.restriction();
        let horn = s.horn_ring().ring().clone();
        let u = SemiFreeHom::validated(a, horn.clone(), vec![horn.unit().clone(), Element::zero()]).unwrap();
        let lifted = lift_hom(&v, &u).unwrap();
        assert!(lifted.is_valid());
        assert_eq!(lifted.then(&v).unwrap(), u);
    }

    #[test]
    fn non_surjections_are_rejected() {
        let fam = crate::nerve::CylinderFamily::new(1, z());
        let s0 = fam.degeneracy(0, 0).unwrap();
        assert_eq!(Lifter::new(s0).err(), Some(LiftError::NotSurjective(0)));
        let two = DGRingHom::new(z(), z(), vec![Element::term(0, BigInt::from(2))]).unwrap();
        assert!(matches!(Lifter::new(two), Err(LiftError::InvalidHom(_))));
    }

    #[test]
    fn homotopy_between_equal_lifts() {
        let a = idempotent_pair();
        let s = HornSetting::new(HornId::new(2, 0).unwrap(), z());
        let v = s.restriction();
        let horn = s.horn_ring().ring().clone();
        let u = SemiFreeHom::validated(a, horn.clone(), vec![horn.unit().clone(), Element::zero()]).unwrap();
        let lifted = lift_hom(&v, &u).unwrap();
        let h = homotopy_between_lifts(&v, &u, &lifted, &lifted).unwrap();
        assert!(h.failing_generator().is_none());
    }

    #[test]
    fn homotopy_between_perturbed_lifts() {
        // ker v is δ_(0,2) and δ_(0,1,2), so a closed generator of degree 2 can move
        let a = Arc::new(
            PresentationBuilder::new()
                .var("x", 2, 0)
                .var("t", 0, 0)
                .build()
                .unwrap(),
        );
        let s = HornSetting::new(HornId::new(2, 1).unwrap(), z());
        let v = s.restriction();
        let lifter = Lifter::new(v.clone()).unwrap();
        let horn = s.horn_ring().ring().clone();
        let u = SemiFreeHom::validated(a, horn.clone(), vec![Element::zero(), horn.unit().clone()]).unwrap();
        let lift0 = lifter.lift_hom(&u, None).unwrap();
        let z1 = kernel_boundary(&lifter, 2, &[BigInt::from(3)]);
        assert!(!z1.is_zero());
        let lift1 = lifter.lift_hom(&u, Some(&[z1, Element::zero()])).unwrap();
        assert_ne!(lift0, lift1);
        let h = homotopy_between_lifts(&v, &u, &lift0, &lift1).unwrap();
        assert!(h.gamma.iter().all(|g| v.apply(g).is_zero()));
        assert!(h.failing_generator().is_none());
        assert!(h.gamma.iter().any(|g| !g.is_zero()));
        for word in [vec![0, 1], vec![1, 0], vec![0, 0], vec![1, 0, 1]] {
            assert!(h.identity_holds_on(&NCPoly::word(word)));
        }
        let bad = lifter.lift_hom(&u, Some(&[&Element::basis(0) + lift0.image(0)]));
        assert!(bad.is_err());
    }
}
