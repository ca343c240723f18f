//! Finite combinatorics of the simplex category.
//!
//! A morphism `[p] -> [q]` of the simplex category is stored as the explicit
//! nondecreasing sequence of its values. The standard simplex `Δ^q` and its
//! horns `Λ^q_i` are never materialized; they are predicates on such
//! sequences (see [`Space`]).
//!
//! Sequences are ordered lexicographically everywhere. Every module that
//! indexes a basis by simplices relies on this ordering.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SimplexError {
    #[error("cannot compose: inner map lands in [{inner_target}] but outer map starts at [{outer_source}]")]
    DimensionMismatch { inner_target: usize, outer_source: usize },
    #[error("index {index} out of range for [{dim}]")]
    IndexOutOfRange { index: usize, dim: usize },
    #[error("sequence {0:?} is not nondecreasing")]
    NotMonotone(Vec<usize>),
    #[error("value {value} exceeds target dimension {target}")]
    ValueOutOfRange { value: usize, target: usize },
    #[error("empty sequence does not describe a simplex")]
    Empty,
    #[error("there are no horns in dimension 0")]
    NoHornInDimensionZero,
    #[error("horn apex {i} out of range for q = {q}")]
    ApexOutOfRange { q: usize, i: usize },
    #[error("simplex has target dimension {found}, expected {expected}")]
    WrongTarget { expected: usize, found: usize },
    #[error("cannot parse simplex from {0:?}")]
    Parse(String),
}

/// A nondecreasing function `[p] -> [q]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MonotoneMap {
    // field order matters for the derived `Ord`: lexicographic on values first
    values: Vec<usize>,
    target: usize,
}

/// A `p`-simplex of `Δ^q`, i.e. a monotone map `[p] -> [q]`.
pub type Simplex = MonotoneMap;

impl MonotoneMap {
    pub fn new(values: Vec<usize>, target: usize) -> Result<Self, SimplexError> {
        if values.is_empty() {
            return Err(SimplexError::Empty);
        }
        if values.windows(2).any(|w| w[0] > w[1]) {
            return Err(SimplexError::NotMonotone(values));
        }
        if let Some(&value) = values.iter().find(|&&v| v > target) {
            return Err(SimplexError::ValueOutOfRange { value, target });
        }
        Ok(MonotoneMap { values, target })
    }

    pub(crate) fn new_unchecked(values: Vec<usize>, target: usize) -> Self {
        debug_assert!(MonotoneMap::new(values.clone(), target).is_ok());
        MonotoneMap { values, target }
    }

    pub fn identity(q: usize) -> Self {
        MonotoneMap {
            values: (0..=q).collect(),
            target: q,
        }
    }

    pub fn source_dim(&self) -> usize {
        self.values.len() - 1
    }

    pub fn target_dim(&self) -> usize {
        self.target
    }

    pub fn values(&self) -> &[usize] {
        &self.values
    }

    pub fn apply(&self, k: usize) -> usize {
        self.values[k]
    }

    /// `self ∘ inner`: first `inner`, then `self`.
    pub fn compose(&self, inner: &MonotoneMap) -> Result<MonotoneMap, SimplexError> {
        if inner.target != self.source_dim() {
            return Err(SimplexError::DimensionMismatch {
                inner_target: inner.target,
                outer_source: self.source_dim(),
            });
        }
        Ok(MonotoneMap {
            values: inner.values.iter().map(|&k| self.values[k]).collect(),
            target: self.target,
        })
    }

    /// Strictly increasing, i.e. nondegenerate as a simplex.
    pub fn is_injective(&self) -> bool {
        self.values.windows(2).all(|w| w[0] < w[1])
    }

    pub fn is_nondegenerate(&self) -> bool {
        self.is_injective()
    }

    pub fn is_surjective(&self) -> bool {
        self.values[0] == 0
            && self.values[self.values.len() - 1] == self.target
            && self.values.windows(2).all(|w| w[1] - w[0] <= 1)
    }

    pub fn image(&self) -> Vec<usize> {
        let mut image = self.values.clone();
        image.dedup();
        image
    }

    /// The `i`-th face `d_i`: drop the `i`-th entry (`x ∘ ∂^i`).
    pub fn face(&self, i: usize) -> Result<MonotoneMap, SimplexError> {
        let p = self.source_dim();
        if p == 0 || i > p {
            return Err(SimplexError::IndexOutOfRange { index: i, dim: p });
        }
        let mut values = self.values.clone();
        values.remove(i);
        Ok(MonotoneMap {
            values,
            target: self.target,
        })
    }

    /// The `j`-th degeneracy `s_j`: repeat the `j`-th entry (`x ∘ σ^j`).
    pub fn degeneracy(&self, j: usize) -> Result<MonotoneMap, SimplexError> {
        let p = self.source_dim();
        if j > p {
            return Err(SimplexError::IndexOutOfRange { index: j, dim: p });
        }
        let mut values = self.values.clone();
        values.insert(j, self.values[j]);
        Ok(MonotoneMap {
            values,
            target: self.target,
        })
    }
}

impl fmt::Display for MonotoneMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (k, v) in self.values.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, ")")
    }
}

/// Parses the text form `"(0,1,2)"` into its value sequence. The target
/// dimension is not part of the text form; see [`MonotoneMap::parse_in`].
pub fn parse_sequence(text: &str) -> Result<Vec<usize>, SimplexError> {
    let err = || SimplexError::Parse(text.to_string());
    let inner = text
        .trim()
        .strip_prefix('(')
        .and_then(|s| s.strip_suffix(')'))
        .ok_or_else(err)?;
    inner
        .split(',')
        .map(|part| part.trim().parse::<usize>().map_err(|_| err()))
        .collect()
}

impl MonotoneMap {
    pub fn parse_in(text: &str, target: usize) -> Result<Self, SimplexError> {
        MonotoneMap::new(parse_sequence(text)?, target)
    }
}

impl FromStr for MonotoneMap {
    type Err = SimplexError;

    /// Parses with the smallest target containing every value.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let values = parse_sequence(s)?;
        let target = values.iter().copied().max().ok_or(SimplexError::Empty)?;
        MonotoneMap::new(values, target)
    }
}

/// The coface `∂^j : [q-1] -> [q]`, the injection whose image misses `j`.
pub fn coface(j: usize, q: usize) -> Result<MonotoneMap, SimplexError> {
    if q == 0 || j > q {
        return Err(SimplexError::IndexOutOfRange { index: j, dim: q });
    }
    Ok(MonotoneMap {
        values: (0..q).map(|k| if k < j { k } else { k + 1 }).collect(),
        target: q,
    })
}

/// The codegeneracy `σ^j : [q+1] -> [q]`, the surjection hitting `j` twice.
pub fn codegeneracy(j: usize, q: usize) -> Result<MonotoneMap, SimplexError> {
    if j > q {
        return Err(SimplexError::IndexOutOfRange { index: j, dim: q });
    }
    Ok(MonotoneMap {
        values: (0..=q + 1).map(|k| if k <= j { k } else { k - 1 }).collect(),
        target: q,
    })
}

/// `(0, …, p)` as a map `[p] -> [p+q]`.
pub fn front_face(p: usize, q: usize) -> MonotoneMap {
    MonotoneMap {
        values: (0..=p).collect(),
        target: p + q,
    }
}

/// `(p, …, p+q)` as a map `[q] -> [p+q]`.
pub fn back_face(p: usize, q: usize) -> MonotoneMap {
    MonotoneMap {
        values: (p..=p + q).collect(),
        target: p + q,
    }
}

/// All nondecreasing sequences of length `p+1` in `[q]`, lexicographically.
pub fn all_simplices(q: usize, p: usize) -> Vec<Simplex> {
    fn go(q: usize, len: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Simplex>) {
        if cur.len() == len {
            out.push(MonotoneMap::new_unchecked(cur.clone(), q));
            return;
        }
        for v in start..=q {
            cur.push(v);
            go(q, len, v, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(q, p + 1, 0, &mut Vec::with_capacity(p + 1), &mut out);
    out
}

/// All strictly increasing sequences of length `p+1` in `[q]`, lexicographically.
pub fn injective_simplices(q: usize, p: usize) -> Vec<Simplex> {
    fn go(q: usize, len: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Simplex>) {
        if cur.len() == len {
            out.push(MonotoneMap::new_unchecked(cur.clone(), q));
            return;
        }
        for v in start..=q {
            cur.push(v);
            go(q, len, v + 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if p <= q {
        go(q, p + 1, 0, &mut Vec::with_capacity(p + 1), &mut out);
    }
    out
}

/// The horn `Λ^q_i ⊂ Δ^q`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HornId {
    q: usize,
    i: usize,
}

impl HornId {
    pub fn new(q: usize, i: usize) -> Result<Self, SimplexError> {
        if q == 0 {
            return Err(SimplexError::NoHornInDimensionZero);
        }
        if i > q {
            return Err(SimplexError::ApexOutOfRange { q, i });
        }
        Ok(HornId { q, i })
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn i(&self) -> usize {
        self.i
    }

    /// Membership: `image(s) ∪ {i} ≠ [q]`.
    pub fn contains(&self, s: &Simplex) -> Result<bool, SimplexError> {
        if s.target_dim() != self.q {
            return Err(SimplexError::WrongTarget {
                expected: self.q,
                found: s.target_dim(),
            });
        }
        Ok(self.contains_unchecked(s))
    }

    fn contains_unchecked(&self, s: &Simplex) -> bool {
        let mut hit = vec![false; self.q + 1];
        hit[self.i] = true;
        for &v in s.values() {
            hit[v] = true;
        }
        !hit.iter().all(|&h| h)
    }
}

impl fmt::Display for HornId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Λ^{}_{}", self.q, self.i)
    }
}

pub fn horn_contains(h: HornId, s: &Simplex) -> Result<bool, SimplexError> {
    h.contains(s)
}

/// One of the simplicial subsets of `Δ^q` the crate works with.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Space {
    Delta(usize),
    Horn(HornId),
}

impl Space {
    /// The ambient `q` with `self ⊂ Δ^q`.
    pub fn ambient_dim(&self) -> usize {
        match self {
            Space::Delta(q) => *q,
            Space::Horn(h) => h.q,
        }
    }

    /// Whether `s` (a simplex of the ambient `Δ^q`) lies in this space.
    pub fn contains(&self, s: &Simplex) -> bool {
        if s.target_dim() != self.ambient_dim() {
            return false;
        }
        match self {
            Space::Delta(_) => true,
            Space::Horn(h) => h.contains_unchecked(s),
        }
    }

    /// All `p`-simplices, degenerate ones included.
    pub fn simplices(&self, p: usize) -> Vec<Simplex> {
        let mut all = all_simplices(self.ambient_dim(), p);
        all.retain(|s| self.contains(s));
        all
    }

    /// The nondegenerate `p`-simplices in lexicographic order.
    pub fn nondegenerate(&self, p: usize) -> Vec<Simplex> {
        let mut all = injective_simplices(self.ambient_dim(), p);
        all.retain(|s| self.contains(s));
        all
    }

    /// Nondegenerate simplices of every dimension, ordered by dimension
    /// and then lexicographically.
    pub fn all_nondegenerate(&self) -> Vec<Simplex> {
        (0..=self.ambient_dim()).flat_map(|p| self.nondegenerate(p)).collect()
    }
}

impl fmt::Display for Space {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Space::Delta(q) => write!(f, "Δ^{q}"),
            Space::Horn(h) => write!(f, "{h}"),
        }
    }
}

pub fn nondegenerate_simplices(space: Space, p: usize) -> Vec<Simplex> {
    space.nondegenerate(p)
}

/// The diagram `J` presenting a horn as a colimit of standard simplices:
/// one copy of `Δ^{q-1}` per `j ∈ J0` glued along copies of `Δ^{q-2}`
/// indexed by `J1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HornDiagram {
    horn: HornId,
    j0: Vec<usize>,
    j1: Vec<(usize, usize)>,
}

impl HornDiagram {
    pub fn new(horn: HornId) -> Self {
        let j0: Vec<usize> = (0..=horn.q).filter(|&j| j != horn.i).collect();
        let mut j1 = Vec::new();
        for (a, &k) in j0.iter().enumerate() {
            for &l in &j0[a + 1..] {
                j1.push((k, l));
            }
        }
        HornDiagram { horn, j0, j1 }
    }

    pub fn horn(&self) -> HornId {
        self.horn
    }

    pub fn j0(&self) -> &[usize] {
        &self.j0
    }

    pub fn j1(&self) -> &[(usize, usize)] {
        &self.j1
    }

    /// `α_j = ∂^j : [q-1] -> [q]`.
    pub fn alpha(&self, j: usize) -> MonotoneMap {
        coface(j, self.horn.q).expect("j ∈ J0")
    }

    /// `β_{k,l} : [q-2] -> [q-1]`, the unique map with `α_k ∘ β_{k,l}`
    /// missing `k` and `l`. Since `∂^k` shifts `l` down by one, this is
    /// `∂^{l-1}`.
    pub fn beta(&self, _k: usize, l: usize) -> MonotoneMap {
        coface(l - 1, self.horn.q - 1).expect("pair in J1")
    }

    /// `γ_{k,l} = ∂^k : [q-2] -> [q-1]`.
    pub fn gamma(&self, k: usize, _l: usize) -> MonotoneMap {
        coface(k, self.horn.q - 1).expect("pair in J1")
    }
}

pub fn horn_diagram(h: HornId) -> HornDiagram {
    HornDiagram::new(h)
}

/// Outcome of the brute-force coequalizer check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoequalizerReport {
    pub horn: HornId,
    pub max_dim: usize,
    /// First failure among all simplices, if any.
    pub full: Option<String>,
    /// First failure among nondegenerate simplices, if any.
    pub nondegenerate: Option<String>,
}

impl CoequalizerReport {
    pub fn passed(&self) -> bool {
        self.full.is_none() && self.nondegenerate.is_none()
    }
}

/// Checks, dimension by dimension up to `max_dim`, that
/// `∐_{J1} Δ^{q-2} ⇉ ∐_{J0} Δ^{q-1} -> Λ^q_i` is a coequalizer of sets,
/// both on all simplices and on nondegenerate ones.
pub fn check_coequalizer(h: HornId, max_dim: usize) -> CoequalizerReport {
    let diagram = HornDiagram::new(h);
    let full = (0..=max_dim).find_map(|p| coequalizer_failure(&diagram, p, false));
    let nondegenerate = (0..=max_dim).find_map(|p| coequalizer_failure(&diagram, p, true));
    CoequalizerReport {
        horn: h,
        max_dim,
        full,
        nondegenerate,
    }
}

fn coequalizer_failure(diagram: &HornDiagram, p: usize, nd_only: bool) -> Option<String> {
    let h = diagram.horn;
    let q = h.q;
    let space = Space::Horn(h);
    let source = |dim: usize| {
        if nd_only {
            injective_simplices(dim, p)
        } else {
            all_simplices(dim, p)
        }
    };

    // the fork commutes
    if q >= 2 {
        for &(k, l) in diagram.j1() {
            for z in source(q - 2) {
                let via_k = diagram.alpha(k).compose(&diagram.beta(k, l).compose(&z).ok()?).ok()?;
                let via_l = diagram.alpha(l).compose(&diagram.gamma(k, l).compose(&z).ok()?).ok()?;
                if via_k != via_l {
                    return Some(format!("fork does not commute at ({k},{l}) on {z}"));
                }
            }
        }
    }

    let mut preimages: std::collections::BTreeMap<Simplex, Vec<(usize, Simplex)>> = Default::default();
    for &j in diagram.j0() {
        for x in source(q - 1) {
            let y = diagram.alpha(j).compose(&x).ok()?;
            if !space.contains(&y) {
                return Some(format!("α_{j}({x}) = {y} lies outside {h}"));
            }
            if nd_only && !y.is_nondegenerate() {
                return Some(format!("α_{j}({x}) = {y} is degenerate"));
            }
            preimages.entry(y).or_default().push((j, x));
        }
    }
    let targets = if nd_only {
        space.nondegenerate(p)
    } else {
        space.simplices(p)
    };
    for y in &targets {
        let Some(pre) = preimages.get(y) else {
            return Some(format!("{y} is not in the image of α"));
        };
        for (a, (j, x)) in pre.iter().enumerate() {
            for (j2, x2) in &pre[a + 1..] {
                if j == j2 {
                    return Some(format!("α_{j} identifies {x} and {x2}"));
                }
                let (k, l) = (*j.min(j2), *j.max(j2));
                let (xk, xl) = if j < j2 { (x, x2) } else { (x2, x) };
                let witness = source(q - 2).into_iter().any(|z| {
                    diagram.beta(k, l).compose(&z).ok().as_ref() == Some(xk)
                        && diagram.gamma(k, l).compose(&z).ok().as_ref() == Some(xl)
                });
                if !witness {
                    return Some(format!("no β/γ witness for α_{k}({xk}) = α_{l}({xl}) = {y}"));
                }
            }
        }
    }
    None
}
