//! The DG rings `N(X, B)` for `X` a standard simplex or a horn.
//!
//! `N(X, B)` is built on the nondegenerate simplices of `X`: the delta
//! functions `δ_y` form a basis of the normalized cochains, the
//! differential is the alternating sum over cofaces and the product is
//! the Alexander–Whitney front/back split. Coefficients in `B` enter by the
//! graded tensor product, so basis ids read `"(0,1)|b"`.
//!
//! [`normalization_oracle`] recomputes the same structure the long way,
//! from all simplices (degenerate ones included) and kernels of
//! codegeneracies, and [`coalgebra_duality_check`] recomputes it as the
//! dual of the chain-level Alexander–Whitney coalgebra.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::dg::{sign, tensor, BasisDGRing, DGRingHom, DgError, Element, RingBuilder};
use crate::linalg::{smith, IntMatrix};
use crate::simplex::{coface, HornDiagram, HornId, MonotoneMap, Simplex, SimplexError, Space};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NerveError {
    #[error("unsupported simplicial map: {0}")]
    UnsupportedMap(String),
    #[error("ring mismatch: {0}")]
    RingMismatch(String),
    #[error(transparent)]
    Simplex(#[from] SimplexError),
    #[error(transparent)]
    Dg(#[from] DgError),
}

/// `R(X^nd, ℤ)`: delta functions on nondegenerate simplices with the
/// coface differential and Alexander–Whitney product.
pub fn simplicial_cochains(space: Space) -> BasisDGRing {
    let simplices = space.all_nondegenerate();
    let mut b = RingBuilder::new();
    for y in &simplices {
        b.symbol(y.to_string(), y.source_dim() as i64);
    }
    for v in simplices.iter().filter(|y| y.source_dim() == 0) {
        b.unit(v.to_string(), 1);
    }
    for z in simplices.iter().filter(|z| z.source_dim() > 0) {
        for i in 0..=z.source_dim() {
            let y = z.face(i).expect("positive dimension");
            b.diff(y.to_string(), z.to_string(), sign(i as i64));
        }
    }
    for w in &simplices {
        let values = w.values();
        for p in 0..values.len() {
            let front = MonotoneMap::new(values[..=p].to_vec(), w.target_dim()).expect("subsequence");
            let back = MonotoneMap::new(values[p..].to_vec(), w.target_dim()).expect("subsequence");
            b.mul(front.to_string(), back.to_string(), w.to_string(), 1);
        }
    }
    b.build().expect("cochains of a simplicial subset are well formed")
}

/// `N(X, B)` with its simplex/coefficient bookkeeping.
#[derive(Clone, Debug)]
pub struct NerveRing {
    space: Space,
    coeff: Arc<BasisDGRing>,
    simplices: Vec<Simplex>,
    ring: Arc<BasisDGRing>,
    // (simplex position, coefficient index) -> ring index
    index: HashMap<(usize, usize), usize>,
    parts: Vec<(usize, usize)>,
}

impl NerveRing {
    pub fn new(space: Space, coeff: Arc<BasisDGRing>) -> Self {
        let ring = Arc::new(tensor(&simplicial_cochains(space), &coeff));
        let simplices = space.all_nondegenerate();
        let mut index = HashMap::new();
        let mut parts = vec![(0, 0); ring.dim()];
        for (s, y) in simplices.iter().enumerate() {
            for (c, sym) in coeff.basis().iter().enumerate() {
                let k = ring
                    .index_of(&format!("{y}|{}", sym.id))
                    .expect("tensor basis covers every pair");
                index.insert((s, c), k);
                parts[k] = (s, c);
            }
        }
        NerveRing {
            space,
            coeff,
            simplices,
            ring,
            index,
            parts,
        }
    }

    pub fn space(&self) -> Space {
        self.space
    }

    pub fn coeff(&self) -> &Arc<BasisDGRing> {
        &self.coeff
    }

    pub fn ring(&self) -> &Arc<BasisDGRing> {
        &self.ring
    }

    /// Nondegenerate simplices, by dimension then lexicographically.
    pub fn simplices(&self) -> &[Simplex] {
        &self.simplices
    }

    pub fn simplex_position(&self, y: &Simplex) -> Option<usize> {
        self.simplices.iter().position(|s| s == y)
    }

    /// Ring index of `δ_y ⊗ b`.
    pub fn symbol(&self, y: &Simplex, coeff_index: usize) -> Option<usize> {
        let s = self.simplex_position(y)?;
        self.index.get(&(s, coeff_index)).copied()
    }

    /// `(simplex, coefficient index)` of a ring index.
    pub fn parts(&self, index: usize) -> (&Simplex, usize) {
        let (s, c) = self.parts[index];
        (&self.simplices[s], c)
    }

    /// `δ_y ⊗ 1_B`.
    pub fn delta(&self, y: &Simplex) -> Option<Element> {
        let s = self.simplex_position(y)?;
        let mut e = Element::zero();
        for (c, coef) in self.coeff.unit().terms() {
            e.add_term(self.index[&(s, c)], coef.clone());
        }
        Some(e)
    }
}

pub fn nerve_ring(space: Space, coeff: Arc<BasisDGRing>) -> NerveRing {
    NerveRing::new(space, coeff)
}

/// `Cyl_q(B) = N(Δ^q, B)`.
pub fn cyl(q: usize, coeff: Arc<BasisDGRing>) -> NerveRing {
    NerveRing::new(Space::Delta(q), coeff)
}

/// The simplicial maps between simplices and horns that induced
/// homomorphisms are defined for.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SimplicialMap {
    /// `Δ^p -> Δ^q` induced by a monotone `[p] -> [q]`.
    Monotone(MonotoneMap),
    /// `Λ^q_i ↪ Δ^q`.
    HornInclusion(HornId),
    /// `∂^j : Δ^{q-1} -> Λ^q_i`, for `j ≠ i`.
    HornFace(HornId, usize),
}

impl SimplicialMap {
    pub fn horn_face(h: HornId, j: usize) -> Result<Self, NerveError> {
        if j > h.q() || j == h.i() {
            return Err(NerveError::UnsupportedMap(format!("∂^{j} does not land in {h}")));
        }
        Ok(SimplicialMap::HornFace(h, j))
    }

    /// Classifies `theta` viewed as a map `source -> target`.
    pub fn classify(source: Space, target: Space, theta: MonotoneMap) -> Result<Self, NerveError> {
        let unsupported = || NerveError::UnsupportedMap(format!("{theta} as a map {source} -> {target}"));
        if theta.source_dim() != source.ambient_dim() || theta.target_dim() != target.ambient_dim() {
            return Err(unsupported());
        }
        match (source, target) {
            (Space::Delta(_), Space::Delta(_)) => Ok(SimplicialMap::Monotone(theta)),
            (Space::Horn(h), Space::Delta(q)) if h.q() == q && theta == MonotoneMap::identity(q) => {
                Ok(SimplicialMap::HornInclusion(h))
            }
            (Space::Delta(p), Space::Horn(h)) if p + 1 == h.q() => {
                let j = (0..=h.q())
                    .find(|&j| coface(j, h.q()).ok().as_ref() == Some(&theta))
                    .ok_or_else(unsupported)?;
                SimplicialMap::horn_face(h, j)
            }
            _ => Err(unsupported()),
        }
    }

    pub fn source_space(&self) -> Space {
        match self {
            SimplicialMap::Monotone(theta) => Space::Delta(theta.source_dim()),
            SimplicialMap::HornInclusion(h) => Space::Horn(*h),
            SimplicialMap::HornFace(h, _) => Space::Delta(h.q() - 1),
        }
    }

    pub fn target_space(&self) -> Space {
        match self {
            SimplicialMap::Monotone(theta) => Space::Delta(theta.target_dim()),
            SimplicialMap::HornInclusion(h) => Space::Delta(h.q()),
            SimplicialMap::HornFace(h, _) => Space::Horn(*h),
        }
    }

    /// The underlying monotone map on vertices.
    pub fn vertex_map(&self) -> MonotoneMap {
        match self {
            SimplicialMap::Monotone(theta) => theta.clone(),
            SimplicialMap::HornInclusion(h) => MonotoneMap::identity(h.q()),
            SimplicialMap::HornFace(h, j) => coface(*j, h.q()).expect("validated"),
        }
    }
}

/// Pullback of normalized cochains along `map`:
/// `δ_y ⊗ b ↦ Σ_{x nondegenerate, map(x) = y} δ_x ⊗ b`, as a hom
/// `from -> to` where `from` lives on the target space of `map`.
pub fn induced_hom(map: &SimplicialMap, from: &NerveRing, to: &NerveRing) -> Result<DGRingHom, NerveError> {
    if from.space != map.target_space() || to.space != map.source_space() {
        return Err(NerveError::RingMismatch(format!(
            "map {} -> {} between rings on {} and {}",
            map.source_space(),
            map.target_space(),
            to.space,
            from.space
        )));
    }
    if *from.coeff != *to.coeff {
        return Err(NerveError::RingMismatch("different coefficient rings".into()));
    }
    let theta = map.vertex_map();
    let mut images = vec![Element::zero(); from.ring.dim()];
    for (s, x) in to.simplices.iter().enumerate() {
        let y = theta.compose(x)?;
        let Some(t) = from.simplex_position(&y) else {
            continue;
        };
        for c in 0..from.coeff.dim() {
            images[from.index[&(t, c)]].add_term(to.index[&(s, c)], BigInt::one());
        }
    }
    Ok(DGRingHom::new(from.ring.clone(), to.ring.clone(), images)?)
}

/// The cylinder rings `Cyl_0(B), …, Cyl_n(B)` and their structure maps.
#[derive(Clone, Debug)]
pub struct CylinderFamily {
    rings: Vec<NerveRing>,
}

impl CylinderFamily {
    pub fn new(max_q: usize, coeff: Arc<BasisDGRing>) -> Self {
        CylinderFamily {
            rings: (0..=max_q).map(|q| cyl(q, coeff.clone())).collect(),
        }
    }

    pub fn max_q(&self) -> usize {
        self.rings.len() - 1
    }

    pub fn ring(&self, q: usize) -> &NerveRing {
        &self.rings[q]
    }

    /// `Cyl(θ) : Cyl_q(B) -> Cyl_p(B)` for `θ : [p] -> [q]`.
    pub fn structure_map(&self, theta: &MonotoneMap) -> Result<DGRingHom, NerveError> {
        let (p, q) = (theta.source_dim(), theta.target_dim());
        if p > self.max_q() || q > self.max_q() {
            return Err(NerveError::UnsupportedMap(format!(
                "{theta} exceeds the family bound {}",
                self.max_q()
            )));
        }
        induced_hom(&SimplicialMap::Monotone(theta.clone()), &self.rings[q], &self.rings[p])
    }

    /// Face map `d_j = Cyl(∂^j) : Cyl_q -> Cyl_{q-1}`.
    pub fn face(&self, q: usize, j: usize) -> Result<DGRingHom, NerveError> {
        self.structure_map(&coface(j, q)?)
    }

    /// Degeneracy map `s_j = Cyl(σ^j) : Cyl_q -> Cyl_{q+1}`.
    pub fn degeneracy(&self, q: usize, j: usize) -> Result<DGRingHom, NerveError> {
        self.structure_map(&crate::simplex::codegeneracy(j, q)?)
    }
}

pub fn simplicial_structure(max_q: usize, coeff: Arc<BasisDGRing>) -> CylinderFamily {
    CylinderFamily::new(max_q, coeff)
}

/// The normalized cochains of a space computed from scratch: all
/// simplices, the kernel of the codegeneracies, and the coboundary and
/// Alexander–Whitney product evaluated on functions.
#[derive(Clone, Debug)]
pub struct NormalizedCochains {
    pub space: Space,
    pub max_p: usize,
    pub levels: Vec<NormalizedLevel>,
    /// `d(δ_x)` read off on nondegenerate simplices, for `x` of dimension `< max_p`.
    pub diff: BTreeMap<Simplex, Vec<(Simplex, BigInt)>>,
    /// `δ_x * δ_y` read off on nondegenerate simplices, for `dim x + dim y ≤ max_p`.
    pub products: BTreeMap<(Simplex, Simplex), Vec<(Simplex, BigInt)>>,
    /// Functions that should vanish on degenerate simplices but do not.
    pub not_normalized: Vec<String>,
}

#[derive(Clone, Debug)]
pub struct NormalizedLevel {
    pub p: usize,
    /// All `p`-simplices, degenerate ones included.
    pub simplices: Vec<Simplex>,
    /// A ℤ-basis of `⋂_j ker(s^j) ⊂ Hom(X_p, ℤ)`.
    pub basis: Vec<Vec<BigInt>>,
    /// Whether the delta functions of nondegenerate simplices form a
    /// ℤ-basis of the same lattice.
    pub spanned_by_deltas: bool,
}

impl NormalizedLevel {
    pub fn rank(&self) -> usize {
        self.basis.len()
    }
}

fn delta_function(simplices: &[Simplex], x: &Simplex) -> Vec<BigInt> {
    simplices
        .iter()
        .map(|s| if s == x { BigInt::one() } else { BigInt::zero() })
        .collect()
}

/// Normalized cochains of `space` in dimensions `0..=max_p`.
pub fn normalization_oracle(space: Space, max_p: usize) -> NormalizedCochains {
    let levels: Vec<NormalizedLevel> = (0..=max_p + 1).map(|p| normalized_level(space, p)).collect();
    let position = |p: usize, s: &Simplex| levels[p].simplices.iter().position(|t| t == s);
    let mut not_normalized = Vec::new();
    let read_off = |p: usize, f: &[BigInt], what: &str, bad: &mut Vec<String>| {
        let mut out = Vec::new();
        for (s, c) in levels[p].simplices.iter().zip(f) {
            if c.is_zero() {
                continue;
            }
            if s.is_nondegenerate() {
                out.push((s.clone(), c.clone()));
            } else {
                bad.push(format!("{what} is nonzero on degenerate {s}"));
            }
        }
        out
    };

    let mut diff = BTreeMap::new();
    for p in 0..max_p {
        let next = &levels[p + 1].simplices;
        for x in levels[p].simplices.iter().filter(|s| s.is_nondegenerate()) {
            let f = delta_function(&levels[p].simplices, x);
            // (d f)(z) = Σ_i (-1)^i f(d_i z)
            let df: Vec<BigInt> = next
                .iter()
                .map(|z| {
                    (0..=p + 1)
                        .map(|i| {
                            let face = z.face(i).expect("positive dimension");
                            let k = position(p, &face).expect("faces stay in the space");
                            &f[k] * sign(i as i64)
                        })
                        .sum()
                })
                .collect();
            let entry = read_off(p + 1, &df, &format!("d(δ_{x})"), &mut not_normalized);
            diff.insert(x.clone(), entry);
        }
    }

    let mut products = BTreeMap::new();
    for p in 0..=max_p {
        for r in 0..=max_p - p {
            for x in levels[p].simplices.iter().filter(|s| s.is_nondegenerate()) {
                for y in levels[r].simplices.iter().filter(|s| s.is_nondegenerate()) {
                    // (f * g)(w) = f(front_p w) · g(back_r w)
                    let fg: Vec<BigInt> = levels[p + r]
                        .simplices
                        .iter()
                        .map(|w| {
                            let v = w.values();
                            let front = &v[..=p];
                            let back = &v[p..];
                            if front == x.values() && back == y.values() {
                                BigInt::one()
                            } else {
                                BigInt::zero()
                            }
                        })
                        .collect();
                    let entry = read_off(p + r, &fg, &format!("δ_{x} * δ_{y}"), &mut not_normalized);
                    products.insert((x.clone(), y.clone()), entry);
                }
            }
        }
    }
    NormalizedCochains {
        space,
        max_p,
        levels: levels.into_iter().take(max_p + 1).collect(),
        diff,
        products,
        not_normalized,
    }
}

fn normalized_level(space: Space, p: usize) -> NormalizedLevel {
    let simplices = space.simplices(p);
    let basis = if p == 0 {
        (0..simplices.len())
            .map(|k| {
                let mut v = vec![BigInt::zero(); simplices.len()];
                v[k] = BigInt::one();
                v
            })
            .collect()
    } else {
        // (s^j f)(x) = f(s_j x) for x ∈ X_{p-1}; stack all j
        let lower = space.simplices(p - 1);
        let mut stacked = IntMatrix::zeros(p * lower.len(), simplices.len());
        for j in 0..p {
            for (r, x) in lower.iter().enumerate() {
                let sx = x.degeneracy(j).expect("index in range");
                let c = simplices
                    .iter()
                    .position(|s| *s == sx)
                    .expect("degeneracies stay in the space");
                stacked.set(j * lower.len() + r, c, BigInt::one());
            }
        }
        smith(&stacked).kernel_basis()
    };
    let deltas: Vec<Vec<BigInt>> = simplices
        .iter()
        .filter(|s| s.is_nondegenerate())
        .map(|x| delta_function(&simplices, x))
        .collect();
    let spanned_by_deltas = deltas.len() == basis.len() && same_lattice(&basis, &deltas, simplices.len());
    NormalizedLevel {
        p,
        simplices,
        basis,
        spanned_by_deltas,
    }
}

/// Whether two families of vectors span the same sublattice of `ℤ^n`.
pub(crate) fn same_lattice(a: &[Vec<BigInt>], b: &[Vec<BigInt>], n: usize) -> bool {
    let spans = |gens: &[Vec<BigInt>], vs: &[Vec<BigInt>]| {
        let m = IntMatrix::from_columns(n, gens);
        let snf = smith(&m);
        vs.iter().all(|v| snf.solve(v).is_some())
    };
    spans(a, b) && spans(b, a)
}

/// Comparison of the oracle with the delta-function model.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct OracleReport {
    pub mismatches: Vec<String>,
    pub diff_constants: usize,
    pub product_constants: usize,
}

impl OracleReport {
    pub fn passed(&self) -> bool {
        self.mismatches.is_empty()
    }
}

impl NormalizedCochains {
    /// Compares ranks, the delta basis, and every differential and product
    /// constant with `N(X, ℤ)` built from nondegenerate simplices.
    pub fn compare(&self, model: &NerveRing) -> OracleReport {
        let mut report = OracleReport::default();
        report.mismatches.extend(self.not_normalized.iter().cloned());
        let ring = model.ring();
        if model.space() != self.space || model.coeff().dim() != 1 {
            report.mismatches.push("model is not N(X, ℤ) on the same space".into());
            return report;
        }
        for level in &self.levels {
            let nd = self.space.nondegenerate(level.p).len();
            if level.rank() != nd {
                report
                    .mismatches
                    .push(format!("rank of N^{} is {}, expected {nd}", level.p, level.rank()));
            }
            if !level.spanned_by_deltas {
                report
                    .mismatches
                    .push(format!("N^{} is not spanned by delta functions", level.p));
            }
        }
        let to_element = |terms: &[(Simplex, BigInt)]| -> Element {
            Element::from_terms(terms.iter().map(|(s, c)| {
                (
                    model.symbol(s, 0).expect("nondegenerate simplex of the space"),
                    c.clone(),
                )
            }))
        };
        for (x, terms) in &self.diff {
            report.diff_constants += 1;
            let expected = ring.d(&Element::basis(model.symbol(x, 0).expect("symbol")));
            if to_element(terms) != expected {
                report.mismatches.push(format!(
                    "d(δ_{x}): oracle {} vs model {}",
                    ring.show(&to_element(terms)),
                    ring.show(&expected)
                ));
            }
        }
        for ((x, y), terms) in &self.products {
            report.product_constants += 1;
            let expected = ring.mul(
                &Element::basis(model.symbol(x, 0).expect("symbol")),
                &Element::basis(model.symbol(y, 0).expect("symbol")),
            );
            if to_element(terms) != expected {
                report.mismatches.push(format!(
                    "δ_{x} * δ_{y}: oracle {} vs model {}",
                    ring.show(&to_element(terms)),
                    ring.show(&expected)
                ));
            }
        }
        report
    }
}

/// Result of dualizing the chain-level coalgebra of nondegenerate simplices.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DualityReport {
    pub failures: Vec<String>,
    pub pairings_checked: usize,
}

impl DualityReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

type Chain = BTreeMap<Simplex, BigInt>;
type Chain2 = BTreeMap<(Simplex, Simplex), BigInt>;

fn add_chain<K: Ord + Clone>(c: &mut BTreeMap<K, BigInt>, k: K, v: BigInt) {
    let e = c.entry(k.clone()).or_insert_with(BigInt::zero);
    *e += v;
    if e.is_zero() {
        c.remove(&k);
    }
}

fn boundary(y: &Simplex) -> Chain {
    let mut out = Chain::new();
    if y.source_dim() > 0 {
        for i in 0..=y.source_dim() {
            add_chain(
                &mut out,
                y.face(i).expect("positive dimension"),
                BigInt::from(sign(i as i64)),
            );
        }
    }
    out
}

fn split(y: &Simplex, i: usize) -> (Simplex, Simplex) {
    let v = y.values();
    (
        MonotoneMap::new(v[..=i].to_vec(), y.target_dim()).expect("subsequence"),
        MonotoneMap::new(v[i..].to_vec(), y.target_dim()).expect("subsequence"),
    )
}

fn comultiply(y: &Simplex) -> Chain2 {
    let mut out = Chain2::new();
    for i in 0..=y.source_dim() {
        add_chain(&mut out, split(y, i), BigInt::one());
    }
    out
}

/// Builds the chain coalgebra `ℤ ⊗ Y` on nondegenerate simplices up to
/// `max_p`, checks `∂² = 0`, coassociativity and the coderivation rule,
/// and checks that dualizing reproduces the differential and product of
/// [`simplicial_cochains`].
pub fn coalgebra_duality_check(space: Space, max_p: usize) -> DualityReport {
    let mut report = DualityReport::default();
    let ring = simplicial_cochains(space);
    let simplices: Vec<Simplex> = (0..=max_p.min(space.ambient_dim()))
        .flat_map(|p| space.nondegenerate(p))
        .collect();
    let idx = |s: &Simplex| ring.index_of(&s.to_string()).expect("simplex of the space");

    for y in &simplices {
        // ∂∂ = 0
        let mut dd = Chain::new();
        for (z, c) in boundary(y) {
            for (w, c2) in boundary(&z) {
                add_chain(&mut dd, w, &c * c2);
            }
        }
        if !dd.is_empty() {
            report.failures.push(format!("∂∂{y} ≠ 0"));
        }

        // (AW ⊗ 1)AW = (1 ⊗ AW)AW
        let mut left = BTreeMap::<(Simplex, Simplex, Simplex), BigInt>::new();
        let mut right = left.clone();
        for ((a, b), c) in comultiply(y) {
            for ((a1, a2), c1) in comultiply(&a) {
                add_chain(&mut left, (a1, a2, b.clone()), &c * c1);
            }
            for ((b1, b2), c1) in comultiply(&b) {
                add_chain(&mut right, (a.clone(), b1, b2), &c * c1);
            }
        }
        if left != right {
            report.failures.push(format!("AW is not coassociative on {y}"));
        }

        // AW∂ = (∂ ⊗ 1 + 1 ⊗ ∂)AW with the Koszul sign on the second term
        let mut lhs = Chain2::new();
        for (z, c) in boundary(y) {
            for (pair, c2) in comultiply(&z) {
                add_chain(&mut lhs, pair, &c * c2);
            }
        }
        let mut rhs = Chain2::new();
        for ((a, b), c) in comultiply(y) {
            for (a2, c2) in boundary(&a) {
                add_chain(&mut rhs, (a2, b.clone()), &c * c2);
            }
            let s = BigInt::from(sign(a.source_dim() as i64));
            for (b2, c2) in boundary(&b) {
                add_chain(&mut rhs, (a.clone(), b2), &c * c2 * &s);
            }
        }
        if lhs != rhs {
            report.failures.push(format!("∂ is not a coderivation on {y}"));
        }

        // duality: (dδ_x)(y) = δ_x(∂y) and (δ_a * δ_b)(y) = (δ_a ⊗ δ_b)(AW y)
        for (x, c) in boundary(y) {
            report.pairings_checked += 1;
            if ring.diff_of(idx(&x)).coeff(idx(y)) != c {
                report.failures.push(format!("d(δ_{x}) disagrees with ∂ at {y}"));
            }
        }
        for x in simplices.iter().filter(|x| x.source_dim() + 1 == y.source_dim()) {
            if !boundary(y).contains_key(x) && !ring.diff_of(idx(x)).coeff(idx(y)).is_zero() {
                report.failures.push(format!("d(δ_{x}) has a spurious term at {y}"));
            }
        }
        let aw = comultiply(y);
        for a in &simplices {
            for b in &simplices {
                if a.source_dim() + b.source_dim() != y.source_dim() {
                    continue;
                }
                report.pairings_checked += 1;
                let dual = aw.get(&(a.clone(), b.clone())).cloned().unwrap_or_default();
                let model = ring
                    .product_of(idx(a), idx(b))
                    .map(|e| e.coeff(idx(y)))
                    .unwrap_or_default();
                if dual != model {
                    report.failures.push(format!("δ_{a} * δ_{b} disagrees with AW at {y}"));
                }
            }
        }
    }
    report
}

/// The diagram of a horn, re-exported for callers that only use this module.
pub fn diagram(h: HornId) -> HornDiagram {
    HornDiagram::new(h)
}
