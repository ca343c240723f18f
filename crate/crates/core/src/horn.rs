//! Horn rings `N(Λ^q_i, B)`, their presentation as a limit of cylinders,
//! and the restriction `v : Cyl_q(B) -> N(Λ^q_i, B)`.
//!
//! The restriction is certified to be a surjective quasi-isomorphism in
//! three independent ways, since the lifting algorithm is only correct
//! against such maps.

use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::Zero;
use thiserror::Error;

use crate::dg::{check_hom, BasisDGRing, DGRingHom, DgError, Element, RingBuilder};
use crate::linalg::{cohomology, is_surjective, smith, Cohomology, IntCochainComplex, IntMatrix};
use crate::nerve::{cyl, induced_hom, nerve_ring, same_lattice, NerveError, NerveRing, SimplicialMap};
use crate::simplex::{HornDiagram, HornId, SimplexError, Space};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HornError {
    #[error("∂^{j} is not a face of {horn}")]
    NotAFace { horn: HornId, j: usize },
    #[error("equalizer is not closed under {0}")]
    NotClosed(String),
    #[error("limit comparison failed: {0}")]
    Comparison(String),
    #[error(transparent)]
    Simplex(#[from] SimplexError),
    #[error(transparent)]
    Nerve(#[from] NerveError),
    #[error(transparent)]
    Dg(#[from] DgError),
}

/// Everything attached to one horn and one coefficient ring: the cylinder
/// `Cyl_q(B)`, the horn ring, the face cylinder `Cyl_{q-1}(B)` and the maps
/// between them.
#[derive(Clone, Debug)]
pub struct HornSetting {
    horn: HornId,
    diagram: HornDiagram,
    cylinder: NerveRing,
    horn_ring: NerveRing,
    face_cylinder: NerveRing,
    // Cyl_{q-2}(B); only present when q ≥ 2
    edge_cylinder: Option<NerveRing>,
}

impl HornSetting {
    pub fn new(horn: HornId, coeff: Arc<BasisDGRing>) -> Self {
        let q = horn.q();
        HornSetting {
            horn,
            diagram: HornDiagram::new(horn),
            cylinder: cyl(q, coeff.clone()),
            horn_ring: nerve_ring(Space::Horn(horn), coeff.clone()),
            face_cylinder: cyl(q - 1, coeff.clone()),
            edge_cylinder: (q >= 2).then(|| cyl(q - 2, coeff)),
        }
    }

    pub fn horn(&self) -> HornId {
        self.horn
    }

    pub fn diagram(&self) -> &HornDiagram {
        &self.diagram
    }

    pub fn coeff(&self) -> &Arc<BasisDGRing> {
        self.cylinder.coeff()
    }

    /// `Cyl_q(B)`.
    pub fn cylinder(&self) -> &NerveRing {
        &self.cylinder
    }

    /// `N(Λ^q_i, B)`.
    pub fn horn_ring(&self) -> &NerveRing {
        &self.horn_ring
    }

    /// `Cyl_{q-1}(B)`, the ring every face of the horn maps to.
    pub fn face_cylinder(&self) -> &NerveRing {
        &self.face_cylinder
    }

    pub fn edge_cylinder(&self) -> Option<&NerveRing> {
        self.edge_cylinder.as_ref()
    }

    /// `v : Cyl_q(B) -> N(Λ^q_i, B)`.
    pub fn restriction(&self) -> DGRingHom {
        induced_hom(
            &SimplicialMap::HornInclusion(self.horn),
            &self.cylinder,
            &self.horn_ring,
        )
        .expect("rings built for this horn")
    }

    fn check_face(&self, j: usize) -> Result<(), HornError> {
        if j > self.horn.q() || j == self.horn.i() {
            return Err(HornError::NotAFace { horn: self.horn, j });
        }
        Ok(())
    }

    /// Restriction along `α_j : Δ^{q-1} -> Λ^q_i`.
    pub fn face_restriction(&self, j: usize) -> Result<DGRingHom, HornError> {
        self.check_face(j)?;
        let map = SimplicialMap::horn_face(self.horn, j)?;
        Ok(induced_hom(&map, &self.horn_ring, &self.face_cylinder)?)
    }

    /// The cylinder face map `Cyl(∂^j) : Cyl_q(B) -> Cyl_{q-1}(B)`.
    pub fn cylinder_face(&self, j: usize) -> Result<DGRingHom, HornError> {
        let theta = crate::simplex::coface(j, self.horn.q())?;
        Ok(induced_hom(
            &SimplicialMap::Monotone(theta),
            &self.cylinder,
            &self.face_cylinder,
        )?)
    }

    fn edge_map(&self, theta: crate::simplex::MonotoneMap) -> DGRingHom {
        let edge = self.edge_cylinder.as_ref().expect("pairs exist only for q ≥ 2");
        induced_hom(&SimplicialMap::Monotone(theta), &self.face_cylinder, edge).expect("cofaces of the right size")
    }

    /// `Cyl(β_{k,l}) : Cyl_{q-1}(B) -> Cyl_{q-2}(B)`.
    pub fn beta_map(&self, k: usize, l: usize) -> DGRingHom {
        self.edge_map(self.diagram.beta(k, l))
    }

    /// `Cyl(γ_{k,l}) : Cyl_{q-1}(B) -> Cyl_{q-2}(B)`.
    pub fn gamma_map(&self, k: usize, l: usize) -> DGRingHom {
        self.edge_map(self.diagram.gamma(k, l))
    }
}

pub fn horn_nerve(q: usize, i: usize, coeff: Arc<BasisDGRing>) -> Result<NerveRing, HornError> {
    Ok(nerve_ring(Space::Horn(HornId::new(q, i)?), coeff))
}

pub fn restriction_hom(q: usize, i: usize, coeff: Arc<BasisDGRing>) -> Result<DGRingHom, HornError> {
    Ok(HornSetting::new(HornId::new(q, i)?, coeff).restriction())
}

pub fn face_restriction(q: usize, i: usize, j: usize, coeff: Arc<BasisDGRing>) -> Result<DGRingHom, HornError> {
    HornSetting::new(HornId::new(q, i)?, coeff).face_restriction(j)
}

/// Columns of a matrix, as a list of vectors.
fn columns(m: &IntMatrix) -> Vec<Vec<BigInt>> {
    (0..m.cols()).map(|c| m.column(c)).collect()
}

/// The subcomplex `ker v` in the kernel bases of each degree.
#[derive(Clone, Debug)]
pub struct KernelComplex {
    pub start: i64,
    /// Per degree, a ℤ-basis of `ker v` as columns in source coordinates.
    pub bases: Vec<IntMatrix>,
    pub complex: IntCochainComplex,
}

/// Kernel bases per degree and the differential restricted to them.
pub fn kernel_complex(v: &DGRingHom) -> Option<KernelComplex> {
    let src = v.source();
    let Some((lo, hi)) = src.degree_range() else {
        return Some(KernelComplex {
            start: 0,
            bases: Vec::new(),
            complex: IntCochainComplex::new(0, vec![], vec![]).expect("empty complex"),
        });
    };
    let bases: Vec<IntMatrix> = (lo..=hi)
        .map(|k| {
            let basis = smith(&v.degree_block(k)).kernel_basis();
            IntMatrix::from_columns(src.rank_in(k), &basis)
        })
        .collect();
    let diffs = (lo..hi)
        .map(|k| {
            let (from, to) = (&bases[(k - lo) as usize], &bases[(k - lo + 1) as usize]);
            let image = src.differential_matrix(k).mul(from).expect("shapes");
            let snf = smith(to);
            // fails only when v does not commute with d
            let cols: Vec<Vec<BigInt>> = columns(&image).iter().map(|c| snf.solve(c)).collect::<Option<_>>()?;
            Some(IntMatrix::from_columns(to.cols(), &cols))
        })
        .collect::<Option<Vec<_>>>()?;
    let ranks = bases.iter().map(IntMatrix::cols).collect();
    Some(KernelComplex {
        start: lo,
        bases,
        complex: IntCochainComplex::new(lo, ranks, diffs).ok()?,
    })
}

/// The three verdicts on a candidate surjective quasi-isomorphism.
#[derive(Clone, Debug)]
pub struct QuasiIsoCertificate {
    /// Degreewise surjectivity over ℤ.
    pub surjective: Vec<(i64, bool)>,
    pub kernel_ranks: Vec<(i64, usize)>,
    /// `None` when `ker v` is not a subcomplex.
    pub kernel_cohomology: Option<Cohomology>,
    pub source_cohomology: Cohomology,
    pub target_cohomology: Cohomology,
    /// `check_hom` violations, rendered.
    pub hom_violations: Vec<String>,
}

impl QuasiIsoCertificate {
    pub fn is_surjective(&self) -> bool {
        self.surjective.iter().all(|(_, ok)| *ok)
    }

    pub fn kernel_acyclic(&self) -> bool {
        self.kernel_cohomology.as_ref().is_some_and(Cohomology::is_acyclic)
    }

    pub fn cohomology_agrees(&self) -> bool {
        self.source_cohomology.isomorphic_to(&self.target_cohomology)
    }

    pub fn passed(&self) -> bool {
        self.hom_violations.is_empty() && self.is_surjective() && self.kernel_acyclic() && self.cohomology_agrees()
    }
}

pub fn certify_surjective_quasi_iso(v: &DGRingHom) -> QuasiIsoCertificate {
    let src = v.source();
    let tgt = v.target();
    let mut degrees: Vec<i64> = src.degrees().chain(tgt.degrees()).collect();
    degrees.sort_unstable();
    degrees.dedup();
    let surjective = degrees
        .iter()
        .map(|&k| (k, is_surjective(&v.degree_block(k))))
        .collect();
    let kernel = kernel_complex(v);
    QuasiIsoCertificate {
        surjective,
        kernel_ranks: kernel
            .as_ref()
            .map(|k| k.complex.degrees().map(|d| (d, k.complex.rank_in(d))).collect())
            .unwrap_or_default(),
        kernel_cohomology: kernel.map(|k| cohomology(&k.complex)),
        source_cohomology: cohomology(&src.underlying_complex()),
        target_cohomology: cohomology(&tgt.underlying_complex()),
        hom_violations: check_hom(v).violations.iter().map(ToString::to_string).collect(),
    }
}

/// `lim_J Cyl_{q-1}(B)`: families `(t_j)_{j ∈ J0}` with
/// `Cyl(β_{k,l})(t_k) = Cyl(γ_{k,l})(t_l)`, computed degree by degree as the
/// kernel of a constraint matrix.
#[derive(Clone, Debug)]
pub struct LimitRing {
    setting: HornSetting,
    /// Per degree, a ℤ-basis of the equalizer as columns in product coordinates.
    kernel: Vec<(i64, IntMatrix)>,
    ring: Arc<BasisDGRing>,
}

impl LimitRing {
    pub fn new(setting: HornSetting) -> Result<Self, HornError> {
        let face = setting.face_cylinder.ring().clone();
        let j0 = setting.diagram.j0().to_vec();
        let pairs: Vec<(usize, usize, DGRingHom, DGRingHom)> = setting
            .diagram
            .j1()
            .iter()
            .map(|&(k, l)| (k, l, setting.beta_map(k, l), setting.gamma_map(k, l)))
            .collect();
        let mut kernel = Vec::new();
        for degree in face.degrees() {
            let n = face.rank_in(degree);
            let width = n * j0.len();
            let mut rows: Vec<Vec<BigInt>> = Vec::new();
            for (k, l, beta, gamma) in &pairs {
                let (bk, gl) = (beta.degree_block(degree), gamma.degree_block(degree));
                let pk = j0.iter().position(|j| j == k).expect("k ∈ J0");
                let pl = j0.iter().position(|j| j == l).expect("l ∈ J0");
                for r in 0..bk.rows() {
                    let mut row = vec![BigInt::zero(); width];
                    for c in 0..n {
                        row[pk * n + c] += bk.get(r, c);
                        row[pl * n + c] -= gl.get(r, c);
                    }
                    rows.push(row);
                }
            }
            let constraint = if rows.is_empty() {
                IntMatrix::zeros(0, width)
            } else {
                IntMatrix::from_fn(rows.len(), width, |r, c| rows[r][c].clone())
            };
            let basis = smith(&constraint).kernel_basis();
            kernel.push((degree, IntMatrix::from_columns(width, &basis)));
        }
        let mut limit = LimitRing {
            setting,
            kernel,
            ring: Arc::new(BasisDGRing::integers()),
        };
        limit.ring = Arc::new(limit.build_ring()?);
        Ok(limit)
    }

    pub fn setting(&self) -> &HornSetting {
        &self.setting
    }

    /// The equalizer with its kernel basis as basis, ids `t{degree}_{k}`.
    pub fn ring(&self) -> &Arc<BasisDGRing> {
        &self.ring
    }

    pub fn ranks(&self) -> Vec<(i64, usize)> {
        self.kernel.iter().map(|(k, m)| (*k, m.cols())).collect()
    }

    fn kernel_in(&self, degree: i64) -> Option<&IntMatrix> {
        self.kernel.iter().find(|(k, _)| *k == degree).map(|(_, m)| m)
    }

    fn face(&self) -> &Arc<BasisDGRing> {
        self.setting.face_cylinder.ring()
    }

    fn width(&self) -> usize {
        self.setting.diagram.j0().len()
    }

    /// Splits a family given in product coordinates of one degree.
    fn unstack(&self, degree: i64, v: &[BigInt]) -> Vec<Element> {
        let n = self.face().rank_in(degree);
        (0..self.width())
            .map(|p| self.face().from_vector(degree, &v[p * n..(p + 1) * n]))
            .collect()
    }

    fn stack(&self, degree: i64, family: &[Element]) -> Vec<BigInt> {
        family.iter().flat_map(|e| self.face().to_vector(e, degree)).collect()
    }

    /// Coordinates in the kernel basis of a homogeneous family, if it lies
    /// in the equalizer.
    fn coordinates(&self, degree: i64, family: &[Element]) -> Option<Vec<BigInt>> {
        let basis = self.kernel_in(degree)?;
        smith(basis).solve(&self.stack(degree, family))
    }

    /// The family `(t_j)` of an element of the equalizer.
    pub fn components(&self, e: &Element) -> Vec<Element> {
        let mut family = vec![Element::zero(); self.width()];
        for (idx, coef) in e.terms() {
            let degree = self.ring.degree_of(idx);
            let basis = self.kernel_in(degree).expect("degree of the ring");
            let column = basis.column(self.ring.position_in_degree(idx));
            for (p, t) in self.unstack(degree, &column).iter().enumerate() {
                family[p].add_scaled(t, coef);
            }
        }
        family
    }

    /// The element of the equalizer with components `family`.
    pub fn from_components(&self, family: &[Element]) -> Result<Element, HornError> {
        let mut out = Element::zero();
        let face = self.face().clone();
        for degree in face.degrees() {
            let part: Vec<Element> = family.iter().map(|t| face.component(t, degree)).collect();
            if part.iter().all(Element::is_zero) {
                continue;
            }
            let coords = self
                .coordinates(degree, &part)
                .ok_or_else(|| HornError::Comparison(format!("family in degree {degree} is not compatible")))?;
            out += &self.ring.from_vector(degree, &coords);
        }
        Ok(out)
    }

    fn build_ring(&self) -> Result<BasisDGRing, HornError> {
        let face = self.face().clone();
        let id = |degree: i64, k: usize| format!("t{degree}_{k:04}");
        let mut b = RingBuilder::new();
        let mut elements: Vec<(String, i64, Vec<Element>)> = Vec::new();
        for (degree, basis) in &self.kernel {
            for k in 0..basis.cols() {
                b.symbol(id(*degree, k), *degree);
                elements.push((id(*degree, k), *degree, self.unstack(*degree, &basis.column(k))));
            }
        }
        let express = |family: &[Element], what: &str| -> Result<Vec<(String, BigInt)>, HornError> {
            let mut terms = Vec::new();
            for degree in face.degrees() {
                let part: Vec<Element> = family.iter().map(|t| face.component(t, degree)).collect();
                if part.iter().all(Element::is_zero) {
                    continue;
                }
                let coords = self
                    .coordinates(degree, &part)
                    .ok_or_else(|| HornError::NotClosed(what.to_string()))?;
                terms.extend(
                    coords
                        .into_iter()
                        .enumerate()
                        .filter(|(_, c)| !c.is_zero())
                        .map(|(k, c)| (id(degree, k), c)),
                );
            }
            Ok(terms)
        };
        let unit: Vec<Element> = (0..self.width()).map(|_| face.unit().clone()).collect();
        for (to, c) in express(&unit, "the unit")? {
            b.unit(to, c);
        }
        for (name, _, family) in &elements {
            let dt: Vec<Element> = family.iter().map(|t| face.d(t)).collect();
            for (to, c) in express(&dt, "the differential")? {
                b.diff(name.clone(), to, c);
            }
        }
        for (left, _, s) in &elements {
            for (right, _, t) in &elements {
                let st: Vec<Element> = s.iter().zip(t).map(|(a, c)| face.mul(a, c)).collect();
                for (to, c) in express(&st, "products")? {
                    b.mul(left.clone(), right.clone(), to, c);
                }
            }
        }
        Ok(b.build()?)
    }

    /// `N(Λ^q_i, B) -> lim`: restrict along every face.
    pub fn from_horn(&self) -> Result<DGRingHom, HornError> {
        let restrictions: Vec<DGRingHom> = self
            .setting
            .diagram
            .j0()
            .iter()
            .map(|&j| self.setting.face_restriction(j))
            .collect::<Result<_, _>>()?;
        let horn = self.setting.horn_ring.ring();
        let images = (0..horn.dim())
            .map(|idx| {
                let family: Vec<Element> = restrictions.iter().map(|r| r.image_of(idx).clone()).collect();
                self.from_components(&family)
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(DGRingHom::new(horn.clone(), self.ring.clone(), images)?)
    }

    /// `lim -> N(Λ^q_i, B)`: the coefficient of `δ_y ⊗ b` is read off the
    /// first face `∂^j` whose image contains `y`.
    pub fn to_horn(&self) -> Result<DGRingHom, HornError> {
        let horn = &self.setting.horn_ring;
        let face = &self.setting.face_cylinder;
        let j0 = self.setting.diagram.j0();
        let mut sources = Vec::new();
        for (idx, y) in horn.simplices().iter().enumerate() {
            let (p, x) = j0
                .iter()
                .enumerate()
                .find_map(|(p, &j)| {
                    let missing = !y.values().contains(&j);
                    missing.then(|| {
                        let values = y.values().iter().map(|&v| if v > j { v - 1 } else { v }).collect();
                        (p, crate::simplex::MonotoneMap::new(values, self.setting.horn.q() - 1))
                    })
                })
                .ok_or_else(|| HornError::Comparison(format!("simplex {y} lies in no face")))?;
            let x = x?;
            sources.push((idx, p, face.simplex_position(&x).expect("nondegenerate face simplex")));
        }
        let coeff_dim = self.setting.coeff().dim();
        let images = (0..self.ring.dim())
            .map(|t| {
                let family = self.components(&Element::basis(t));
                let mut out = Element::zero();
                for (y, p, sx) in &sources {
                    let (y, x) = (&horn.simplices()[*y], &face.simplices()[*sx]);
                    for c in 0..coeff_dim {
                        let coef = family[*p].coeff(face.symbol(x, c).expect("face symbol"));
                        if !coef.is_zero() {
                            out.add_term(horn.symbol(y, c).expect("horn symbol"), coef);
                        }
                    }
                }
                out
            })
            .collect();
        Ok(DGRingHom::new(self.ring.clone(), horn.ring().clone(), images)?)
    }

    /// The horn's delta basis pushed into the product: it must span the
    /// equalizer, and the structure constants recomputed in the product in
    /// that basis must be those of `N(Λ^q_i, B)`.
    pub fn transported_ring(&self) -> Result<BasisDGRing, HornError> {
        let to_limit = self.from_horn()?;
        let horn = self.setting.horn_ring.ring();
        let face = self.face().clone();
        let families: Vec<Vec<Element>> = (0..horn.dim())
            .map(|idx| self.components(to_limit.image_of(idx)))
            .collect();
        for (degree, basis) in &self.kernel {
            let images: Vec<Vec<BigInt>> = horn
                .indices_in_degree(*degree)
                .iter()
                .map(|&idx| self.stack(*degree, &families[idx]))
                .collect();
            if !same_lattice(&columns(basis), &images, basis.rows()) {
                return Err(HornError::Comparison(format!(
                    "horn deltas do not span the equalizer in degree {degree}"
                )));
            }
        }
        // solve in the transported basis, degree by degree
        let express = |family: &[Element]| -> Result<Vec<(usize, BigInt)>, HornError> {
            let mut terms = Vec::new();
            for degree in face.degrees() {
                let part: Vec<Element> = family.iter().map(|t| face.component(t, degree)).collect();
                if part.iter().all(Element::is_zero) {
                    continue;
                }
                let idxs = horn.indices_in_degree(degree);
                let cols: Vec<Vec<BigInt>> = idxs.iter().map(|&i| self.stack(degree, &families[i])).collect();
                let m = IntMatrix::from_columns(self.stack(degree, &part).len(), &cols);
                let coords = smith(&m)
                    .solve(&self.stack(degree, &part))
                    .ok_or_else(|| HornError::Comparison(format!("no transported coordinates in degree {degree}")))?;
                terms.extend(
                    idxs.iter()
                        .zip(coords)
                        .filter(|(_, c)| !c.is_zero())
                        .map(|(&i, c)| (i, c)),
                );
            }
            Ok(terms)
        };
        let ids: Vec<String> = horn.basis().iter().map(|s| s.id.clone()).collect();
        let mut b = RingBuilder::new();
        for s in horn.basis() {
            b.symbol(s.id.clone(), s.degree);
        }
        let unit: Vec<Element> = (0..self.width()).map(|_| face.unit().clone()).collect();
        for (i, c) in express(&unit)? {
            b.unit(ids[i].clone(), c);
        }
        for (x, family) in families.iter().enumerate() {
            let dt: Vec<Element> = family.iter().map(|t| face.d(t)).collect();
            for (i, c) in express(&dt)? {
                b.diff(ids[x].clone(), ids[i].clone(), c);
            }
            for (y, other) in families.iter().enumerate() {
                let st: Vec<Element> = family.iter().zip(other).map(|(a, c)| face.mul(a, c)).collect();
                for (i, c) in express(&st)? {
                    b.mul(ids[x].clone(), ids[y].clone(), ids[i].clone(), c);
                }
            }
        }
        Ok(b.build()?)
    }
}

pub fn limit_ring(q: usize, i: usize, coeff: Arc<BasisDGRing>) -> Result<LimitRing, HornError> {
    LimitRing::new(HornSetting::new(HornId::new(q, i)?, coeff))
}

/// Outcome of comparing the limit with the horn ring.
#[derive(Clone, Debug, Default)]
pub struct LimitComparison {
    pub failures: Vec<String>,
}

impl LimitComparison {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Ranks agree, both comparison maps are DG ring homomorphisms inverse to
/// each other, and the transported structure constants are the horn's.
pub fn compare_limit(limit: &LimitRing) -> LimitComparison {
    let mut failures = Vec::new();
    let horn = limit.setting.horn_ring.ring().clone();
    if limit.ranks() != horn.ranks() && !(limit.ring.dim() == 0 && horn.dim() == 0) {
        let nonzero = |r: Vec<(i64, usize)>| r.into_iter().filter(|(_, n)| *n > 0).collect::<Vec<_>>();
        if nonzero(limit.ranks()) != nonzero(horn.ranks()) {
            failures.push(format!("ranks {:?} vs {:?}", limit.ranks(), horn.ranks()));
        }
    }
    match (limit.from_horn(), limit.to_horn()) {
        (Ok(there), Ok(back)) => {
            for v in check_hom(&there).violations {
                failures.push(format!("horn -> limit: {v}"));
            }
            for v in check_hom(&back).violations {
                failures.push(format!("limit -> horn: {v}"));
            }
            match (there.then(&back), back.then(&there)) {
                (Ok(a), Ok(b)) if a.is_identity() && b.is_identity() => {}
                _ => failures.push("comparison maps are not mutually inverse".into()),
            }
        }
        (Err(e), _) | (_, Err(e)) => failures.push(e.to_string()),
    }
    match limit.transported_ring() {
        Ok(r) if r == *horn => {}
        Ok(_) => failures.push("transported structure constants differ".into()),
        Err(e) => failures.push(e.to_string()),
    }
    LimitComparison { failures }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dg::compose_hom;
    use crate::nerve::CylinderFamily;

    fn z() -> Arc<BasisDGRing> {
        Arc::new(BasisDGRing::integers())
    }

    fn setting(q: usize, i: usize) -> HornSetting {
        HornSetting::new(HornId::new(q, i).unwrap(), z())
    }

    #[test]
    fn horn_ranks() {
        assert_eq!(horn_nerve(2, 1, z()).unwrap().ring().ranks(), vec![(0, 3), (1, 2)]);
        assert_eq!(horn_nerve(1, 0, z()).unwrap().ring().ranks(), vec![(0, 1)]);
        assert_eq!(
            horn_nerve(3, 0, z()).unwrap().ring().ranks(),
            vec![(0, 4), (1, 6), (2, 3)]
        );
        assert!(horn_nerve(0, 0, z()).is_err());
        assert!(horn_nerve(2, 3, z()).is_err());
    }

    #[test]
    fn restriction_kernel_for_the_inner_two_horn() {
        let s = setting(2, 1);
        let v = s.restriction();
        let kernel = kernel_complex(&v).unwrap();
        let cyl = s.cylinder();
        let ids: Vec<Vec<String>> = kernel
            .bases
            .iter()
            .enumerate()
            .map(|(k, m)| {
                (0..m.cols())
                    .map(|c| {
                        let e = cyl.ring().from_vector(kernel.start + k as i64, &m.column(c));
                        cyl.ring().show(&e).trim_start_matches('-').to_string()
                    })
                    .collect()
            })
            .collect();
        assert_eq!(
            ids,
            vec![vec![], vec!["(0,2)|1".to_string()], vec!["(0,1,2)|1".to_string()]]
        );
        let cert = certify_surjective_quasi_iso(&v);
        assert!(cert.passed(), "{cert:?}");
        assert_eq!(cert.kernel_ranks, vec![(0, 0), (1, 1), (2, 1)]);
        assert!(cert.source_cohomology.is_integers_in_degree_zero());
        assert!(cert.target_cohomology.is_integers_in_degree_zero());
        assert_eq!(v.apply(cyl.ring().unit()), *s.horn_ring().ring().unit());
    }

    #[test]
    fn certificates() {
        for (q, i) in [(1, 0), (3, 2)] {
            assert!(certify_surjective_quasi_iso(&setting(q, i).restriction()).passed());
        }
        let r = cyl(2, z());
        assert!(certify_surjective_quasi_iso(&DGRingHom::identity(r.ring().clone())).passed());
    }

    #[test]
    fn certificate_rejects_a_non_surjection() {
        // Cyl_0(ℤ) -> Cyl_1(ℤ) along the codegeneracy: not surjective in degree 1
        let fam = CylinderFamily::new(1, z());
        let s = fam.degeneracy(0, 0).unwrap();
        let cert = certify_surjective_quasi_iso(&s);
        assert!(!cert.is_surjective());
        assert!(cert.cohomology_agrees());
        assert!(!cert.passed());
        // multiplication by 2 on ℤ is a chain map that is neither onto nor a quasi-isomorphism
        let two = DGRingHom::new(z(), z(), vec![Element::term(0, BigInt::from(2))]).unwrap();
        let cert = certify_surjective_quasi_iso(&two);
        assert!(!cert.is_surjective());
        assert!(!cert.passed());
    }

    #[test]
    fn face_restrictions() {
        let s = setting(2, 1);
        let f0 = s.face_restriction(0).unwrap();
        let horn = s.horn_ring();
        let face = s.face_cylinder();
        let y12 = horn.delta(&"(1,2)".parse().unwrap()).unwrap();
        let y01 = horn
            .delta(&crate::simplex::MonotoneMap::parse_in("(0,1)", 2).unwrap())
            .unwrap();
        assert_eq!(f0.apply(&y12), face.delta(&"(0,1)".parse().unwrap()).unwrap());
        assert!(f0.apply(&y01).is_zero());
        assert!(s.face_restriction(1).is_err());
        assert!(face_restriction(2, 1, 3, z()).is_err());
        for q in 1..=4 {
            for i in 0..=q {
                let s = setting(q, i);
                let v = s.restriction();
                for &j in s.diagram().j0() {
                    let lhs = compose_hom(&s.face_restriction(j).unwrap(), &v).unwrap();
                    assert_eq!(lhs, s.cylinder_face(j).unwrap(), "q={q} i={i} j={j}");
                }
            }
        }
    }

    #[test]
    fn limit_of_degenerate_and_inner_horns() {
        let l = limit_ring(1, 0, z()).unwrap();
        assert_eq!(l.ranks(), vec![(0, 1)]);
        assert!(compare_limit(&l).passed());
        let l = limit_ring(2, 1, z()).unwrap();
        assert_eq!(l.ranks(), vec![(0, 3), (1, 2)]);
        let cmp = compare_limit(&l);
        assert!(cmp.passed(), "{:?}", cmp.failures);
    }

    #[test]
    fn limit_matches_horn_up_to_three() {
        for q in 1..=3 {
            for i in 0..=q {
                let cmp = compare_limit(&limit_ring(q, i, z()).unwrap());
                assert!(cmp.passed(), "q={q} i={i}: {:?}", cmp.failures);
            }
        }
    }

    #[test]
    fn limit_projects_onto_faces() {
        let l = limit_ring(3, 1, z()).unwrap();
        let there = l.from_horn().unwrap();
        let horn = l.setting().horn_ring().ring().clone();
        for (p, &j) in l.setting().diagram().j0().iter().enumerate() {
            let r = l.setting().face_restriction(j).unwrap();
            for idx in 0..horn.dim() {
                assert_eq!(l.components(there.image_of(idx))[p], *r.image_of(idx));
            }
        }
    }

    #[test]
    fn limit_with_cylinder_coefficients() {
        let b = Arc::new(cyl(1, z()).ring().as_ref().clone());
        let cmp = compare_limit(&limit_ring(2, 0, b).unwrap());
        assert!(cmp.passed(), "{:?}", cmp.failures);
    }
}
