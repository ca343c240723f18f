//! Keller's cylinder: the DG ring of upper triangular 2×2 matrices
//! `[B, B[-1]; 0, B]`, written with matrix units `e0`, `e1`, `e01`.
//!
//! Homomorphisms into `Cyl_Kel(C)` are the same thing as pairs of
//! homomorphisms with a Keller homotopy between them. With the matrix unit
//! `e01` in degree 1 and `d(e0) = -e01`, `d(e1) = e01`, the homotopy sits in
//! the corner with no extra sign:
//!
//! ```text
//! x ↦ e0⊗f0(x) + e1⊗f1(x) + e01⊗γ(x)
//! ```
//!
//! is multiplicative iff `γ(ab) = γ(a)·f1(b) + (-1)^|a| f0(a)·γ(b)`, and
//! commutes with `d` iff `dγ + γd = f1 - f0`.

use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::One;
use thiserror::Error;

use crate::dg::{sign, tensor, tensor_hom, BasisDGRing, DGRingHom, DgError, Element, RingBuilder};
use crate::nerve::{simplicial_cochains, NerveRing};
use crate::semifree::{eval_with, NCPoly, SemiFreeError, SemiFreeHom, SemiFreePresentation};
use crate::simplex::Space;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum KellerError {
    #[error("γ({var}) is not homogeneous of degree {degree}")]
    GammaDegree { var: String, degree: i64 },
    #[error("not a homotopy: d-compatibility fails on {0}")]
    NotAHomotopy(String),
    #[error("{0} homotopy values for {1} generators")]
    GammaCount(usize, usize),
    #[error(transparent)]
    SemiFree(#[from] SemiFreeError),
    #[error(transparent)]
    Dg(#[from] DgError),
}

/// `Cyl_Kel(ℤ)`: basis `e0`, `e1` in degree 0 and `e01` in degree 1.
pub fn keller_integers() -> BasisDGRing {
    let mut b = RingBuilder::new();
    b.symbol("e0", 0).symbol("e1", 0).symbol("e01", 1);
    b.unit("e0", 1).unit("e1", 1);
    b.diff("e0", "e01", -1).diff("e1", "e01", 1);
    b.mul("e0", "e0", "e0", 1)
        .mul("e1", "e1", "e1", 1)
        .mul("e0", "e01", "e01", 1)
        .mul("e01", "e1", "e01", 1);
    b.build().expect("matrix units form a DG ring")
}

/// Which matrix unit a basis symbol of a Keller cylinder sits under.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Corner {
    E0,
    E1,
    E01,
}

impl Corner {
    pub fn id(self) -> &'static str {
        match self {
            Corner::E0 => "e0",
            Corner::E1 => "e1",
            Corner::E01 => "e01",
        }
    }
}

/// `Cyl_Kel(B) = Cyl_Kel(ℤ) ⊗ B`, basis ids `"e0|b"`, `"e1|b"`, `"e01|b"`.
#[derive(Clone, Debug)]
pub struct KellerCyl {
    coeff: Arc<BasisDGRing>,
    ring: Arc<BasisDGRing>,
    // ring index of corner ⊗ b, per corner, by coefficient index
    slots: [Vec<usize>; 3],
}

fn slot(corner: Corner) -> usize {
    match corner {
        Corner::E0 => 0,
        Corner::E1 => 1,
        Corner::E01 => 2,
    }
}

impl KellerCyl {
    pub fn new(coeff: Arc<BasisDGRing>) -> Self {
        let ring = Arc::new(tensor(&keller_integers(), &coeff));
        let slots = [Corner::E0, Corner::E1, Corner::E01].map(|c| {
            coeff
                .basis()
                .iter()
                .map(|s| ring.index_of(&format!("{}|{}", c.id(), s.id)).expect("tensor basis"))
                .collect()
        });
        KellerCyl { coeff, ring, slots }
    }

    pub fn coeff(&self) -> &Arc<BasisDGRing> {
        &self.coeff
    }

    pub fn ring(&self) -> &Arc<BasisDGRing> {
        &self.ring
    }

    /// `corner ⊗ e`.
    pub fn embed(&self, corner: Corner, e: &Element) -> Element {
        let idx = &self.slots[slot(corner)];
        e.map_indices(|i| idx[i])
    }

    /// The `corner` component, as an element of `B`.
    pub fn project(&self, corner: Corner, e: &Element) -> Element {
        let idx = &self.slots[slot(corner)];
        Element::from_terms(idx.iter().enumerate().map(|(b, &i)| (b, e.coeff(i))))
    }

    /// `f_γ = [f0, γ; 0, f1]` as a homomorphism into the cylinder, with `γ`
    /// in the corner carrying no sign; fails with
    /// [`KellerError::NotAHomotopy`] exactly when `γ` is not a homotopy.
    pub fn encode(&self, f0: &SemiFreeHom, f1: &SemiFreeHom, gamma: &[Element]) -> Result<SemiFreeHom, KellerError> {
        let a = f0.source();
        if gamma.len() != a.len() {
            return Err(KellerError::GammaCount(gamma.len(), a.len()));
        }
        for (x, g) in a.vars().iter().zip(gamma) {
            self.coeff.validate(g)?;
            if !self.coeff.is_homogeneous_of(g, x.degree - 1) {
                return Err(KellerError::GammaDegree {
                    var: x.name.clone(),
                    degree: x.degree - 1,
                });
            }
        }
        let images = (0..a.len())
            .map(|k| {
                let mut e = self.embed(Corner::E0, f0.image(k));
                e += &self.embed(Corner::E1, f1.image(k));
                e += &self.embed(Corner::E01, &gamma[k]);
                e
            })
            .collect();
        let h = SemiFreeHom::new(a.clone(), self.ring.clone(), images)?;
        match h.check() {
            Ok(()) => Ok(h),
            Err(SemiFreeError::NotCompatible(var)) => Err(KellerError::NotAHomotopy(var)),
            Err(e) => Err(e.into()),
        }
    }

    /// Reads `f0`, `f1` and `γ` off the three corners.
    pub fn decode(&self, h: &SemiFreeHom) -> Result<KellerHomotopy, SemiFreeError> {
        if **h.target() != *self.ring {
            return Err(SemiFreeError::TargetMismatch("not a map into this cylinder".into()));
        }
        let part = |c: Corner| -> Vec<Element> { h.images().iter().map(|e| self.project(c, e)).collect() };
        let a = h.source().clone();
        Ok(KellerHomotopy {
            f0: SemiFreeHom::new(a.clone(), self.coeff.clone(), part(Corner::E0))?,
            f1: SemiFreeHom::new(a, self.coeff.clone(), part(Corner::E1))?,
            gamma: part(Corner::E01),
        })
    }
}

pub fn keller_cyl(coeff: Arc<BasisDGRing>) -> KellerCyl {
    KellerCyl::new(coeff)
}

/// A degree -1 assignment `γ` on generators between `f0` and `f1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KellerHomotopy {
    pub f0: SemiFreeHom,
    pub f1: SemiFreeHom,
    pub gamma: Vec<Element>,
}

impl KellerHomotopy {
    fn source(&self) -> &Arc<SemiFreePresentation> {
        self.f0.source()
    }

    fn target(&self) -> &Arc<BasisDGRing> {
        self.f0.target()
    }

    /// `γ` on a polynomial, by the twisted rule
    /// `γ(x1⋯xn) = Σ_k ± f0(x1⋯x_{k-1}) γ(x_k) f1(x_{k+1}⋯xn)`.
    pub fn extend(&self, poly: &NCPoly) -> Element {
        let c = self.target();
        let (a, f0, f1) = (self.source(), self.f0.images(), self.f1.images());
        let mut out = Element::zero();
        for (word, coef) in poly.terms() {
            let mut prefix_degree = 0;
            for (k, &x) in word.iter().enumerate() {
                let left = eval_with(c, f0, &NCPoly::word(word[..k].to_vec()));
                let right = eval_with(c, f1, &NCPoly::word(word[k + 1..].to_vec()));
                let term = c.mul(&c.mul(&left, &self.gamma[x]), &right);
                out.add_scaled(&term, &(coef * sign(prefix_degree)));
                prefix_degree += a.var(x).degree;
            }
        }
        out
    }

    /// `dγ(p) + γ(dp) = f1(p) - f0(p)`.
    pub fn identity_holds_on(&self, poly: &NCPoly) -> bool {
        let c = self.target();
        let lhs = &c.d(&self.extend(poly)) + &self.extend(&self.source().extend_d(poly));
        lhs == &self.f1.eval(poly) - &self.f0.eval(poly)
    }

    /// The first generator violating the homotopy identity.
    pub fn failing_generator(&self) -> Option<String> {
        (0..self.source().len())
            .find(|&k| !self.identity_holds_on(&NCPoly::var(k)))
            .map(|k| self.source().var(k).name.clone())
    }
}

/// `D = [C̃, C[-1]; 0, C̃]` for `v : C̃ -> C`, where `C̃` acts on the
/// corner through `v`. Basis ids `"e0|c̃"`, `"e1|c̃"`, `"e01|c"`.
#[derive(Clone, Debug)]
pub struct TriangularRing {
    v: DGRingHom,
    ring: Arc<BasisDGRing>,
}

impl TriangularRing {
    pub fn new(v: DGRingHom) -> Self {
        let (top, bottom) = (v.source().clone(), v.target().clone());
        let id = |corner: Corner, ring: &BasisDGRing, i: usize| format!("{}|{}", corner.id(), ring.symbol(i).id);
        let mut b = RingBuilder::new();
        for i in 0..top.dim() {
            b.symbol(id(Corner::E0, &top, i), top.degree_of(i));
            b.symbol(id(Corner::E1, &top, i), top.degree_of(i));
        }
        for i in 0..bottom.dim() {
            b.symbol(id(Corner::E01, &bottom, i), bottom.degree_of(i) + 1);
        }
        for (i, c) in top.unit().terms() {
            b.unit(id(Corner::E0, &top, i), c.clone());
            b.unit(id(Corner::E1, &top, i), c.clone());
        }
        for i in 0..top.dim() {
            let vi = v.image_of(i);
            for (j, c) in top.diff_of(i).terms() {
                b.diff(id(Corner::E0, &top, i), id(Corner::E0, &top, j), c.clone());
                b.diff(id(Corner::E1, &top, i), id(Corner::E1, &top, j), c.clone());
            }
            for (j, c) in vi.terms() {
                b.diff(id(Corner::E0, &top, i), id(Corner::E01, &bottom, j), -c);
                b.diff(id(Corner::E1, &top, i), id(Corner::E01, &bottom, j), c.clone());
            }
        }
        for i in 0..bottom.dim() {
            for (j, c) in bottom.diff_of(i).terms() {
                b.diff(id(Corner::E01, &bottom, i), id(Corner::E01, &bottom, j), -c);
            }
        }
        for ((l, r), e) in top.nonzero_products() {
            for (t, c) in e.terms() {
                b.mul(
                    id(Corner::E0, &top, l),
                    id(Corner::E0, &top, r),
                    id(Corner::E0, &top, t),
                    c.clone(),
                );
                b.mul(
                    id(Corner::E1, &top, l),
                    id(Corner::E1, &top, r),
                    id(Corner::E1, &top, t),
                    c.clone(),
                );
            }
        }
        for a in 0..top.dim() {
            let va = v.image_of(a);
            let sg = BigInt::from(sign(top.degree_of(a)));
            for c in 0..bottom.dim() {
                let basis_c = Element::basis(c);
                for (t, x) in bottom.mul(va, &basis_c).terms() {
                    b.mul(
                        id(Corner::E0, &top, a),
                        id(Corner::E01, &bottom, c),
                        id(Corner::E01, &bottom, t),
                        x * &sg,
                    );
                }
                for (t, x) in bottom.mul(&basis_c, va).terms() {
                    b.mul(
                        id(Corner::E01, &bottom, c),
                        id(Corner::E1, &top, a),
                        id(Corner::E01, &bottom, t),
                        x.clone(),
                    );
                }
            }
        }
        TriangularRing {
            v,
            ring: Arc::new(b.build().expect("triangular matrices over a DG bimodule")),
        }
    }

    pub fn ring(&self) -> &Arc<BasisDGRing> {
        &self.ring
    }

    fn index(&self, corner: Corner, i: usize) -> usize {
        let ring = if corner == Corner::E01 {
            self.v.target()
        } else {
            self.v.source()
        };
        self.ring
            .index_of(&format!("{}|{}", corner.id(), ring.symbol(i).id))
            .expect("symbol of the triangular ring")
    }

    /// `w : Cyl_Kel(C̃) -> D`, the identity on the diagonal and `v` in the corner.
    pub fn comparison(&self, cyl: &KellerCyl) -> DGRingHom {
        let top = self.v.source();
        let images = (0..cyl.ring.dim())
            .map(|k| {
                let (corner, i) = [Corner::E0, Corner::E1, Corner::E01]
                    .into_iter()
                    .find_map(|c| cyl.slots[slot(c)].iter().position(|&s| s == k).map(|i| (c, i)))
                    .expect("every symbol sits in a corner");
                match corner {
                    Corner::E01 => self.v.image_of(i).map_indices(|j| self.index(Corner::E01, j)),
                    c => Element::basis(self.index(c, i)),
                }
            })
            .collect();
        debug_assert_eq!(**cyl.coeff(), **top);
        DGRingHom::new(cyl.ring.clone(), self.ring.clone(), images).expect("degrees match")
    }

    /// `diag(f0, f1)` as a homomorphism into `D`.
    pub fn diagonal(&self, f0: &SemiFreeHom, f1: &SemiFreeHom) -> Result<SemiFreeHom, SemiFreeError> {
        let images = f0
            .images()
            .iter()
            .zip(f1.images())
            .map(|(a, b)| &a.map_indices(|i| self.index(Corner::E0, i)) + &b.map_indices(|i| self.index(Corner::E1, i)))
            .collect();
        SemiFreeHom::new(f0.source().clone(), self.ring.clone(), images)
    }
}

/// The isomorphism `Cyl_Kel(B) ≅ Cyl_1(B)`:
/// `e0 ↦ δ_(0)`, `e1 ↦ δ_(1)`, `e01 ↦ δ_(0,1)`.
pub fn keller_to_cylinder(keller: &KellerCyl, cylinder: &NerveRing) -> Result<DGRingHom, KellerError> {
    let kz = Arc::new(keller_integers());
    let rz = Arc::new(simplicial_cochains(Space::Delta(1)));
    let images = ["(0)", "(1)", "(0,1)"]
        .iter()
        .map(|id| rz.index_of(id).map(|i| Element::term(i, BigInt::one())))
        .collect::<Result<Vec<_>, _>>()?;
    let order: Vec<usize> = ["e0", "e1", "e01"]
        .iter()
        .map(|id| kz.index_of(id))
        .collect::<Result<_, _>>()?;
    let mut sorted = vec![Element::zero(); 3];
    for (k, &i) in order.iter().enumerate() {
        sorted[i] = images[k].clone();
    }
    let on_integers = DGRingHom::new(kz, rz, sorted)?;
    let id = DGRingHom::identity(keller.coeff.clone());
    Ok(tensor_hom(
        &on_integers,
        &id,
        keller.ring.clone(),
        cylinder.ring().clone(),
    )?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dg::{check_axioms, check_hom};
    use crate::nerve::cyl;
    use crate::semifree::PresentationBuilder;

    fn z() -> Arc<BasisDGRing> {
        Arc::new(BasisDGRing::integers())
    }

    #[test]
    fn keller_cylinder_of_integers() {
        let k = keller_cyl(z());
        let ring = k.ring();
        assert_eq!(ring.ranks(), vec![(0, 2), (1, 1)]);
        assert_eq!(*ring.unit(), ring.element(&[("e0|1", 1), ("e1|1", 1)]).unwrap());
        assert!(check_axioms(ring).passed());
        let e0 = ring.element(&[("e0|1", 1)]).unwrap();
        assert_eq!(ring.d(&e0), ring.element(&[("e01|1", -1)]).unwrap());
    }

    #[test]
    fn iso_with_the_first_cylinder() {
        for coeff in [z(), cyl(1, z()).ring().clone()] {
            let k = keller_cyl(coeff.clone());
            let c = cyl(1, coeff);
            let f = keller_to_cylinder(&k, &c).unwrap();
            assert!(check_hom(&f).passed());
            let g = f.inverse().unwrap();
            assert!(check_hom(&g).passed());
            assert!(f.then(&g).unwrap().is_identity());
            assert!(g.then(&f).unwrap().is_identity());
        }
    }

    #[test]
    fn triangular_ring_and_comparison() {
        let s = crate::horn::HornSetting::new(crate::simplex::HornId::new(2, 1).unwrap(), z());
        let tri = TriangularRing::new(s.restriction());
        assert!(check_axioms(tri.ring()).passed());
        let k = keller_cyl(s.cylinder().ring().clone());
        let w = tri.comparison(&k);
        assert!(check_hom(&w).passed());
        assert!(crate::horn::certify_surjective_quasi_iso(&w).passed());
    }

    #[test]
    fn encode_and_decode() {
        let a = Arc::new(
            PresentationBuilder::new()
                .var("x", 0, 0)
                .var("y", -1, 1)
                .d("y", &[(1, &["x", "x"]), (-1, &["x"])])
                .build()
                .unwrap(),
        );
        let c = cyl(1, z());
        let ring = c.ring().clone();
        let k = keller_cyl(ring.clone());
        let one = SemiFreeHom::validated(a.clone(), ring.clone(), vec![ring.unit().clone(), Element::zero()]).unwrap();
        let none = SemiFreeHom::validated(a.clone(), ring.clone(), vec![Element::zero(), Element::zero()]).unwrap();
        let zero = vec![Element::zero(), Element::zero()];
        let h = k.encode(&one, &one, &zero).unwrap();
        let back = k.decode(&h).unwrap();
        assert_eq!(
            (back.f0.clone(), back.f1.clone(), back.gamma.clone()),
            (one.clone(), one.clone(), zero.clone())
        );
        assert!(back.failing_generator().is_none());
        assert_eq!(k.encode(&none, &one, &zero), Err(KellerError::NotAHomotopy("x".into())));
        let bad = vec![ring.unit().clone(), Element::zero()];
        assert!(matches!(
            k.encode(&one, &one, &bad),
            Err(KellerError::GammaDegree { .. })
        ));
    }
}
