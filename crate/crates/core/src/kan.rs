//! Filling horns in the simplicial set `Hom(A, Cyl(B))`.
//!
//! A horn is a family of homomorphisms `A -> Cyl_{q-1}(B)`, one for each
//! face `j ≠ i`, agreeing on common faces. It assembles into a single
//! homomorphism into `N(Λ^q_i, B)` through the limit presentation of the
//! horn ring, and a filler is a lift of that along the restriction
//! `Cyl_q(B) -> N(Λ^q_i, B)`.

use std::collections::BTreeMap;
use std::sync::Arc;

use thiserror::Error;

use crate::dg::{BasisDGRing, DGRingHom, Element};
use crate::horn::{HornError, HornSetting, LimitRing};
use crate::semifree::{LiftError, Lifter, SemiFreeError, SemiFreeHom, SemiFreePresentation};
use crate::simplex::HornId;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum KanError {
    #[error("faces {k} and {l} disagree on {var}")]
    Incompatible { k: usize, l: usize, var: String },
    #[error("face {0} is missing")]
    MissingFace(usize),
    #[error("{j} is not a face of {horn}")]
    NotAFace { horn: HornId, j: usize },
    #[error("face {0} does not land in Cyl_(q-1)(B)")]
    WrongTarget(usize),
    #[error("homomorphism does not land in Cyl_q(B)")]
    NotIntoCylinder,
    #[error("faces have different sources")]
    MixedSources,
    #[error("face {j} is not a homomorphism: {err}")]
    InvalidFace { j: usize, err: SemiFreeError },
    #[error("filler restricts wrongly to face {0}")]
    FaceMismatch(usize),
    #[error(transparent)]
    Horn(#[from] HornError),
    #[error(transparent)]
    Lift(#[from] LiftError),
    #[error(transparent)]
    SemiFree(#[from] SemiFreeError),
}

impl KanError {
    /// Whether the input datum itself is at fault, as opposed to a
    /// solver or certificate failure.
    pub fn is_incompatible_datum(&self) -> bool {
        matches!(
            self,
            KanError::Incompatible { .. }
                | KanError::MissingFace(_)
                | KanError::NotAFace { .. }
                | KanError::WrongTarget(_)
                | KanError::NotIntoCylinder
                | KanError::MixedSources
                | KanError::InvalidFace { .. }
                | KanError::SemiFree(_)
        )
    }
}

/// A horn in `Hom(A, Cyl(B))`: homomorphisms `faces[j] : A -> Cyl_{q-1}(B)`
/// for `j ∈ J0`, compatible on every pair of faces.
#[derive(Clone, Debug)]
pub struct HornDatum {
    setting: Arc<HornSetting>,
    faces: BTreeMap<usize, SemiFreeHom>,
}

impl HornDatum {
    /// Validates the faces eagerly, reporting the first disagreeing pair.
    pub fn new(setting: Arc<HornSetting>, faces: BTreeMap<usize, SemiFreeHom>) -> Result<Self, KanError> {
        let horn = setting.horn();
        if let Some(&j) = faces.keys().find(|j| !setting.diagram().j0().contains(j)) {
            return Err(KanError::NotAFace { horn, j });
        }
        if let Some(&j) = setting.diagram().j0().iter().find(|j| !faces.contains_key(j)) {
            return Err(KanError::MissingFace(j));
        }
        let target = setting.face_cylinder().ring();
        let source = faces.values().next().expect("J0 is never empty").source().clone();
        for (&j, f) in &faces {
            if **f.target() != **target {
                return Err(KanError::WrongTarget(j));
            }
            if *f.source() != source {
                return Err(KanError::MixedSources);
            }
            f.check().map_err(|err| KanError::InvalidFace { j, err })?;
        }
        for &(k, l) in setting.diagram().j1() {
            let (beta, gamma) = (setting.beta_map(k, l), setting.gamma_map(k, l));
            for (x, var) in source.vars().iter().enumerate() {
                if beta.apply(faces[&k].image(x)) != gamma.apply(faces[&l].image(x)) {
                    return Err(KanError::Incompatible {
                        k,
                        l,
                        var: var.name.clone(),
                    });
                }
            }
        }
        Ok(HornDatum { setting, faces })
    }

    pub fn setting(&self) -> &Arc<HornSetting> {
        &self.setting
    }

    pub fn horn(&self) -> HornId {
        self.setting.horn()
    }

    pub fn faces(&self) -> &BTreeMap<usize, SemiFreeHom> {
        &self.faces
    }

    pub fn face(&self, j: usize) -> Option<&SemiFreeHom> {
        self.faces.get(&j)
    }

    pub fn source(&self) -> &Arc<SemiFreePresentation> {
        self.faces.values().next().expect("J0 is never empty").source()
    }
}

impl PartialEq for HornDatum {
    fn eq(&self, other: &Self) -> bool {
        self.horn() == other.horn() && self.faces == other.faces
    }
}

/// A homomorphism `A -> Cyl_q(B)` whose faces match a horn datum.
#[derive(Clone, Debug, PartialEq)]
pub struct Filler {
    pub hom: SemiFreeHom,
}

/// Everything needed to fill horns of one shape with one coefficient ring:
/// the limit presentation of the horn ring and the certified restriction.
#[derive(Clone, Debug)]
pub struct HornFiller {
    setting: Arc<HornSetting>,
    limit: LimitRing,
    to_horn: DGRingHom,
    lifter: Lifter,
}

impl HornFiller {
    pub fn new(horn: HornId, coeff: Arc<BasisDGRing>) -> Result<Self, KanError> {
        let setting = HornSetting::new(horn, coeff);
        let limit = LimitRing::new(setting.clone())?;
        let to_horn = limit.to_horn()?;
        let lifter = Lifter::new(setting.restriction())?;
        Ok(HornFiller {
            setting: Arc::new(setting),
            limit,
            to_horn,
            lifter,
        })
    }

    pub fn setting(&self) -> &Arc<HornSetting> {
        &self.setting
    }

    pub fn lifter(&self) -> &Lifter {
        &self.lifter
    }

    pub fn datum(&self, faces: BTreeMap<usize, SemiFreeHom>) -> Result<HornDatum, KanError> {
        HornDatum::new(self.setting.clone(), faces)
    }

    /// The homomorphism `A -> N(Λ^q_i, B)` with the given faces.
    pub fn assemble(&self, datum: &HornDatum) -> Result<SemiFreeHom, KanError> {
        let j0 = self.setting.diagram().j0();
        let a = datum.source().clone();
        let images = (0..a.len())
            .map(|x| {
                let family: Vec<Element> = j0.iter().map(|j| datum.faces[j].image(x).clone()).collect();
                let t = self.limit.from_components(&family)?;
                Ok(self.to_horn.apply(&t))
            })
            .collect::<Result<Vec<_>, KanError>>()?;
        let f = SemiFreeHom::validated(a, self.setting.horn_ring().ring().clone(), images)?;
        for &j in j0 {
            if f.then(&self.setting.face_restriction(j)?)? != datum.faces[&j] {
                return Err(KanError::FaceMismatch(j));
            }
        }
        Ok(f)
    }

    /// The faces of a homomorphism into `N(Λ^q_i, B)`.
    pub fn restrict(&self, f: &SemiFreeHom) -> Result<HornDatum, KanError> {
        let faces = self
            .setting
            .diagram()
            .j0()
            .iter()
            .map(|&j| Ok((j, f.then(&self.setting.face_restriction(j)?)?)))
            .collect::<Result<BTreeMap<_, _>, KanError>>()?;
        self.datum(faces)
    }

    /// The faces `Cyl(∂^j) ∘ f` of a homomorphism into `Cyl_q(B)`.
    pub fn boundary(&self, f: &SemiFreeHom) -> Result<HornDatum, KanError> {
        boundary_in(&self.setting, f)
    }

    /// Assembles, lifts along the restriction, and checks every face of
    /// the result against the datum.
    pub fn fill(&self, datum: &HornDatum) -> Result<Filler, KanError> {
        let f = self.assemble(datum)?;
        let hom = self.lifter.lift_hom(&f, None)?;
        let faces = self.boundary(&hom)?;
        if let Some((&j, _)) = faces.faces.iter().find(|(j, g)| datum.faces[j] != **g) {
            return Err(KanError::FaceMismatch(j));
        }
        Ok(Filler { hom })
    }
}

pub fn assemble(datum: &HornDatum) -> Result<SemiFreeHom, KanError> {
    HornFiller::new(datum.horn(), datum.setting.coeff().clone())?.assemble(datum)
}

pub fn fill(datum: &HornDatum) -> Result<Filler, KanError> {
    HornFiller::new(datum.horn(), datum.setting.coeff().clone())?.fill(datum)
}

/// Faces of `f : A -> Cyl_q(B)` along the horn `Λ^q_i`.
pub fn boundary(horn: HornId, coeff: Arc<BasisDGRing>, f: &SemiFreeHom) -> Result<HornDatum, KanError> {
    let setting = Arc::new(HornSetting::new(horn, coeff));
    boundary_in(&setting, f)
}

fn boundary_in(setting: &Arc<HornSetting>, f: &SemiFreeHom) -> Result<HornDatum, KanError> {
    if **f.target() != **setting.cylinder().ring() {
        return Err(KanError::NotIntoCylinder);
    }
    let faces = setting
        .diagram()
        .j0()
        .iter()
        .map(|&j| Ok((j, f.then(&setting.cylinder_face(j)?)?)))
        .collect::<Result<BTreeMap<_, _>, KanError>>()?;
    HornDatum::new(setting.clone(), faces)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::semifree::PresentationBuilder;

    fn z() -> Arc<BasisDGRing> {
        Arc::new(BasisDGRing::integers())
    }

    fn closed_point() -> Arc<SemiFreePresentation> {
        Arc::new(PresentationBuilder::new().var("t", 0, 0).build().unwrap())
    }

    fn constant_faces(filler: &HornFiller, a: &Arc<SemiFreePresentation>) -> BTreeMap<usize, SemiFreeHom> {
        let face = filler.setting().face_cylinder().ring().clone();
        filler
            .setting()
            .diagram()
            .j0()
            .iter()
            .map(|&j| {
                let f = SemiFreeHom::validated(a.clone(), face.clone(), vec![face.unit().clone()]).unwrap();
                (j, f)
            })
            .collect()
    }

    #[test]
    fn units_assemble_to_the_unit() {
        let filler = HornFiller::new(HornId::new(2, 1).unwrap(), z()).unwrap();
        let a = closed_point();
        let datum = filler.datum(constant_faces(&filler, &a)).unwrap();
        let f = filler.assemble(&datum).unwrap();
        assert_eq!(f.image(0), filler.setting().horn_ring().ring().unit());
        assert_eq!(filler.restrict(&f).unwrap(), datum);
        let filled = filler.fill(&datum).unwrap();
        let cyl = filler.setting().cylinder().ring().clone();
        assert!(cyl.d(filled.hom.image(0)).is_zero());
        assert_eq!(filler.boundary(&filled.hom).unwrap(), datum);
        assert_eq!(boundary(datum.horn(), z(), &filled.hom).unwrap(), datum);
    }

    #[test]
    fn degenerate_horn() {
        let filler = HornFiller::new(HornId::new(1, 0).unwrap(), z()).unwrap();
        let a = closed_point();
        let datum = filler.datum(constant_faces(&filler, &a)).unwrap();
        assert_eq!(filler.setting().diagram().j1().len(), 0);
        let filled = filler.fill(&datum).unwrap();
        let faces = filler.boundary(&filled.hom).unwrap();
        assert_eq!(faces.faces().len(), 1);
        assert_eq!(faces, datum);
    }

    #[test]
    fn incompatible_faces_are_rejected() {
        let filler = HornFiller::new(HornId::new(2, 1).unwrap(), z()).unwrap();
        let a = closed_point();
        let mut faces = constant_faces(&filler, &a);
        let face = filler.setting().face_cylinder().ring().clone();
        faces.insert(
            2,
            SemiFreeHom::validated(a.clone(), face, vec![Element::zero()]).unwrap(),
        );
        let err = filler.datum(faces.clone()).unwrap_err();
        assert_eq!(
            err,
            KanError::Incompatible {
                k: 0,
                l: 2,
                var: "t".into()
            }
        );
        assert!(err.is_incompatible_datum());
        faces.remove(&0);
        assert_eq!(filler.datum(faces.clone()).unwrap_err(), KanError::MissingFace(0));
        let extra = faces.get(&2).unwrap().clone();
        faces.insert(1, extra);
        assert!(matches!(filler.datum(faces), Err(KanError::NotAFace { j: 1, .. })));
    }

    #[test]
    fn constant_data_fill() {
        use crate::nerve::simplicial_structure;
        use crate::random::{self, Shape};
        use crate::simplex::MonotoneMap;
        use rand::SeedableRng;
        use rand_chacha::ChaCha8Rng;

        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for (q, i) in [(2, 0), (2, 1), (3, 2)] {
            let filler = HornFiller::new(HornId::new(q, i).unwrap(), z()).unwrap();
            let fam = simplicial_structure(q, z());
            let push = fam.structure_map(&MonotoneMap::new(vec![0; q], 0).unwrap()).unwrap();
            let a = Arc::new(random::presentation(&mut rng, &Shape::default()));
            let g = random::hom(&mut rng, &a, fam.ring(0).ring(), 200).unwrap();
            let face = g.then(&push).unwrap();
            let faces = filler
                .setting()
                .diagram()
                .j0()
                .iter()
                .map(|&j| (j, face.clone()))
                .collect();
            let datum = filler.datum(faces).unwrap();
            let filled = filler.fill(&datum).unwrap();
            assert_eq!(filler.boundary(&filled.hom).unwrap(), datum);
        }
    }

    #[test]
    fn outer_horns_of_dimension_three() {
        for i in 0..=3 {
            let filler = HornFiller::new(HornId::new(3, i).unwrap(), z()).unwrap();
            let a = closed_point();
            let datum = filler.datum(constant_faces(&filler, &a)).unwrap();
            let filled = filler.fill(&datum).unwrap();
            assert_eq!(filler.boundary(&filled.hom).unwrap(), datum);
        }
    }
}
