//! JSON forms of rings, elements, presentations and homomorphisms.
//!
//! An element is a list of `{"id", "coef"}` terms in basis order.
//! Coefficients are JSON integers, or decimal strings once they leave the
//! `i64` range. Every writer emits entries in canonical order, so output is
//! byte-stable.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::dg::{BasisDGRing, DgError, Element, RingBuilder};
use crate::semifree::{GradedVar, NCPoly, SemiFreeError, SemiFreeHom, SemiFreePresentation};

#[derive(Debug, Error)]
pub enum JsonError {
    #[error("malformed JSON: {0}")]
    Syntax(#[from] serde_json::Error),
    #[error("bad coefficient {0:?}")]
    Coef(String),
    #[error(transparent)]
    Ring(#[from] DgError),
    #[error(transparent)]
    SemiFree(#[from] SemiFreeError),
    #[error("face key {0:?} is not a number")]
    FaceKey(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Coef {
    Small(i64),
    Big(String),
}

impl From<&BigInt> for Coef {
    fn from(c: &BigInt) -> Self {
        i64::try_from(c)
            .map(Coef::Small)
            .unwrap_or_else(|_| Coef::Big(c.to_string()))
    }
}

impl TryFrom<&Coef> for BigInt {
    type Error = JsonError;

    fn try_from(c: &Coef) -> Result<Self, JsonError> {
        match c {
            Coef::Small(n) => Ok(BigInt::from(*n)),
            Coef::Big(s) => s.parse().map_err(|_| JsonError::Coef(s.clone())),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermJson {
    pub id: String,
    pub coef: Coef,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SymbolJson {
    pub id: String,
    pub degree: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiffJson {
    pub from: String,
    pub to: String,
    pub coef: Coef,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MulJson {
    pub left: String,
    pub right: String,
    pub to: String,
    pub coef: Coef,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RingJson {
    pub basis: Vec<SymbolJson>,
    pub unit: Vec<TermJson>,
    pub diff: Vec<DiffJson>,
    pub mul: Vec<MulJson>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VarJson {
    pub name: String,
    pub degree: i64,
    /// Inferred from `d` when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub filt: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MonomialJson {
    pub coef: Coef,
    pub word: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PresentationJson {
    pub vars: Vec<VarJson>,
    #[serde(default)]
    pub d: BTreeMap<String, Vec<MonomialJson>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HomJson {
    pub images: BTreeMap<String, Vec<TermJson>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FacesJson {
    pub faces: BTreeMap<String, HomJson>,
}

pub fn element_to_json(ring: &BasisDGRing, e: &Element) -> Vec<TermJson> {
    e.terms()
        .map(|(k, c)| TermJson {
            id: ring.symbol(k).id.clone(),
            coef: c.into(),
        })
        .collect()
}

pub fn element_from_json(ring: &BasisDGRing, terms: &[TermJson]) -> Result<Element, JsonError> {
    let mut e = Element::zero();
    for t in terms {
        e.add_term(ring.index_of(&t.id)?, BigInt::try_from(&t.coef)?);
    }
    Ok(e)
}

pub fn ring_to_json(ring: &BasisDGRing) -> RingJson {
    let id = |k: usize| ring.symbol(k).id.clone();
    let diff = (0..ring.dim())
        .flat_map(|f| {
            ring.diff_of(f).terms().map(move |(t, c)| DiffJson {
                from: id(f),
                to: id(t),
                coef: c.into(),
            })
        })
        .collect();
    let mut products: Vec<_> = ring.nonzero_products().collect();
    products.sort_by_key(|&(k, _)| k);
    let mul = products
        .into_iter()
        .flat_map(|((l, r), e)| {
            e.terms().map(move |(t, c)| MulJson {
                left: id(l),
                right: id(r),
                to: id(t),
                coef: c.into(),
            })
        })
        .collect();
    RingJson {
        basis: ring
            .basis()
            .iter()
            .map(|s| SymbolJson {
                id: s.id.clone(),
                degree: s.degree,
            })
            .collect(),
        unit: element_to_json(ring, ring.unit()),
        diff,
        mul,
    }
}

pub fn ring_from_json(json: &RingJson) -> Result<BasisDGRing, JsonError> {
    let mut b = RingBuilder::new();
    for s in &json.basis {
        b.symbol(s.id.clone(), s.degree);
    }
    for t in &json.unit {
        b.unit(t.id.clone(), BigInt::try_from(&t.coef)?);
    }
    for t in &json.diff {
        b.diff(t.from.clone(), t.to.clone(), BigInt::try_from(&t.coef)?);
    }
    for t in &json.mul {
        b.mul(
            t.left.clone(),
            t.right.clone(),
            t.to.clone(),
            BigInt::try_from(&t.coef)?,
        );
    }
    Ok(b.build()?)
}

/// The canonical ring dump, newline-terminated.
pub fn dump_ring(ring: &BasisDGRing) -> String {
    to_string(&ring_to_json(ring))
}

pub fn parse_ring(text: &str) -> Result<BasisDGRing, JsonError> {
    ring_from_json(&serde_json::from_str(text)?)
}

pub fn presentation_to_json(p: &SemiFreePresentation) -> PresentationJson {
    let name = |k: usize| p.var(k).name.clone();
    let d = (0..p.len())
        .filter(|&k| !p.d_of(k).is_zero())
        .map(|k| {
            let terms = p
                .d_of(k)
                .terms()
                .map(|(w, c)| MonomialJson {
                    coef: c.into(),
                    word: w.iter().map(|&u| name(u)).collect(),
                })
                .collect();
            (name(k), terms)
        })
        .collect();
    PresentationJson {
        vars: p
            .vars()
            .iter()
            .map(|x| VarJson {
                name: x.name.clone(),
                degree: x.degree,
                filt: Some(x.filt),
            })
            .collect(),
        d,
    }
}

pub fn presentation_from_json(json: &PresentationJson) -> Result<SemiFreePresentation, JsonError> {
    let names: BTreeMap<&str, usize> = json
        .vars
        .iter()
        .enumerate()
        .map(|(k, v)| (v.name.as_str(), k))
        .collect();
    let lookup = |n: &str| {
        names
            .get(n)
            .copied()
            .ok_or_else(|| SemiFreeError::UnknownVar(n.to_string()))
    };
    let mut d = vec![NCPoly::zero(); json.vars.len()];
    for (x, terms) in &json.d {
        let k = lookup(x)?;
        for t in terms {
            let word = t.word.iter().map(|n| lookup(n)).collect::<Result<Vec<_>, _>>()?;
            d[k].add_term(word, BigInt::try_from(&t.coef)?);
        }
    }
    if json.vars.iter().all(|v| v.filt.is_some()) {
        let vars = json
            .vars
            .iter()
            .map(|v| GradedVar {
                name: v.name.clone(),
                degree: v.degree,
                filt: v.filt.unwrap_or_default(),
            })
            .collect();
        Ok(SemiFreePresentation::new(vars, d)?)
    } else {
        let vars = json.vars.iter().map(|v| (v.name.clone(), v.degree)).collect();
        Ok(SemiFreePresentation::with_inferred_filtration(vars, d)?)
    }
}

pub fn dump_presentation(p: &SemiFreePresentation) -> String {
    to_string(&presentation_to_json(p))
}

pub fn parse_presentation(text: &str) -> Result<SemiFreePresentation, JsonError> {
    presentation_from_json(&serde_json::from_str(text)?)
}

pub fn hom_to_json(f: &SemiFreeHom) -> HomJson {
    HomJson {
        images: f
            .source()
            .vars()
            .iter()
            .zip(f.images())
            .map(|(x, e)| (x.name.clone(), element_to_json(f.target(), e)))
            .collect(),
    }
}

/// Generators missing from `images` go to zero. The result is checked for
/// degrees but not for `d`.
pub fn hom_from_json(
    json: &HomJson,
    source: Arc<SemiFreePresentation>,
    target: Arc<BasisDGRing>,
) -> Result<SemiFreeHom, JsonError> {
    if let Some(name) = json.images.keys().find(|n| source.index_of(n).is_err()) {
        return Err(SemiFreeError::UnknownVar(name.clone()).into());
    }
    let images = source
        .vars()
        .iter()
        .map(|x| match json.images.get(&x.name) {
            Some(terms) => element_from_json(&target, terms),
            None => Ok(Element::zero()),
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(SemiFreeHom::new(source, target, images)?)
}

pub fn dump_hom(f: &SemiFreeHom) -> String {
    to_string(&hom_to_json(f))
}

pub fn parse_hom(
    text: &str,
    source: Arc<SemiFreePresentation>,
    target: Arc<BasisDGRing>,
) -> Result<SemiFreeHom, JsonError> {
    hom_from_json(&serde_json::from_str(text)?, source, target)
}

/// `{"faces": {"j": hom}}`, keyed by face index.
pub fn dump_faces(faces: &BTreeMap<usize, SemiFreeHom>) -> String {
    let json = FacesJson {
        faces: faces.iter().map(|(j, f)| (j.to_string(), hom_to_json(f))).collect(),
    };
    to_string(&json)
}

pub fn parse_faces(
    text: &str,
    source: Arc<SemiFreePresentation>,
    target: Arc<BasisDGRing>,
) -> Result<BTreeMap<usize, SemiFreeHom>, JsonError> {
    let json: FacesJson = serde_json::from_str(text)?;
    json.faces
        .iter()
        .map(|(j, h)| {
            let j = j.parse().map_err(|_| JsonError::FaceKey(j.clone()))?;
            Ok((j, hom_from_json(h, source.clone(), target.clone())?))
        })
        .collect()
}

fn to_string<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("JSON values always serialize");
    s.push('\n');
    s
}
