//! Seeded random samples: semi-free presentations, cocycles and
//! homomorphisms into finite DG rings.
//!
//! Everything is driven by a caller-supplied [`rand::Rng`], so a fixed
//! seed reproduces a sample exactly.

use std::sync::Arc;

use num_bigint::BigInt;
use rand::seq::SliceRandom;
use rand::Rng;

use crate::dg::{BasisDGRing, Element};
use crate::linalg::{kernel_basis, smith};
use crate::semifree::{eval_with, kernel_boundary, GradedVar, Lifter, NCPoly, SemiFreeHom, SemiFreePresentation};

/// Shape bounds for [`presentation`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Shape {
    pub max_vars: usize,
    pub min_degree: i64,
    pub max_degree: i64,
    pub max_filt: usize,
    pub coef_bound: i64,
}

impl Default for Shape {
    fn default() -> Self {
        Shape {
            max_vars: 6,
            min_degree: -2,
            max_degree: 2,
            max_filt: 3,
            coef_bound: 2,
        }
    }
}

fn nonzero_coef(rng: &mut impl Rng, bound: i64) -> BigInt {
    let c = rng.gen_range(1..=bound.max(1));
    BigInt::from(if rng.gen_bool(0.5) { c } else { -c })
}

fn random_word(rng: &mut impl Rng, pool: &[usize], max_len: usize) -> Vec<usize> {
    let len = rng.gen_range(1..=max_len);
    (0..len).map(|_| *pool.choose(rng).expect("nonempty pool")).collect()
}

/// A candidate closed polynomial for the differential of a new generator,
/// built from the generators `0..vars.len()`.
fn closed_candidate(rng: &mut impl Rng, vars: &[GradedVar], d: &[NCPoly], shape: &Shape) -> Option<NCPoly> {
    let below: Vec<usize> = (0..vars.len()).filter(|&k| vars[k].filt < shape.max_filt).collect();
    let closed: Vec<usize> = (0..vars.len()).filter(|&k| d[k].is_zero()).collect();
    if below.is_empty() {
        return None;
    }
    let partial = SemiFreePresentation::new(vars.to_vec(), d.to_vec()).ok()?;
    let p = if closed.is_empty() || rng.gen_bool(0.5) {
        let word = random_word(rng, &below, 2);
        partial.extend_d(&NCPoly::word(word))
    } else {
        let first = random_word(rng, &closed, 2);
        let degree = partial.word_degree(&first);
        let mut p = NCPoly::term(first, nonzero_coef(rng, shape.coef_bound));
        for _ in 0..rng.gen_range(0..=1) {
            let other = random_word(rng, &closed, 2);
            if partial.word_degree(&other) == degree {
                p.add_term(other, nonzero_coef(rng, shape.coef_bound));
            }
        }
        p
    };
    if p.is_zero() || p.terms().any(|(w, _)| w.is_empty()) {
        return None;
    }
    Some(p)
}

/// A random semi-free presentation within `shape`. Generators are named
/// `x0, x1, …`; the first is always closed.
pub fn presentation(rng: &mut impl Rng, shape: &Shape) -> SemiFreePresentation {
    let n = rng.gen_range(1..=shape.max_vars.max(1));
    let mut vars: Vec<GradedVar> = Vec::with_capacity(n);
    let mut d: Vec<NCPoly> = Vec::with_capacity(n);
    for k in 0..n {
        let name = format!("x{k}");
        let mut placed = false;
        if k > 0 && rng.gen_bool(0.6) {
            for _ in 0..8 {
                let Some(p) = closed_candidate(rng, &vars, &d, shape) else {
                    continue;
                };
                let (word, _) = p.terms().next().expect("nonzero");
                let degree = word.iter().map(|&u| vars[u].degree).sum::<i64>() - 1;
                let filt = 1 + p.variables().map(|u| vars[u].filt).max().unwrap_or(0);
                if degree < shape.min_degree || degree > shape.max_degree || filt > shape.max_filt {
                    continue;
                }
                vars.push(GradedVar {
                    name: name.clone(),
                    degree,
                    filt,
                });
                d.push(p);
                placed = true;
                break;
            }
        }
        if !placed {
            let degree = rng.gen_range(shape.min_degree..=shape.max_degree);
            vars.push(GradedVar { name, degree, filt: 0 });
            d.push(NCPoly::zero());
        }
    }
    SemiFreePresentation::new(vars, d).expect("sampled presentations are valid by construction")
}

/// A random integer combination of a basis of the cocycles in `degree`.
pub fn cocycle(rng: &mut impl Rng, ring: &BasisDGRing, degree: i64, bound: i64) -> Element {
    if ring.rank_in(degree) == 0 {
        return Element::zero();
    }
    let mut out = Element::zero();
    for v in kernel_basis(&ring.differential_matrix(degree)) {
        let c = BigInt::from(rng.gen_range(-bound..=bound));
        out.add_scaled(&ring.from_vector(degree, &v), &c);
    }
    out
}

/// Some `e` of `degree` with `d e = m`, if there is one.
fn primitive(ring: &BasisDGRing, degree: i64, m: &Element) -> Option<Element> {
    if m.is_zero() {
        return Some(Element::zero());
    }
    if ring.rank_in(degree) == 0 {
        return None;
    }
    let target = ring.to_vector(m, degree + 1);
    let solution = smith(&ring.differential_matrix(degree)).solve(&target)?;
    Some(ring.from_vector(degree, &solution))
}

/// One attempt at a random homomorphism; fails when some `u(dx)` is not a
/// boundary.
fn hom_attempt(
    rng: &mut impl Rng,
    a: &Arc<SemiFreePresentation>,
    target: &Arc<BasisDGRing>,
    bound: i64,
) -> Option<SemiFreeHom> {
    let mut images = vec![Element::zero(); a.len()];
    for x in a.filtration_order() {
        let degree = a.var(x).degree;
        let z = cocycle(rng, target, degree, bound);
        images[x] = if a.d_of(x).is_zero() {
            z
        } else {
            let m = eval_with(target, &images, a.d_of(x));
            &primitive(target, degree, &m)? + &z
        };
    }
    let h = SemiFreeHom::validated(a.clone(), target.clone(), images).ok()?;
    Some(h)
}

/// A random homomorphism `A -> target`, or `None` after `attempts`
/// failures.
pub fn hom(
    rng: &mut impl Rng,
    a: &Arc<SemiFreePresentation>,
    target: &Arc<BasisDGRing>,
    attempts: usize,
) -> Option<SemiFreeHom> {
    (0..attempts).find_map(|k| hom_attempt(rng, a, target, if k % 4 == 3 { 0 } else { 2 }))
}

/// Per-generator perturbations for [`Lifter::lift_hom`]: boundaries in
/// `ker v`, so the perturbed lift is again a lift.
pub fn perturbation(rng: &mut impl Rng, lifter: &Lifter, a: &SemiFreePresentation, bound: i64) -> Vec<Element> {
    a.vars()
        .iter()
        .map(|x| {
            let n = lifter.kernel_basis(x.degree - 1).len();
            let coeffs: Vec<BigInt> = (0..n).map(|_| BigInt::from(rng.gen_range(-bound..=bound))).collect();
            kernel_boundary(lifter, x.degree, &coeffs)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nerve::cyl;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn presentations_respect_the_shape() {
        let shape = Shape::default();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let mut higher = 0;
        for _ in 0..200 {
            let p = presentation(&mut rng, &shape);
            assert!(p.len() <= 6 && !p.is_empty());
            assert!(p.max_filtration() <= 3);
            assert!(p.vars().iter().all(|x| (-2..=2).contains(&x.degree)));
            higher += p.vars().iter().filter(|x| x.filt > 0).count();
        }
        assert!(higher > 50);
    }

    #[test]
    fn homs_into_cylinders() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let target = cyl(2, Arc::new(BasisDGRing::integers())).ring().clone();
        let mut found = 0;
        for _ in 0..40 {
            let a = Arc::new(presentation(&mut rng, &Shape::default()));
            if let Some(h) = hom(&mut rng, &a, &target, 50) {
                assert!(h.is_valid());
                found += 1;
            }
        }
        assert!(found >= 35);
    }
}
