use std::sync::Arc;

use cylinder::dg::{check_hom, tensor, tensor_hom, BasisDGRing, DGRingHom, Element};
use cylinder::json;
use cylinder::linalg::{cohomology, inverse, smith, IntMatrix};
use cylinder::nerve::{cyl, simplicial_structure};
use cylinder::random::{self, Shape};
use cylinder::semifree::NCPoly;
use cylinder::simplex::{codegeneracy, coface, MonotoneMap};
use num_bigint::BigInt;
use num_traits::Zero;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn z() -> Arc<BasisDGRing> {
    Arc::new(BasisDGRing::integers())
}

fn matrix() -> impl Strategy<Value = IntMatrix> {
    (1usize..6, 1usize..6).prop_flat_map(|(r, c)| {
        prop::collection::vec(-6i64..=6, r * c).prop_map(move |v| {
            let rows: Vec<Vec<i64>> = v.chunks(c).map(<[i64]>::to_vec).collect();
            IntMatrix::from_rows(&rows)
        })
    })
}

fn element(ring: &BasisDGRing, coeffs: &[i64]) -> Element {
    Element::from_terms(
        coeffs
            .iter()
            .enumerate()
            .take(ring.dim())
            .map(|(k, &c)| (k, BigInt::from(c))),
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn smith_form_is_a_factorization(a in matrix()) {
        let snf = smith(&a);
        let s = snf.u.mul(&a).unwrap().mul(&snf.v).unwrap();
        prop_assert_eq!(&s, &snf.s);
        for r in 0..s.rows() {
            for c in 0..s.cols() {
                prop_assert!(r == c || s.get(r, c).is_zero());
            }
        }
        let d = snf.invariant_factors();
        prop_assert!(d.iter().all(|x| *x > BigInt::zero()));
        prop_assert!(d.windows(2).all(|w| (&w[1] % &w[0]).is_zero()));
        prop_assert!(inverse(&snf.u).is_some() && inverse(&snf.v).is_some());
        for k in snf.kernel_basis() {
            prop_assert!(a.mul_vec(&k).unwrap().iter().all(Zero::is_zero));
        }
    }

    #[test]
    fn solve_finds_solutions_of_consistent_systems(a in matrix(), x in prop::collection::vec(-4i64..=4, 6)) {
        let x: Vec<BigInt> = x.into_iter().take(a.cols()).map(BigInt::from).collect();
        let b = a.mul_vec(&x).unwrap();
        let y = smith(&a).solve(&b).expect("b is in the image");
        prop_assert_eq!(a.mul_vec(&y).unwrap(), b);
    }

    #[test]
    fn cylinder_arithmetic(q in 0usize..=2, coeffs in prop::collection::vec(-3i64..=3, 21)) {
        let n = cyl(q, z());
        let r = n.ring();
        let dim = r.dim();
        let (a, b, c) = (element(r, &coeffs[..dim]), element(r, &coeffs[7..7 + dim]), element(r, &coeffs[14..14 + dim]));
        prop_assert_eq!(r.mul(&r.mul(&a, &b), &c), r.mul(&a, &r.mul(&b, &c)));
        prop_assert_eq!(r.mul(&a, &(&b + &c)), &r.mul(&a, &b) + &r.mul(&a, &c));
        prop_assert_eq!(r.mul(r.unit(), &a), a.clone());
        prop_assert!(r.d(&r.d(&a)).is_zero());
    }

    #[test]
    fn presentations_square_to_zero(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = random::presentation(&mut rng, &Shape::default());
        for _ in 0..4 {
            let words: Vec<usize> = (0..3).map(|k| (seed as usize >> (3 * k)) % p.len()).collect();
            let poly = NCPoly::word(words);
            prop_assert!(p.extend_d(&p.extend_d(&poly)).is_zero());
        }
        prop_assert_eq!(json::parse_presentation(&json::dump_presentation(&p)).unwrap(), p);
    }

    #[test]
    fn homomorphisms_are_multiplicative(seed in any::<u64>(), q in 1usize..=3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = Arc::new(random::presentation(&mut rng, &Shape::default()));
        let target = cyl(q, z()).ring().clone();
        if let Some(f) = random::hom(&mut rng, &a, &target, 100) {
            for x in 0..a.len() {
                for y in 0..a.len() {
                    let (px, py) = (NCPoly::var(x), NCPoly::var(y));
                    let pxy = px.mul(&py);
                    prop_assert_eq!(f.eval(&pxy), target.mul(&f.eval(&px), &f.eval(&py)));
                    prop_assert_eq!(f.eval(&a.extend_d(&pxy)), target.d(&f.eval(&pxy)));
                }
            }
        }
    }
}

#[test]
fn monotone_identities() {
    for q in 1..=4 {
        for i in 0..=q {
            for j in (i + 1)..=q {
                if q < 2 {
                    continue;
                }
                let lhs = coface(j, q).unwrap().compose(&coface(i, q - 1).unwrap()).unwrap();
                let rhs = coface(i, q).unwrap().compose(&coface(j - 1, q - 1).unwrap()).unwrap();
                assert_eq!(lhs, rhs);
            }
        }
        for j in 0..q {
            let id = codegeneracy(j, q - 1).unwrap().compose(&coface(j, q).unwrap()).unwrap();
            assert_eq!(id, MonotoneMap::identity(q - 1));
        }
    }
}

#[test]
fn tensor_of_homs_is_a_hom() {
    let fam = simplicial_structure(2, z());
    let f: DGRingHom = fam.face(2, 1).unwrap();
    let g: DGRingHom = fam.degeneracy(0, 0).unwrap();
    let source = Arc::new(tensor(f.source(), g.source()));
    let target = Arc::new(tensor(f.target(), g.target()));
    let fg = tensor_hom(&f, &g, source, target).unwrap();
    assert!(check_hom(&fg).passed());
}

#[test]
fn cylinders_have_the_cohomology_of_a_point() {
    for q in 0..=4 {
        let h = cohomology(&cyl(q, z()).ring().underlying_complex());
        assert!(h.is_integers_in_degree_zero());
    }
}
