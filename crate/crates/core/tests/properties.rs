//! Randomized invariants across modules.

use std::sync::Arc;

use num_bigint::BigInt;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use skein_core::bigon;
use skein_core::curves::{enumerate_lambda, is_balanced, is_balanced_extended, is_balanced_z, lambda_membership, reconstruct_from_normal, ExtendedCoords};
use skein_core::fixtures;
use skein_core::qtrace::TraceContext;
use skein_core::{AntisymForm, HalfPowerLaurent, TorusElement, TriangulatedSurface};

fn coeff() -> impl Strategy<Value = HalfPowerLaurent> {
    prop::collection::vec((-6i64..6, -4i64..5), 0..4).prop_map(HalfPowerLaurent::from_terms)
}

const DIM: usize = 3;

fn form() -> Arc<AntisymForm> {
    let m = vec![vec![0, 1, -2], vec![-1, 0, 3], vec![2, -3, 0]];
    Arc::new(AntisymForm::new(vec!["a".into(), "b".into(), "c".into()], m).unwrap())
}

fn exps() -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(-3i64..4, DIM)
}

fn element() -> impl Strategy<Value = Vec<(Vec<i64>, HalfPowerLaurent)>> {
    prop::collection::vec((exps(), coeff()), 0..4)
}

fn build(f: &Arc<AntisymForm>, terms: &[(Vec<i64>, HalfPowerLaurent)]) -> TorusElement {
    let mut u = TorusElement::zero(f);
    for (k, c) in terms {
        u.add_term(k.clone(), c);
    }
    u
}

proptest! {
    #[test]
    fn bar_is_an_involutive_ring_homomorphism(a in coeff(), b in coeff()) {
        prop_assert_eq!(a.bar().bar(), a.clone());
        prop_assert_eq!((&a * &b).bar(), &a.bar() * &b.bar());
        prop_assert_eq!((&a + &b).bar(), &a.bar() + &b.bar());
    }

    #[test]
    fn q1_evaluation_is_a_ring_homomorphism(a in coeff(), b in coeff()) {
        prop_assert_eq!((&a * &b).evaluate_q1(), a.evaluate_q1() * b.evaluate_q1());
        prop_assert_eq!((&a + &b).evaluate_q1(), a.evaluate_q1() + b.evaluate_q1());
        prop_assert_eq!(HalfPowerLaurent::one().evaluate_q1(), BigInt::from(1));
    }

    #[test]
    fn torus_multiplication_is_associative(x in element(), y in element(), z in element()) {
        let f = form();
        let (x, y, z) = (build(&f, &x), build(&f, &y), build(&f, &z));
        let left = x.multiply(&y).unwrap().multiply(&z).unwrap();
        let right = x.multiply(&y.multiply(&z).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn monomials_q_commute(k in exps(), k2 in exps()) {
        let f = form();
        let one = HalfPowerLaurent::one();
        let a = TorusElement::monomial(&f, k.clone(), one.clone());
        let b = TorusElement::monomial(&f, k2.clone(), one);
        let q = HalfPowerLaurent::q_half_pow(2 * f.pairing(&k, &k2));
        prop_assert_eq!(a.multiply(&b).unwrap(), b.multiply(&a).unwrap().scale(&q));
    }

    #[test]
    fn reflection_is_an_involutive_anti_homomorphism(x in element(), y in element()) {
        let f = form();
        let (x, y) = (build(&f, &x), build(&f, &y));
        prop_assert_eq!(x.reflect().reflect(), x.clone());
        prop_assert_eq!(x.multiply(&y).unwrap().reflect(), y.reflect().multiply(&x.reflect()).unwrap());
    }

    #[test]
    fn transfer_and_resolution_agree(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let w = bigon::random_word(&mut rng, 4, 6);
        prop_assert_eq!(bigon::evaluate_counit(&w).unwrap(), bigon::evaluate_counit_transfer(&w).unwrap());
    }

    #[test]
    fn reidemeister_two(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let w = bigon::random_word(&mut rng, 6, 6);
        if let Some(w2) = bigon::insert_r2(&mut rng, &w) {
            prop_assert_eq!(bigon::evaluate_counit(&w).unwrap(), bigon::evaluate_counit(&w2).unwrap());
        }
    }

    #[test]
    fn unequal_charge_gives_zero(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let w = bigon::random_word(&mut rng, 6, 6);
        let (l, r) = bigon::charge(&w);
        if l != r {
            prop_assert!(bigon::evaluate_counit(&w).unwrap().is_zero());
        }
    }
}

fn surface() -> impl Strategy<Value = (&'static str, TriangulatedSurface)> {
    prop::sample::select(fixtures::bundled_surfaces())
}

/// A random vector in the basis monoid of `s` with entries at most 2.
fn lambda_vector(s: &TriangulatedSurface, pick: usize) -> ExtendedCoords {
    let all = enumerate_lambda(s, 2);
    all[pick % all.len()].clone()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn basis_monoid_is_closed_under_addition((_, s) in surface(), i in any::<usize>(), j in any::<usize>()) {
        let (a, b) = (lambda_vector(&s, i), lambda_vector(&s, j));
        let sum: Vec<i64> = a.to_vec().iter().zip(b.to_vec()).map(|(x, y)| x + y).collect();
        prop_assert!(lambda_membership(&s, &ExtendedCoords::from_vec(&s, &sum).unwrap()));
    }

    #[test]
    fn coordinates_invert_reconstruction((_, s) in surface(), i in any::<usize>()) {
        let v = lambda_vector(&s, i);
        let d = reconstruct_from_normal(&s, &v).unwrap();
        prop_assert_eq!(d.coordinates(&s), v.clone());
        prop_assert!(is_balanced_z(&s, &v));
    }

    #[test]
    fn trace_exponents_are_balanced((_, s) in surface(), i in any::<usize>()) {
        let ctx = TraceContext::new(&s).unwrap();
        let d = reconstruct_from_normal(&s, &lambda_vector(&s, i)).unwrap();
        for (k, _) in ctx.shear_trace(&d).unwrap().terms() {
            prop_assert!(is_balanced(&s, k));
        }
        // In z-coordinates the image lies in the subalgebra generated by balanced
        // monomials and the squares of the hatted variables.
        for (k, _) in ctx.extended_trace(&d).unwrap().terms() {
            let v = ExtendedCoords::from_vec(&s, k).unwrap();
            prop_assert!(is_balanced_z(&s, &v) && v.hat.iter().all(|h| *h >= 0), "z exponent {:?}", k);
        }
        for (k, _) in ctx.extended_trace_y(&d).unwrap().terms() {
            prop_assert!(is_balanced_extended(&s, &ExtendedCoords::from_vec(&s, k).unwrap()), "y exponent {:?}", k);
        }
    }

    #[test]
    fn heights_do_not_matter_without_shared_edges((_, s) in surface(), i in any::<usize>(), perm_seed in any::<u64>()) {
        use rand::seq::SliceRandom;
        let ctx = TraceContext::new(&s).unwrap();
        let d = reconstruct_from_normal(&s, &lambda_vector(&s, i)).unwrap();
        prop_assume!(d.boundary_heights(&s).values().all(|e| e.len() <= 1));
        let mut heights: Vec<i64> = (0..d.components.len() as i64).collect();
        heights.shuffle(&mut ChaCha8Rng::seed_from_u64(perm_seed));
        let d2 = d.with_heights(&s, &heights);
        prop_assert_eq!(ctx.shear_trace(&d).unwrap(), ctx.shear_trace(&d2).unwrap());
        prop_assert_eq!(ctx.extended_trace(&d).unwrap(), ctx.extended_trace(&d2).unwrap());
    }
}
