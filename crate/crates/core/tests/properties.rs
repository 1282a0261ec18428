use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use repvar_core::autf::{self, nielsen_generators};
use repvar_core::charvar::{basis_traces, numeric_trace, trace_polynomial};
use repvar_core::field::Field;
use repvar_core::{AutElement, FpGroup, Letter, PrimeField, Word};

fn letters(n: usize, max_len: usize) -> impl Strategy<Value = Vec<Letter>> {
    prop::collection::vec((1..=n, any::<bool>()).prop_map(|(g, inv)| Letter::new(g, inv)), 0..=max_len)
}

fn word(n: usize, max_len: usize) -> impl Strategy<Value = Word> {
    letters(n, max_len).prop_map(move |l| Word::reduce(l, n).unwrap())
}

/// A product of Nielsen generators and their inverses.
fn automorphism(n: usize, max_len: usize) -> impl Strategy<Value = AutElement> {
    prop::collection::vec((any::<prop::sample::Index>(), any::<bool>()), 0..=max_len).prop_map(move |picks| {
        let gens = nielsen_generators(n).unwrap();
        picks.iter().fold(AutElement::identity(n), |acc, (i, inv)| {
            let g = i.get(&gens);
            acc.compose(&if *inv { g.inv() } else { g.clone() }).unwrap()
        })
    })
}

fn sl2(p: u64) -> FpGroup {
    FpGroup::sl2(PrimeField::new(p).unwrap())
}

proptest! {
    #[test]
    fn reduction_is_idempotent(raw in letters(3, 20)) {
        let w = Word::reduce(raw, 3).unwrap();
        prop_assert_eq!(Word::reduce(w.letters().iter().copied(), 3).unwrap(), w.clone());
        prop_assert!(w.letters().windows(2).all(|p| p[0] != p[1].inv()));
    }

    #[test]
    fn multiplication_is_associative(a in word(3, 8), b in word(3, 8), c in word(3, 8)) {
        let left = a.multiply(&b).unwrap().multiply(&c).unwrap();
        let right = a.multiply(&b.multiply(&c).unwrap()).unwrap();
        prop_assert_eq!(left, right);
        prop_assert!(a.multiply(&a.invert()).unwrap().is_empty());
    }

    #[test]
    fn text_round_trip(w in word(3, 12)) {
        prop_assert_eq!(Word::parse(&w.to_string(), 3).unwrap(), w.clone());
        prop_assert_eq!(Word::parse(&w.to_sugar(), 3).unwrap(), w);
    }

    #[test]
    fn cyclic_reduction_conjugates_back(w in word(2, 14)) {
        let (core, c) = w.cyclically_reduce();
        prop_assert!(core.is_cyclically_reduced());
        prop_assert_eq!(c.multiply(&core).unwrap().multiply(&c.invert()).unwrap(), w);
    }

    #[test]
    fn composition_matches_application(s in automorphism(3, 4), t in automorphism(3, 4), w in word(3, 6)) {
        let st = s.compose(&t).unwrap();
        prop_assert_eq!(st.apply(&w).unwrap(), s.apply(&t.apply(&w).unwrap()).unwrap());
        prop_assert_eq!(st.inv().apply(&st.apply(&w).unwrap()).unwrap(), w);
    }

    #[test]
    fn inverse_certificates_hold(s in automorphism(3, 6)) {
        prop_assert!(autf::equals(&s.forward().compose(s.inverse()).unwrap(), &repvar_core::Endomorphism::identity(3)));
        prop_assert!(s.compose(&s.inv()).unwrap().is_identity());
    }

    #[test]
    fn evaluation_is_a_homomorphism(u in word(3, 8), v in word(3, 8), seed in any::<u64>()) {
        let g = sl2(101);
        let x = g.random_point(3, &mut ChaCha8Rng::seed_from_u64(seed));
        let uv = g.evaluate_word(&u.multiply(&v).unwrap(), &x).unwrap();
        prop_assert_eq!(uv, g.mul(&g.evaluate_word(&u, &x).unwrap(), &g.evaluate_word(&v, &x).unwrap()));
    }

    #[test]
    fn sigma_is_an_anti_action(s in automorphism(2, 4), t in automorphism(2, 4), seed in any::<u64>()) {
        let g = sl2(101);
        let x = g.random_point(2, &mut ChaCha8Rng::seed_from_u64(seed));
        let st = s.compose(&t).unwrap();
        let lhs = g.sigma_x(st.forward(), &x).unwrap();
        let rhs = g.sigma_x(t.forward(), &g.sigma_x(s.forward(), &x).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn combined_action_is_a_left_action(s in automorphism(2, 3), t in automorphism(2, 3), seed in any::<u64>()) {
        let g = sl2(13);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x = g.random_point(2, &mut rng);
        let gamma = g.inner(g.random_element(&mut rng)).unwrap();
        let delta = g.inner(g.random_element(&mut rng)).unwrap();
        let lhs = g.act(&s, &gamma, &g.act(&t, &delta, &x).unwrap()).unwrap();
        let gd = g.compose_automorphisms(&gamma, &delta).unwrap();
        let rhs = g.act(&s.compose(&t).unwrap(), &gd, &x).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn sigma_and_gamma_commute(s in automorphism(3, 4), seed in any::<u64>()) {
        let g = sl2(31);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x = g.random_point(3, &mut rng);
        let gamma = g.inner(g.random_element(&mut rng)).unwrap();
        let a = g.gamma_x(&gamma, &g.sigma_x(s.forward(), &x).unwrap()).unwrap();
        let b = g.sigma_x(s.forward(), &g.gamma_x(&gamma, &x).unwrap()).unwrap();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn trace_polynomial_matches_numeric_trace(w in word(3, 10), seed in any::<u64>()) {
        let g = sl2(101);
        let x = g.random_point(3, &mut ChaCha8Rng::seed_from_u64(seed));
        let poly = trace_polynomial(&w).unwrap();
        prop_assert_eq!(poly.evaluate(g.field(), &basis_traces(&g, &x).unwrap()), numeric_trace(&g, &w, &x).unwrap());
    }

    #[test]
    fn prime_field_inverses(p_index in 0usize..5, a in 1u64..1_000_000) {
        let p = [3u64, 5, 7, 101, 65_521][p_index];
        let f = PrimeField::new(p).unwrap();
        let x = f.from_i64(a as i64);
        match f.inv(&x) {
            Some(y) => prop_assert_eq!(f.mul(&x, &y), 1),
            None => prop_assert_eq!(x, 0),
        }
    }
}
