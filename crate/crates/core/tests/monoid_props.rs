use std::collections::BTreeSet;

use proptest::prelude::*;

use semiconv::algebra::{Additive, BoolRing, LeftSemimodule, NatCount, Rational, Semiring};
use semiconv::monoid::{KeyedVector, Monoid, Nat, Word};
use semiconv::regexp::words_up_to;

fn word(max_len: usize) -> impl Strategy<Value = Word> {
    proptest::collection::vec(prop_oneof![Just('a'), Just('b'), Just('c')], 0..=max_len)
        .prop_map(Word)
}

fn nat_count() -> impl Strategy<Value = NatCount> {
    (0u64..20).prop_map(NatCount::new)
}

fn rational() -> impl Strategy<Value = Rational> {
    (-9i64..10, 1i64..6).prop_map(|(n, d)| Rational::new(n, d))
}

fn vector<K: Ord + Clone + std::fmt::Debug, B: Semiring + std::fmt::Debug>(
    key: impl Strategy<Value = K>,
    weight: impl Strategy<Value = B>,
) -> impl Strategy<Value = KeyedVector<K, B>> {
    proptest::collection::vec((key, weight), 0..=5).prop_map(KeyedVector::from_entries)
}

fn word_vec() -> impl Strategy<Value = KeyedVector<Word, NatCount>> {
    vector(word(4), nat_count())
}

fn nat_vec() -> impl Strategy<Value = KeyedVector<Nat, Rational>> {
    vector((0u64..=4).prop_map(Nat), rational())
}

fn pair_vec() -> impl Strategy<Value = KeyedVector<(Nat, Nat), Rational>> {
    vector(
        ((0u64..=4).prop_map(Nat), (0u64..=4).prop_map(Nat)),
        rational(),
    )
}

fn laws<T: Semiring + PartialEq + std::fmt::Debug>(
    a: &T,
    b: &T,
    c: &T,
) -> Result<(), TestCaseError> {
    prop_assert_eq!(a.add(b).add(c), a.add(&b.add(c)));
    prop_assert_eq!(a.add(b), b.add(a));
    prop_assert_eq!(T::zero().add(a), a.clone());
    prop_assert_eq!(a.mul(b).mul(c), a.mul(&b.mul(c)));
    prop_assert_eq!(T::one().mul(a), a.clone());
    prop_assert_eq!(a.mul(&T::one()), a.clone());
    prop_assert_eq!(a.mul(&b.add(c)), a.mul(b).add(&a.mul(c)));
    prop_assert_eq!(a.add(b).mul(c), a.mul(c).add(&b.mul(c)));
    prop_assert_eq!(T::zero().mul(a), T::zero());
    prop_assert_eq!(a.mul(&T::zero()), T::zero());
    Ok(())
}

fn module_laws<S: Semiring, T: LeftSemimodule<S> + PartialEq + std::fmt::Debug>(
    s: &S,
    t: &S,
    p: &T,
    q: &T,
) -> Result<(), TestCaseError> {
    prop_assert_eq!(T::scale(&s.mul(t), p), T::scale(s, &T::scale(t, p)));
    prop_assert_eq!(T::scale(&s.add(t), p), T::scale(s, p).add(&T::scale(t, p)));
    prop_assert_eq!(T::scale(s, &p.add(q)), T::scale(s, p).add(&T::scale(s, q)));
    prop_assert_eq!(T::scale(&S::one(), p), p.clone());
    prop_assert_eq!(T::scale(&S::zero(), p), T::zero());
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn word_keys_form_a_semiring(a in word_vec(), b in word_vec(), c in word_vec()) {
        laws(&a, &b, &c)?;
    }

    #[test]
    fn nat_keys_form_a_semiring(a in nat_vec(), b in nat_vec(), c in nat_vec()) {
        laws(&a, &b, &c)?;
    }

    #[test]
    fn pair_keys_form_a_semiring(a in pair_vec(), b in pair_vec(), c in pair_vec()) {
        laws(&a, &b, &c)?;
    }

    #[test]
    fn scaling_is_a_semimodule(s in rational(), t in rational(), p in pair_vec(), q in pair_vec()) {
        module_laws(&s, &t, &p, &q)?;
    }

    #[test]
    fn word_scaling_is_a_semimodule(s in nat_count(), t in nat_count(), p in word_vec(), q in word_vec()) {
        module_laws(&s, &t, &p, &q)?;
    }

    #[test]
    fn singleton_decomposition_rebuilds(p in pair_vec()) {
        let rebuilt = p.decompose().into_iter().fold(KeyedVector::zero(), |acc, s| acc.add(&s));
        prop_assert_eq!(rebuilt, p);
    }

    #[test]
    fn boolean_convolution_is_concatenation(
        ps in proptest::collection::btree_set(word(4), 0..=5),
        qs in proptest::collection::btree_set(word(4), 0..=5),
    ) {
        let lift = |s: &BTreeSet<Word>| {
            KeyedVector::from_entries(s.iter().map(|w| (w.clone(), BoolRing(true))))
        };
        let mut concat = BTreeSet::new();
        for u in &ps {
            for v in &qs {
                let mut w = u.0.clone();
                w.extend(&v.0);
                concat.insert(Word(w));
            }
        }
        let got: BTreeSet<Word> = lift(&ps).mul(&lift(&qs)).keys().cloned().collect();
        prop_assert_eq!(got, concat);
    }

    #[test]
    fn lift2_of_the_monoid_is_convolution(p in word_vec(), q in word_vec()) {
        prop_assert_eq!(p.vlift2(&q, |u, v| u.combine(v)), p.mul(&q));
    }

    #[test]
    fn map_is_bind_of_single(p in word_vec()) {
        let h = |w: &Word| w.len() as u64;
        prop_assert_eq!(p.vmap(h), p.vbind(|w| KeyedVector::single(h(w))));
    }

    #[test]
    fn lift2_is_bind_then_map(p in nat_vec(), q in nat_vec()) {
        let direct = p.vlift2(&q, |a, b| (a.0, b.0));
        let derived = p.vbind(|a| q.vmap(|b| (a.0, b.0)));
        prop_assert_eq!(direct, derived);
    }

    #[test]
    fn curry_round_trips(p in pair_vec()) {
        prop_assert_eq!(KeyedVector::uncurry_vec(&p.curry_vec()), p);
    }

    #[test]
    fn zero_weights_are_dropped(k in word(4)) {
        let v = KeyedVector::singleton(k, NatCount::new(0));
        prop_assert!(v.is_empty());
        prop_assert_eq!(v, KeyedVector::<Word, NatCount>::empty());
    }
}

proptest! {
    // Each case sweeps all 9841 words up to length 8.
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn convolve_matches_splits(p in word_vec(), q in word_vec()) {
        let pq = p.mul(&q);
        for w in words_up_to(&['a', 'b', 'c'], 8) {
            prop_assert_eq!(pq.index(&w), KeyedVector::convolve_by_splits(&p, &q, &w));
        }
    }
}
