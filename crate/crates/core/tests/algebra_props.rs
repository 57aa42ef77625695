use proptest::prelude::*;

use semiconv::algebra::{
    positive, Additive, BoolRing, LeftSemimodule, NatCount, Rational, Real64, Scalar, Semiring,
    StarSemiring,
};

fn semiring_holds<T: Semiring>(
    a: &T,
    b: &T,
    c: &T,
    eq: impl Fn(&T, &T) -> bool,
) -> Result<(), String> {
    let (z, o) = (T::zero(), T::one());
    let checks = [
        ("add-assoc", eq(&a.add(b).add(c), &a.add(&b.add(c)))),
        ("add-comm", eq(&a.add(b), &b.add(a))),
        ("add-zero", eq(&z.add(a), a)),
        ("mul-assoc", eq(&a.mul(b).mul(c), &a.mul(&b.mul(c)))),
        ("one-left", eq(&o.mul(a), a)),
        ("one-right", eq(&a.mul(&o), a)),
        (
            "distrib-left",
            eq(&a.mul(&b.add(c)), &a.mul(b).add(&a.mul(c))),
        ),
        (
            "distrib-right",
            eq(&a.add(b).mul(c), &a.mul(c).add(&b.mul(c))),
        ),
        ("zero-left", eq(&z.mul(a), &z)),
        ("zero-right", eq(&a.mul(&z), &z)),
    ];
    match checks.iter().find(|(_, ok)| !ok) {
        Some((name, _)) => Err(name.to_string()),
        None => Ok(()),
    }
}

fn star_holds<T: StarSemiring>(p: &T, eq: impl Fn(&T, &T) -> bool) -> bool {
    let s = p.star().expect("star defined");
    eq(&s, &T::one().add(&p.mul(&s))) && eq(&s, &T::one().add(&s.mul(p)))
}

fn affine_holds<T: StarSemiring>(m: &T, b: &T, eq: impl Fn(&T, &T) -> bool) -> bool {
    let p = m.star().expect("star defined").mul(b);
    eq(&p, &b.add(&m.mul(&p)))
}

fn boolean() -> impl Strategy<Value = BoolRing> {
    any::<bool>().prop_map(BoolRing)
}

fn natural() -> impl Strategy<Value = NatCount> {
    prop_oneof![Just(0u64), Just(1u64), 0u64..1_000_000].prop_map(NatCount::new)
}

fn rational() -> impl Strategy<Value = Rational> {
    (-50i64..50, 1i64..12).prop_map(|(n, d)| Rational::new(n, d))
}

fn real() -> impl Strategy<Value = Real64> {
    prop_oneof![Just(0.0), Just(1.0), 0.0f64..100.0].prop_map(Real64)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn bool_semiring(a in boolean(), b in boolean(), c in boolean()) {
        prop_assert_eq!(semiring_holds(&a, &b, &c, |x, y| x == y), Ok(()));
        prop_assert!(star_holds(&a, |x, y| x == y));
        prop_assert!(affine_holds(&a, &b, |x, y| x == y));
    }

    #[test]
    fn nat_semiring(a in natural(), b in natural(), c in natural()) {
        prop_assert_eq!(semiring_holds(&a, &b, &c, |x, y| x == y), Ok(()));
        prop_assert!(star_holds(&NatCount::new(0), |x, y| x == y));
    }

    #[test]
    fn nat_star_only_at_zero(n in 1u64..1000) {
        prop_assert!(NatCount::new(n).star().is_err());
    }

    #[test]
    fn rational_semiring(a in rational(), b in rational(), c in rational()) {
        prop_assert_eq!(semiring_holds(&a, &b, &c, |x, y| x == y), Ok(()));
    }

    #[test]
    fn rational_star(n in -9i64..10, d in 10i64..20) {
        let p = Rational::new(n, d);
        prop_assert!(star_holds(&p, |x, y| x == y));
    }

    #[test]
    fn real_semiring(a in real(), b in real(), c in real()) {
        prop_assert_eq!(semiring_holds(&a, &b, &c, Real64::approx_eq), Ok(()));
    }

    #[test]
    fn real_star_and_affine(m in -0.99f64..0.99, b in -10.0f64..10.0) {
        prop_assert!(star_holds(&Real64(m), Real64::approx_eq));
        prop_assert!(affine_holds(&Real64(m), &Real64(b), Real64::approx_eq));
    }

    #[test]
    fn self_action_is_multiplication(s in rational(), p in rational()) {
        prop_assert_eq!(Rational::scale(&s, &p), s.mul(&p));
        prop_assert_eq!(Rational::act(&s, &p), s.mul(&p));
    }

    #[test]
    fn scalar_text_round_trips(a in rational(), n in natural()) {
        prop_assert_eq!(Rational::parse_scalar(&a.to_string()).unwrap(), a);
        prop_assert_eq!(NatCount::parse_scalar(&n.to_string()).unwrap(), n);
    }
}

#[test]
fn positive_is_a_homomorphism() {
    let (z, o) = (NatCount::zero(), NatCount::one());
    assert_eq!(positive(&z), BoolRing::zero());
    assert_eq!(positive(&o), BoolRing::one());
    for i in 0..=20u64 {
        for j in 0..=20u64 {
            let (a, b) = (NatCount::new(i), NatCount::new(j));
            assert_eq!(positive(&a.add(&b)), positive(&a).add(&positive(&b)));
            assert_eq!(positive(&a.mul(&b)), positive(&a).mul(&positive(&b)));
        }
    }
}
