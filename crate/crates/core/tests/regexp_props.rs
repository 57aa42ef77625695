use proptest::prelude::*;

use semiconv::algebra::{Additive, BoolRing, NatCount, Semiring, StarSemiring};
use semiconv::gen::{self, random_regexp};
use semiconv::regexp::{
    at_eps, deriv, index_str, index_word, mk_examples, parse_program, scale, smart_add, smart_mul,
    words_up_to, RegExp,
};

const AB: [char; 2] = ['a', 'b'];

fn expr(depth: usize) -> impl Strategy<Value = RegExp<NatCount>> {
    any::<u64>().prop_map(move |seed| random_regexp(&mut gen::rng(seed), depth, &AB))
}

fn nat() -> impl Strategy<Value = NatCount> {
    (0u64..6).prop_map(NatCount::new)
}

fn agree_on(
    p: &RegExp<NatCount>,
    q: &RegExp<NatCount>,
    max_len: usize,
) -> Result<(), TestCaseError> {
    for w in words_up_to(&AB, max_len) {
        let (a, b) = (index_word(p, w.symbols()), index_word(q, w.symbols()));
        prop_assert_eq!(a, b, "{} vs {} on {:?}", p, q, w);
    }
    Ok(())
}

fn alphabet_word(alphabet: [char; 2], max_len: usize) -> impl Strategy<Value = String> {
    proptest::collection::vec(proptest::sample::select(alphabet.to_vec()), 0..=max_len)
        .prop_map(|v| v.into_iter().collect())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn empty_word_weight_rules(p in expr(3), q in expr(3), s in nat()) {
        let (ep, eq) = (at_eps(&p).unwrap(), at_eps(&q).unwrap());
        prop_assert_eq!(at_eps(&RegExp::raw_sum(p.clone(), q.clone())).unwrap(), ep.add(&eq));
        prop_assert_eq!(at_eps(&RegExp::raw_prod(p.clone(), q.clone())).unwrap(), ep.mul(&eq));
        prop_assert_eq!(at_eps(&scale(&s, &p)).unwrap(), s.mul(&ep));
        if let Ok(star) = ep.star() {
            prop_assert_eq!(at_eps(&RegExp::star(p.clone())).unwrap(), star);
        }
    }

    #[test]
    fn product_derivative_rule(p in expr(3), q in expr(3)) {
        let pq = RegExp::raw_prod(p.clone(), q.clone());
        let (dpq, dp, dq) = (deriv(&pq).unwrap(), deriv(&p).unwrap(), deriv(&q).unwrap());
        let ep = at_eps(&p).unwrap();
        for c in AB {
            let rule = smart_add(&scale(&ep, &dq.index(c)), &smart_mul(&dp.index(c), &q));
            agree_on(&dpq.index(c), &rule, 4)?;
        }
    }

    #[test]
    fn star_derivative_rule(p in expr(3)) {
        let ep = at_eps(&p).unwrap();
        prop_assume!(ep.star().is_ok());
        let s = RegExp::star(p.clone());
        let (ds, dp) = (deriv(&s).unwrap(), deriv(&p).unwrap());
        for c in AB {
            let rule = scale(&ep.star().unwrap(), &smart_mul(&dp.index(c), &s));
            agree_on(&ds.index(c), &rule, 4)?;
        }
    }

    #[test]
    fn matching_is_iterated_derivatives(p in expr(4), w in alphabet_word(AB, 6)) {
        let mut cur = p.clone();
        for c in w.chars() {
            cur = deriv(&cur).unwrap().index(c);
        }
        prop_assert_eq!(at_eps(&cur).unwrap(), index_str(&p, &w).unwrap());
    }

    #[test]
    fn counting_agrees_with_membership(w in alphabet_word(['a', 'b'], 12), v in alphabet_word(['[', ']'], 12)) {
        let (n, b) = (mk_examples::<NatCount>(), mk_examples::<BoolRing>());
        for (en, eb, word) in [(&n.anbn, &b.anbn, &w), (&n.dyck, &b.dyck, &v), (&n.fishy, &b.fishy, &w)] {
            let count = index_str(en, word).unwrap();
            let member = index_str(eb, word).unwrap();
            prop_assert_eq!(!count.is_zero(), member.0);
        }
    }

    #[test]
    fn parsed_programs_match_constructors(w in alphabet_word(AB, 8)) {
        let parsed: RegExp<NatCount> = parse_program("'a'^* * 'a'^*").unwrap();
        let a = RegExp::star(RegExp::symbol('a'));
        let built = smart_mul(&a, &a);
        prop_assert_eq!(index_str(&parsed, &w).unwrap(), index_str(&built, &w).unwrap());
    }
}

#[test]
fn anbn_counts_exactly() {
    let anbn = mk_examples::<NatCount>().anbn;
    for n in 0..=10 {
        for m in 0..=10 {
            let w = format!("{}{}", "a".repeat(n), "b".repeat(m));
            let want = NatCount::new((n == m) as u64);
            assert_eq!(index_str(&anbn, &w).unwrap(), want, "{w}");
        }
    }
}

#[test]
fn star_a_star_a_counts_splits() {
    let a = RegExp::<NatCount>::star(RegExp::symbol('a'));
    let e = smart_mul(&a, &a);
    for n in 0..30 {
        assert_eq!(
            index_str(&e, &"a".repeat(n)).unwrap(),
            NatCount::new(n as u64 + 1)
        );
    }
}
