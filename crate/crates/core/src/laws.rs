//! Executable algebraic laws. Each checker takes the values to test and an
//! equality, and returns the name of every law it checked with its verdict.
//! Equality is a parameter because tries only admit bounded comparison and
//! reals only approximate comparison.

use crate::algebra::{Additive, LeftSemimodule, Semiring, StarSemiring};
use crate::monoid::Word;
use crate::regexp::{words_up_to, LangError};
use crate::trie::Trie;

pub type Verdicts = Vec<(&'static str, bool)>;

pub fn additive_laws<T: Additive>(a: &T, b: &T, c: &T, eq: impl Fn(&T, &T) -> bool) -> Verdicts {
    let z = T::zero();
    vec![
        ("add-assoc", eq(&a.add(b).add(c), &a.add(&b.add(c)))),
        ("add-comm", eq(&a.add(b), &b.add(a))),
        ("add-zero-left", eq(&z.add(a), a)),
        ("add-zero-right", eq(&a.add(&z), a)),
    ]
}

/// Additive laws plus multiplicative monoid, distributivity and annihilation.
pub fn semiring_laws<T: Semiring>(a: &T, b: &T, c: &T, eq: impl Fn(&T, &T) -> bool) -> Verdicts {
    let (z, o) = (T::zero(), T::one());
    let mut v = additive_laws(a, b, c, &eq);
    v.extend([
        ("mul-assoc", eq(&a.mul(b).mul(c), &a.mul(&b.mul(c)))),
        ("mul-one-left", eq(&o.mul(a), a)),
        ("mul-one-right", eq(&a.mul(&o), a)),
        (
            "distrib-left",
            eq(&a.mul(&b.add(c)), &a.mul(b).add(&a.mul(c))),
        ),
        (
            "distrib-right",
            eq(&a.add(b).mul(c), &a.mul(c).add(&b.mul(c))),
        ),
        ("annihilate-left", eq(&z.mul(a), &z)),
        ("annihilate-right", eq(&a.mul(&z), &z)),
    ]);
    v
}

/// `p* = 1 + p p*` and `p* = 1 + p* p`, for a `p` where star is defined.
pub fn star_laws<T: StarSemiring>(p: &T, eq: impl Fn(&T, &T) -> bool) -> Verdicts {
    match p.star() {
        Ok(s) => {
            let o = T::one();
            vec![
                ("star-unfold-left", eq(&s, &o.add(&p.mul(&s)))),
                ("star-unfold-right", eq(&s, &o.add(&s.mul(p)))),
            ]
        }
        Err(_) => vec![("star-defined", false)],
    }
}

/// `p = m* b` solves `p = b + m p`.
pub fn affine_law<T: StarSemiring>(m: &T, b: &T, eq: impl Fn(&T, &T) -> bool) -> Verdicts {
    match m.star() {
        Ok(s) => {
            let p = s.mul(b);
            vec![("affine-solution", eq(&p, &b.add(&m.mul(&p))))]
        }
        Err(_) => vec![("star-defined", false)],
    }
}

/// Left-semimodule laws for scalars `s, t` and vectors `p, q`.
pub fn semimodule_laws<S: Semiring, T: LeftSemimodule<S>>(
    s: &S,
    t: &S,
    p: &T,
    q: &T,
    eq: impl Fn(&T, &T) -> bool,
) -> Verdicts {
    let sc = |k: &S, v: &T| T::scale(k, v);
    vec![
        ("scale-assoc", eq(&sc(&s.mul(t), p), &sc(s, &sc(t, p)))),
        (
            "scale-distrib-scalar",
            eq(&sc(&s.add(t), p), &sc(s, p).add(&sc(t, p))),
        ),
        (
            "scale-distrib-vector",
            eq(&sc(s, &p.add(q)), &sc(s, p).add(&sc(s, q))),
        ),
        ("scale-one", eq(&sc(&S::one(), p), p)),
        ("scale-zero", eq(&sc(&S::zero(), p), &T::zero())),
        ("scale-of-zero", eq(&sc(s, &T::zero()), &T::zero())),
    ]
}

/// Weight-equality of two tries on every word up to `max_len`. A query that
/// fails counts as a difference unless both fail.
pub fn tries_agree<B: Semiring + PartialEq + Send + Sync + 'static>(
    p: &Trie<B>,
    q: &Trie<B>,
    words: &[Word],
) -> bool {
    words.iter().all(|w| {
        let (a, b): (Result<B, LangError>, _) = (p.index(w.symbols()), q.index(w.symbols()));
        match (a, b) {
            (Ok(a), Ok(b)) => a == b,
            (Err(_), Err(_)) => true,
            _ => false,
        }
    })
}

/// All words over `alphabet` up to `max_len`, for bounded trie equality.
pub fn bounded_words(alphabet: &[char], max_len: usize) -> Vec<Word> {
    words_up_to(alphabet, max_len)
}
