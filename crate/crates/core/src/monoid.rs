//! The monoid semiring over finite maps.
//!
//! A [`KeyedVector`] maps monoid keys to weights and stores only nonzero
//! weights. Multiplication is convolution: the weight of `w` in `p * q` sums
//! `p[u] * q[v]` over every factorization `u <> v = w`. Specialized to words it
//! is weighted language concatenation, to naturals it is polynomial
//! multiplication.
//!
//! Besides the semiring structure this module provides the free semimodule
//! functor/applicative/monad operations ([`KeyedVector::vmap`],
//! [`KeyedVector::vlift2`], [`KeyedVector::vbind`]), currying of pair-keyed
//! vectors and [`preimage`].

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::algebra::{Additive, LeftSemimodule, Semiring};

/// A monoid with a total order (keys live in ordered maps).
pub trait Monoid: Clone + Ord {
    fn identity() -> Self;
    fn combine(&self, other: &Self) -> Self;
}

/// A monoid whose elements can enumerate all of their factorizations.
pub trait Splittable: Monoid {
    /// Every `(u, v)` with `u.combine(v) == self`, each exactly once.
    fn splits(&self) -> Vec<(Self, Self)>;
}

/// Words over Unicode scalar values under concatenation.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Word(pub Vec<char>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn symbols(&self) -> &[char] {
        &self.0
    }
}

impl From<&str> for Word {
    fn from(s: &str) -> Self {
        Word(s.chars().collect())
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.0 {
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

impl Monoid for Word {
    fn identity() -> Self {
        Word::empty()
    }
    fn combine(&self, other: &Self) -> Self {
        let mut out = Vec::with_capacity(self.0.len() + other.0.len());
        out.extend_from_slice(&self.0);
        out.extend_from_slice(&other.0);
        Word(out)
    }
}

impl Splittable for Word {
    fn splits(&self) -> Vec<(Self, Self)> {
        (0..=self.0.len())
            .map(|i| (Word(self.0[..i].to_vec()), Word(self.0[i..].to_vec())))
            .collect()
    }
}

/// Natural numbers under addition.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Nat(pub u64);

impl fmt::Display for Nat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl Monoid for Nat {
    fn identity() -> Self {
        Nat(0)
    }
    fn combine(&self, other: &Self) -> Self {
        Nat(self.0 + other.0)
    }
}

impl Splittable for Nat {
    fn splits(&self) -> Vec<(Self, Self)> {
        (0..=self.0).map(|i| (Nat(i), Nat(self.0 - i))).collect()
    }
}

impl<A: Monoid, B: Monoid> Monoid for (A, B) {
    fn identity() -> Self {
        (A::identity(), B::identity())
    }
    fn combine(&self, other: &Self) -> Self {
        (self.0.combine(&other.0), self.1.combine(&other.1))
    }
}

impl<A: Splittable, B: Splittable> Splittable for (A, B) {
    fn splits(&self) -> Vec<(Self, Self)> {
        let right = self.1.splits();
        self.0
            .splits()
            .into_iter()
            .flat_map(|(a1, a2)| {
                right
                    .iter()
                    .map(move |(b1, b2)| ((a1.clone(), b1.clone()), (a2.clone(), b2.clone())))
            })
            .collect()
    }
}

/// Sets under union: the additive monoid used for preimage fibers.
impl<T: Ord + Clone> Additive for BTreeSet<T> {
    fn zero() -> Self {
        BTreeSet::new()
    }
    fn add(&self, other: &Self) -> Self {
        self.union(other).cloned().collect()
    }
    fn is_zero(&self) -> bool {
        self.is_empty()
    }
}

/// Finite map from keys to nonzero weights; absent keys weigh zero.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct KeyedVector<K, B> {
    entries: BTreeMap<K, B>,
}

impl<K: fmt::Debug, B: fmt::Debug> fmt::Debug for KeyedVector<K, B> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map().entries(self.entries.iter()).finish()
    }
}

impl<K: Ord + Clone, B: Additive> Default for KeyedVector<K, B> {
    fn default() -> Self {
        Self::empty()
    }
}

impl<K: Ord + Clone, B: Additive> KeyedVector<K, B> {
    pub fn empty() -> Self {
        KeyedVector {
            entries: BTreeMap::new(),
        }
    }

    /// `k ↦ b`: one nonzero component (or none when `b` is zero).
    pub fn singleton(k: K, b: B) -> Self {
        let mut entries = BTreeMap::new();
        if !b.is_zero() {
            entries.insert(k, b);
        }
        KeyedVector { entries }
    }

    /// Build from arbitrary entries; duplicate keys are summed and zeros dropped.
    pub fn from_entries<I: IntoIterator<Item = (K, B)>>(items: I) -> Self {
        let mut v = Self::empty();
        for (k, b) in items {
            v.accumulate(k, &b);
        }
        v
    }

    /// Add `b` into the weight at `k`, keeping the canonical form.
    pub fn accumulate(&mut self, k: K, b: &B) {
        if b.is_zero() {
            return;
        }
        match self.entries.get_mut(&k) {
            Some(existing) => {
                let sum = existing.add(b);
                if sum.is_zero() {
                    self.entries.remove(&k);
                } else {
                    *existing = sum;
                }
            }
            None => {
                self.entries.insert(k, b.clone());
            }
        }
    }

    pub fn index(&self, k: &K) -> B {
        self.entries.get(k).cloned().unwrap_or_else(B::zero)
    }

    pub fn get(&self, k: &K) -> Option<&B> {
        self.entries.get(k)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&K, &B)> {
        self.entries.iter()
    }

    pub fn keys(&self) -> impl Iterator<Item = &K> {
        self.entries.keys()
    }

    pub fn into_entries(self) -> BTreeMap<K, B> {
        self.entries
    }

    /// Keep only the entries whose key satisfies `keep`.
    pub fn filter_keys(&self, mut keep: impl FnMut(&K) -> bool) -> Self {
        KeyedVector {
            entries: self
                .entries
                .iter()
                .filter(|(k, _)| keep(k))
                .map(|(k, b)| (k.clone(), b.clone()))
                .collect(),
        }
    }

    /// Pointwise sum.
    pub fn plus(&self, other: &Self) -> Self {
        let (big, small) = if self.len() >= other.len() {
            (self, other)
        } else {
            (other, self)
        };
        let mut out = big.clone();
        for (k, b) in &small.entries {
            out.accumulate(k.clone(), b);
        }
        out
    }

    /// Map keys through `h`; weights of colliding images are added.
    pub fn vmap<K2: Ord + Clone>(&self, mut h: impl FnMut(&K) -> K2) -> KeyedVector<K2, B> {
        let mut out = KeyedVector::empty();
        for (k, b) in &self.entries {
            out.accumulate(h(k), b);
        }
        out
    }

    /// The singleton decomposition `Σ k ↦ p[k]`.
    pub fn decompose(&self) -> Vec<KeyedVector<K, B>> {
        self.entries
            .iter()
            .map(|(k, b)| KeyedVector::singleton(k.clone(), b.clone()))
            .collect()
    }
}

impl<K: Ord + Clone, B: Semiring> KeyedVector<K, B> {
    /// `k ↦ 1`.
    pub fn single(k: K) -> Self {
        Self::singleton(k, B::one())
    }

    /// Left scaling with the zero and one shortcuts.
    pub fn scaled(&self, s: &B) -> Self {
        if s.is_zero() {
            return Self::empty();
        }
        if s.is_one() {
            return self.clone();
        }
        let mut out = Self::empty();
        for (k, b) in &self.entries {
            out.accumulate(k.clone(), &s.mul(b));
        }
        out
    }

    /// Combine every pair of keys with `h`, multiplying weights.
    pub fn vlift2<K2: Ord + Clone, K3: Ord + Clone>(
        &self,
        other: &KeyedVector<K2, B>,
        mut h: impl FnMut(&K, &K2) -> K3,
    ) -> KeyedVector<K3, B> {
        let mut out = KeyedVector::empty();
        for (a, x) in &self.entries {
            for (b, y) in &other.entries {
                out.accumulate(h(a, b), &x.mul(y));
            }
        }
        out
    }

    /// Free semimodule monad bind: `Σ_a p[a] · h(a)`.
    pub fn vbind<K2: Ord + Clone>(
        &self,
        mut h: impl FnMut(&K) -> KeyedVector<K2, B>,
    ) -> KeyedVector<K2, B> {
        let mut out = KeyedVector::empty();
        for (a, w) in &self.entries {
            let image = h(a);
            for (k, b) in image.scaled(w).entries {
                out.accumulate(k, &b);
            }
        }
        out
    }
}

impl<K: Monoid, B: Semiring> KeyedVector<K, B> {
    /// `ε ↦ b`.
    pub fn value(b: B) -> Self {
        Self::singleton(K::identity(), b)
    }

    /// Convolution, materializing the full double sum.
    pub fn convolve(&self, other: &Self) -> Self {
        self.vlift2(other, |u, v| u.combine(v))
    }
}

impl<K: Splittable, B: Semiring> KeyedVector<K, B> {
    /// Weight of `w` in `p * q`, computed from the splittings of `w` alone.
    pub fn convolve_by_splits(p: &Self, q: &Self, w: &K) -> B {
        w.splits().into_iter().fold(B::zero(), |acc, (u, v)| {
            acc.add(&p.index(&u).mul(&q.index(&v)))
        })
    }
}

impl<K1: Ord + Clone, K2: Ord + Clone, B: Semiring> KeyedVector<(K1, K2), B> {
    /// `(a, b) ↦ c` becomes `a ↦ (b ↦ c)`.
    pub fn curry_vec(&self) -> KeyedVector<K1, KeyedVector<K2, B>> {
        let mut outer: BTreeMap<K1, KeyedVector<K2, B>> = BTreeMap::new();
        for ((a, b), c) in &self.entries {
            outer
                .entry(a.clone())
                .or_insert_with(KeyedVector::empty)
                .accumulate(b.clone(), c);
        }
        KeyedVector {
            entries: outer.into_iter().filter(|(_, v)| !v.is_empty()).collect(),
        }
    }

    pub fn uncurry_vec(nested: &KeyedVector<K1, KeyedVector<K2, B>>) -> Self {
        let mut out = KeyedVector::empty();
        for (a, inner) in &nested.entries {
            for (b, c) in &inner.entries {
                out.accumulate((a.clone(), b.clone()), c);
            }
        }
        out
    }
}

impl<K: fmt::Display, B: fmt::Display> KeyedVector<K, B> {
    /// Sorted `key<TAB>weight` lines.
    pub fn to_tsv(&self) -> String {
        let mut out = String::new();
        for (k, b) in &self.entries {
            out.push_str(&format!("{k}\t{b}\n"));
        }
        out
    }
}

impl<K: Monoid, B: Semiring> Additive for KeyedVector<K, B> {
    fn zero() -> Self {
        Self::empty()
    }
    fn add(&self, other: &Self) -> Self {
        self.plus(other)
    }
    fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }
}

impl<K: Monoid, B: Semiring> Semiring for KeyedVector<K, B> {
    fn one() -> Self {
        Self::value(B::one())
    }
    fn mul(&self, other: &Self) -> Self {
        self.convolve(other)
    }
    fn is_one(&self) -> bool {
        self.entries.len() == 1
            && self
                .entries
                .iter()
                .all(|(k, b)| *k == K::identity() && b.is_one())
    }
}

impl<K: Monoid, B: Semiring> LeftSemimodule<B> for KeyedVector<K, B> {
    fn act(s: &B, p: &Self) -> Self {
        p.scaled(s)
    }
}

/// Fibers of `h` over a finite domain: each image point maps to the set of
/// domain elements sent to it.
pub fn preimage<K1, K2, I>(domain: I, mut h: impl FnMut(&K1) -> K2) -> KeyedVector<K2, BTreeSet<K1>>
where
    K1: Ord + Clone,
    K2: Ord + Clone,
    I: IntoIterator<Item = K1>,
{
    let mut out = KeyedVector::empty();
    for a in domain {
        let b = h(&a);
        out.accumulate(b, &BTreeSet::from([a]));
    }
    out
}

/// Drop every word key longer than `max_len`.
pub fn truncate_words<B: Additive>(
    v: &KeyedVector<Word, B>,
    max_len: usize,
) -> KeyedVector<Word, B> {
    v.filter_keys(|w| w.len() <= max_len)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{BoolRing, NatCount, Rational};

    type NV = KeyedVector<Word, NatCount>;

    fn w(s: &str) -> Word {
        Word::from(s)
    }

    fn nv(items: &[(&str, u64)]) -> NV {
        NV::from_entries(items.iter().map(|(k, b)| (w(k), NatCount::new(*b))))
    }

    fn natv(items: &[(u64, u64)]) -> KeyedVector<Nat, NatCount> {
        KeyedVector::from_entries(items.iter().map(|(k, b)| (Nat(*k), NatCount::new(*b))))
    }

    #[test]
    fn splits_examples() {
        assert_eq!(
            Nat(3).splits(),
            vec![
                (Nat(0), Nat(3)),
                (Nat(1), Nat(2)),
                (Nat(2), Nat(1)),
                (Nat(3), Nat(0))
            ]
        );
        assert_eq!(Word::empty().splits(), vec![(w(""), w(""))]);
        assert_eq!(
            w("ab").splits(),
            vec![(w(""), w("ab")), (w("a"), w("b")), (w("ab"), w(""))]
        );
    }

    #[test]
    fn splits_match_brute_force() {
        let alphabet = ['a', 'b'];
        let mut words = vec![Word::empty()];
        for len in 1..=4 {
            let mut next = Vec::new();
            for base in words.iter().filter(|x| x.len() == len - 1) {
                for c in alphabet {
                    let mut v = base.0.clone();
                    v.push(c);
                    next.push(Word(v));
                }
            }
            words.extend(next);
        }
        for target in &words {
            let mut brute: Vec<(Word, Word)> = Vec::new();
            for u in &words {
                for v in &words {
                    if u.combine(v) == *target {
                        brute.push((u.clone(), v.clone()));
                    }
                }
            }
            let mut got = target.splits();
            got.sort();
            brute.sort();
            assert_eq!(got, brute, "{target}");
        }
    }

    #[test]
    fn pair_splits_are_cartesian() {
        let s = (Nat(1), w("a")).splits();
        assert_eq!(s.len(), 4);
        for (u, v) in s {
            assert_eq!(u.combine(&v), (Nat(1), w("a")));
        }
    }

    #[test]
    fn singleton_and_value() {
        assert_eq!(nv(&[("a", 1)]).index(&w("a")), NatCount::new(1));
        assert!(NV::singleton(w("a"), NatCount::new(0)).is_zero());
        assert_eq!(NV::value(NatCount::new(1)), NV::single(Word::empty()));
        assert_eq!(NV::one(), NV::single(Word::empty()));
        assert_eq!(nv(&[("a", 1)]).index(&w("zzz")), NatCount::new(0));
    }

    #[test]
    fn add_examples() {
        assert_eq!(
            nv(&[("a", 1)]).add(&nv(&[("b", 2)])),
            nv(&[("a", 1), ("b", 2)])
        );
        assert_eq!(nv(&[("a", 1)]).add(&NV::zero()), nv(&[("a", 1)]));
        let p = KeyedVector::<Word, Rational>::singleton(w("a"), Rational::from_integer(1));
        let q = KeyedVector::<Word, Rational>::singleton(w("a"), Rational::from_integer(-1));
        assert!(p.add(&q).is_empty());
    }

    #[test]
    fn convolve_examples() {
        assert_eq!(nv(&[("a", 1)]).mul(&nv(&[("b", 1)])), nv(&[("ab", 1)]));
        let pq = nv(&[("p", 1)]).add(&nv(&[("q", 1)]));
        assert_eq!(pq.mul(&nv(&[("s", 1)])), nv(&[("ps", 1), ("qs", 1)]));
        let f = natv(&[(0, 1), (1, 2), (2, 3)]);
        let g = natv(&[(0, 4), (1, 5)]);
        // Direct double loop Σ f(u) g(w - u).
        let fa = [1u64, 2, 3];
        let ga = [4u64, 5];
        let mut expected = vec![0u64; 4];
        for (i, x) in fa.iter().enumerate() {
            for (j, y) in ga.iter().enumerate() {
                expected[i + j] += x * y;
            }
        }
        assert_eq!(expected, vec![4, 13, 22, 15]);
        let want = natv(&[(0, 4), (1, 13), (2, 22), (3, 15)]);
        assert_eq!(f.mul(&g), want);
    }

    #[test]
    fn convolve_by_splits_examples() {
        let p = nv(&[("a", 1)]);
        let q = nv(&[("b", 1)]);
        assert_eq!(NV::convolve_by_splits(&p, &q, &w("ab")), NatCount::new(1));
        assert_eq!(NV::convolve_by_splits(&p, &q, &w("ba")), NatCount::new(0));
    }

    #[test]
    fn scale_examples() {
        let p = nv(&[("a", 5)]);
        assert!(LeftSemimodule::scale(&NatCount::new(0), &p).is_zero());
        assert_eq!(LeftSemimodule::scale(&NatCount::new(1), &p), p);
        assert_eq!(
            LeftSemimodule::scale(&NatCount::new(2), &nv(&[("a", 3), ("b", 4)])),
            nv(&[("a", 6), ("b", 8)])
        );
    }

    #[test]
    fn curry_examples() {
        let c = KeyedVector::<(Nat, Word), NatCount>::singleton((Nat(1), w("x")), NatCount::new(7));
        let curried = c.curry_vec();
        assert_eq!(curried.index(&Nat(1)), nv(&[("x", 7)]));
        assert_eq!(curried.len(), 1);
        let zero = KeyedVector::<(Nat, Word), NatCount>::zero();
        assert!(zero.curry_vec().is_empty());
        assert_eq!(KeyedVector::uncurry_vec(&curried), c);
    }

    #[test]
    fn vmap_examples() {
        let p = nv(&[("ab", 2), ("cd", 3)]);
        assert_eq!(p.vmap(|k| Nat(k.len() as u64)), natv(&[(2, 5)]));
        assert_eq!(p.vmap(|k| k.clone()), p);
        let s = NV::singleton(w("abc"), NatCount::new(4));
        assert_eq!(
            s.vmap(|k| Nat(k.len() as u64)),
            KeyedVector::singleton(Nat(3), NatCount::new(4))
        );
    }

    #[test]
    fn vlift2_examples() {
        let p = natv(&[(1, 1), (2, 1)]);
        let q = natv(&[(1, 1), (3, 1)]);
        // Key pairs: (1,1)->1, (1,3)->1, (2,1)->1, (2,3)->2.
        assert_eq!(
            p.vlift2(&q, |a, b| Nat(a.0.min(b.0))),
            natv(&[(1, 3), (2, 1)])
        );
        let zero = KeyedVector::<Nat, NatCount>::zero();
        assert!(zero.vlift2(&q, |a, b| Nat(a.0 + b.0)).is_empty());
        assert_eq!(p.vlift2(&q, |a, b| a.combine(b)), p.convolve(&q));
    }

    #[test]
    fn vbind_examples() {
        let h = |a: &Nat| natv(&[(a.0, 1), (a.0 + 1, 1)]);
        assert_eq!(
            KeyedVector::<Nat, NatCount>::single(Nat(5)).vbind(h),
            h(&Nat(5))
        );
        let p = natv(&[(1, 2), (3, 4)]);
        assert_eq!(p.vbind(|a| KeyedVector::single(*a)), p);
        assert_eq!(p.vbind(h), natv(&[(1, 2), (2, 2), (3, 4), (4, 4)]));
    }

    #[test]
    fn preimage_examples() {
        let fibers = preimage(0u64..4, |x| x % 2 == 0);
        assert_eq!(fibers.index(&true), BTreeSet::from([0, 2]));
        assert_eq!(fibers.index(&false), BTreeSet::from([1, 3]));
        let constant = preimage([0u64, 1], |_| 'c');
        assert_eq!(constant.len(), 1);
        assert_eq!(constant.index(&'c'), BTreeSet::from([0, 1]));
        let ident = preimage([0u64, 1], |x| *x);
        assert_eq!(ident.index(&0), BTreeSet::from([0]));
        assert_eq!(ident.index(&1), BTreeSet::from([1]));
    }

    #[test]
    fn boolean_convolution_is_set_concatenation() {
        let p_set = ["", "a", "ab"];
        let q_set = ["b", "ba"];
        let p = KeyedVector::<Word, BoolRing>::from_entries(
            p_set.iter().map(|s| (w(s), BoolRing(true))),
        );
        let q = KeyedVector::<Word, BoolRing>::from_entries(
            q_set.iter().map(|s| (w(s), BoolRing(true))),
        );
        let mut expected = BTreeSet::new();
        for u in p_set {
            for v in q_set {
                expected.insert(w(&format!("{u}{v}")));
            }
        }
        let got: BTreeSet<Word> = p.mul(&q).keys().cloned().collect();
        assert_eq!(got, expected);
    }

    #[test]
    fn tsv_is_sorted() {
        let p = nv(&[("b", 2), ("a", 10)]);
        assert_eq!(p.to_tsv(), "a\t10\nb\t2\n");
    }
}
