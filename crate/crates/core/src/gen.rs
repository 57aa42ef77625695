//! Seeded random generators for the self-test suites, benches and tests.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::{BoolRing, LeftSemimodule, NatCount, Rational, Real64, Scalar};
use crate::monoid::{KeyedVector, Nat, Word};
use crate::poly::{DensePoly, Poly1};
use crate::regexp::{at_eps, RegExp};

/// Seed used when none is given.
pub const DEFAULT_SEED: u64 = 0x5eed_c0de;

pub type TestRng = ChaCha8Rng;

pub fn rng(seed: u64) -> TestRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Scalars that can be drawn at random.
pub trait RandomScalar: Scalar + LeftSemimodule<Self> {
    fn random(rng: &mut TestRng) -> Self;

    /// A value at which `star` is defined.
    fn random_star_arg(rng: &mut TestRng) -> Self;
}

impl RandomScalar for BoolRing {
    fn random(rng: &mut TestRng) -> Self {
        BoolRing(rng.random_bool(0.5))
    }
    fn random_star_arg(rng: &mut TestRng) -> Self {
        Self::random(rng)
    }
}

impl RandomScalar for NatCount {
    fn random(rng: &mut TestRng) -> Self {
        NatCount::new(small_with_units(rng, 20))
    }
    fn random_star_arg(_: &mut TestRng) -> Self {
        NatCount::new(0)
    }
}

/// Nonnegative reals: the semiring laws are checked at a relative
/// tolerance, which cancellation between signed values would defeat.
impl RandomScalar for Real64 {
    fn random(rng: &mut TestRng) -> Self {
        match rng.random_range(0..8) {
            0 => Real64(0.0),
            1 => Real64(1.0),
            _ => Real64(rng.random_range(0.0..10.0)),
        }
    }
    fn random_star_arg(rng: &mut TestRng) -> Self {
        Real64(rng.random_range(0.0..0.9))
    }
}

impl RandomScalar for Rational {
    fn random(rng: &mut TestRng) -> Self {
        match rng.random_range(0..8) {
            0 => Rational::from_integer(0),
            1 => Rational::from_integer(1),
            _ => Rational::new(rng.random_range(-9..=9), rng.random_range(1..=6)),
        }
    }
    fn random_star_arg(rng: &mut TestRng) -> Self {
        let d = rng.random_range(2..=7);
        Rational::new(rng.random_range(-(d - 1)..d), d)
    }
}

/// Uniform in `0..=max`, with 0 and 1 drawn more often.
fn small_with_units(rng: &mut TestRng, max: u64) -> u64 {
    match rng.random_range(0..6) {
        0 => 0,
        1 => 1,
        _ => rng.random_range(0..=max),
    }
}

/// Random defer-free expression of at most the given depth, built with the
/// raw (unsimplified) constructors. Star arguments whose empty-word weight
/// has no closure are prefixed with a symbol so every star is defined.
pub fn random_regexp<B: RandomScalar>(
    rng: &mut TestRng,
    depth: usize,
    alphabet: &[char],
) -> RegExp<B> {
    let leaf = |rng: &mut TestRng| match rng.random_range(0..8) {
        0..=3 => RegExp::symbol(alphabet[rng.random_range(0..alphabet.len())]),
        4 | 5 => RegExp::value(B::random(rng)),
        6 => RegExp::zero(),
        _ => RegExp::one(),
    };
    if depth == 0 {
        return leaf(rng);
    }
    match rng.random_range(0..7) {
        0 | 1 => leaf(rng),
        2 | 3 => RegExp::raw_sum(
            random_regexp(rng, depth - 1, alphabet),
            random_regexp(rng, depth - 1, alphabet),
        ),
        4 | 5 => RegExp::raw_prod(
            random_regexp(rng, depth - 1, alphabet),
            random_regexp(rng, depth - 1, alphabet),
        ),
        _ => {
            let p = random_regexp::<B>(rng, depth - 1, alphabet);
            let defined = at_eps(&p).map(|b| b.star().is_ok()).unwrap_or(false);
            if defined {
                RegExp::star(p)
            } else {
                let c = alphabet[rng.random_range(0..alphabet.len())];
                RegExp::star(RegExp::raw_prod(RegExp::symbol(c), p))
            }
        }
    }
}

/// Random word of length `0..=max_len`.
pub fn random_word(rng: &mut TestRng, alphabet: &[char], max_len: usize) -> Word {
    let n = rng.random_range(0..=max_len);
    Word(
        (0..n)
            .map(|_| alphabet[rng.random_range(0..alphabet.len())])
            .collect(),
    )
}

/// Up to `max_entries` words of length at most `max_len`.
pub fn random_word_vector<B: RandomScalar>(
    rng: &mut TestRng,
    alphabet: &[char],
    max_entries: usize,
    max_len: usize,
) -> KeyedVector<Word, B> {
    let n = rng.random_range(0..=max_entries);
    KeyedVector::from_entries((0..n).map(|_| (random_word(rng, alphabet, max_len), B::random(rng))))
}

pub fn random_nat_vector<B: RandomScalar>(
    rng: &mut TestRng,
    max_entries: usize,
    max_key: u64,
) -> KeyedVector<Nat, B> {
    let n = rng.random_range(0..=max_entries);
    KeyedVector::from_entries((0..n).map(|_| (Nat(rng.random_range(0..=max_key)), B::random(rng))))
}

pub fn random_pair_vector<B: RandomScalar>(
    rng: &mut TestRng,
    max_entries: usize,
    max_key: u64,
) -> KeyedVector<(Nat, Nat), B> {
    let n = rng.random_range(0..=max_entries);
    KeyedVector::from_entries((0..n).map(|_| {
        let k = (
            Nat(rng.random_range(0..=max_key)),
            Nat(rng.random_range(0..=max_key)),
        );
        (k, B::random(rng))
    }))
}

/// Integer coefficients in `-max_coef..=max_coef`, degree at most `max_deg`.
pub fn random_int_coeffs(rng: &mut TestRng, max_deg: usize, max_coef: i64) -> Vec<Rational> {
    let d = rng.random_range(0..=max_deg);
    (0..=d)
        .map(|_| Rational::from_integer(rng.random_range(-max_coef..=max_coef)))
        .collect()
}

pub fn random_poly1<B: RandomScalar>(rng: &mut TestRng, max_deg: usize) -> Poly1<B> {
    let d = rng.random_range(0..=max_deg);
    Poly1::from_coeffs((0..=d).map(|_| B::random(rng)))
}

pub fn random_dense<B: RandomScalar>(rng: &mut TestRng, max_deg: usize) -> DensePoly<B> {
    let d = rng.random_range(0..=max_deg);
    DensePoly::new((0..=d).map(|_| B::random(rng)).collect())
}

/// Samples uniform in `[-1, 1)`, length `1..=max_len`.
pub fn random_samples(rng: &mut TestRng, max_len: usize) -> Vec<f64> {
    let n = rng.random_range(1..=max_len);
    (0..n).map(|_| rng.random_range(-1.0..1.0)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::StarSemiring;

    #[test]
    fn seeds_reproduce() {
        let a: RegExp<NatCount> = random_regexp(&mut rng(7), 4, &['a', 'b']);
        let b: RegExp<NatCount> = random_regexp(&mut rng(7), 4, &['a', 'b']);
        assert_eq!(a.to_string(), b.to_string());
    }

    #[test]
    fn star_args_are_in_domain() {
        let mut r = rng(1);
        for _ in 0..200 {
            assert!(Rational::random_star_arg(&mut r).star().is_ok());
            assert!(Real64::random_star_arg(&mut r).star().is_ok());
            let e: RegExp<NatCount> = random_regexp(&mut r, 4, &['a', 'b']);
            assert!(at_eps(&e).is_ok(), "{e}");
        }
    }
}
