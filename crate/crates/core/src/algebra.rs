//! Algebraic vocabulary shared by every weight type and language representation.
//!
//! The hierarchy is: [`Additive`] monoids, [`Semiring`]s, [`StarSemiring`]s
//! (closure `p* = 1 + p p*`), and [`LeftSemimodule`]s (scaling by a semiring).
//! Four scalar instances are provided: [`BoolRing`], [`NatCount`], [`Real64`]
//! and [`Rational`].
//!
//! Equality is deliberately not part of the traits: lazily represented
//! languages such as tries have no decidable equality, so law checks take an
//! explicit comparison.

use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("star is undefined for {value} in the {semiring} semiring")]
    StarUndefined {
        semiring: &'static str,
        value: String,
    },
    #[error("division by {divisor} is undefined for {value} in the {semiring} semiring")]
    DivisionUndefined {
        semiring: &'static str,
        value: String,
        divisor: u64,
    },
    #[error("cannot parse {semiring} scalar from {input:?}")]
    Parse {
        semiring: &'static str,
        input: String,
    },
}

/// A commutative monoid written additively, with a zero test.
pub trait Additive: Clone {
    fn zero() -> Self;
    fn add(&self, other: &Self) -> Self;
    /// Syntactic or exact zero test. Representations that cannot decide it
    /// cheaply may answer `false`; callers only use it for shortcuts.
    fn is_zero(&self) -> bool;
}

pub trait Semiring: Additive {
    fn one() -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn is_one(&self) -> bool;

    /// The image of `n` under the unique semiring map from the naturals.
    fn from_nat(n: u64) -> Self {
        let mut acc = Self::zero();
        let mut base = Self::one();
        let mut k = n;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.add(&base);
            }
            base = base.add(&base);
            k >>= 1;
        }
        acc
    }

    fn pow(&self, n: u64) -> Self {
        let mut acc = Self::one();
        let mut base = self.clone();
        let mut k = n;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base);
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }
}

/// A semiring with a closure operation satisfying `p* = 1 + p p* = 1 + p* p`.
///
/// Closure may be partial (for example over the reals); partiality is
/// reported through [`AlgebraError::StarUndefined`].
pub trait StarSemiring: Semiring {
    fn star(&self) -> Result<Self, AlgebraError>;
}

/// Left action of a semiring `S` on an additive monoid.
pub trait LeftSemimodule<S: Semiring>: Additive {
    /// The action itself, without shortcuts.
    fn act(s: &S, p: &Self) -> Self;

    /// Scaling with the zero and one shortcuts applied first.
    fn scale(s: &S, p: &Self) -> Self {
        if s.is_zero() {
            Self::zero()
        } else if s.is_one() {
            p.clone()
        } else {
            Self::act(s, p)
        }
    }
}

/// Every scalar is a module over itself.
macro_rules! self_module {
    ($($t:ty),*) => {$(
        impl LeftSemimodule<$t> for $t {
            fn act(s: &$t, p: &$t) -> $t {
                s.mul(p)
            }
        }
    )*};
}

self_module!(BoolRing, NatCount, Real64, Rational);

/// Additive inverses.
pub trait Ring: Semiring {
    fn neg(&self) -> Self;

    fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }
}

/// Division by a positive natural number, needed to integrate power series.
pub trait DivNat: Sized {
    fn div_nat(&self, n: u64) -> Result<Self, AlgebraError>;
}

/// Everything a weight needs to flow through the language engines, the CLI
/// and the law suites.
pub trait Scalar:
    StarSemiring + DivNat + PartialEq + fmt::Debug + fmt::Display + Send + Sync + 'static
{
    const NAME: &'static str;

    fn parse_scalar(s: &str) -> Result<Self, AlgebraError>;

    /// Equality used by the law suites; exact except for [`Real64`].
    fn approx_eq(&self, other: &Self) -> bool {
        self == other
    }
}

/// Scale a scalar on the left, applying the zero and one shortcuts.
pub fn scale<S: Semiring>(s: &S, p: &S) -> S {
    if s.is_zero() {
        S::zero()
    } else if s.is_one() {
        p.clone()
    } else {
        s.mul(p)
    }
}

/// Sum of an iterator of additive values.
pub fn sum<A: Additive, I: IntoIterator<Item = A>>(items: I) -> A {
    items.into_iter().fold(A::zero(), |acc, x| acc.add(&x))
}

/// Product of an iterator of semiring values.
pub fn product<S: Semiring, I: IntoIterator<Item = S>>(items: I) -> S {
    items.into_iter().fold(S::one(), |acc, x| acc.mul(&x))
}

// ---------------------------------------------------------------------------
// Booleans

/// Booleans with `or` as addition and `and` as multiplication.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct BoolRing(pub bool);

impl Additive for BoolRing {
    fn zero() -> Self {
        BoolRing(false)
    }
    fn add(&self, other: &Self) -> Self {
        BoolRing(self.0 || other.0)
    }
    fn is_zero(&self) -> bool {
        !self.0
    }
}

impl Semiring for BoolRing {
    fn one() -> Self {
        BoolRing(true)
    }
    fn mul(&self, other: &Self) -> Self {
        BoolRing(self.0 && other.0)
    }
    fn is_one(&self) -> bool {
        self.0
    }
    fn from_nat(n: u64) -> Self {
        BoolRing(n > 0)
    }
}

impl StarSemiring for BoolRing {
    fn star(&self) -> Result<Self, AlgebraError> {
        Ok(BoolRing(true))
    }
}

impl DivNat for BoolRing {
    fn div_nat(&self, n: u64) -> Result<Self, AlgebraError> {
        Err(AlgebraError::DivisionUndefined {
            semiring: Self::NAME,
            value: self.to_string(),
            divisor: n,
        })
    }
}

impl fmt::Display for BoolRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl Scalar for BoolRing {
    const NAME: &'static str = "bool";

    fn parse_scalar(s: &str) -> Result<Self, AlgebraError> {
        match s.trim() {
            "true" | "1" => Ok(BoolRing(true)),
            "false" | "0" => Ok(BoolRing(false)),
            other => Err(AlgebraError::Parse {
                semiring: Self::NAME,
                input: other.to_string(),
            }),
        }
    }
}

// ---------------------------------------------------------------------------
// Natural numbers

/// Unbounded natural numbers; the match-counting weight.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct NatCount(pub BigUint);

impl NatCount {
    pub fn new(n: u64) -> Self {
        NatCount(BigUint::from(n))
    }

    pub fn to_u64(&self) -> Option<u64> {
        self.0.to_u64()
    }
}

impl From<u64> for NatCount {
    fn from(n: u64) -> Self {
        NatCount::new(n)
    }
}

impl Additive for NatCount {
    fn zero() -> Self {
        NatCount(BigUint::zero())
    }
    fn add(&self, other: &Self) -> Self {
        NatCount(&self.0 + &other.0)
    }
    fn is_zero(&self) -> bool {
        self.0.is_zero()
    }
}

impl Semiring for NatCount {
    fn one() -> Self {
        NatCount(BigUint::one())
    }
    fn mul(&self, other: &Self) -> Self {
        NatCount(&self.0 * &other.0)
    }
    fn is_one(&self) -> bool {
        self.0.is_one()
    }
    fn from_nat(n: u64) -> Self {
        NatCount::new(n)
    }
}

impl StarSemiring for NatCount {
    /// Only `0* = 1` converges in the naturals.
    fn star(&self) -> Result<Self, AlgebraError> {
        if self.is_zero() {
            Ok(Self::one())
        } else {
            Err(AlgebraError::StarUndefined {
                semiring: Self::NAME,
                value: self.to_string(),
            })
        }
    }
}

impl DivNat for NatCount {
    fn div_nat(&self, n: u64) -> Result<Self, AlgebraError> {
        let d = BigUint::from(n);
        if n != 0 && (&self.0 % &d).is_zero() {
            Ok(NatCount(&self.0 / d))
        } else {
            Err(AlgebraError::DivisionUndefined {
                semiring: Self::NAME,
                value: self.to_string(),
                divisor: n,
            })
        }
    }
}

impl fmt::Display for NatCount {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl Scalar for NatCount {
    const NAME: &'static str = "nat";

    fn parse_scalar(s: &str) -> Result<Self, AlgebraError> {
        BigUint::from_str(s.trim())
            .map(NatCount)
            .map_err(|_| AlgebraError::Parse {
                semiring: Self::NAME,
                input: s.to_string(),
            })
    }
}

/// The semiring homomorphism from counts to booleans.
pub fn positive(n: &NatCount) -> BoolRing {
    BoolRing(!n.is_zero())
}

// ---------------------------------------------------------------------------
// Reals

pub const REAL_REL_TOL: f64 = 1e-12;
pub const REAL_ABS_TOL: f64 = 1e-15;

/// Relative comparison with an absolute floor, used for all `f64` law checks.
pub fn approx_eq_f64(a: f64, b: f64) -> bool {
    if a == b {
        return true;
    }
    let diff = (a - b).abs();
    diff <= REAL_ABS_TOL || diff <= REAL_REL_TOL * a.abs().max(b.abs())
}

#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Default)]
pub struct Real64(pub f64);

impl Additive for Real64 {
    fn zero() -> Self {
        Real64(0.0)
    }
    fn add(&self, other: &Self) -> Self {
        Real64(self.0 + other.0)
    }
    fn is_zero(&self) -> bool {
        self.0 == 0.0
    }
}

impl Semiring for Real64 {
    fn one() -> Self {
        Real64(1.0)
    }
    fn mul(&self, other: &Self) -> Self {
        Real64(self.0 * other.0)
    }
    fn is_one(&self) -> bool {
        self.0 == 1.0
    }
    fn from_nat(n: u64) -> Self {
        Real64(n as f64)
    }
}

impl StarSemiring for Real64 {
    /// `p* = 1 / (1 - p)`, defined for `|p| < 1`.
    fn star(&self) -> Result<Self, AlgebraError> {
        if self.0.abs() < 1.0 {
            Ok(Real64(1.0 / (1.0 - self.0)))
        } else {
            Err(AlgebraError::StarUndefined {
                semiring: Self::NAME,
                value: self.to_string(),
            })
        }
    }
}

impl Ring for Real64 {
    fn neg(&self) -> Self {
        Real64(-self.0)
    }
}

impl DivNat for Real64 {
    fn div_nat(&self, n: u64) -> Result<Self, AlgebraError> {
        if n == 0 {
            return Err(AlgebraError::DivisionUndefined {
                semiring: Self::NAME,
                value: self.to_string(),
                divisor: n,
            });
        }
        Ok(Real64(self.0 / n as f64))
    }
}

impl fmt::Display for Real64 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        // `{}` on f64 is the shortest representation that round-trips.
        write!(f, "{}", self.0)
    }
}

impl Scalar for Real64 {
    const NAME: &'static str = "real";

    fn parse_scalar(s: &str) -> Result<Self, AlgebraError> {
        f64::from_str(s.trim())
            .map(Real64)
            .map_err(|_| AlgebraError::Parse {
                semiring: Self::NAME,
                input: s.to_string(),
            })
    }

    fn approx_eq(&self, other: &Self) -> bool {
        approx_eq_f64(self.0, other.0)
    }
}

// ---------------------------------------------------------------------------
// Rationals

/// Exact rationals, always in lowest terms with a positive denominator.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Rational(BigRational);

impl Rational {
    pub fn new(numer: i64, denom: i64) -> Self {
        assert!(denom != 0, "zero denominator");
        Rational(BigRational::new(BigInt::from(numer), BigInt::from(denom)))
    }

    pub fn from_integer(n: i64) -> Self {
        Rational(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn from_big(numer: BigInt, denom: BigInt) -> Self {
        Rational(BigRational::new(numer, denom))
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn abs(&self) -> Self {
        Rational(self.0.abs())
    }

    pub fn recip(&self) -> Option<Self> {
        if self.0.is_zero() {
            None
        } else {
            Some(Rational(self.0.recip()))
        }
    }

    pub fn inner(&self) -> &BigRational {
        &self.0
    }
}

impl From<i64> for Rational {
    fn from(n: i64) -> Self {
        Rational::from_integer(n)
    }
}

impl Additive for Rational {
    fn zero() -> Self {
        Rational(BigRational::zero())
    }
    fn add(&self, other: &Self) -> Self {
        Rational(&self.0 + &other.0)
    }
    fn is_zero(&self) -> bool {
        self.0.is_zero()
    }
}

impl Semiring for Rational {
    fn one() -> Self {
        Rational(BigRational::one())
    }
    fn mul(&self, other: &Self) -> Self {
        Rational(&self.0 * &other.0)
    }
    fn is_one(&self) -> bool {
        self.0.is_one()
    }
    fn from_nat(n: u64) -> Self {
        Rational(BigRational::from_integer(BigInt::from(n)))
    }
}

impl StarSemiring for Rational {
    /// `p* = 1 / (1 - p)`, restricted to `|p| < 1` where the geometric series
    /// converges.
    fn star(&self) -> Result<Self, AlgebraError> {
        if self.0.abs() < BigRational::one() {
            Ok(Rational((BigRational::one() - &self.0).recip()))
        } else {
            Err(AlgebraError::StarUndefined {
                semiring: Self::NAME,
                value: self.to_string(),
            })
        }
    }
}

impl Ring for Rational {
    fn neg(&self) -> Self {
        Rational(-&self.0)
    }
}

impl DivNat for Rational {
    fn div_nat(&self, n: u64) -> Result<Self, AlgebraError> {
        if n == 0 {
            return Err(AlgebraError::DivisionUndefined {
                semiring: Self::NAME,
                value: self.to_string(),
                divisor: n,
            });
        }
        Ok(Rational(
            &self.0 / BigRational::from_integer(BigInt::from(n)),
        ))
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl Scalar for Rational {
    const NAME: &'static str = "rational";

    fn parse_scalar(s: &str) -> Result<Self, AlgebraError> {
        let err = || AlgebraError::Parse {
            semiring: Self::NAME,
            input: s.to_string(),
        };
        let s = s.trim();
        match s.split_once('/') {
            Some((n, d)) => {
                let n = BigInt::from_str(n.trim()).map_err(|_| err())?;
                let d = BigInt::from_str(d.trim()).map_err(|_| err())?;
                if d.is_zero() {
                    return Err(err());
                }
                Ok(Rational(BigRational::new(n, d)))
            }
            None => BigInt::from_str(s)
                .map(|n| Rational(BigRational::from_integer(n)))
                .map_err(|_| err()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn geometric_sum(p: f64) -> f64 {
        let mut total = 0.0;
        let mut term = 1.0;
        while term.abs() > 1e-18 {
            total += term;
            term *= p;
        }
        total
    }

    #[test]
    fn star_examples() {
        assert_eq!(BoolRing(true).star().unwrap(), BoolRing(true));
        assert_eq!(BoolRing(false).star().unwrap(), BoolRing(true));
        assert_eq!(Real64(0.0).star().unwrap(), Real64(1.0));
        let half = Real64(0.5).star().unwrap();
        assert!(approx_eq_f64(half.0, geometric_sum(0.5)));
        assert!(approx_eq_f64(half.0, 2.0));
    }

    #[test]
    fn star_domain_errors() {
        assert!(matches!(
            Real64(1.0).star(),
            Err(AlgebraError::StarUndefined { .. })
        ));
        assert!(Real64(-1.5).star().is_err());
        assert!(Real64(f64::NAN).star().is_err());
        assert_eq!(NatCount::new(0).star().unwrap(), NatCount::new(1));
        assert!(NatCount::new(3).star().is_err());
        assert!(Rational::new(1, 1).star().is_err());
        assert_eq!(Rational::new(1, 3).star().unwrap(), Rational::new(3, 2));
    }

    #[test]
    fn star_satisfies_fixed_point() {
        for p in [-0.9, -0.25, 0.0, 0.3, 0.75, 0.99] {
            let s = Real64(p).star().unwrap();
            let rhs = Real64::one().add(&Real64(p).mul(&s));
            assert!(approx_eq_f64(s.0, rhs.0), "p = {p}");
        }
    }

    #[test]
    fn positive_examples() {
        assert_eq!(positive(&NatCount::new(0)), BoolRing(false));
        assert_eq!(positive(&NatCount::new(1)), BoolRing(true));
    }

    #[test]
    fn positive_is_homomorphism() {
        assert_eq!(positive(&NatCount::zero()), BoolRing::zero());
        assert_eq!(positive(&NatCount::one()), BoolRing::one());
        for m in 0..=20u64 {
            for n in 0..=20u64 {
                let (a, b) = (NatCount::new(m), NatCount::new(n));
                assert_eq!(positive(&a.add(&b)), positive(&a).add(&positive(&b)));
                assert_eq!(positive(&a.mul(&b)), positive(&a).mul(&positive(&b)));
            }
        }
    }

    #[test]
    fn nat_count_is_unbounded() {
        let big = NatCount::new(u64::MAX).mul(&NatCount::new(u64::MAX));
        assert_eq!(big.to_string(), "340282366920938463426481119284349108225");
    }

    #[test]
    fn rational_normalizes() {
        let r = Rational::new(6, -4);
        assert_eq!(r.to_string(), "-3/2");
        assert_eq!(Rational::new(4, 2).to_string(), "2");
        assert_eq!(
            Rational::parse_scalar("10/-4").unwrap(),
            Rational::new(-5, 2)
        );
    }

    #[test]
    fn from_nat_and_pow() {
        assert_eq!(NatCount::from_nat(13), NatCount::new(13));
        assert_eq!(Rational::from_nat(5).pow(3), Rational::from_integer(125));
        assert_eq!(BoolRing(false).pow(0), BoolRing(true));
        assert_eq!(
            <Rational as Semiring>::pow(&Rational::new(1, 2), 4),
            Rational::new(1, 16)
        );
    }

    #[test]
    fn scale_shortcut() {
        assert_eq!(
            scale(&NatCount::new(0), &NatCount::new(7)),
            NatCount::zero()
        );
        assert_eq!(
            scale(&NatCount::new(1), &NatCount::new(7)),
            NatCount::new(7)
        );
        assert_eq!(
            scale(&NatCount::new(2), &NatCount::new(7)),
            NatCount::new(14)
        );
    }

    #[test]
    fn division() {
        assert_eq!(
            Rational::from_integer(1).div_nat(3).unwrap(),
            Rational::new(1, 3)
        );
        assert!(BoolRing(true).div_nat(2).is_err());
        assert_eq!(NatCount::new(6).div_nat(3).unwrap(), NatCount::new(2));
        assert!(NatCount::new(7).div_nat(3).is_err());
    }

    #[test]
    fn real_display_round_trips() {
        for x in [0.1, 1.0 / 3.0, 2.5e-300, 1e21] {
            let s = Real64(x).to_string();
            assert_eq!(Real64::parse_scalar(&s).unwrap(), Real64(x));
        }
    }
}
