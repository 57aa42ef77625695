//! Polynomials as convolution over exponent monoids.
//!
//! [`Poly1`] is a sparse map from exponents to coefficients, [`DensePoly`] a
//! coefficient list multiplied by long multiplication, and [`PolyM`] maps
//! monomials (variable ↦ exponent) to coefficients. [`Series`] is the lazy,
//! infinite counterpart of a dense polynomial.

mod parse;
mod series;

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::algebra::{Additive, AlgebraError, LeftSemimodule, Semiring};
use crate::monoid::{KeyedVector, Monoid, Nat};

pub use parse::parse_poly;
pub use series::{ode_series, OdeSeries, Series};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error("variable {name:?} has no value")]
    MissingVariable { name: String },
    #[error("series coefficient {index} depends on itself")]
    UnproductiveSeries { index: usize },
    #[error("series used before its definition was supplied")]
    UndefinedSeries,
}

// ---------------------------------------------------------------------------
// Sparse univariate

/// Univariate polynomial, sparse in its exponents.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Poly1<B>(pub KeyedVector<Nat, B>);

impl<B: Semiring> Poly1<B> {
    /// The polynomial `x`.
    pub fn x() -> Self {
        Poly1(KeyedVector::single(Nat(1)))
    }

    pub fn constant(b: B) -> Self {
        Poly1(KeyedVector::singleton(Nat(0), b))
    }

    /// `Σ coeffs[i] xⁱ`.
    pub fn from_coeffs(coeffs: impl IntoIterator<Item = B>) -> Self {
        Poly1(KeyedVector::from_entries(
            coeffs
                .into_iter()
                .enumerate()
                .map(|(i, b)| (Nat(i as u64), b)),
        ))
    }

    pub fn coeff(&self, k: u64) -> B {
        self.0.index(&Nat(k))
    }

    /// Highest exponent with a nonzero coefficient; `None` for zero.
    pub fn degree(&self) -> Option<u64> {
        self.0.keys().last().map(|n| n.0)
    }

    /// Dense coefficient list, lowest exponent first, without trailing zeros.
    pub fn coeffs(&self) -> Vec<B> {
        match self.degree() {
            None => Vec::new(),
            Some(d) => (0..=d).map(|k| self.coeff(k)).collect(),
        }
    }

    /// `Σ cᵢ xⁱ` by Horner's rule.
    pub fn eval(&self, x: &B) -> B {
        self.coeffs()
            .iter()
            .rev()
            .fold(B::zero(), |acc, c| acc.mul(x).add(c))
    }

    /// `p * p * … * p`, `n` factors.
    pub fn pow(&self, n: u64) -> Self {
        (0..n).fold(Self::one(), |acc, _| acc.mul(self))
    }

    pub fn to_dense(&self) -> DensePoly<B> {
        DensePoly::new(self.coeffs())
    }

    /// The same polynomial in one named variable.
    pub fn to_multi(&self, var: &str) -> PolyM<B> {
        PolyM(KeyedVector::from_entries(
            self.0
                .iter()
                .map(|(k, b)| (Monomial::var_pow(var, k.0), b.clone())),
        ))
    }

    /// `index<TAB>coefficient` lines for every exponent up to the degree.
    pub fn dump(&self) -> String
    where
        B: fmt::Display,
    {
        self.coeffs()
            .iter()
            .enumerate()
            .map(|(i, c)| format!("{i}\t{c}\n"))
            .collect()
    }
}

impl<B: Semiring> Additive for Poly1<B> {
    fn zero() -> Self {
        Poly1(KeyedVector::empty())
    }
    fn add(&self, other: &Self) -> Self {
        Poly1(self.0.plus(&other.0))
    }
    fn is_zero(&self) -> bool {
        self.0.is_empty()
    }
}

impl<B: Semiring> Semiring for Poly1<B> {
    fn one() -> Self {
        Poly1(KeyedVector::value(B::one()))
    }
    fn mul(&self, other: &Self) -> Self {
        Poly1(self.0.convolve(&other.0))
    }
    fn is_one(&self) -> bool {
        self.0.is_one()
    }
}

impl<B: Semiring> LeftSemimodule<B> for Poly1<B> {
    fn act(s: &B, p: &Self) -> Self {
        Poly1(p.0.scaled(s))
    }
}

impl<B: Semiring + fmt::Display> fmt::Display for Poly1<B> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_multi("x").show())
    }
}

// ---------------------------------------------------------------------------
// Dense univariate

/// Coefficient list, position = exponent, trailing zeros trimmed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DensePoly<B> {
    coeffs: Vec<B>,
}

impl<B: Semiring> DensePoly<B> {
    pub fn new(mut coeffs: Vec<B>) -> Self {
        while coeffs.last().is_some_and(Additive::is_zero) {
            coeffs.pop();
        }
        DensePoly { coeffs }
    }

    pub fn coeffs(&self) -> &[B] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> B {
        self.coeffs.get(k).cloned().unwrap_or_else(B::zero)
    }

    pub fn eval(&self, x: &B) -> B {
        self.coeffs
            .iter()
            .rev()
            .fold(B::zero(), |acc, c| acc.mul(x).add(c))
    }

    pub fn to_sparse(&self) -> Poly1<B> {
        Poly1::from_coeffs(self.coeffs.iter().cloned())
    }
}

/// Long multiplication: `(a : dp) * q = a·q + (0 : dp * q)`, unrolled from
/// the highest coefficient of `p` down so the depth never grows.
pub fn long_mul<B: Semiring>(p: &[B], q: &[B]) -> Vec<B> {
    let mut acc: Vec<B> = Vec::new();
    for a in p.iter().rev() {
        let mut shifted = Vec::with_capacity(acc.len() + 1);
        shifted.push(B::zero());
        shifted.extend(acc);
        let scaled: Vec<B> = q.iter().map(|b| crate::algebra::scale(a, b)).collect();
        acc = add_ragged(&scaled, &shifted);
    }
    acc
}

/// Pointwise sum keeping the longer tail.
pub fn add_ragged<B: Additive>(p: &[B], q: &[B]) -> Vec<B> {
    let (long, short) = if p.len() >= q.len() { (p, q) } else { (q, p) };
    long.iter()
        .enumerate()
        .map(|(i, x)| match short.get(i) {
            Some(y) => x.add(y),
            None => x.clone(),
        })
        .collect()
}

impl<B: Semiring> Additive for DensePoly<B> {
    fn zero() -> Self {
        DensePoly { coeffs: Vec::new() }
    }
    fn add(&self, other: &Self) -> Self {
        DensePoly::new(add_ragged(&self.coeffs, &other.coeffs))
    }
    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
}

impl<B: Semiring> Semiring for DensePoly<B> {
    fn one() -> Self {
        DensePoly::new(vec![B::one()])
    }
    fn mul(&self, other: &Self) -> Self {
        DensePoly::new(long_mul(&self.coeffs, &other.coeffs))
    }
    fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }
}

impl<B: Semiring> LeftSemimodule<B> for DensePoly<B> {
    fn act(s: &B, p: &Self) -> Self {
        DensePoly::new(
            p.coeffs
                .iter()
                .map(|b| crate::algebra::scale(s, b))
                .collect(),
        )
    }
}

// ---------------------------------------------------------------------------
// Multivariate

/// A product of variables raised to positive powers; zero powers are dropped.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Monomial(BTreeMap<String, u64>);

impl Monomial {
    pub fn var(name: &str) -> Self {
        Self::var_pow(name, 1)
    }

    pub fn var_pow(name: &str, e: u64) -> Self {
        Self::from_powers([(name.to_string(), e)])
    }

    pub fn from_powers(powers: impl IntoIterator<Item = (String, u64)>) -> Self {
        let mut m = BTreeMap::new();
        for (v, e) in powers {
            if e > 0 {
                *m.entry(v).or_insert(0) += e;
            }
        }
        Monomial(m)
    }

    pub fn powers(&self) -> impl Iterator<Item = (&str, u64)> {
        self.0.iter().map(|(v, e)| (v.as_str(), *e))
    }

    pub fn degree(&self) -> u64 {
        self.0.values().sum()
    }

    /// `xᵖ = Π x(v)^p(v)`.
    pub fn eval<B: Semiring>(&self, env: &BTreeMap<String, B>) -> Result<B, PolyError> {
        let mut acc = B::one();
        for (v, e) in &self.0 {
            let x = env
                .get(v)
                .ok_or_else(|| PolyError::MissingVariable { name: v.clone() })?;
            acc = acc.mul(&x.pow(*e));
        }
        Ok(acc)
    }

    /// Variables repeated by exponent, for ordering terms of equal degree.
    fn expanded(&self) -> Vec<&str> {
        self.0
            .iter()
            .flat_map(|(v, e)| std::iter::repeat_n(v.as_str(), *e as usize))
            .collect()
    }
}

impl Monoid for Monomial {
    fn identity() -> Self {
        Monomial::default()
    }
    fn combine(&self, other: &Self) -> Self {
        let mut m = self.0.clone();
        for (v, e) in &other.0 {
            *m.entry(v.clone()).or_insert(0) += e;
        }
        Monomial(m)
    }
}

/// Multivariate polynomial: monomial ↦ coefficient.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolyM<B>(pub KeyedVector<Monomial, B>);

impl<B: Semiring> PolyM<B> {
    /// The variable `name` as a polynomial.
    pub fn var(name: &str) -> Self {
        PolyM(KeyedVector::single(Monomial::var(name)))
    }

    pub fn constant(b: B) -> Self {
        PolyM(KeyedVector::value(b))
    }

    pub fn term(m: Monomial, b: B) -> Self {
        PolyM(KeyedVector::singleton(m, b))
    }

    pub fn coeff(&self, m: &Monomial) -> B {
        self.0.index(m)
    }

    pub fn pow(&self, n: u64) -> Self {
        (0..n).fold(Self::one(), |acc, _| acc.mul(self))
    }

    /// `Σ c · xᵖ` under `env`.
    pub fn eval(&self, env: &BTreeMap<String, B>) -> Result<B, PolyError> {
        let mut acc = B::zero();
        for (m, c) in self.0.iter() {
            acc = acc.add(&c.mul(&m.eval(env)?));
        }
        Ok(acc)
    }

    /// Variables occurring in any term.
    pub fn variables(&self) -> Vec<String> {
        let mut vs: Vec<String> = self.0.keys().flat_map(|m| m.0.keys().cloned()).collect();
        vs.sort();
        vs.dedup();
        vs
    }

    /// Terms by decreasing total degree, then lexicographic variable order.
    pub fn terms(&self) -> Vec<(&Monomial, &B)> {
        let mut ts: Vec<_> = self.0.iter().collect();
        ts.sort_by(|(a, _), (b, _)| {
            b.degree()
                .cmp(&a.degree())
                .then_with(|| a.expanded().cmp(&b.expanded()))
        });
        ts
    }

    pub fn show(&self) -> String
    where
        B: fmt::Display,
    {
        let mut out = String::new();
        for (i, (m, c)) in self.terms().into_iter().enumerate() {
            let c = c.to_string();
            let (negative, mag) = match c.strip_prefix('-') {
                Some(rest) => (true, rest.to_string()),
                None => (false, c),
            };
            match (i, negative) {
                (0, true) => out.push('-'),
                (0, false) => {}
                (_, true) => out.push_str(" - "),
                (_, false) => out.push_str(" + "),
            }
            out.push_str(&render_term(m, &mag));
        }
        if out.is_empty() {
            out.push('0');
        }
        out
    }
}

fn render_term(m: &Monomial, coeff: &str) -> String {
    if m.0.is_empty() {
        return coeff.to_string();
    }
    let sep = if m.0.keys().all(|v| v.chars().count() == 1) {
        ""
    } else {
        "*"
    };
    let vars: Vec<String> =
        m.0.iter()
            .map(|(v, e)| {
                if *e == 1 {
                    v.clone()
                } else {
                    format!("{v}^{e}")
                }
            })
            .collect();
    let vars = vars.join(sep);
    if coeff == "1" {
        vars
    } else if coeff.chars().all(|c| c.is_ascii_digit()) {
        format!("{coeff}{sep}{vars}")
    } else {
        format!("{coeff}*{vars}")
    }
}

impl<B: Semiring> Additive for PolyM<B> {
    fn zero() -> Self {
        PolyM(KeyedVector::empty())
    }
    fn add(&self, other: &Self) -> Self {
        PolyM(self.0.plus(&other.0))
    }
    fn is_zero(&self) -> bool {
        self.0.is_empty()
    }
}

impl<B: Semiring> Semiring for PolyM<B> {
    fn one() -> Self {
        PolyM(KeyedVector::value(B::one()))
    }
    fn mul(&self, other: &Self) -> Self {
        PolyM(self.0.convolve(&other.0))
    }
    fn is_one(&self) -> bool {
        self.0.is_one()
    }
}

impl<B: Semiring> LeftSemimodule<B> for PolyM<B> {
    fn act(s: &B, p: &Self) -> Self {
        PolyM(p.0.scaled(s))
    }
}

impl<B: Semiring + fmt::Display> fmt::Display for PolyM<B> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.show())
    }
}
