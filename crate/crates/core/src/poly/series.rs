//! Lazily generated power series with a grow-only coefficient cache.
//!
//! Coefficients are pulled by index. A series may be created first and
//! defined later ([`Series::knot`] / [`Series::define_as`]), which is how the
//! mutually recursive sine and cosine equations are written down. Recursion
//! is productive when every self-reference passes through an integral.

use std::cell::RefCell;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use super::PolyError;
use crate::algebra::{DivNat, Ring, Semiring};

type Gen<B> = Box<dyn Fn(usize) -> Result<B, PolyError> + Send + Sync>;

struct SeriesCell<B> {
    cache: Mutex<Vec<B>>,
    gen: OnceLock<Gen<B>>,
}

/// A shared handle to a power series.
pub struct Series<B>(Arc<SeriesCell<B>>);

impl<B> Clone for Series<B> {
    fn clone(&self) -> Self {
        Series(Arc::clone(&self.0))
    }
}

thread_local! {
    static PRODUCING: RefCell<Vec<(usize, usize)>> = const { RefCell::new(Vec::new()) };
}

impl<B: Semiring + Send + Sync + 'static> Series<B> {
    /// Coefficient `n` is `f(n)`.
    pub fn from_fn(f: impl Fn(usize) -> Result<B, PolyError> + Send + Sync + 'static) -> Self {
        let s = Self::knot();
        let _ = s.0.gen.set(Box::new(f));
        s
    }

    /// A series whose definition is supplied later by [`Series::define_as`].
    pub fn knot() -> Self {
        Series(Arc::new(SeriesCell {
            cache: Mutex::new(Vec::new()),
            gen: OnceLock::new(),
        }))
    }

    /// Make this (undefined) series equal to `target`. Returns false if it
    /// was already defined.
    pub fn define_as(&self, target: &Series<B>) -> bool {
        let t = target.clone();
        self.0.gen.set(Box::new(move |n| t.coeff(n))).is_ok()
    }

    /// Finite coefficient list, zero beyond its end.
    pub fn from_coeffs(coeffs: Vec<B>) -> Self {
        Self::from_fn(move |n| Ok(coeffs.get(n).cloned().unwrap_or_else(B::zero)))
    }

    pub fn constant(b: B) -> Self {
        Self::from_coeffs(vec![b])
    }

    fn id(&self) -> usize {
        Arc::as_ptr(&self.0) as *const () as usize
    }

    /// Coefficient `n`, producing any missing earlier ones first.
    pub fn coeff(&self, n: usize) -> Result<B, PolyError> {
        loop {
            let next = {
                let cache = self.0.cache.lock().unwrap_or_else(|e| e.into_inner());
                if let Some(b) = cache.get(n) {
                    return Ok(b.clone());
                }
                cache.len()
            };
            let b = self.produce(next)?;
            let mut cache = self.0.cache.lock().unwrap_or_else(|e| e.into_inner());
            if cache.len() == next {
                cache.push(b);
            }
        }
    }

    fn produce(&self, i: usize) -> Result<B, PolyError> {
        let key = (self.id(), i);
        let looping = PRODUCING.with(|p| {
            let mut p = p.borrow_mut();
            if p.contains(&key) {
                true
            } else {
                p.push(key);
                false
            }
        });
        if looping {
            return Err(PolyError::UnproductiveSeries { index: i });
        }
        let result = match self.0.gen.get() {
            Some(g) => g(i),
            None => Err(PolyError::UndefinedSeries),
        };
        PRODUCING.with(|p| {
            p.borrow_mut().pop();
        });
        result
    }

    /// Coefficients `0..count`.
    pub fn take(&self, count: usize) -> Result<Vec<B>, PolyError> {
        (0..count).map(|i| self.coeff(i)).collect()
    }

    /// `index<TAB>coefficient` lines for `0..count`.
    pub fn dump(&self, count: usize) -> Result<String, PolyError>
    where
        B: fmt::Display,
    {
        Ok(self
            .take(count)?
            .iter()
            .enumerate()
            .map(|(i, c)| format!("{i}\t{c}\n"))
            .collect())
    }

    pub fn add(&self, other: &Self) -> Self {
        let (p, q) = (self.clone(), other.clone());
        Self::from_fn(move |n| Ok(p.coeff(n)?.add(&q.coeff(n)?)))
    }

    pub fn scaled(&self, s: B) -> Self {
        let p = self.clone();
        Self::from_fn(move |n| Ok(s.mul(&p.coeff(n)?)))
    }

    /// Cauchy product `Σ_{i+j=n} pᵢ qⱼ`.
    pub fn mul(&self, other: &Self) -> Self {
        let (p, q) = (self.clone(), other.clone());
        Self::from_fn(move |n| {
            let mut acc = B::zero();
            for i in 0..=n {
                acc = acc.add(&p.coeff(i)?.mul(&q.coeff(n - i)?));
            }
            Ok(acc)
        })
    }

    /// `n · p_{n+1}` at index `n`.
    pub fn derivative(&self) -> Self {
        let p = self.clone();
        Self::from_fn(move |n| Ok(B::from_nat(n as u64 + 1).mul(&p.coeff(n + 1)?)))
    }

    /// `0, p₀/1, p₁/2, …`; index 0 never reads `self`.
    pub fn integral(&self) -> Self
    where
        B: DivNat,
    {
        let p = self.clone();
        Self::from_fn(move |n| {
            if n == 0 {
                Ok(B::zero())
            } else {
                Ok(p.coeff(n - 1)?.div_nat(n as u64)?)
            }
        })
    }

    /// Number of coefficients already cached.
    pub fn cached_len(&self) -> usize {
        self.0.cache.lock().unwrap_or_else(|e| e.into_inner()).len()
    }
}

impl<B: Ring + Send + Sync + 'static> Series<B> {
    pub fn neg(&self) -> Self {
        let p = self.clone();
        Self::from_fn(move |n| Ok(p.coeff(n)?.neg()))
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }
}

/// Sine, cosine and exponential series defined by their differential
/// equations: `sin = ∫cos`, `cos = 1 − ∫sin`, `exp = 1 + ∫exp`.
pub struct OdeSeries<B> {
    pub sin: Series<B>,
    pub cos: Series<B>,
    pub exp: Series<B>,
}

pub fn ode_series<B: Ring + DivNat + Send + Sync + 'static>() -> OdeSeries<B> {
    let sin = Series::knot();
    let cos = Series::knot();
    let exp = Series::knot();
    let one = Series::constant(B::one());
    sin.define_as(&cos.integral());
    cos.define_as(&one.sub(&sin.integral()));
    exp.define_as(&one.add(&exp.integral()));
    OdeSeries { sin, cos, exp }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{NatCount, Rational};

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    #[test]
    fn ode_examples() {
        let ode = ode_series::<Rational>();
        assert_eq!(
            ode.sin.take(6).unwrap(),
            [q(0, 1), q(1, 1), q(0, 1), q(-1, 6), q(0, 1), q(1, 120)]
        );
        assert_eq!(
            ode.cos.take(5).unwrap(),
            [q(1, 1), q(0, 1), q(-1, 2), q(0, 1), q(1, 24)]
        );
        let mut fact = 1i64;
        for n in 0..=12 {
            if n > 0 {
                fact *= n;
            }
            assert_eq!(ode.exp.coeff(n as usize).unwrap(), q(1, fact));
        }
    }

    #[test]
    fn integral_of_one() {
        let s = Series::from_fn(|_| Ok(Rational::from_integer(1))).integral();
        assert_eq!(s.take(4).unwrap(), [q(0, 1), q(1, 1), q(1, 2), q(1, 3)]);
    }

    #[test]
    fn integral_is_nonstrict_at_zero() {
        let inner = Series::<Rational>::knot();
        let s = inner.integral();
        assert_eq!(s.coeff(0).unwrap(), q(0, 1));
        assert_eq!(s.coeff(1), Err(PolyError::UndefinedSeries));
    }

    #[test]
    fn derivative_inverts_integral() {
        let s = Series::from_fn(|n| Ok(q(n as i64 * 3 - 7, n as i64 + 1)));
        let back = s.integral().derivative();
        assert_eq!(back.take(21).unwrap(), s.take(21).unwrap());
    }

    #[test]
    fn sin_derivative_is_cos() {
        let ode = ode_series::<Rational>();
        assert_eq!(
            ode.sin.derivative().take(16).unwrap(),
            ode.cos.take(16).unwrap()
        );
    }

    #[test]
    fn self_dependence_is_an_error() {
        let s = Series::<Rational>::knot();
        s.define_as(&s.add(&Series::constant(q(1, 1))));
        assert_eq!(s.coeff(0), Err(PolyError::UnproductiveSeries { index: 0 }));
    }

    #[test]
    fn integral_needs_division() {
        let s = Series::from_fn(|_| Ok(NatCount::new(1))).integral();
        assert!(s.coeff(1).is_ok());
        assert!(matches!(s.coeff(2), Err(PolyError::Algebra(_))));
    }

    #[test]
    fn cache_is_shared_across_threads() {
        let ode = ode_series::<Rational>();
        let handles: Vec<_> = (0..4)
            .map(|_| {
                let e = ode.exp.clone();
                std::thread::spawn(move || e.take(30).unwrap())
            })
            .collect();
        let results: Vec<_> = handles.into_iter().map(|h| h.join().unwrap()).collect();
        assert!(results.windows(2).all(|w| w[0] == w[1]));
        assert_eq!(ode.exp.cached_len(), 30);
    }
}
