//! Semiring-weighted regular expressions matched by Brzozowski derivatives.
//!
//! A [`RegExp`] denotes a function from words to a star semiring. Matching a
//! word differentiates the expression one symbol at a time ([`deriv`]) and
//! reads off the empty-word weight of the residual ([`at_eps`]).
//!
//! Recursive (context-free) definitions go through [`RegExp::recursive`],
//! which creates a `Defer` node whose body is built on first use. Each such
//! node caches its empty-word weight; a definition that needs its own value
//! to produce it fails with [`LangError::UnproductiveRecursion`] instead of
//! looping.

mod fixtures;
mod syntax;

pub use fixtures::{
    bench_fixtures, canonical_input, mk_examples, Examples, Fixture, FixtureSet, FIXTURE_NAMES,
};
pub use syntax::{parse_program, ParseError};

use std::cell::RefCell;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use thiserror::Error;

use crate::algebra::{AlgebraError, Scalar, Semiring, StarSemiring};
use crate::monoid::Word;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LangError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error("unproductive recursion through `{name}`")]
    UnproductiveRecursion { name: String },
}

type Thunk<B> = Box<dyn FnOnce(&RegExp<B>) -> RegExp<B> + Send>;

/// Force-once cell behind a recursive definition.
pub struct DeferCell<B> {
    name: String,
    thunk: Mutex<Option<Thunk<B>>>,
    body: OnceLock<Result<RegExp<B>, LangError>>,
    eps: OnceLock<B>,
}

impl<B> DeferCell<B> {
    pub fn name(&self) -> &str {
        &self.name
    }

    fn id(self: &Arc<Self>) -> usize {
        Arc::as_ptr(self) as *const () as usize
    }
}

pub enum Node<B> {
    Char(char),
    Value(B),
    Sum(RegExp<B>, RegExp<B>),
    Prod(RegExp<B>, RegExp<B>),
    Star(RegExp<B>),
    Defer(Arc<DeferCell<B>>),
}

/// A shared, immutable expression tree.
pub struct RegExp<B>(Arc<Node<B>>);

impl<B> Clone for RegExp<B> {
    fn clone(&self) -> Self {
        RegExp(Arc::clone(&self.0))
    }
}

thread_local! {
    static FORCING: RefCell<Vec<usize>> = const { RefCell::new(Vec::new()) };
    static EPS_STACK: RefCell<Vec<usize>> = const { RefCell::new(Vec::new()) };
    static DERIV_STACK: RefCell<Vec<usize>> = const { RefCell::new(Vec::new()) };
}

/// Pushes `id` on a thread-local stack for the guard's lifetime; refuses
/// re-entry.
struct StackGuard {
    stack: &'static std::thread::LocalKey<RefCell<Vec<usize>>>,
}

impl StackGuard {
    fn enter(
        stack: &'static std::thread::LocalKey<RefCell<Vec<usize>>>,
        id: usize,
    ) -> Option<StackGuard> {
        stack.with(|s| {
            let mut s = s.borrow_mut();
            if s.contains(&id) {
                None
            } else {
                s.push(id);
                Some(StackGuard { stack })
            }
        })
    }
}

impl Drop for StackGuard {
    fn drop(&mut self) {
        self.stack.with(|s| {
            s.borrow_mut().pop();
        });
    }
}

impl<B> RegExp<B> {
    pub fn node(&self) -> &Node<B> {
        &self.0
    }

    pub fn ptr_eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
    }

    pub fn symbol(c: char) -> Self {
        RegExp(Arc::new(Node::Char(c)))
    }

    pub fn value(b: B) -> Self {
        RegExp(Arc::new(Node::Value(b)))
    }

    /// Unoptimized sum node.
    pub fn raw_sum(p: Self, q: Self) -> Self {
        RegExp(Arc::new(Node::Sum(p, q)))
    }

    /// Unoptimized product node.
    pub fn raw_prod(p: Self, q: Self) -> Self {
        RegExp(Arc::new(Node::Prod(p, q)))
    }

    pub fn star(p: Self) -> Self {
        RegExp(Arc::new(Node::Star(p)))
    }

    /// A recursive definition. `body` receives a handle to the definition
    /// itself and runs at most once, on first use.
    pub fn recursive(
        name: impl Into<String>,
        body: impl FnOnce(&RegExp<B>) -> RegExp<B> + Send + 'static,
    ) -> Self {
        let cell = DeferCell {
            name: name.into(),
            thunk: Mutex::new(Some(Box::new(body))),
            body: OnceLock::new(),
            eps: OnceLock::new(),
        };
        RegExp(Arc::new(Node::Defer(Arc::new(cell))))
    }

    /// Number of nodes in the tree, not descending into `Defer` bodies.
    pub fn size(&self) -> usize {
        match self.node() {
            Node::Char(_) | Node::Value(_) | Node::Defer(_) => 1,
            Node::Sum(p, q) | Node::Prod(p, q) => 1 + p.size() + q.size(),
            Node::Star(p) => 1 + p.size(),
        }
    }

    pub fn is_defer_free(&self) -> bool {
        match self.node() {
            Node::Char(_) | Node::Value(_) => true,
            Node::Defer(_) => false,
            Node::Sum(p, q) | Node::Prod(p, q) => p.is_defer_free() && q.is_defer_free(),
            Node::Star(p) => p.is_defer_free(),
        }
    }
}

fn force<B: Clone>(cell: &Arc<DeferCell<B>>) -> Result<RegExp<B>, LangError> {
    if let Some(body) = cell.body.get() {
        return body.clone();
    }
    let Some(_guard) = StackGuard::enter(&FORCING, cell.id()) else {
        return Err(LangError::UnproductiveRecursion {
            name: cell.name.clone(),
        });
    };
    cell.body
        .get_or_init(|| {
            let thunk = cell.thunk.lock().unwrap_or_else(|e| e.into_inner()).take();
            match thunk {
                Some(f) => {
                    let handle = RegExp(Arc::new(Node::Defer(Arc::clone(cell))));
                    Ok(f(&handle))
                }
                None => Err(LangError::UnproductiveRecursion {
                    name: cell.name.clone(),
                }),
            }
        })
        .clone()
}

impl<B: Semiring> RegExp<B> {
    pub fn zero() -> Self {
        Self::value(B::zero())
    }

    pub fn one() -> Self {
        Self::value(B::one())
    }

    /// Syntactic zero test: only `Value 0` counts.
    pub fn is_zero(&self) -> bool {
        matches!(self.node(), Node::Value(b) if b.is_zero())
    }

    pub fn is_one(&self) -> bool {
        matches!(self.node(), Node::Value(b) if b.is_one())
    }

    /// `w ↦ b`: a weighted product of symbols.
    pub fn word(w: &str, b: B) -> Self {
        let spine = w
            .chars()
            .rev()
            .fold(None, |acc: Option<RegExp<B>>, c| {
                Some(match acc {
                    None => Self::symbol(c),
                    Some(rest) => smart_mul(&Self::symbol(c), &rest),
                })
            })
            .unwrap_or_else(Self::one);
        scale(&b, &spine)
    }

    /// `w ↦ 1`.
    pub fn single(w: &str) -> Self {
        Self::word(w, B::one())
    }
}

/// Sum that drops syntactic zeros on either side.
pub fn smart_add<B: Semiring>(p: &RegExp<B>, q: &RegExp<B>) -> RegExp<B> {
    if p.is_zero() {
        q.clone()
    } else if q.is_zero() {
        p.clone()
    } else {
        RegExp::raw_sum(p.clone(), q.clone())
    }
}

/// Product that inspects only its left argument; the right one is never
/// examined so right-recursive definitions are not forced.
pub fn smart_mul<B: Semiring>(p: &RegExp<B>, q: &RegExp<B>) -> RegExp<B> {
    if p.is_zero() {
        RegExp::zero()
    } else if p.is_one() {
        q.clone()
    } else {
        RegExp::raw_prod(p.clone(), q.clone())
    }
}

/// Left scaling `s · e`.
pub fn scale<B: Semiring>(s: &B, e: &RegExp<B>) -> RegExp<B> {
    if s.is_zero() {
        RegExp::zero()
    } else if s.is_one() {
        e.clone()
    } else {
        smart_mul(&RegExp::value(s.clone()), e)
    }
}

/// Weight of the empty word.
pub fn at_eps<B: Semiring + StarSemiring>(e: &RegExp<B>) -> Result<B, LangError> {
    match e.node() {
        Node::Char(_) => Ok(B::zero()),
        Node::Value(b) => Ok(b.clone()),
        Node::Sum(p, q) => Ok(at_eps(p)?.add(&at_eps(q)?)),
        Node::Prod(p, q) => {
            let a = at_eps(p)?;
            // 0 * x = 0 without looking at x, so left-guarded recursion stays finite.
            if a.is_zero() {
                Ok(a)
            } else {
                Ok(a.mul(&at_eps(q)?))
            }
        }
        Node::Star(p) => Ok(at_eps(p)?.star()?),
        Node::Defer(cell) => {
            if let Some(b) = cell.eps.get() {
                return Ok(b.clone());
            }
            let Some(_guard) = StackGuard::enter(&EPS_STACK, cell.id()) else {
                return Err(LangError::UnproductiveRecursion {
                    name: cell.name.clone(),
                });
            };
            let body = force(cell)?;
            let b = at_eps(&body)?;
            Ok(cell.eps.get_or_init(|| b).clone())
        }
    }
}

/// Derivatives with respect to every symbol; absent symbols have derivative 0.
#[derive(Clone)]
pub struct DerivMap<B> {
    entries: BTreeMap<char, RegExp<B>>,
}

impl<B: Semiring> DerivMap<B> {
    pub fn empty() -> Self {
        DerivMap {
            entries: BTreeMap::new(),
        }
    }

    fn single(c: char) -> Self {
        DerivMap {
            entries: BTreeMap::from([(c, RegExp::one())]),
        }
    }

    pub fn get(&self, c: char) -> Option<&RegExp<B>> {
        self.entries.get(&c)
    }

    /// The derivative at `c`, zero when absent.
    pub fn index(&self, c: char) -> RegExp<B> {
        self.entries.get(&c).cloned().unwrap_or_else(RegExp::zero)
    }

    pub fn symbols(&self) -> impl Iterator<Item = char> + '_ {
        self.entries.keys().copied()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (char, &RegExp<B>)> {
        self.entries.iter().map(|(c, e)| (*c, e))
    }

    fn add(mut self, other: DerivMap<B>) -> Self {
        for (c, e) in other.entries {
            let merged = match self.entries.remove(&c) {
                Some(existing) => smart_add(&existing, &e),
                None => e,
            };
            if !merged.is_zero() {
                self.entries.insert(c, merged);
            }
        }
        self
    }

    fn map(self, mut f: impl FnMut(&RegExp<B>) -> RegExp<B>) -> Self {
        DerivMap {
            entries: self
                .entries
                .into_iter()
                .map(|(c, e)| (c, f(&e)))
                .filter(|(_, e)| !e.is_zero())
                .collect(),
        }
    }
}

/// One-symbol derivatives of `e`, built with the smart constructors.
pub fn deriv<B: Semiring + StarSemiring>(e: &RegExp<B>) -> Result<DerivMap<B>, LangError> {
    match e.node() {
        Node::Char(c) => Ok(DerivMap::single(*c)),
        Node::Value(_) => Ok(DerivMap::empty()),
        Node::Sum(p, q) => Ok(deriv(p)?.add(deriv(q)?)),
        Node::Prod(p, q) => {
            let a = at_eps(p)?;
            let through = if a.is_zero() {
                DerivMap::empty()
            } else {
                deriv(q)?.map(|d| scale(&a, d))
            };
            let left = deriv(p)?.map(|d| smart_mul(d, q));
            Ok(through.add(left))
        }
        Node::Star(p) => {
            let s = at_eps(p)?.star()?;
            Ok(deriv(p)?.map(|d| smart_mul(&scale(&s, d), e)))
        }
        Node::Defer(cell) => {
            let Some(_guard) = StackGuard::enter(&DERIV_STACK, cell.id()) else {
                return Err(LangError::UnproductiveRecursion {
                    name: cell.name.clone(),
                });
            };
            deriv(&force(cell)?)
        }
    }
}

/// The weight `e` assigns to `w`.
pub fn index_word<B: Semiring + StarSemiring>(e: &RegExp<B>, w: &[char]) -> Result<B, LangError> {
    let mut cur = e.clone();
    for &c in w {
        cur = deriv(&cur)?.index(c);
        if cur.is_zero() {
            return Ok(B::zero());
        }
    }
    at_eps(&cur)
}

pub fn index_str<B: Semiring + StarSemiring>(e: &RegExp<B>, w: &str) -> Result<B, LangError> {
    let w: Vec<char> = w.chars().collect();
    index_word(e, &w)
}

/// Targets of [`reinterpret`]: star semirings with symbols and embedded weights.
pub trait LanguageRep<B>: StarSemiring + Send + 'static {
    fn symbol(c: char) -> Self;
    fn weight(b: B) -> Self;

    /// Value of a recursive definition. Lazy representations return a handle
    /// without running `f`; the default runs it immediately.
    fn deferred(
        name: &str,
        f: Box<dyn FnOnce() -> Result<Self, LangError> + Send>,
    ) -> Result<Self, LangError> {
        let _ = name;
        f()
    }
}

impl<B: Semiring + Send + Sync + 'static> LanguageRep<B> for RegExp<B>
where
    RegExp<B>: StarSemiring,
{
    fn symbol(c: char) -> Self {
        RegExp::symbol(c)
    }
    fn weight(b: B) -> Self {
        RegExp::value(b)
    }
}

struct ReinterpretCtx<T> {
    memo: HashMap<usize, T>,
    in_progress: Vec<usize>,
}

/// Homomorphic image of `e` in another language representation.
pub fn reinterpret<B, T>(e: &RegExp<B>) -> Result<T, LangError>
where
    B: Scalar,
    T: LanguageRep<B> + Clone,
{
    let ctx = Arc::new(Mutex::new(ReinterpretCtx {
        memo: HashMap::new(),
        in_progress: Vec::new(),
    }));
    reinterpret_in(e, &ctx)
}

fn reinterpret_in<B, T>(e: &RegExp<B>, ctx: &Arc<Mutex<ReinterpretCtx<T>>>) -> Result<T, LangError>
where
    B: Scalar,
    T: LanguageRep<B> + Clone,
{
    match e.node() {
        Node::Char(c) => Ok(T::symbol(*c)),
        Node::Value(b) => Ok(T::weight(b.clone())),
        Node::Sum(p, q) => Ok(reinterpret_in(p, ctx)?.add(&reinterpret_in(q, ctx)?)),
        Node::Prod(p, q) => Ok(reinterpret_in(p, ctx)?.mul(&reinterpret_in(q, ctx)?)),
        Node::Star(p) => Ok(reinterpret_in(p, ctx)?.star()?),
        Node::Defer(cell) => {
            let id = cell.id();
            {
                let mut guard = ctx.lock().unwrap_or_else(|e| e.into_inner());
                if let Some(t) = guard.memo.get(&id) {
                    return Ok(t.clone());
                }
                if guard.in_progress.contains(&id) {
                    return Err(LangError::UnproductiveRecursion {
                        name: cell.name.clone(),
                    });
                }
                guard.in_progress.push(id);
            }
            let cell2 = Arc::clone(cell);
            let ctx2 = Arc::clone(ctx);
            let result = T::deferred(
                &cell.name,
                Box::new(move || {
                    let body = force(&cell2)?;
                    reinterpret_in(&body, &ctx2)
                }),
            );
            let mut guard = ctx.lock().unwrap_or_else(|e| e.into_inner());
            guard.in_progress.retain(|x| *x != id);
            let t = result?;
            guard.memo.insert(id, t.clone());
            Ok(t)
        }
    }
}

impl<B: Semiring> crate::algebra::Additive for RegExp<B> {
    fn zero() -> Self {
        RegExp::zero()
    }
    fn add(&self, other: &Self) -> Self {
        smart_add(self, other)
    }
    fn is_zero(&self) -> bool {
        RegExp::is_zero(self)
    }
}

impl<B: Semiring> Semiring for RegExp<B> {
    fn one() -> Self {
        RegExp::one()
    }
    fn mul(&self, other: &Self) -> Self {
        smart_mul(self, other)
    }
    fn is_one(&self) -> bool {
        RegExp::is_one(self)
    }
}

impl<B: Semiring> StarSemiring for RegExp<B> {
    fn star(&self) -> Result<Self, AlgebraError> {
        Ok(RegExp::star(self.clone()))
    }
}

impl<B: Semiring> crate::algebra::LeftSemimodule<B> for RegExp<B> {
    fn act(s: &B, p: &Self) -> Self {
        smart_mul(&RegExp::value(s.clone()), p)
    }
}

impl<B: fmt::Display> fmt::Display for RegExp<B> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn go<B: fmt::Display>(e: &RegExp<B>, prec: u8, f: &mut fmt::Formatter<'_>) -> fmt::Result {
            match e.node() {
                Node::Char(c) => write!(f, "'{}'", c.escape_default()),
                Node::Value(b) => write!(f, "{b}"),
                Node::Defer(cell) => write!(f, "{}", cell.name),
                Node::Sum(p, q) => {
                    if prec > 0 {
                        write!(f, "(")?;
                    }
                    go(p, 0, f)?;
                    write!(f, " + ")?;
                    go(q, 0, f)?;
                    if prec > 0 {
                        write!(f, ")")?;
                    }
                    Ok(())
                }
                Node::Prod(p, q) => {
                    if prec > 1 {
                        write!(f, "(")?;
                    }
                    go(p, 1, f)?;
                    write!(f, " * ")?;
                    go(q, 1, f)?;
                    if prec > 1 {
                        write!(f, ")")?;
                    }
                    Ok(())
                }
                Node::Star(p) => {
                    go(p, 2, f)?;
                    write!(f, "^*")
                }
            }
        }
        go(self, 0, f)
    }
}

impl<B: fmt::Display> fmt::Debug for RegExp<B> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RegExp({self})")
    }
}

/// Words of length at most `max_len` over `alphabet`, shortest first.
pub fn words_up_to(alphabet: &[char], max_len: usize) -> Vec<Word> {
    let mut out = vec![Word::empty()];
    let mut frontier = vec![Vec::<char>::new()];
    for _ in 0..max_len {
        let mut next = Vec::with_capacity(frontier.len() * alphabet.len());
        for w in &frontier {
            for &c in alphabet {
                let mut v = w.clone();
                v.push(c);
                next.push(v);
            }
        }
        out.extend(next.iter().cloned().map(Word));
        frontier = next;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{Additive, BoolRing, NatCount, Real64};

    type E = RegExp<NatCount>;

    fn n(x: u64) -> NatCount {
        NatCount::new(x)
    }

    fn ch(c: char) -> E {
        RegExp::symbol(c)
    }

    #[test]
    fn at_eps_examples() {
        assert_eq!(at_eps(&E::value(n(7))).unwrap(), n(7));
        assert_eq!(at_eps(&ch('a')).unwrap(), n(0));
        let ex = mk_examples::<NatCount>();
        assert_eq!(at_eps(&ex.anbn).unwrap(), n(1));
        assert_eq!(at_eps(&ex.dyck).unwrap(), n(1));
    }

    #[test]
    fn deriv_examples() {
        let d = deriv(&ch('a')).unwrap();
        assert_eq!(d.len(), 1);
        assert!(d.index('a').is_one());
        assert!(deriv(&E::value(n(3))).unwrap().is_empty());

        let star_a = E::star(ch('a'));
        let da = deriv(&star_a).unwrap().index('a');
        for w in words_up_to(&['a', 'b'], 6) {
            assert_eq!(
                index_word(&da, w.symbols()).unwrap(),
                index_word(&star_a, w.symbols()).unwrap(),
                "{w}"
            );
        }
    }

    #[test]
    fn deriv_keys_are_nonzero_symbols() {
        let e = smart_add(&E::single("ab"), &E::single("cd"));
        let d = deriv(&e).unwrap();
        assert_eq!(d.symbols().collect::<Vec<_>>(), vec!['a', 'c']);
        assert!(d.get('b').is_none());
    }

    #[test]
    fn index_word_examples() {
        let pickles = smart_add(&E::single("pickles"), &E::single("pickled"));
        assert_eq!(index_str(&pickles, "pickled").unwrap(), n(1));
        assert_eq!(index_str(&pickles, "pickle").unwrap(), n(0));

        let star_a = E::star(ch('a'));
        let twice = smart_mul(&star_a, &star_a);
        let input = "a".repeat(100);
        assert_eq!(index_str(&twice, &input).unwrap(), n(101));

        let ex = mk_examples::<NatCount>();
        assert_eq!(index_str(&ex.dyck, "][").unwrap(), n(0));
    }

    #[test]
    fn smart_constructor_guards() {
        let q = ch('q');
        assert!(smart_add(&E::zero(), &q).ptr_eq(&q));
        assert!(smart_add(&q, &E::zero()).ptr_eq(&q));
        assert!(smart_mul(&E::one(), &q).ptr_eq(&q));
        assert!(smart_mul(&E::zero(), &q).is_zero());
        // The right argument is never inspected.
        let p = ch('p');
        let kept = smart_mul(&p, &E::zero());
        assert!(matches!(kept.node(), Node::Prod(l, r) if l.ptr_eq(&p) && r.is_zero()));
        let kept = smart_mul(&p, &E::one());
        assert!(matches!(kept.node(), Node::Prod(_, r) if r.is_one()));
    }

    #[test]
    fn examples_fixtures() {
        let ex = mk_examples::<NatCount>();
        assert_eq!(index_str(&ex.anbn, "aabb").unwrap(), n(1));
        assert_eq!(index_str(&ex.anbn, "aab").unwrap(), n(0));
        assert_eq!(index_str(&ex.dyck, "[[]]").unwrap(), n(1));
        assert_eq!(index_str(&ex.dyck, "[][]").unwrap(), n(1));
        assert_eq!(index_str(&ex.fishy, "catfishsticks").unwrap(), n(1));
        assert_eq!(index_str(&ex.fishy, "fishfish").unwrap(), n(2));
        assert_eq!(index_str(&ex.atoz, "q").unwrap(), n(1));
    }

    #[test]
    fn anbn_counts() {
        let ex = mk_examples::<NatCount>();
        for i in 0..=10 {
            for j in 0..=10 {
                let w = format!("{}{}", "a".repeat(i), "b".repeat(j));
                let want = if i == j { 1 } else { 0 };
                assert_eq!(index_str(&ex.anbn, &w).unwrap(), n(want), "{w}");
            }
        }
    }

    #[test]
    fn unproductive_recursion_is_reported() {
        // L = L * 'a' + 'b' is left recursive: its empty-word weight needs itself.
        let l: E = RegExp::recursive("L", |this| {
            smart_add(&smart_mul(this, &RegExp::symbol('a')), &RegExp::symbol('b'))
        });
        let err = index_str(&l, "ba").unwrap_err();
        assert_eq!(err, LangError::UnproductiveRecursion { name: "L".into() });
        // Self-reference with no guard at all.
        let m: E = RegExp::recursive("M", |this| this.clone());
        assert!(matches!(
            at_eps(&m),
            Err(LangError::UnproductiveRecursion { .. })
        ));
    }

    #[test]
    fn star_domain_error_propagates() {
        let e: RegExp<Real64> = RegExp::star(RegExp::value(Real64(2.0)));
        assert!(matches!(at_eps(&e), Err(LangError::Algebra(_))));
        let ok: RegExp<Real64> = RegExp::star(RegExp::value(Real64(0.5)));
        assert_eq!(at_eps(&ok).unwrap(), Real64(2.0));
        let nat: E = RegExp::star(E::one());
        assert!(index_str(&nat, "").is_err());
    }

    #[test]
    fn scaling_multiplies_weights() {
        let e = smart_add(&E::single("ab"), &E::star(ch('a')));
        let s = scale(&n(3), &e);
        assert_eq!(at_eps(&s).unwrap(), n(3));
        assert_eq!(index_str(&s, "ab").unwrap(), n(3));
        assert_eq!(index_str(&s, "aa").unwrap(), n(3));
    }

    #[test]
    fn reinterpret_into_itself_preserves_weights() {
        let ex = mk_examples::<BoolRing>();
        let copy: RegExp<BoolRing> = reinterpret(&ex.fishy).unwrap();
        for w in ["fish", "xfishx", "fis", ""] {
            assert_eq!(
                index_str(&copy, w).unwrap(),
                index_str(&ex.fishy, w).unwrap()
            );
        }
        let zero: RegExp<BoolRing> = reinterpret(&RegExp::<BoolRing>::zero()).unwrap();
        assert!(Additive::is_zero(&zero));
    }

    #[test]
    fn words_up_to_counts() {
        assert_eq!(words_up_to(&['a', 'b'], 3).len(), 15);
        assert_eq!(words_up_to(&['x'], 0), vec![Word::empty()]);
    }

    #[test]
    fn display_round_trip_shape() {
        let e = smart_mul(&smart_add(&ch('a'), &ch('b')), &E::star(ch('c')));
        assert_eq!(e.to_string(), "('a' + 'b') * 'c'^*");
    }
}
