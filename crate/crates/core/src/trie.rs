//! Lazily forced list tries (the cofree comonad over an ordered symbol map).
//!
//! A trie node holds the weight of the empty word and one child trie per
//! symbol; the weight of `c w` is the weight of `w` in child `c`. Every trie
//! handle is a force-once cell, so a node's children are computed the first
//! time a query walks through them and are reused afterwards. That is the
//! memoization which makes repeated matching cheap.
//!
//! [`Trie::star`] ties a knot: the closure's children refer back to the
//! closure itself. Such tries are reference cycles and are never freed.

use std::cell::{Cell, RefCell};
use std::collections::{BTreeMap, VecDeque};
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use crate::algebra::{Additive, AlgebraError, LeftSemimodule, Semiring, StarSemiring};
use crate::regexp::{LangError, LanguageRep};

type NodeThunk<B> = Box<dyn FnOnce() -> Result<TrieNode<B>, LangError> + Send>;

struct TrieCell<B> {
    /// Named in recursion errors.
    label: Option<String>,
    thunk: Mutex<Option<NodeThunk<B>>>,
    node: OnceLock<Result<TrieNode<B>, LangError>>,
}

/// A forced trie node: `eps ◁ children`.
pub struct TrieNode<B> {
    pub eps: B,
    pub children: BTreeMap<char, Trie<B>>,
}

impl<B: Clone> Clone for TrieNode<B> {
    fn clone(&self) -> Self {
        TrieNode {
            eps: self.eps.clone(),
            children: self.children.clone(),
        }
    }
}

/// Shared handle to a lazily computed trie.
pub struct Trie<B>(Arc<TrieCell<B>>);

impl<B> Clone for Trie<B> {
    fn clone(&self) -> Self {
        Trie(Arc::clone(&self.0))
    }
}

thread_local! {
    static FORCED: Cell<u64> = const { Cell::new(0) };
    static IN_FORCE: RefCell<Vec<usize>> = const { RefCell::new(Vec::new()) };
}

/// Number of trie cells forced on the current thread so far.
pub fn forced_cells() -> u64 {
    FORCED.with(|c| c.get())
}

impl<B: Clone + Send + Sync + 'static> Trie<B> {
    /// A trie whose root is already computed.
    pub fn ready(eps: B, children: BTreeMap<char, Trie<B>>) -> Self {
        let cell = TrieCell {
            label: None,
            thunk: Mutex::new(None),
            node: OnceLock::new(),
        };
        let _ = cell.node.set(Ok(TrieNode { eps, children }));
        Trie(Arc::new(cell))
    }

    /// A trie computed on first use.
    pub fn lazy(f: impl FnOnce() -> Result<TrieNode<B>, LangError> + Send + 'static) -> Self {
        Self::lazy_labelled(None, f)
    }

    fn lazy_labelled(
        label: Option<String>,
        f: impl FnOnce() -> Result<TrieNode<B>, LangError> + Send + 'static,
    ) -> Self {
        Trie(Arc::new(TrieCell {
            label,
            thunk: Mutex::new(Some(Box::new(f))),
            node: OnceLock::new(),
        }))
    }

    fn pending() -> Self {
        Trie(Arc::new(TrieCell {
            label: None,
            thunk: Mutex::new(None),
            node: OnceLock::new(),
        }))
    }

    fn set_thunk(&self, f: impl FnOnce() -> Result<TrieNode<B>, LangError> + Send + 'static) {
        *self.0.thunk.lock().unwrap_or_else(|e| e.into_inner()) = Some(Box::new(f));
    }

    fn recursion_error(&self) -> LangError {
        LangError::UnproductiveRecursion {
            name: self.0.label.clone().unwrap_or_else(|| "trie cell".into()),
        }
    }

    fn id(&self) -> usize {
        Arc::as_ptr(&self.0) as *const () as usize
    }

    pub fn ptr_eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
    }

    pub fn is_forced(&self) -> bool {
        self.0.node.get().is_some()
    }

    /// The root node, computing it if necessary.
    pub fn force(&self) -> Result<&TrieNode<B>, LangError> {
        if let Some(r) = self.0.node.get() {
            return r.as_ref().map_err(Clone::clone);
        }
        let id = self.id();
        let reentered = IN_FORCE.with(|s| {
            let mut s = s.borrow_mut();
            if s.contains(&id) {
                true
            } else {
                s.push(id);
                false
            }
        });
        if reentered {
            return Err(self.recursion_error());
        }
        let result = self.0.node.get_or_init(|| {
            FORCED.with(|c| c.set(c.get() + 1));
            let thunk = self
                .0
                .thunk
                .lock()
                .unwrap_or_else(|e| e.into_inner())
                .take();
            match thunk {
                Some(f) => f(),
                None => Err(self.recursion_error()),
            }
        });
        IN_FORCE.with(|s| {
            s.borrow_mut().pop();
        });
        result.as_ref().map_err(Clone::clone)
    }

    /// The empty-word weight.
    pub fn coreturn(&self) -> Result<B, LangError> {
        Ok(self.force()?.eps.clone())
    }

    /// The child trie for `c`, if the root has one.
    pub fn child(&self, c: char) -> Result<Option<Trie<B>>, LangError> {
        Ok(self.force()?.children.get(&c).cloned())
    }

    /// The residual trie after reading `u`, or `None` when every extension of
    /// `u` weighs zero.
    pub fn residual(&self, u: &[char]) -> Result<Option<Trie<B>>, LangError> {
        let mut cur = self.clone();
        for &c in u {
            match cur.child(c)? {
                Some(next) => cur = next,
                None => return Ok(None),
            }
        }
        Ok(Some(cur))
    }

    /// Map every weight through `f`, lazily.
    pub fn fmap<C: Clone + Send + Sync + 'static>(
        &self,
        f: Arc<dyn Fn(&B) -> C + Send + Sync>,
    ) -> Trie<C> {
        let t = self.clone();
        Trie::lazy(move || {
            let n = t.force()?;
            Ok(TrieNode {
                eps: f(&n.eps),
                children: n
                    .children
                    .iter()
                    .map(|(c, d)| (*c, d.fmap(Arc::clone(&f))))
                    .collect(),
            })
        })
    }

    /// The trie of all residuals: node at path `u` holds the residual at `u`.
    pub fn cojoin(&self) -> Trie<Trie<B>> {
        let t = self.clone();
        Trie::lazy(move || {
            let n = t.force()?;
            Ok(TrieNode {
                eps: t.clone(),
                children: n.children.iter().map(|(c, d)| (*c, d.cojoin())).collect(),
            })
        })
    }
}

impl<B: Semiring + Send + Sync + 'static> Trie<B> {
    pub fn zero() -> Self {
        Trie::ready(B::zero(), BTreeMap::new())
    }

    pub fn one() -> Self {
        Trie::ready(B::one(), BTreeMap::new())
    }

    pub fn constant(b: B) -> Self {
        Trie::ready(b, BTreeMap::new())
    }

    /// `w ↦ b`: a single spine.
    pub fn singleton(w: &[char], b: B) -> Self {
        w.iter().rev().fold(Trie::constant(b), |t, &c| {
            Trie::ready(B::zero(), BTreeMap::from([(c, t)]))
        })
    }

    pub fn singleton_str(w: &str, b: B) -> Self {
        let w: Vec<char> = w.chars().collect();
        Self::singleton(&w, b)
    }

    /// Weight of `w`; forces only the cells on `w`'s path.
    pub fn index(&self, w: &[char]) -> Result<B, LangError> {
        let mut cur = self.clone();
        for &c in w {
            let next = match cur.force()?.children.get(&c) {
                Some(t) => t.clone(),
                None => return Ok(B::zero()),
            };
            cur = next;
        }
        Ok(cur.force()?.eps.clone())
    }

    pub fn index_str(&self, w: &str) -> Result<B, LangError> {
        let w: Vec<char> = w.chars().collect();
        self.index(&w)
    }

    /// Pointwise sum; children are merged key-wise and summed on demand.
    pub fn plus(&self, other: &Self) -> Self {
        let (p, q) = (self.clone(), other.clone());
        Trie::lazy(move || {
            let (a, b) = (p.force()?, q.force()?);
            Ok(merge(a, b))
        })
    }

    /// Left scaling; the zero and one shortcuts leave `self` unforced.
    pub fn scaled(&self, s: &B) -> Self {
        if s.is_zero() {
            return Trie::zero();
        }
        if s.is_one() {
            return self.clone();
        }
        let (t, s) = (self.clone(), s.clone());
        Trie::lazy(move || {
            let n = t.force()?;
            Ok(TrieNode {
                eps: s.mul(&n.eps),
                children: n.children.iter().map(|(c, d)| (*c, d.scaled(&s))).collect(),
            })
        })
    }

    /// Concatenation: `(a ◁ dp) * q = a·q + (0 ◁ fmap (* q) dp)`.
    pub fn times(&self, other: &Self) -> Self {
        let (p, q) = (self.clone(), other.clone());
        Trie::lazy(move || {
            let pn = p.force()?;
            let tail = TrieNode {
                eps: B::zero(),
                children: pn.children.iter().map(|(c, d)| (*c, d.times(&q))).collect(),
            };
            if pn.eps.is_zero() {
                return Ok(tail);
            }
            let head = q.scaled(&pn.eps);
            Ok(merge(head.force()?, &tail))
        })
    }

    /// Closure: `(a ◁ dp)* = q where q = a*·(1 ◁ fmap (* q) dp)`.
    pub fn closure(&self) -> Self
    where
        B: StarSemiring,
    {
        let p = self.clone();
        let q = Trie::pending();
        let knot = q.clone();
        q.set_thunk(move || {
            let pn = p.force()?;
            let s = pn.eps.star()?;
            let children = pn
                .children
                .iter()
                .map(|(c, d)| (*c, d.times(&knot).scaled(&s)))
                .collect();
            Ok(TrieNode { eps: s, children })
        });
        q
    }

    /// Breadth-first listing of forced nodes as `prefix<TAB>weight`, down to
    /// `max_depth`. Unforced cells print `?`, failed ones `!`.
    pub fn dump(&self, max_depth: usize) -> String
    where
        B: fmt::Display,
    {
        let mut out = String::new();
        let mut queue = VecDeque::from([(String::new(), self.clone(), 0usize)]);
        while let Some((prefix, t, depth)) = queue.pop_front() {
            match t.0.node.get() {
                None => out.push_str(&format!("{prefix}\t?\n")),
                Some(Err(_)) => out.push_str(&format!("{prefix}\t!\n")),
                Some(Ok(n)) => {
                    out.push_str(&format!("{prefix}\t{}\n", n.eps));
                    if depth < max_depth {
                        for (c, d) in &n.children {
                            queue.push_back((format!("{prefix}{c}"), d.clone(), depth + 1));
                        }
                    }
                }
            }
        }
        out
    }
}

fn merge<B: Semiring + Send + Sync + 'static>(a: &TrieNode<B>, b: &TrieNode<B>) -> TrieNode<B> {
    let mut children = a.children.clone();
    for (c, d) in &b.children {
        let merged = match children.remove(c) {
            Some(existing) => existing.plus(d),
            None => d.clone(),
        };
        children.insert(*c, merged);
    }
    TrieNode {
        eps: a.eps.add(&b.eps),
        children,
    }
}

impl<B: Semiring + Send + Sync + 'static> Additive for Trie<B> {
    fn zero() -> Self {
        Trie::zero()
    }
    fn add(&self, other: &Self) -> Self {
        self.plus(other)
    }
    /// True only for an already forced `0 ◁ {}`; never forces.
    fn is_zero(&self) -> bool {
        matches!(self.0.node.get(), Some(Ok(n)) if n.eps.is_zero() && n.children.is_empty())
    }
}

impl<B: Semiring + Send + Sync + 'static> Semiring for Trie<B> {
    fn one() -> Self {
        Trie::one()
    }
    fn mul(&self, other: &Self) -> Self {
        self.times(other)
    }
    fn is_one(&self) -> bool {
        matches!(self.0.node.get(), Some(Ok(n)) if n.eps.is_one() && n.children.is_empty())
    }
}

impl<B: StarSemiring + Send + Sync + 'static> StarSemiring for Trie<B> {
    fn star(&self) -> Result<Self, AlgebraError> {
        Ok(self.closure())
    }
}

impl<B: Semiring + Send + Sync + 'static> LeftSemimodule<B> for Trie<B> {
    fn act(s: &B, p: &Self) -> Self {
        p.scaled(s)
    }
}

impl<B: StarSemiring + Send + Sync + 'static> LanguageRep<B> for Trie<B> {
    fn symbol(c: char) -> Self {
        Trie::singleton(&[c], B::one())
    }

    fn weight(b: B) -> Self {
        Trie::constant(b)
    }

    fn deferred(
        name: &str,
        f: Box<dyn FnOnce() -> Result<Self, LangError> + Send>,
    ) -> Result<Self, LangError> {
        Ok(Trie::lazy_labelled(Some(name.to_string()), move || {
            let t = f()?;
            t.force().cloned()
        }))
    }
}

impl<B: fmt::Debug> fmt::Debug for Trie<B> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.0.node.get() {
            None => write!(f, "Trie(?)"),
            Some(Err(e)) => write!(f, "Trie(!{e})"),
            Some(Ok(n)) => write!(
                f,
                "Trie({:?} ◁ {:?})",
                n.eps,
                n.children.keys().collect::<Vec<_>>()
            ),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::NatCount;
    use crate::regexp::{mk_examples, reinterpret, words_up_to};

    type T = Trie<NatCount>;

    fn n(x: u64) -> NatCount {
        NatCount::new(x)
    }

    fn s(w: &str) -> T {
        T::singleton_str(w, n(1))
    }

    #[test]
    fn index_examples() {
        assert_eq!(T::zero().index_str("abc").unwrap(), n(0));
        assert_eq!(T::one().index_str("").unwrap(), n(1));
        assert_eq!(T::one().index_str("x").unwrap(), n(0));
        assert_eq!(T::singleton_str("ab", n(5)).index_str("ab").unwrap(), n(5));
        assert_eq!(T::singleton_str("ab", n(5)).index_str("a").unwrap(), n(0));
    }

    #[test]
    fn singleton_of_empty_word() {
        let t = T::singleton(&[], n(4));
        let node = t.force().unwrap();
        assert_eq!(node.eps, n(4));
        assert!(node.children.is_empty());
    }

    #[test]
    fn add_examples() {
        let t = s("a").plus(&s("b"));
        assert_eq!(t.index_str("a").unwrap(), n(1));
        assert_eq!(t.index_str("b").unwrap(), n(1));
        assert_eq!(t.index_str("ab").unwrap(), n(0));
    }

    #[test]
    fn mul_and_star_examples() {
        assert_eq!(s("a").times(&s("b")).index_str("ab").unwrap(), n(1));
        let star_a = s("a").closure();
        assert_eq!(star_a.index_str("aaa").unwrap(), n(1));
        assert_eq!(star_a.index_str("aab").unwrap(), n(0));
        let twice = star_a.times(&star_a);
        assert_eq!(twice.index_str(&"a".repeat(100)).unwrap(), n(101));
        let z = T::zero().closure();
        for w in words_up_to(&['a', 'b'], 3) {
            let want = if w.is_empty() { n(1) } else { n(0) };
            assert_eq!(z.index(w.symbols()).unwrap(), want);
        }
    }

    #[test]
    fn scale_examples() {
        let zeroed = s("a").scaled(&n(0));
        assert!(zeroed.is_forced() && Additive::is_zero(&zeroed));
        let t = T::singleton_str("a", n(3)).scaled(&n(2));
        assert_eq!(t.index_str("a").unwrap(), n(6));
    }

    #[test]
    fn star_domain_error_surfaces_on_query() {
        let t = T::constant(n(2)).closure();
        assert!(matches!(t.index_str(""), Err(LangError::Algebra(_))));
    }

    #[test]
    fn comonad_examples() {
        assert_eq!(T::one().coreturn().unwrap(), n(1));
        let t = s("ab").plus(&s("ac")).plus(&s(""));
        let cj = t.cojoin();
        assert!(cj.coreturn().unwrap().ptr_eq(&t));
        let at_a = cj.residual(&['a']).unwrap().unwrap().coreturn().unwrap();
        assert_eq!(at_a.index_str("b").unwrap(), n(1));
        assert_eq!(at_a.index_str("c").unwrap(), n(1));
        assert_eq!(at_a.index_str("").unwrap(), n(0));
    }

    #[test]
    fn repeated_query_forces_nothing_new() {
        let ex = mk_examples::<NatCount>();
        let t: T = reinterpret(&ex.fishy).unwrap();
        let w = "aaaafishaaaa";
        t.index_str(w).unwrap();
        let before = forced_cells();
        assert_eq!(t.index_str(w).unwrap(), n(1));
        assert_eq!(forced_cells(), before);
    }

    #[test]
    fn recursive_languages_through_reinterpret() {
        let ex = mk_examples::<NatCount>();
        let anbn: T = reinterpret(&ex.anbn).unwrap();
        assert_eq!(anbn.index_str("").unwrap(), n(1));
        assert_eq!(anbn.index_str("aaabbb").unwrap(), n(1));
        assert_eq!(anbn.index_str("aabbb").unwrap(), n(0));
        let dyck: T = reinterpret(&ex.dyck).unwrap();
        assert_eq!(dyck.index_str("[[]][]").unwrap(), n(1));
        assert_eq!(dyck.index_str("[[]").unwrap(), n(0));
    }

    #[test]
    fn dump_marks_unforced_cells() {
        let t = s("ab").plus(&s("ac"));
        assert_eq!(t.dump(2), "\t?\n");
        t.index_str("ab").unwrap();
        let d = t.dump(3);
        assert!(d.starts_with("\t0\na\t0\n"), "{d}");
        assert!(d.contains("ab\t1\n"));
        assert!(d.contains("ac\t?\n") || d.contains("ac\t1\n"));
    }

    #[test]
    fn fmap_maps_weights() {
        let t = T::singleton_str("ab", n(3));
        let doubled = t.fmap(Arc::new(|b: &NatCount| b.add(b)));
        assert_eq!(doubled.index_str("ab").unwrap(), n(6));
        assert_eq!(doubled.index_str("a").unwrap(), n(0));
    }
}
