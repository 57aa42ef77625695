//! Seeded oracle and property suites, runnable from the CLI.
//!
//! Every suite draws its cases from its own generator, seeded from the run
//! seed and the suite's position, so a given seed reproduces the same cases
//! whether suites run alone, sequentially or in parallel.

use std::collections::BTreeMap;
use std::fmt;

use rand::Rng;

use crate::algebra::{
    positive, Additive, BoolRing, NatCount, Rational, Real64, Ring, Scalar, Semiring, StarSemiring,
};
use crate::conv::{
    conv1d, conv2d, conv2d_nested, dft_check, read_pgm, to_byte, write_pgm, ImageGrid, Kernel,
    Signal1D, StandardKernel,
};
use crate::gen::{self, RandomScalar, TestRng};
use crate::laws::{self, Verdicts};
use crate::monoid::{KeyedVector, Word};
use crate::par::{self, Exec};
use crate::poly::{ode_series, Monomial, Poly1, PolyM};
use crate::regexp::{
    at_eps, deriv, index_word, mk_examples, reinterpret, scale, smart_add, smart_mul, words_up_to,
    LangError, Node, RegExp,
};
use crate::trie::{forced_cells, Trie};

/// Outcome of one suite.
#[derive(Debug, Clone)]
pub struct SuiteReport {
    pub name: &'static str,
    /// Random or enumerated cases drawn.
    pub cases: usize,
    /// Individual assertions evaluated.
    pub checks: usize,
    /// Descriptions of failed checks (at most [`MAX_REPORTED`] kept).
    pub failures: Vec<String>,
    pub failed_checks: usize,
}

pub const MAX_REPORTED: usize = 10;

impl SuiteReport {
    fn new(name: &'static str) -> Self {
        SuiteReport {
            name,
            cases: 0,
            checks: 0,
            failures: Vec::new(),
            failed_checks: 0,
        }
    }

    pub fn passed(&self) -> bool {
        self.failed_checks == 0
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.failed_checks += 1;
            if self.failures.len() < MAX_REPORTED {
                self.failures.push(what());
            }
        }
    }

    fn verdicts(&mut self, v: Verdicts, case: impl Fn() -> String) {
        for (law, ok) in v {
            self.check(ok, || format!("{law}: {}", case()));
        }
    }
}

impl fmt::Display for SuiteReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}\t{}\t{} cases\t{} checks\t{} failed",
            if self.passed() { "PASS" } else { "FAIL" },
            self.name,
            self.cases,
            self.checks,
            self.failed_checks
        )
    }
}

#[derive(Debug, Clone, Copy)]
pub struct SelftestConfig {
    pub seed: u64,
    /// Random cases per law suite; other suites scale from it.
    pub cases: usize,
}

impl Default for SelftestConfig {
    fn default() -> Self {
        SelftestConfig {
            seed: gen::DEFAULT_SEED,
            cases: 200,
        }
    }
}

type SuiteFn = fn(&mut TestRng, usize) -> SuiteReport;

/// Suite names with their runners, in report order.
pub const SUITES: &[(&str, SuiteFn)] = &[
    ("laws/bool", laws_bool),
    ("laws/nat", laws_nat),
    ("laws/real", laws_real),
    ("laws/rational", laws_rational),
    ("positive-hom", positive_hom),
    ("laws/keyed-vector", laws_keyed_vector),
    ("keyed-vector-oracle", keyed_vector_oracle),
    ("laws/trie", laws_trie),
    ("laws/poly1", laws_poly1),
    ("laws/dense-poly", laws_dense),
    ("splits-oracle", splits_oracle),
    ("derivative-rules", derivative_rules),
    ("non-regular", non_regular),
    ("cross-engine", cross_engine),
    ("trie-memo", trie_memo),
    ("poly-golden", poly_golden),
    ("poly-hom", poly_hom),
    ("series", series_suite),
    ("conv1d", conv1d_suite),
    ("dft", dft_suite),
    ("conv2d", conv2d_suite),
    ("image", image_suite),
];

fn suite_seed(seed: u64, index: usize) -> u64 {
    seed ^ (index as u64 + 1).wrapping_mul(0x9E37_79B9_7F4A_7C15)
}

/// Run the named suites (all when `only` is empty).
pub fn run(cfg: SelftestConfig, exec: Exec, only: &[&str]) -> Vec<SuiteReport> {
    let chosen: Vec<(usize, SuiteFn)> = SUITES
        .iter()
        .enumerate()
        .filter(|(_, (name, _))| only.is_empty() || only.contains(name))
        .map(|(i, (_, f))| (i, *f))
        .collect();
    par::map_slice(exec, &chosen, |(i, f)| {
        f(&mut gen::rng(suite_seed(cfg.seed, *i)), cfg.cases)
    })
}

/// Run a single suite by name.
pub fn run_suite(name: &str, cfg: SelftestConfig) -> Option<SuiteReport> {
    SUITES
        .iter()
        .position(|(n, _)| *n == name)
        .map(|i| SUITES[i].1(&mut gen::rng(suite_seed(cfg.seed, i)), cfg.cases))
}

// ---------------------------------------------------------------------------
// Scalars

fn scalar_laws<B: RandomScalar>(
    name: &'static str,
    rng: &mut TestRng,
    cases: usize,
    affine: bool,
) -> SuiteReport {
    let mut r = SuiteReport::new(name);
    let eq = |x: &B, y: &B| x.approx_eq(y);
    for _ in 0..cases {
        r.cases += 1;
        let (a, b, c) = (B::random(rng), B::random(rng), B::random(rng));
        let case = || format!("a={a} b={b} c={c}");
        r.verdicts(laws::semiring_laws(&a, &b, &c, eq), case);
        r.verdicts(laws::semimodule_laws(&a, &b, &c, &b, eq), case);
        let p = B::random_star_arg(rng);
        r.verdicts(laws::star_laws(&p, eq), || format!("p={p}"));
        if affine {
            r.verdicts(laws::affine_law(&p, &a, eq), || format!("m={p} b={a}"));
        }
    }
    r
}

fn laws_bool(rng: &mut TestRng, cases: usize) -> SuiteReport {
    scalar_laws::<BoolRing>("laws/bool", rng, cases, true)
}

fn laws_nat(rng: &mut TestRng, cases: usize) -> SuiteReport {
    scalar_laws::<NatCount>("laws/nat", rng, cases, false)
}

fn laws_real(rng: &mut TestRng, cases: usize) -> SuiteReport {
    scalar_laws::<Real64>("laws/real", rng, cases, true)
}

fn laws_rational(rng: &mut TestRng, cases: usize) -> SuiteReport {
    scalar_laws::<Rational>("laws/rational", rng, cases, true)
}

fn positive_hom(_: &mut TestRng, _: usize) -> SuiteReport {
    let mut r = SuiteReport::new("positive-hom");
    r.check(positive(&NatCount::zero()) == BoolRing::zero(), || {
        "zero".into()
    });
    r.check(positive(&NatCount::one()) == BoolRing::one(), || {
        "one".into()
    });
    for a in 0..=20 {
        for b in 0..=20 {
            r.cases += 1;
            let (x, y) = (NatCount::new(a), NatCount::new(b));
            r.check(
                positive(&x.add(&y)) == positive(&x).add(&positive(&y)),
                || format!("add {a} {b}"),
            );
            r.check(
                positive(&x.mul(&y)) == positive(&x).mul(&positive(&y)),
                || format!("mul {a} {b}"),
            );
        }
    }
    r
}

// ---------------------------------------------------------------------------
// Keyed vectors

const ABC: [char; 3] = ['a', 'b', 'c'];
const AB: [char; 2] = ['a', 'b'];

fn laws_keyed_vector(rng: &mut TestRng, cases: usize) -> SuiteReport {
    let mut r = SuiteReport::new("laws/keyed-vector");
    for _ in 0..cases {
        r.cases += 1;
        let mut w = || gen::random_word_vector::<NatCount>(rng, &ABC, 5, 4);
        let (a, b, c) = (w(), w(), w());
        let case = || format!("{a:?} {b:?} {c:?}");
        r.verdicts(laws::semiring_laws(&a, &b, &c, |x, y| x == y), case);
        let (s, t) = (NatCount::random(rng), NatCount::random(rng));
        r.verdicts(laws::semimodule_laws(&s, &t, &a, &b, |x, y| x == y), case);

        let mut n = || gen::random_nat_vector::<Rational>(rng, 5, 4);
        let (a, b, c) = (n(), n(), n());
        let case = || format!("{a:?} {b:?} {c:?}");
        r.verdicts(laws::semiring_laws(&a, &b, &c, |x, y| x == y), case);
        let (s, t) = (Rational::random(rng), Rational::random(rng));
        r.verdicts(laws::semimodule_laws(&s, &t, &a, &b, |x, y| x == y), case);

        let mut p = || gen::random_pair_vector::<NatCount>(rng, 5, 4);
        let (a, b, c) = (p(), p(), p());
        r.verdicts(laws::semiring_laws(&a, &b, &c, |x, y| x == y), || {
            format!("{a:?} {b:?} {c:?}")
        });
    }
    r
}

fn keyed_vector_oracle(rng: &mut TestRng, cases: usize) -> SuiteReport {
    let mut r = SuiteReport::new("keyed-vector-oracle");
    let words = words_up_to(&ABC, 8);
    for _ in 0..cases {
        r.cases += 1;
        let p = gen::random_word_vector::<NatCount>(rng, &ABC, 5, 4);
        let q = gen::random_word_vector::<NatCount>(rng, &ABC, 5, 4);
        let pq = p.convolve(&q);
        for w in &words {
            r.check(
                pq.index(w) == KeyedVector::convolve_by_splits(&p, &q, w),
                || format!("{p:?} * {q:?} at {w}"),
            );
        }
        let rebuilt = p
            .decompose()
            .into_iter()
            .fold(KeyedVector::empty(), |a, s| a.plus(&s));
        r.check(rebuilt == p, || format!("decompose {p:?}"));

        let bp = gen::random_word_vector::<BoolRing>(rng, &ABC, 5, 4);
        let bq = gen::random_word_vector::<BoolRing>(rng, &ABC, 5, 4);
        let mut concat = std::collections::BTreeSet::new();
        for u in bp.keys() {
            for v in bq.keys() {
                concat.insert(Word([u.0.clone(), v.0.clone()].concat()));
            }
        }
        let got: std::collections::BTreeSet<Word> = bp.convolve(&bq).keys().cloned().collect();
        r.check(got == concat, || format!("set concatenation {bp:?} {bq:?}"));
    }
    r
}

// ---------------------------------------------------------------------------
// Languages

fn trie_of(e: &RegExp<NatCount>) -> Result<Trie<NatCount>, LangError> {
    reinterpret(e)
}

fn laws_trie(rng: &mut TestRng, cases: usize) -> SuiteReport {
    let mut r = SuiteReport::new("laws/trie");
    let words = laws::bounded_words(&AB, 6);
    let eq = |x: &Trie<NatCount>, y: &Trie<NatCount>| laws::tries_agree(x, y, &words);
    for _ in 0..cases {
        r.cases += 1;
        let es: Vec<RegExp<NatCount>> = (0..3).map(|_| gen::random_regexp(rng, 3, &AB)).collect();
        let ts: Result<Vec<_>, _> = es.iter().map(trie_of).collect();
        let Ok(ts) = ts else {
            r.check(false, || format!("reinterpret failed for {}", es[0]));
            continue;
        };
        let case = || format!("{} | {} | {}", es[0], es[1], es[2]);
        r.verdicts(laws::semiring_laws(&ts[0], &ts[1], &ts[2], eq), case);
        let (s, t) = (NatCount::random(rng), NatCount::random(rng));
        r.verdicts(laws::semimodule_laws(&s, &t, &ts[0], &ts[1], eq), case);
        // Closure is only defined over the naturals when the empty word weighs 0.
        let c = AB[rng.random_range(0..2)];
        let p = Trie::singleton(&[c], NatCount::one()).mul(&ts[0]);
        r.verdicts(laws::star_laws(&p, eq), case);
        let depth3 = laws::bounded_words(&AB, 3);
        let cj = ts[0].cojoin();
        let ok = cj.coreturn().map(|t| t.ptr_eq(&ts[0])).unwrap_or(false)
            && depth3.iter().all(|u| {
                let via_cojoin = cj
                    .residual(u.symbols())
                    .ok()
                    .flatten()
                    .map(|n| n.coreturn());
                let direct = ts[0].residual(u.symbols()).ok().flatten();
                match (via_cojoin, direct) {
                    (Some(Ok(a)), Some(b)) => laws::tries_agree(&a, &b, &depth3),
                    (None, None) => true,
                    _ => false,
                }
            });
        r.check(ok, || format!("comonad: {}", es[0]));
    }
    r
}

/// Weight function of a defer-free expression on every word in `words`
/// (which must be closed under prefixes and suffixes, e.g. all words up to a
/// length), built bottom-up in the monoid semiring. Products are computed
/// word by word from splittings; closures by fixed-point iteration.
pub fn truncated_denotation<B: Scalar>(
    e: &RegExp<B>,
    words: &[Word],
) -> Result<KeyedVector<Word, B>, LangError> {
    let max_len = words.iter().map(Word::len).max().unwrap_or(0);
    let mul = |p: &KeyedVector<Word, B>, q: &KeyedVector<Word, B>| {
        KeyedVector::from_entries(
            words
                .iter()
                .map(|w| (w.clone(), KeyedVector::convolve_by_splits(p, q, w))),
        )
    };
    Ok(match e.node() {
        Node::Char(c) => {
            if max_len == 0 {
                KeyedVector::empty()
            } else {
                KeyedVector::singleton(Word(vec![*c]), B::one())
            }
        }
        Node::Value(b) => KeyedVector::singleton(Word::empty(), b.clone()),
        Node::Sum(p, q) => truncated_denotation(p, words)?.plus(&truncated_denotation(q, words)?),
        Node::Prod(p, q) => mul(
            &truncated_denotation(p, words)?,
            &truncated_denotation(q, words)?,
        ),
        Node::Star(p) => {
            let d = truncated_denotation(p, words)?;
            let s = d.index(&Word::empty()).star()?;
            let plus = d.filter_keys(|w| !w.is_empty());
            let one = KeyedVector::singleton(Word::empty(), B::one());
            let mut acc = KeyedVector::empty();
            for _ in 0..=max_len {
                acc = one.plus(&mul(&plus, &acc)).scaled(&s);
            }
            acc
        }
        Node::Defer(cell) => {
            return Err(LangError::UnproductiveRecursion {
                name: format!(
                    "{} (recursive definitions have no finite denotation)",
                    cell.name()
                ),
            })
        }
    })
}

fn splits_oracle(rng: &mut TestRng, cases: usize) -> SuiteReport {
    let mut r = SuiteReport::new("splits-oracle");
    let words = words_up_to(&AB, 6);
    for _ in 0..cases {
        r.cases += 1;
        let e: RegExp<NatCount> = gen::random_regexp(rng, 4, &AB);
        let den = truncated_denotation(&e, &words);
        let trie = trie_of(&e);
        let (Ok(den), Ok(trie)) = (den, trie) else {
            r.check(false, || format!("construction failed: {e}"));
            continue;
        };
        for w in &words {
            let want = den.index(w);
            let got_r = index_word(&e, w.symbols());
            let got_t = trie.index(w.symbols());
            r.check(got_r.as_ref() == Ok(&want), || {
                format!("regexp {e} at {w:?}: {got_r:?} vs {want}")
            });
            r.check(got_t.as_ref() == Ok(&want), || {
                format!("trie {e} at {w:?}: {got_t:?} vs {want}")
            });
        }
    }
    r
}

fn derivative_rules(rng: &mut TestRng, cases: usize) -> SuiteReport {
    let mut r = SuiteReport::new("derivative-rules");
    let words = words_up_to(&AB, 4);
    for _ in 0..cases {
        r.cases += 1;
        let p: RegExp<NatCount> = gen::random_regexp(rng, 2, &AB);
        let q: RegExp<NatCount> = gen::random_regexp(rng, 2, &AB);
        let s = NatCount::random(rng);
        let case = || format!("p={p} q={q} s={s}");
        let (Ok(ep), Ok(eq)) = (at_eps(&p), at_eps(&q)) else {
            r.check(false, case);
            continue;
        };
        r.check(at_eps(&smart_add(&p, &q)) == Ok(ep.add(&eq)), || {
            format!("eps sum {}", case())
        });
        r.check(at_eps(&smart_mul(&p, &q)) == Ok(ep.mul(&eq)), || {
            format!("eps prod {}", case())
        });
        r.check(at_eps(&scale(&s, &p)) == Ok(s.mul(&ep)), || {
            format!("eps scale {}", case())
        });
        if let Ok(star_ep) = ep.star() {
            r.check(at_eps(&RegExp::star(p.clone())) == Ok(star_ep), || {
                format!("eps star {}", case())
            });
        }
        let (Ok(dpq), Ok(dp), Ok(dq)) = (deriv(&smart_mul(&p, &q)), deriv(&p), deriv(&q)) else {
            r.check(false, case);
            continue;
        };
        for c in AB {
            let rhs = smart_add(&scale(&ep, &dq.index(c)), &smart_mul(&dp.index(c), &q));
            let lhs = dpq.index(c);
            for w in &words {
                let (a, b) = (index_word(&lhs, w.symbols()), index_word(&rhs, w.symbols()));
                r.check(a == b, || format!("deriv product at {c}{w}: {}", case()));
            }
        }
    }
    r
}

/// `a^n b^n` membership by counting.
pub fn is_anbn(w: &[char]) -> bool {
    let n = w.iter().take_while(|&&c| c == 'a').count();
    w.len() == 2 * n && w[n..].iter().all(|&c| c == 'b')
}

/// Balanced brackets by a depth counter.
pub fn is_balanced(w: &[char]) -> bool {
    let mut depth: i64 = 0;
    for &c in w {
        depth += match c {
            '[' => 1,
            ']' => -1,
            _ => return false,
        };
        if depth < 0 {
            return false;
        }
    }
    depth == 0
}

fn non_regular(_: &mut TestRng, cases: usize) -> SuiteReport {
    let mut r = SuiteReport::new("non-regular");
    let ex = mk_examples::<NatCount>();
    let max_len = if cases >= 200 { 10 } else { 8 };
    let (Ok(anbn_t), Ok(dyck_t)) = (trie_of(&ex.anbn), trie_of(&ex.dyck)) else {
        r.check(false, || "reinterpret".into());
        return r;
    };
    let bool01 = |b: bool| NatCount::new(b as u64);
    for w in words_up_to(&AB, max_len) {
        r.cases += 1;
        let want = bool01(is_anbn(w.symbols()));
        r.check(
            index_word(&ex.anbn, w.symbols()) == Ok(want.clone()),
            || format!("anbn regexp {w}"),
        );
        r.check(anbn_t.index(w.symbols()) == Ok(want), || {
            format!("anbn trie {w}")
        });
    }
    for w in words_up_to(&['[', ']'], max_len) {
        r.cases += 1;
        let want = bool01(is_balanced(w.symbols()));
        r.check(
            index_word(&ex.dyck, w.symbols()) == Ok(want.clone()),
            || format!("dyck regexp {w}"),
        );
        r.check(dyck_t.index(w.symbols()) == Ok(want), || {
            format!("dyck trie {w}")
        });
    }
    r
}

fn cross_engine(rng: &mut TestRng, cases: usize) -> SuiteReport {
    let mut r = SuiteReport::new("cross-engine");
    let ex = mk_examples::<NatCount>();
    let langs: [(&str, &RegExp<NatCount>, &[char]); 6] = [
        ("a", &ex.a, &AB),
        ("b", &ex.b, &AB),
        ("atoz", &ex.atoz, &['a', 'f', 'i', 's', 'h', 'z']),
        ("fishy", &ex.fishy, &['a', 'f', 'i', 's', 'h']),
        ("anbn", &ex.anbn, &AB),
        ("dyck", &ex.dyck, &['[', ']']),
    ];
    for (name, e, alphabet) in langs {
        let Ok(t) = trie_of(e) else {
            r.check(false, || format!("reinterpret {name}"));
            continue;
        };
        for _ in 0..cases {
            r.cases += 1;
            let w = gen::random_word(rng, alphabet, 12);
            r.check(index_word(e, w.symbols()) == t.index(w.symbols()), || {
                format!("{name} {w}")
            });
        }
    }
    r
}

fn trie_memo(rng: &mut TestRng, cases: usize) -> SuiteReport {
    let mut r = SuiteReport::new("trie-memo");
    let ex = mk_examples::<NatCount>();
    let Ok(t) = trie_of(&ex.fishy) else {
        r.check(false, || "reinterpret".into());
        return r;
    };
    for _ in 0..cases.min(100) {
        r.cases += 1;
        let w = gen::random_word(rng, &['a', 'f', 'i', 's', 'h'], 16);
        let first = t.index(w.symbols());
        let before = forced_cells();
        let second = t.index(w.symbols());
        r.check(forced_cells() == before && first == second, || {
            format!("repeat {w}")
        });
    }
    r
}

// ---------------------------------------------------------------------------
// Polynomials and series

fn laws_poly1(rng: &mut TestRng, cases: usize) -> SuiteReport {
    let mut r = SuiteReport::new("laws/poly1");
    for _ in 0..cases {
        r.cases += 1;
        let mut p = || gen::random_poly1::<Rational>(rng, 6);
        let (a, b, c) = (p(), p(), p());
        let case = || format!("{a} | {b} | {c}");
        r.verdicts(laws::semiring_laws(&a, &b, &c, |x, y| x == y), case);
        let (s, t) = (Rational::random(rng), Rational::random(rng));
        r.verdicts(laws::semimodule_laws(&s, &t, &a, &b, |x, y| x == y), case);
    }
    r
}

fn laws_dense(rng: &mut TestRng, cases: usize) -> SuiteReport {
    let mut r = SuiteReport::new("laws/dense-poly");
    for _ in 0..cases {
        r.cases += 1;
        let mut p = || gen::random_dense::<Rational>(rng, 6);
        let (a, b, c) = (p(), p(), p());
        let case = || format!("{a:?} | {b:?} | {c:?}");
        r.verdicts(laws::semiring_laws(&a, &b, &c, |x, y| x == y), case);
        let (s, t) = (Rational::random(rng), Rational::random(rng));
        r.verdicts(laws::semimodule_laws(&s, &t, &a, &b, |x, y| x == y), case);
        let mut n = || gen::random_dense::<NatCount>(rng, 6);
        let (d, e) = (n(), n());
        r.check(crate::conv::nat_conv(&d, &e) == d.mul(&e), || {
            format!("nat_conv {d:?} {e:?}")
        });
    }
    r
}

fn poly_golden(_: &mut TestRng, _: usize) -> SuiteReport {
    let mut r = SuiteReport::new("poly-golden");
    let q = Rational::from_integer;
    let p = Poly1::x().add(&Poly1::constant(q(3)));
    r.cases = 5;
    r.check(p.pow(3).coeffs() == [27, 27, 9, 1].map(q), || {
        "(x+3)^3".into()
    });
    r.check(
        p.pow(7).coeffs() == [2187, 5103, 5103, 2835, 945, 189, 21, 1].map(q),
        || "(x+3)^7".into(),
    );
    r.check(p.pow(5).eval(&q(17)) == p.eval(&q(17)).pow(5), || {
        "p^5 at 17".into()
    });
    let xyz = PolyM::<Rational>::var("x")
        .add(&PolyM::var("y"))
        .add(&PolyM::var("z"));
    r.check(
        xyz.pow(2).show() == "x^2 + 2xy + 2xz + y^2 + 2yz + z^2",
        || format!("(x+y+z)^2 = {}", xyz.pow(2)),
    );
    r.check(
        xyz.pow(3).show()
            == "x^3 + 3x^2y + 3x^2z + 3xy^2 + 6xyz + 3xz^2 + y^3 + 3y^2z + 3yz^2 + z^3",
        || format!("(x+y+z)^3 = {}", xyz.pow(3)),
    );
    r
}

fn poly_hom(rng: &mut TestRng, cases: usize) -> SuiteReport {
    let mut r = SuiteReport::new("poly-hom");
    for _ in 0..cases {
        r.cases += 1;
        let p = Poly1::from_coeffs(gen::random_int_coeffs(rng, 6, 9));
        let q = Poly1::from_coeffs(gen::random_int_coeffs(rng, 6, 9));
        for x in -3..=3 {
            let x = Rational::from_integer(x);
            r.check(p.mul(&q).eval(&x) == p.eval(&x).mul(&q.eval(&x)), || {
                format!("mul {p} {q}")
            });
            r.check(p.add(&q).eval(&x) == p.eval(&x).add(&q.eval(&x)), || {
                format!("add {p} {q}")
            });
        }
        let a = gen::random_poly1::<Rational>(rng, 8);
        let b = gen::random_poly1::<Rational>(rng, 8);
        r.check(
            a.mul(&b).to_dense() == a.to_dense().mul(&b.to_dense()),
            || format!("dense mul {a} {b}"),
        );
        r.check(
            a.add(&b).to_dense() == a.to_dense().add(&b.to_dense()),
            || format!("dense add {a} {b}"),
        );

        let vars = ["x", "y", "z"];
        let mut mono = || {
            let mut powers = Vec::new();
            for v in vars {
                if rng.random_bool(0.7) {
                    powers.push((v.to_string(), rng.random_range(0..=4)));
                }
            }
            Monomial::from_powers(powers)
        };
        let (m1, m2) = (mono(), mono());
        let env: BTreeMap<String, Rational> = vars
            .iter()
            .map(|v| (v.to_string(), Rational::random(rng)))
            .collect();
        use crate::monoid::Monoid;
        let lhs = m1.combine(&m2).eval(&env);
        let rhs = m1.eval(&env).and_then(|a| Ok(a.mul(&m2.eval(&env)?)));
        r.check(lhs == rhs, || format!("pows {m1:?} {m2:?}"));
        r.check(
            Monomial::identity().eval(&env) == Ok(Rational::one()),
            || "x^^0".into(),
        );
    }
    r
}

fn series_suite(_: &mut TestRng, _: usize) -> SuiteReport {
    let mut r = SuiteReport::new("series");
    let ode = ode_series::<Rational>();
    let n = 16;
    let get = |s: &crate::poly::Series<Rational>, k: usize| s.take(k).unwrap_or_default();
    let (sin, cos, exp) = (get(&ode.sin, n), get(&ode.cos, n), get(&ode.exp, n));
    r.cases = n;
    let mut fact = Rational::one();
    for k in 0..14usize {
        if k > 0 {
            fact = fact.mul(&Rational::from_integer(k as i64));
        }
        let inv = fact.recip().unwrap_or_else(Rational::zero);
        let sign = |m: usize| {
            if m.is_multiple_of(2) {
                inv.clone()
            } else {
                inv.neg()
            }
        };
        let want_sin = if k % 2 == 1 {
            sign(k / 2)
        } else {
            Rational::zero()
        };
        let want_cos = if k % 2 == 0 {
            sign(k / 2)
        } else {
            Rational::zero()
        };
        r.check(sin.get(k) == Some(&want_sin), || format!("sin[{k}]"));
        r.check(cos.get(k) == Some(&want_cos), || format!("cos[{k}]"));
        r.check(exp.get(k) == Some(&inv), || format!("exp[{k}]"));
    }
    let neg_sin: Vec<Rational> = sin.iter().map(Ring::neg).collect();
    r.check(get(&ode.sin.derivative(), n) == cos, || "sin' = cos".into());
    r.check(get(&ode.cos.derivative(), n) == neg_sin, || {
        "cos' = -sin".into()
    });
    r.check(get(&ode.exp.derivative(), n) == exp, || "exp' = exp".into());
    let pyth = ode.sin.mul(&ode.sin).add(&ode.cos.mul(&ode.cos));
    let mut want = vec![Rational::zero(); n];
    want[0] = Rational::one();
    r.check(get(&pyth, n) == want, || "sin^2 + cos^2".into());
    r
}

// ---------------------------------------------------------------------------
// Convolution

fn close(a: &[f64], b: &[f64], tol: f64) -> bool {
    a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).abs() <= tol)
}

fn conv1d_suite(rng: &mut TestRng, cases: usize) -> SuiteReport {
    let mut r = SuiteReport::new("conv1d");
    for _ in 0..cases {
        r.cases += 1;
        let mut sig =
            || Signal1D::from_f64(rng.random_range(-3..=3), &gen::random_samples(rng, 32));
        let (f, g, h) = (sig(), sig(), sig());
        let fg = conv1d(&f, &g);
        let gf = conv1d(&g, &f);
        r.check(
            fg.offset == gf.offset && close(&fg.to_f64(), &gf.to_f64(), 1e-9),
            || "comm".into(),
        );
        let l = conv1d(&fg, &h);
        let rr = conv1d(&f, &conv1d(&g, &h));
        r.check(
            l.offset == rr.offset && close(&l.to_f64(), &rr.to_f64(), 1e-9),
            || "assoc".into(),
        );

        let mut qsig = || {
            let n = rng.random_range(1..=8);
            Signal1D::new(
                rng.random_range(-2..=2),
                (0..n).map(|_| Rational::random(rng)).collect::<Vec<_>>(),
            )
        };
        let (a, b, c) = (qsig(), qsig(), qsig());
        let lhs = conv1d(&a, &b.add(&c));
        let rhs = conv1d(&a, &b).add(&conv1d(&a, &c));
        let lo = lhs.offset.min(rhs.offset);
        let hi = lhs.end().max(rhs.end());
        r.check((lo..hi).all(|i| lhs.at(i) == rhs.at(i)), || {
            "rational distributivity".into()
        });
    }
    r
}

fn dft_suite(rng: &mut TestRng, cases: usize) -> SuiteReport {
    let mut r = SuiteReport::new("dft");
    r.check(dft_check(&[1.0, 2.0, 3.0], &[4.0, 5.0], 8), || {
        "fixed".into()
    });
    for _ in 0..cases.min(100) {
        r.cases += 1;
        let (f, g) = (gen::random_samples(rng, 16), gen::random_samples(rng, 16));
        r.check(dft_check(&f, &g, 32), || format!("{f:?} {g:?}"));
    }
    r
}

fn conv2d_suite(rng: &mut TestRng, cases: usize) -> SuiteReport {
    let mut r = SuiteReport::new("conv2d");
    for _ in 0..cases.min(100) {
        r.cases += 1;
        let img = ImageGrid::from_fn(8, 8, |_, _| 0.0);
        let pixels: Vec<f64> = (0..64).map(|_| rng.random_range(0.0..1.0)).collect();
        let img = ImageGrid::new(8, 8, pixels).unwrap_or(img);
        let taps: Vec<f64> = (0..9).map(|_| rng.random_range(-1.0..1.0)).collect();
        let k = Kernel::from_rows(&[&taps[0..3], &taps[3..6], &taps[6..9]]);
        let ok = match k {
            Ok(k) => match (conv2d(&img, &k), conv2d_nested(&img, &k)) {
                (Ok(a), Ok(b)) => a.max_abs_diff(&b).is_some_and(|d| d <= 1e-12),
                _ => false,
            },
            Err(_) => false,
        };
        r.check(ok, || format!("kernel {taps:?}"));
    }
    r
}

fn image_suite(_: &mut TestRng, _: usize) -> SuiteReport {
    let mut r = SuiteReport::new("image");
    r.cases = 3;
    let img = ImageGrid::from_fn(9, 7, |x, y| ((x * 31 + y * 17) % 256) as f64 / 255.0);
    let bytes = write_pgm(&img);
    let identity = read_pgm(&bytes)
        .and_then(|i| conv2d(&i, &StandardKernel::Identity.kernel()))
        .map(|o| write_pgm(&o));
    r.check(identity.ok().as_deref() == Some(&bytes[..]), || {
        "identity round trip".into()
    });
    let blurred = conv2d(
        &ImageGrid::constant(5, 5, 1.0),
        &StandardKernel::Blur.kernel(),
    );
    r.check(blurred.is_ok_and(|b| to_byte(b.get(0, 0)) == 113), || {
        "blur corner".into()
    });
    let edged = conv2d(
        &ImageGrid::constant(6, 6, 0.4),
        &StandardKernel::Edge.kernel(),
    );
    r.check(
        edged.is_ok_and(|e| (1..5).all(|y| (1..5).all(|x| e.get(x, y).abs() < 1e-12))),
        || "edge interior".into(),
    );
    r
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_suites_pass_at_small_scale() {
        let cfg = SelftestConfig {
            seed: 11,
            cases: 20,
        };
        for report in run(cfg, Exec::Parallel, &[]) {
            assert!(report.passed(), "{report}\n{:#?}", report.failures);
            assert!(report.checks > 0, "{report}");
        }
    }

    #[test]
    fn seeds_are_reproducible_and_order_independent() {
        let cfg = SelftestConfig { seed: 3, cases: 10 };
        let all = run(cfg, Exec::Sequential, &[]);
        let one = run_suite("splits-oracle", cfg).unwrap();
        let same = all.iter().find(|s| s.name == "splits-oracle").unwrap();
        assert_eq!((one.cases, one.checks), (same.cases, same.checks));
    }

    #[test]
    fn oracles() {
        assert!(is_anbn(&[]) && is_anbn(&['a', 'b']) && !is_anbn(&['b', 'a']));
        assert!(is_balanced(&['[', '[', ']', ']']) && !is_balanced(&[']', '[']));
    }
}
