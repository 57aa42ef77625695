//! The example languages and their canonical matching inputs.

use crate::algebra::{sum, Semiring};

use super::{smart_add, smart_mul, RegExp};

/// The six named example languages.
pub struct Examples<B> {
    pub a: RegExp<B>,
    pub b: RegExp<B>,
    /// Any single lowercase ASCII letter.
    pub atoz: RegExp<B>,
    /// Words containing `fish`, weighted by the number of occurrences.
    pub fishy: RegExp<B>,
    /// `{ a^n b^n }`, built as `anbn = 1 + a * anbn * b`.
    pub anbn: RegExp<B>,
    /// Balanced brackets, built as `dyck = ('[' * dyck * ']')*`.
    pub dyck: RegExp<B>,
}

pub fn mk_examples<B: Semiring + Send + Sync + 'static>() -> Examples<B> {
    let a = RegExp::<B>::single("a");
    let b = RegExp::<B>::single("b");
    let atoz = sum(('a'..='z').map(RegExp::<B>::symbol));
    let star_atoz = RegExp::star(atoz.clone());
    let fishy = smart_mul(&smart_mul(&star_atoz, &RegExp::single("fish")), &star_atoz);

    let (a2, b2) = (a.clone(), b.clone());
    let anbn = RegExp::recursive("anbn", move |this| {
        smart_add(&RegExp::one(), &smart_mul(&smart_mul(&a2, this), &b2))
    });
    let dyck = RegExp::recursive("dyck", |this| {
        RegExp::star(smart_mul(
            &smart_mul(&RegExp::single("["), this),
            &RegExp::single("]"),
        ))
    });
    Examples {
        a,
        b,
        atoz,
        fishy,
        anbn,
        dyck,
    }
}

/// A named language used by the benchmark harness.
pub struct Fixture<B> {
    pub name: &'static str,
    pub expr: RegExp<B>,
}

pub type FixtureSet<B> = Vec<Fixture<B>>;

/// Names accepted by [`bench_fixtures`] and [`canonical_input`].
pub const FIXTURE_NAMES: [&str; 8] = [
    "star_a",
    "star_atoz",
    "star_a_star_a",
    "star_a_star_b",
    "star_a_b_star_a",
    "fishy",
    "anbn",
    "dyck",
];

/// The benchmark languages, in table order.
pub fn bench_fixtures<B: Semiring + Send + Sync + 'static>() -> FixtureSet<B> {
    let ex = mk_examples::<B>();
    let star_a = RegExp::star(ex.a.clone());
    let star_b = RegExp::star(ex.b.clone());
    vec![
        Fixture {
            name: "star_a",
            expr: star_a.clone(),
        },
        Fixture {
            name: "star_atoz",
            expr: RegExp::star(ex.atoz.clone()),
        },
        Fixture {
            name: "star_a_star_a",
            expr: smart_mul(&star_a, &star_a),
        },
        Fixture {
            name: "star_a_star_b",
            expr: smart_mul(&star_a, &star_b),
        },
        Fixture {
            name: "star_a_b_star_a",
            expr: smart_mul(&smart_mul(&star_a, &ex.b), &star_a),
        },
        Fixture {
            name: "fishy",
            expr: ex.fishy,
        },
        Fixture {
            name: "anbn",
            expr: ex.anbn,
        },
        Fixture {
            name: "dyck",
            expr: ex.dyck,
        },
    ]
}

/// Canonical length-`n` input for a fixture.
///
/// | fixture | input |
/// |---|---|
/// | `star_a`, `star_a_star_a` | `a^n` |
/// | `star_atoz` | `abc...z` repeated, cut to `n` |
/// | `star_a_star_b`, `anbn` | `a^⌈n/2⌉ b^⌊n/2⌋` |
/// | `star_a_b_star_a` | `a^k b a^(n-1-k)`, `k = ⌊(n-1)/2⌋` |
/// | `fishy` | `a^k fish a^(n-4-k)`, `k = ⌊(n-4)/2⌋` |
/// | `dyck` | `[^⌈n/2⌉ ]^⌊n/2⌋` |
///
/// Every input is the empty word at `n = 0`. For odd `n` the `anbn` and
/// `dyck` inputs do not match, and `fishy` (`n < 4`) and `star_a_b_star_a`
/// (`n = 0`) have no matching input of that length.
pub fn canonical_input(name: &str, n: usize) -> Option<String> {
    let rep = |c: &str, k: usize| c.repeat(k);
    let half_up = n.div_ceil(2);
    let half_down = n / 2;
    let s = match name {
        "star_a" | "star_a_star_a" => rep("a", n),
        "star_atoz" => ('a'..='z').cycle().take(n).collect(),
        "star_a_star_b" | "anbn" => format!("{}{}", rep("a", half_up), rep("b", half_down)),
        "star_a_b_star_a" => {
            if n == 0 {
                String::new()
            } else {
                let k = (n - 1) / 2;
                format!("{}b{}", rep("a", k), rep("a", n - 1 - k))
            }
        }
        "fishy" => {
            if n < 4 {
                rep("a", n)
            } else {
                let k = (n - 4) / 2;
                format!("{}fish{}", rep("a", k), rep("a", n - 4 - k))
            }
        }
        "dyck" => format!("{}{}", rep("[", half_up), rep("]", half_down)),
        _ => return None,
    };
    Some(s)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inputs_have_requested_length() {
        for name in FIXTURE_NAMES {
            for n in [0, 1, 5, 100] {
                assert_eq!(
                    canonical_input(name, n).unwrap().chars().count(),
                    n,
                    "{name} {n}"
                );
            }
        }
        assert!(canonical_input("nope", 3).is_none());
    }

    #[test]
    fn fixture_table_matches_names() {
        let names: Vec<_> = bench_fixtures::<crate::algebra::BoolRing>()
            .iter()
            .map(|f| f.name)
            .collect();
        assert_eq!(names, FIXTURE_NAMES);
    }
}
