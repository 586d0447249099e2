//! Exhaustive law checking with per-law reporting.

use std::fmt;

use crate::error::Result;
use crate::quantale::{FiniteQuantale, Quantale, TNormQuantale};
use crate::tnorm::TNormKind;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LawEntry {
    pub law: String,
    pub passed: bool,
    /// First failing case, rendered for humans.
    pub counterexample: Option<String>,
    /// Number of cases examined.
    pub cases: usize,
}

/// One entry per law, in the order the laws were checked.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LawReport {
    pub entries: Vec<LawEntry>,
}

impl LawReport {
    pub fn new() -> Self {
        Self::default()
    }

    /// Evaluates `holds` on every case and keeps the first failure.
    pub fn check<T>(
        &mut self,
        law: &str,
        cases: impl IntoIterator<Item = T>,
        holds: impl Fn(&T) -> bool,
        show: impl Fn(&T) -> String,
    ) {
        let mut count = 0;
        let mut counterexample = None;
        for case in cases {
            count += 1;
            if !holds(&case) {
                counterexample = Some(show(&case));
                break;
            }
        }
        self.record(law, counterexample, count);
    }

    pub fn record(&mut self, law: &str, counterexample: Option<String>, cases: usize) {
        self.entries.push(LawEntry {
            law: law.to_string(),
            passed: counterexample.is_none(),
            counterexample,
            cases,
        });
    }

    pub fn all_pass(&self) -> bool {
        self.entries.iter().all(|e| e.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &LawEntry> {
        self.entries.iter().filter(|e| !e.passed)
    }

    pub fn failure_count(&self) -> usize {
        self.failures().count()
    }

    pub fn get(&self, law: &str) -> Option<&LawEntry> {
        self.entries.iter().find(|e| e.law == law)
    }

    /// Appends another report, prefixing its law names.
    pub fn absorb(&mut self, prefix: &str, other: LawReport) {
        for mut e in other.entries {
            if !prefix.is_empty() {
                e.law = format!("{prefix}: {}", e.law);
            }
            self.entries.push(e);
        }
    }
}

impl fmt::Display for LawReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for e in &self.entries {
            match &e.counterexample {
                None => writeln!(f, "PASS {} ({} cases)", e.law, e.cases)?,
                Some(c) => writeln!(f, "FAIL {}: {}", e.law, c)?,
            }
        }
        write!(
            f,
            "{} laws, {} failures",
            self.entries.len(),
            self.failure_count()
        )
    }
}

fn pairs(n: usize) -> impl Iterator<Item = (usize, usize)> {
    (0..n).flat_map(move |i| (0..n).map(move |j| (i, j)))
}

fn triples(n: usize) -> impl Iterator<Item = (usize, usize, usize)> {
    (0..n).flat_map(move |i| (0..n).flat_map(move |j| (0..n).map(move |k| (i, j, k))))
}

type Cases<T> = Box<dyn Fn() -> Box<dyn Iterator<Item = T>>>;

/// Checks Q1–Q3, the residual adjunction and the residual arithmetic on
/// every tuple drawn from `carrier`.
pub fn check_quantale_laws_on<Q: Quantale>(q: &Q, carrier: &[Q::Elem]) -> LawReport {
    let n = carrier.len();
    run_quantale_laws(
        q,
        carrier,
        Box::new(move || Box::new(0..n)),
        Box::new(move || Box::new(pairs(n))),
        Box::new(move || Box::new(triples(n))),
    )
}

/// Checks the same laws on sampled triples only: unary laws on every sampled
/// element, binary laws on `(x, y)` and ternary laws on `(x, y, z)` of each
/// triple.
pub fn check_quantale_laws_sampled<Q: Quantale>(
    q: &Q,
    samples: &[(Q::Elem, Q::Elem, Q::Elem)],
) -> LawReport {
    let carrier: Vec<Q::Elem> = samples
        .iter()
        .flat_map(|(x, y, z)| [x.clone(), y.clone(), z.clone()])
        .collect();
    let t = samples.len();
    run_quantale_laws(
        q,
        &carrier,
        Box::new(move || Box::new(0..3 * t)),
        Box::new(move || Box::new((0..t).map(|i| (3 * i, 3 * i + 1)))),
        Box::new(move || Box::new((0..t).map(|i| (3 * i, 3 * i + 1, 3 * i + 2)))),
    )
}

fn run_quantale_laws<Q: Quantale>(
    q: &Q,
    c: &[Q::Elem],
    ones: Cases<usize>,
    twos: Cases<(usize, usize)>,
    threes: Cases<(usize, usize, usize)>,
) -> LawReport {
    let (bot, top, e) = (q.bottom(), q.top(), q.unit());
    let eq = |a: &Q::Elem, b: &Q::Elem| a == b;
    let s1 = |&i: &usize| format!("x={}", q.show(&c[i]));
    let s2 = |&(i, j): &(usize, usize)| format!("x={}, y={}", q.show(&c[i]), q.show(&c[j]));
    let s3 = |&(i, j, k): &(usize, usize, usize)| {
        format!(
            "x={}, y={}, z={}",
            q.show(&c[i]),
            q.show(&c[j]),
            q.show(&c[k])
        )
    };
    let mut r = LawReport::new();

    r.check("Q1 join idempotence", ones(), |&i| eq(&q.join(&c[i], &c[i]), &c[i]), s1);
    r.check("Q1 bottom neutral", ones(), |&i| eq(&q.join(&bot, &c[i]), &c[i]), s1);
    r.check(
        "Q1 join commutativity",
        twos(),
        |&(i, j)| eq(&q.join(&c[i], &c[j]), &q.join(&c[j], &c[i])),
        s2,
    );
    r.check(
        "Q1 join associativity",
        threes(),
        |&(i, j, k)| {
            eq(
                &q.join(&q.join(&c[i], &c[j]), &c[k]),
                &q.join(&c[i], &q.join(&c[j], &c[k])),
            )
        },
        s3,
    );
    r.check(
        "Q2 product associativity",
        threes(),
        |&(i, j, k)| {
            eq(
                &q.mul(&q.mul(&c[i], &c[j]), &c[k]),
                &q.mul(&c[i], &q.mul(&c[j], &c[k])),
            )
        },
        s3,
    );
    r.check(
        "Q2 unit",
        ones(),
        |&i| eq(&q.mul(&e, &c[i]), &c[i]) && eq(&q.mul(&c[i], &e), &c[i]),
        s1,
    );
    r.check(
        "Q3 left distributivity",
        threes(),
        |&(i, j, k)| {
            eq(
                &q.mul(&c[i], &q.join(&c[j], &c[k])),
                &q.join(&q.mul(&c[i], &c[j]), &q.mul(&c[i], &c[k])),
            )
        },
        s3,
    );
    r.check(
        "Q3 right distributivity",
        threes(),
        |&(i, j, k)| {
            eq(
                &q.mul(&q.join(&c[j], &c[k]), &c[i]),
                &q.join(&q.mul(&c[j], &c[i]), &q.mul(&c[k], &c[i])),
            )
        },
        s3,
    );
    r.check(
        "residual adjunction",
        threes(),
        |&(i, j, k)| {
            let (x, y, z) = (&c[i], &c[j], &c[k]);
            let a = q.leq(&q.mul(x, y), z);
            a == q.leq(y, &q.under(x, z)) && a == q.leq(x, &q.over(z, y))
        },
        s3,
    );
    r.check(
        "bottom annihilates",
        ones(),
        |&i| eq(&q.mul(&c[i], &bot), &bot) && eq(&q.mul(&bot, &c[i]), &bot),
        s1,
    );
    r.check(
        "product monotone",
        threes(),
        |&(i, j, k)| {
            let (x, y, z) = (&c[i], &c[j], &c[k]);
            !q.leq(x, y) || (q.leq(&q.mul(x, z), &q.mul(y, z)) && q.leq(&q.mul(z, x), &q.mul(z, y)))
        },
        s3,
    );
    r.check(
        "residuals monotone",
        threes(),
        |&(i, j, k)| {
            let (x, y, z) = (&c[i], &c[j], &c[k]);
            !q.leq(x, y)
                || (q.leq(&q.over(x, z), &q.over(y, z))
                    && q.leq(&q.under(z, x), &q.under(z, y))
                    && q.leq(&q.over(z, y), &q.over(z, x))
                    && q.leq(&q.under(y, z), &q.under(x, z)))
        },
        s3,
    );
    r.check(
        "residual cancellation",
        twos(),
        |&(i, j)| {
            let (x, y) = (&c[i], &c[j]);
            q.leq(&q.mul(&q.over(y, x), x), y) && q.leq(&q.mul(x, &q.under(x, y)), y)
        },
        s2,
    );
    r.check(
        "unit residuals",
        ones(),
        |&i| eq(&q.over(&c[i], &e), &c[i]) && eq(&q.under(&e, &c[i]), &c[i]),
        s1,
    );
    r.check(
        "joins in the denominator",
        threes(),
        |&(i, j, k)| {
            let (x, y, z) = (&c[i], &c[j], &c[k]);
            let yz = q.join(y, z);
            eq(&q.over(x, &yz), &q.meet(&q.over(x, y), &q.over(x, z)))
                && eq(&q.under(&yz, x), &q.meet(&q.under(y, x), &q.under(z, x)))
        },
        s3,
    );
    r.check(
        "empty join in the denominator",
        ones(),
        |&i| eq(&q.over(&c[i], &bot), &top) && eq(&q.under(&bot, &c[i]), &top),
        s1,
    );
    r.check(
        "meets in the numerator",
        threes(),
        |&(i, j, k)| {
            let (x, y, z) = (&c[i], &c[j], &c[k]);
            let yz = q.meet(y, z);
            eq(&q.over(&yz, x), &q.meet(&q.over(y, x), &q.over(z, x)))
                && eq(&q.under(x, &yz), &q.meet(&q.under(x, y), &q.under(x, z)))
        },
        s3,
    );
    r.check(
        "empty meet in the numerator",
        ones(),
        |&i| eq(&q.over(&top, &c[i]), &top) && eq(&q.under(&c[i], &top), &top),
        s1,
    );
    r.check(
        "iterated residuals",
        threes(),
        |&(i, j, k)| {
            let (x, y, z) = (&c[i], &c[j], &c[k]);
            let xy = q.mul(x, y);
            eq(&q.under(y, &q.under(x, z)), &q.under(&xy, z))
                && eq(&q.over(&q.over(z, y), x), &q.over(z, &xy))
        },
        s3,
    );
    r
}

/// Law check over the whole carrier of a finite quantale.
pub fn check_quantale_laws(q: &FiniteQuantale) -> LawReport {
    let carrier: Vec<usize> = (0..q.size()).collect();
    check_quantale_laws_on(q, &carrier)
}

/// Law check for a t-norm quantale on the grid `{k/den}`.
///
/// Exact kinds are tabulated first (every entry computed exactly from the
/// t-norm and residuum formulas) and checked on the tables; float kinds are
/// checked directly with tolerant comparisons.
pub fn check_tnorm_laws(kind: TNormKind, den: u64) -> Result<LawReport> {
    if kind.validate()?.supports_exact() {
        let q = FiniteQuantale::tabulate_tnorm(kind, den)?;
        Ok(check_quantale_laws(&q))
    } else {
        let q = TNormQuantale::float(kind)?;
        Ok(check_quantale_laws_on(&q, &q.grid(den)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn l4_passes() {
        let q = FiniteQuantale::lukasiewicz_chain(4).unwrap();
        let r = check_quantale_laws(&q);
        assert!(r.all_pass(), "{r}");
    }

    #[test]
    fn nonassociative_table_reports_q2() {
        let join = (0..16).map(|i| (i / 4).max(i % 4)).collect::<Vec<_>>();
        let bad = vec![0, 0, 0, 0, 0, 0, 1, 1, 0, 1, 1, 2, 0, 1, 2, 3];
        let q = FiniteQuantale::from_tables_unchecked(4, join, bad, 3, 0).unwrap();
        let r = check_quantale_laws(&q);
        let entry = r.get("Q2 product associativity").unwrap();
        assert!(!entry.passed);
        assert!(entry.counterexample.as_ref().unwrap().starts_with("x="));
        assert!(r.get("Q2 unit").unwrap().passed);
    }

    #[test]
    fn float_kinds_pass_on_coarse_grid() {
        for kind in [TNormKind::Product, TNormKind::GeneralizedLukasiewicz(2)] {
            let r = check_tnorm_laws(kind, 10).unwrap();
            assert!(r.all_pass(), "{kind}: {r}");
        }
    }

    #[test]
    fn report_display_counts_failures() {
        let mut r = LawReport::new();
        r.record("a", None, 3);
        r.record("b", Some("x=1".into()), 1);
        let s = r.to_string();
        assert!(s.contains("PASS a"));
        assert!(s.contains("FAIL b: x=1"));
        assert!(s.ends_with("2 laws, 1 failures"));
    }
}
