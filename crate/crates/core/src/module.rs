//! Table-defined modules over finite quantales: residuals, submodules,
//! ideals and their congruences, nuclei and quotients.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::laws::LawReport;
use crate::quantale::{content_lines, parse_header, parse_row, take_rows, FiniteLattice, FiniteQuantale};

/// A left `Q`-module on `0..m` with action `q ⋆ x`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteModule {
    q: Arc<FiniteQuantale>,
    lattice: FiniteLattice,
    /// `action[a*m + x] = a ⋆ x`
    action: Vec<usize>,
    /// `under[a*m + x] = a ⋆\ x = ⋁{n | a ⋆ n ≤ x}`
    under: Vec<usize>,
    /// `over[x*m + y] = x ⋆/ y = ⋁{a | a ⋆ y ≤ x}`, an element of `Q`
    over: Vec<usize>,
}

impl FiniteModule {
    /// Validates the lattice and M1–M3, then derives both residuals.
    pub fn new(q: Arc<FiniteQuantale>, join: Vec<usize>, bottom: usize, action: Vec<usize>) -> Result<Self> {
        let m = Self::from_tables_unchecked(q, join, bottom, action)?;
        let report = check_module_laws(&m);
        if let Some(f) = report.failures().next() {
            return Err(Error::InvalidAlgebra(format!(
                "{} fails at {}",
                f.law,
                f.counterexample.as_deref().unwrap_or("?")
            )));
        }
        Ok(m)
    }

    /// Builds the tables with only shape checks.
    pub fn from_tables_unchecked(
        q: Arc<FiniteQuantale>,
        join: Vec<usize>,
        bottom: usize,
        action: Vec<usize>,
    ) -> Result<Self> {
        let n = (join.len() as f64).sqrt().round() as usize;
        let lattice = FiniteLattice::from_join_unchecked(n, join, bottom)?;
        let qs = q.size();
        if action.len() != qs * n {
            return Err(Error::IndexMismatch {
                expected: qs * n,
                found: action.len(),
            });
        }
        if let Some(&bad) = action.iter().find(|&&v| v >= n) {
            return Err(Error::IndexOut { index: bad, bound: n });
        }
        let mut under = vec![0; qs * n];
        for a in 0..qs {
            for x in 0..n {
                under[a * n + x] =
                    lattice.join_all((0..n).filter(|&y| lattice.leq(action[a * n + y], x)));
            }
        }
        let mut over = vec![0; n * n];
        for x in 0..n {
            for y in 0..n {
                over[x * n + y] = q
                    .lattice()
                    .join_all((0..qs).filter(|&a| lattice.leq(action[a * n + y], x)));
            }
        }
        Ok(FiniteModule {
            q,
            lattice,
            action,
            under,
            over,
        })
    }

    /// `Q` acting on itself by left multiplication.
    pub fn over_itself(q: Arc<FiniteQuantale>) -> Self {
        let join = q.lattice().join_table().to_vec();
        let action = q.product_table().to_vec();
        let bottom = q.bottom();
        Self::new(q, join, bottom, action).expect("a quantale is a module over itself")
    }

    pub fn quantale(&self) -> &FiniteQuantale {
        &self.q
    }
    pub fn quantale_arc(&self) -> Arc<FiniteQuantale> {
        Arc::clone(&self.q)
    }
    pub fn lattice(&self) -> &FiniteLattice {
        &self.lattice
    }
    pub fn size(&self) -> usize {
        self.lattice.size()
    }
    pub fn bottom(&self) -> usize {
        self.lattice.bottom()
    }
    pub fn top(&self) -> usize {
        self.lattice.top()
    }
    #[inline]
    pub fn join(&self, x: usize, y: usize) -> usize {
        self.lattice.join(x, y)
    }
    #[inline]
    pub fn meet(&self, x: usize, y: usize) -> usize {
        self.lattice.meet(x, y)
    }
    #[inline]
    pub fn leq(&self, x: usize, y: usize) -> bool {
        self.lattice.leq(x, y)
    }
    #[inline]
    pub fn act(&self, a: usize, x: usize) -> usize {
        self.action[a * self.size() + x]
    }
    /// `a ⋆\ x`, an element of the module.
    #[inline]
    pub fn under(&self, a: usize, x: usize) -> usize {
        self.under[a * self.size() + x]
    }
    /// `x ⋆/ y = ⋁{a ∈ Q | a ⋆ y ≤ x}`, an element of the quantale. The
    /// numerator comes first.
    #[inline]
    pub fn over(&self, x: usize, y: usize) -> usize {
        self.over[x * self.size() + y]
    }
    pub fn action_table(&self) -> &[usize] {
        &self.action
    }

    /// Text form: header, join rows, then one action row per scalar.
    pub fn to_text(&self, base: &str) -> String {
        let n = self.size();
        let mut out = format!("module {n} over {base}\n");
        for table in [self.lattice.join_table(), &self.action[..]] {
            for row in table.chunks(n) {
                let row: Vec<String> = row.iter().map(|v| v.to_string()).collect();
                out.push_str(&row.join(" "));
                out.push('\n');
            }
        }
        out.push_str(&format!("bottom {}\n", self.bottom()));
        out
    }
}

/// Both residual tables, as `(under, over)` with `under[a*m+x] = a ⋆\ x` and
/// `over[x*m+y] = x ⋆/ y`.
pub fn module_residuals(m: &FiniteModule) -> (Vec<usize>, Vec<usize>) {
    (m.under.clone(), m.over.clone())
}

fn range2(a: usize, b: usize) -> impl Iterator<Item = (usize, usize)> {
    (0..a).flat_map(move |i| (0..b).map(move |j| (i, j)))
}

fn range3(a: usize, b: usize, c: usize) -> impl Iterator<Item = (usize, usize, usize)> {
    (0..a).flat_map(move |i| (0..b).flat_map(move |j| (0..c).map(move |k| (i, j, k))))
}

/// Exhaustive check of the lattice, M1–M3 and the residual arithmetic of
/// modules.
pub fn check_module_laws(m: &FiniteModule) -> LawReport {
    let q = m.quantale();
    let (n, qs) = (m.size(), q.size());
    let (bot, top, e) = (m.bottom(), m.top(), q.unit());
    let mut r = LawReport::new();
    let s_x = |&x: &usize| format!("x={x}");
    let s_xy = |&(x, y): &(usize, usize)| format!("x={x}, y={y}");
    let s_xyz = |&(x, y, z): &(usize, usize, usize)| format!("x={x}, y={y}, z={z}");
    let s_ax = |&(a, x): &(usize, usize)| format!("q={a}, x={x}");
    let s_abx = |&(a, b, x): &(usize, usize, usize)| format!("q={a}, r={b}, x={x}");
    let s_axy = |&(a, x, y): &(usize, usize, usize)| format!("q={a}, x={x}, y={y}");

    r.check("join idempotence", 0..n, |&x| m.join(x, x) == x, s_x);
    r.check("bottom neutral", 0..n, |&x| m.join(bot, x) == x, s_x);
    r.check("join commutativity", range2(n, n), |&(x, y)| m.join(x, y) == m.join(y, x), s_xy);
    r.check(
        "join associativity",
        range3(n, n, n),
        |&(x, y, z)| m.join(m.join(x, y), z) == m.join(x, m.join(y, z)),
        s_xyz,
    );
    r.check(
        "M1 action associativity",
        range3(qs, qs, n),
        |&(a, b, x)| m.act(q.mul(a, b), x) == m.act(a, m.act(b, x)),
        s_abx,
    );
    r.check(
        "M2 distributivity over module joins",
        range3(qs, n, n),
        |&(a, x, y)| m.act(a, m.join(x, y)) == m.join(m.act(a, x), m.act(a, y)) && m.act(a, bot) == bot,
        s_axy,
    );
    r.check(
        "M2 distributivity over scalar joins",
        range3(qs, qs, n),
        |&(a, b, x)| {
            m.act(q.join(a, b), x) == m.join(m.act(a, x), m.act(b, x)) && m.act(q.bottom(), x) == bot
        },
        s_abx,
    );
    r.check("M3 unit", 0..n, |&x| m.act(e, x) == x, s_x);
    r.check(
        "action monotone in the module",
        range3(qs, n, n),
        |&(a, x, y)| !m.leq(x, y) || m.leq(m.act(a, x), m.act(a, y)),
        s_axy,
    );
    r.check(
        "action monotone in the scalars",
        range3(qs, qs, n),
        |&(a, b, x)| !q.leq(a, b) || m.leq(m.act(a, x), m.act(b, x)),
        s_abx,
    );
    r.check(
        "under preserves meets in the numerator",
        range3(qs, n, n),
        |&(a, x, y)| {
            m.under(a, m.meet(x, y)) == m.meet(m.under(a, x), m.under(a, y)) && m.under(a, top) == top
        },
        s_axy,
    );
    r.check(
        "over preserves meets in the numerator",
        range3(n, n, n),
        |&(x, y, z)| {
            m.over(m.meet(x, y), z) == q.meet(m.over(x, z), m.over(y, z)) && m.over(top, z) == q.top()
        },
        s_xyz,
    );
    r.check(
        "under turns joins in the denominator into meets",
        range3(qs, qs, n),
        |&(a, b, x)| {
            m.under(q.join(a, b), x) == m.meet(m.under(a, x), m.under(b, x))
                && m.under(q.bottom(), x) == top
        },
        s_abx,
    );
    r.check(
        "over turns joins in the denominator into meets",
        range3(n, n, n),
        |&(x, y, z)| {
            m.over(x, m.join(y, z)) == q.meet(m.over(x, y), m.over(x, z)) && m.over(x, bot) == q.top()
        },
        s_xyz,
    );
    r.check(
        "over cancellation",
        range2(n, n),
        |&(x, y)| m.leq(m.act(m.over(x, y), y), x),
        s_xy,
    );
    r.check(
        "under cancellation",
        range2(qs, n),
        |&(a, x)| m.leq(m.act(a, m.under(a, x)), x),
        s_ax,
    );
    r.check(
        "under inflation",
        range2(qs, n),
        |&(a, x)| m.leq(x, m.under(a, m.act(a, x))),
        s_ax,
    );
    r.check(
        "mixed residuals",
        range3(qs, n, n),
        |&(a, x, y)| m.over(m.under(a, x), y) == q.left_residual(a, m.over(x, y)),
        s_axy,
    );
    r.check(
        "over is stable",
        range2(n, n),
        |&(x, y)| {
            let o = m.over(x, y);
            m.over(m.act(o, y), y) == o
        },
        s_xy,
    );
    r.check("unit below self-quotient", 0..n, |&x| q.leq(e, m.over(x, x)), s_x);
    r.check(
        "self-quotient reproduces",
        0..n,
        |&x| m.act(m.over(x, x), x) == x,
        s_x,
    );
    r
}

// ---------------------------------------------------------------------------
// submodules and ideals

/// The least submodule containing `s`, as a sorted element list.
pub fn submodule_generated(m: &FiniteModule, s: &[usize]) -> Vec<usize> {
    let n = m.size();
    let mut inside = vec![false; n];
    inside[m.bottom()] = true;
    let mut frontier: Vec<usize> = vec![m.bottom()];
    for &x in s {
        if x < n && !inside[x] {
            inside[x] = true;
            frontier.push(x);
        }
    }
    while let Some(x) = frontier.pop() {
        let mut fresh = Vec::new();
        for a in 0..m.quantale().size() {
            fresh.push(m.act(a, x));
        }
        for y in (0..n).filter(|&y| inside[y]) {
            fresh.push(m.join(x, y));
        }
        for z in fresh {
            if !inside[z] {
                inside[z] = true;
                frontier.push(z);
            }
        }
    }
    (0..n).filter(|&x| inside[x]).collect()
}

/// Whether `v` generates the module: `(x ⋆/ v) ⋆ v = x` for every `x`.
pub fn cyclic_generator_check(m: &FiniteModule, v: usize) -> bool {
    (0..m.size()).all(|x| m.act(m.over(x, v), v) == x)
}

/// Elements `x` with `⊤ ⋆ x = x`; each one is the top of the ideal `[⊥, x]`.
pub fn ideal_elements(m: &FiniteModule) -> Vec<usize> {
    let t = m.quantale().top();
    (0..m.size()).filter(|&x| m.act(t, x) == x).collect()
}

/// Top of the ideal generated by `s`: `⊤ ⋆ ⋁s`.
pub fn ideal_closure(m: &FiniteModule, s: &[usize]) -> usize {
    let j = m.lattice().join_all(s.iter().copied());
    m.act(m.quantale().top(), j)
}

/// Membership mask of the interval `[⊥, x]`.
pub fn principal_ideal(m: &FiniteModule, x: usize) -> Vec<bool> {
    (0..m.size()).map(|y| m.leq(y, x)).collect()
}

/// Whether a subset is an ideal: closed under joins (including the empty
/// one), downward closed and closed under the action.
pub fn is_ideal(m: &FiniteModule, set: &[bool]) -> bool {
    let n = m.size();
    set.len() == n
        && set[m.bottom()]
        && (0..n).filter(|&x| set[x]).all(|x| {
            (0..n).all(|y| !set[y] || set[m.join(x, y)])
                && (0..n).all(|y| !m.leq(y, x) || set[y])
                && (0..m.quantale().size()).all(|a| set[m.act(a, x)])
        })
}

/// `q_x = ⋁{q | q ⋆ x ∈ [⊥, i]} = i ⋆/ x`.
pub fn ideal_quotient(m: &FiniteModule, ideal: usize, x: usize) -> usize {
    m.over(ideal, x)
}

// ---------------------------------------------------------------------------
// congruences

/// An equivalence relation on the carrier, stored as canonical class labels
/// (classes numbered by first occurrence).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Congruence {
    labels: Vec<usize>,
}

impl Congruence {
    pub fn from_labels(labels: &[usize]) -> Self {
        let mut map: Vec<(usize, usize)> = Vec::new();
        let mut out = Vec::with_capacity(labels.len());
        for &l in labels {
            let id = match map.iter().find(|(k, _)| *k == l) {
                Some(&(_, v)) => v,
                None => {
                    map.push((l, map.len()));
                    map.len() - 1
                }
            };
            out.push(id);
        }
        Congruence { labels: out }
    }

    pub fn from_classes(n: usize, classes: &[Vec<usize>]) -> Result<Self> {
        let mut labels = vec![usize::MAX; n];
        for (c, class) in classes.iter().enumerate() {
            for &x in class {
                if x >= n {
                    return Err(Error::IndexOut { index: x, bound: n });
                }
                if labels[x] != usize::MAX {
                    return Err(Error::InvalidParameter(format!("{x} appears in two classes")));
                }
                labels[x] = c;
            }
        }
        if let Some(x) = labels.iter().position(|&l| l == usize::MAX) {
            return Err(Error::InvalidParameter(format!("{x} belongs to no class")));
        }
        Ok(Self::from_labels(&labels))
    }

    pub fn identity(n: usize) -> Self {
        Congruence {
            labels: (0..n).collect(),
        }
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn related(&self, x: usize, y: usize) -> bool {
        self.labels[x] == self.labels[y]
    }

    pub fn classes(&self) -> Vec<Vec<usize>> {
        let k = self.labels.iter().max().map_or(0, |&l| l + 1);
        let mut out = vec![Vec::new(); k];
        for (x, &l) in self.labels.iter().enumerate() {
            out[l].push(x);
        }
        out
    }

    pub fn class_of(&self, x: usize) -> Vec<usize> {
        (0..self.labels.len()).filter(|&y| self.related(x, y)).collect()
    }

    /// `self ⊆ other` as relations.
    pub fn refines(&self, other: &Congruence) -> bool {
        let n = self.labels.len();
        (0..n).all(|x| (0..n).all(|y| !self.related(x, y) || other.related(x, y)))
    }

    /// Compatibility with joins and with every scalar section.
    pub fn is_congruence_of(&self, m: &FiniteModule) -> bool {
        let n = m.size();
        if self.labels.len() != n {
            return false;
        }
        for x in 0..n {
            for y in (x + 1..n).filter(|&y| self.related(x, y)) {
                if (0..n).any(|z| !self.related(m.join(x, z), m.join(y, z))) {
                    return false;
                }
                if (0..m.quantale().size()).any(|a| !self.related(m.act(a, x), m.act(a, y))) {
                    return false;
                }
            }
        }
        true
    }
}

/// `x ~_I y` iff `q_x = q_y` for the ideal `[⊥, ideal]`.
pub fn congruence_of_ideal(m: &FiniteModule, ideal: usize) -> Result<Congruence> {
    if ideal >= m.size() {
        return Err(Error::IndexOut {
            index: ideal,
            bound: m.size(),
        });
    }
    if m.act(m.quantale().top(), ideal) != ideal {
        return Err(Error::InvalidParameter(format!("{ideal} is not an ideal element")));
    }
    let labels: Vec<usize> = (0..m.size()).map(|x| m.over(ideal, x)).collect();
    Ok(Congruence::from_labels(&labels))
}

/// Largest carrier for which congruences are enumerated.
pub const CONGRUENCE_ENUMERATION_BOUND: usize = 6;

/// All set partitions of `0..n`, as restricted growth strings.
pub fn set_partitions(n: usize) -> Vec<Vec<usize>> {
    fn rec(i: usize, n: usize, cur: &mut Vec<usize>, max: usize, out: &mut Vec<Vec<usize>>) {
        if i == n {
            out.push(cur.clone());
            return;
        }
        for l in 0..=max.min(i) {
            cur.push(l);
            let next = if l == max { max + 1 } else { max };
            rec(i + 1, n, cur, next, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if n == 0 {
        out.push(Vec::new());
    } else {
        rec(0, n, &mut Vec::new(), 0, &mut out);
    }
    out
}

/// Every congruence of a small module.
pub fn enumerate_congruences(m: &FiniteModule) -> Result<Vec<Congruence>> {
    if m.size() > CONGRUENCE_ENUMERATION_BOUND {
        return Err(Error::SizeBound(format!(
            "congruence enumeration is limited to {CONGRUENCE_ENUMERATION_BOUND} elements"
        )));
    }
    Ok(set_partitions(m.size())
        .into_iter()
        .map(|p| Congruence::from_labels(&p))
        .filter(|c| c.is_congruence_of(m))
        .collect())
}

/// Certifies that `~_I` is the largest congruence whose class of `⊥` is
/// `[⊥, ideal]`, by enumerating all congruences.
pub fn verify_ideal_congruence_maximal(m: &FiniteModule, ideal: usize) -> Result<bool> {
    let target = congruence_of_ideal(m, ideal)?;
    let all = enumerate_congruences(m)?;
    let interval = principal_ideal(m, ideal);
    let bottom_class_is_ideal =
        |c: &Congruence| (0..m.size()).all(|x| c.related(m.bottom(), x) == interval[x]);
    if !target.is_congruence_of(m) || !bottom_class_is_ideal(&target) {
        return Ok(false);
    }
    Ok(all
        .iter()
        .filter(|c| bottom_class_is_ideal(c))
        .all(|c| c.refines(&target)))
}

// ---------------------------------------------------------------------------
// nuclei

/// A structural closure operator, stored as a value table.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Nucleus {
    table: Vec<usize>,
}

impl Nucleus {
    pub fn new(m: &FiniteModule, table: Vec<usize>) -> Result<Self> {
        let report = nucleus_validate(m, &table);
        if let Some(f) = report.failures().next() {
            return Err(Error::InvalidNucleus(format!(
                "{} fails at {}",
                f.law,
                f.counterexample.as_deref().unwrap_or("?")
            )));
        }
        Ok(Nucleus { table })
    }

    pub fn identity(m: &FiniteModule) -> Self {
        Nucleus {
            table: (0..m.size()).collect(),
        }
    }

    pub fn constant_top(m: &FiniteModule) -> Self {
        Nucleus {
            table: vec![m.top(); m.size()],
        }
    }

    #[inline]
    pub fn apply(&self, x: usize) -> usize {
        self.table[x]
    }

    pub fn table(&self) -> &[usize] {
        &self.table
    }

    pub fn fixed_points(&self) -> Vec<usize> {
        (0..self.table.len()).filter(|&x| self.table[x] == x).collect()
    }
}

fn closure_report(lat: &FiniteLattice, g: &[usize], r: &mut LawReport) {
    let n = lat.size();
    let s_x = |&x: &usize| format!("x={x}");
    r.check("extensive", 0..n, |&x| lat.leq(x, g[x]), s_x);
    r.check(
        "monotone",
        range2(n, n),
        |&(x, y)| !lat.leq(x, y) || lat.leq(g[x], g[y]),
        |&(x, y)| format!("x={x}, y={y}"),
    );
    r.check("idempotent", 0..n, |&x| g[g[x]] == g[x], s_x);
}

/// Closure-operator laws, structurality, and the four equivalent forms of
/// structurality (which must agree whenever `γ` is a closure operator).
pub fn nucleus_validate(m: &FiniteModule, g: &[usize]) -> LawReport {
    let mut r = LawReport::new();
    let n = m.size();
    let qs = m.quantale().size();
    if g.len() != n || g.iter().any(|&v| v >= n) {
        r.record(
            "total on carrier",
            Some(format!("table of length {} over {} elements", g.len(), n)),
            1,
        );
        return r;
    }
    r.record("total on carrier", None, n);
    closure_report(m.lattice(), g, &mut r);
    let closure = r.all_pass();
    let s_ax = |&(a, x): &(usize, usize)| format!("q={a}, x={x}");
    let s_xy = |&(x, y): &(usize, usize)| format!("x={x}, y={y}");

    let structural = |&(a, x): &(usize, usize)| m.leq(m.act(a, g[x]), g[m.act(a, x)]);
    let absorbs = |&(a, x): &(usize, usize)| g[m.act(a, g[x])] == g[m.act(a, x)];
    let denominators = |&(x, y): &(usize, usize)| m.over(g[x], y) == m.over(g[x], g[y]);
    let under_below = |&(a, x): &(usize, usize)| m.leq(g[m.under(a, x)], m.under(a, g[x]));
    let under_closed = |&(a, x): &(usize, usize)| {
        let u = m.under(a, g[x]);
        g[u] == u
    };
    r.check("structural", range2(qs, n), structural, s_ax);
    r.check("closure absorbs inner closure", range2(qs, n), absorbs, s_ax);
    r.check("over ignores closure of the denominator", range2(n, n), denominators, s_xy);
    r.check("closure stays below under", range2(qs, n), under_below, s_ax);
    r.check("under of a closed element is closed", range2(qs, n), under_closed, s_ax);
    let verdicts = [
        range2(qs, n).all(|c| structural(&c)),
        range2(qs, n).all(|c| absorbs(&c)),
        range2(n, n).all(|c| denominators(&c)),
        range2(qs, n).all(|c| under_below(&c)),
        range2(qs, n).all(|c| under_closed(&c)),
    ];
    let agree = !closure || verdicts.iter().all(|&v| v == verdicts[0]);
    r.record(
        "structurality conditions agree",
        (!agree).then(|| format!("verdicts {verdicts:?}")),
        1,
    );
    r
}

/// The quotient `M_γ` with the projection onto it.
#[derive(Clone, Debug)]
pub struct Quotient {
    pub module: FiniteModule,
    /// `elements[i]` is the fixed point of `γ` represented by index `i`.
    pub elements: Vec<usize>,
    /// `projection[x]` is the index of `γ(x)`.
    pub projection: Vec<usize>,
}

/// Fixed points of `γ` with `γ∘∨` as join, `γ∘⋆` as action and `γ(⊥)` as
/// bottom.
pub fn quotient_module(m: &FiniteModule, g: &Nucleus) -> Result<Quotient> {
    let elements = g.fixed_points();
    let k = elements.len();
    let mut index = vec![usize::MAX; m.size()];
    for (i, &x) in elements.iter().enumerate() {
        index[x] = i;
    }
    let projection: Vec<usize> = (0..m.size()).map(|x| index[g.apply(x)]).collect();
    let mut join = vec![0; k * k];
    for (i, &x) in elements.iter().enumerate() {
        for (j, &y) in elements.iter().enumerate() {
            join[i * k + j] = projection[m.join(x, y)];
        }
    }
    let qs = m.quantale().size();
    let mut action = vec![0; qs * k];
    for a in 0..qs {
        for (i, &x) in elements.iter().enumerate() {
            action[a * k + i] = projection[m.act(a, x)];
        }
    }
    let bottom = projection[m.bottom()];
    let module = FiniteModule::new(m.quantale_arc(), join, bottom, action)?;
    Ok(Quotient {
        module,
        elements,
        projection,
    })
}

/// Checks that `f: M → N` preserves joins, bottom and the action.
pub fn check_homomorphism(m: &FiniteModule, n: &FiniteModule, f: &[usize]) -> LawReport {
    let mut r = LawReport::new();
    if f.len() != m.size() || f.iter().any(|&v| v >= n.size()) {
        r.record("total on carrier", Some(format!("map of length {}", f.len())), 1);
        return r;
    }
    let size = m.size();
    r.check(
        "preserves joins",
        range2(size, size),
        |&(x, y)| f[m.join(x, y)] == n.join(f[x], f[y]),
        |&(x, y)| format!("x={x}, y={y}"),
    );
    r.check("preserves bottom", [m.bottom()], |&b| f[b] == n.bottom(), |_| "bottom".into());
    r.check(
        "preserves the action",
        range2(m.quantale().size(), size),
        |&(a, x)| f[m.act(a, x)] == n.act(a, f[x]),
        |&(a, x)| format!("q={a}, x={x}"),
    );
    r
}

/// `f_* ∘ f` for a homomorphism `f: M → N`, where
/// `f_*(k) = ⋁{x | f(x) ≤ k}`.
pub fn nucleus_from_projection(m: &FiniteModule, n: &FiniteModule, f: &[usize]) -> Result<Nucleus> {
    let report = check_homomorphism(m, n, f);
    if let Some(e) = report.failures().next() {
        return Err(Error::NotAHomomorphism(format!(
            "{} fails at {}",
            e.law,
            e.counterexample.as_deref().unwrap_or("?")
        )));
    }
    let upper: Vec<usize> = (0..n.size())
        .map(|k| m.lattice().join_all((0..m.size()).filter(|&x| n.leq(f[x], k))))
        .collect();
    let table = (0..m.size()).map(|x| upper[f[x]]).collect();
    Nucleus::new(m, table)
}

/// The interval `[x, ⊤]` with `q ⋆' y = x ∨ q ⋆ y`; returns the module and the
/// original element behind each index.
pub fn interval_module(m: &FiniteModule, x: usize) -> Result<(FiniteModule, Vec<usize>)> {
    if x >= m.size() {
        return Err(Error::IndexOut {
            index: x,
            bound: m.size(),
        });
    }
    let elements: Vec<usize> = (0..m.size()).filter(|&y| m.leq(x, y)).collect();
    let k = elements.len();
    let pos = |y: usize| elements.iter().position(|&e| e == y).expect("interval is join-closed");
    let mut join = vec![0; k * k];
    for (i, &a) in elements.iter().enumerate() {
        for (j, &b) in elements.iter().enumerate() {
            join[i * k + j] = pos(m.join(a, b));
        }
    }
    let qs = m.quantale().size();
    let mut action = vec![0; qs * k];
    for a in 0..qs {
        for (i, &y) in elements.iter().enumerate() {
            action[a * k + i] = pos(m.join(x, m.act(a, y)));
        }
    }
    let module = FiniteModule::new(m.quantale_arc(), join, pos(x), action)?;
    Ok((module, elements))
}

// ---------------------------------------------------------------------------
// text formats

/// The quantale file named in a `module n over <file>` header.
pub fn module_base_reference(text: &str) -> Result<String> {
    let lines = content_lines(text);
    let &(no, first) = lines.first().ok_or_else(|| Error::parse(1, "empty input"))?;
    match first.split_whitespace().collect::<Vec<_>>()[..] {
        ["module", _, "over", base] => Ok(base.to_string()),
        _ => Err(Error::parse(no, "expected `module <n> over <quantale-file>`")),
    }
}

/// Parses a module over the given quantale: header, `n` join rows, `|Q|`
/// action rows and an optional `bottom j` line (default `0`).
pub fn parse_module(text: &str, q: Arc<FiniteQuantale>) -> Result<FiniteModule> {
    let lines = content_lines(text);
    module_base_reference(text)?;
    let n = parse_header((lines[0].0, lines[0].1.split(" over").next().unwrap_or("")), "module")?;
    let join = take_rows(&lines, 1, n, n)?;
    let action = take_rows(&lines, 1 + n, q.size(), n)?;
    let mut bottom = 0;
    let rest = 1 + n + q.size();
    if let Some(&(no, text)) = lines.get(rest) {
        match text.split_whitespace().collect::<Vec<_>>()[..] {
            ["bottom", v] => bottom = v.parse().map_err(|_| Error::parse(no, "bad bottom index"))?,
            _ => return Err(Error::parse(no, "trailing content")),
        }
    }
    if let Some(&(no, _)) = lines.get(rest + 1) {
        return Err(Error::parse(no, "trailing content"));
    }
    FiniteModule::new(q, join, bottom, action)
}

/// A nucleus file is a single row of images `γ(0) … γ(n-1)`.
pub fn parse_nucleus(text: &str, m: &FiniteModule) -> Result<Nucleus> {
    let lines = content_lines(text);
    let first = *lines.first().ok_or_else(|| Error::parse(1, "empty input"))?;
    let table = parse_row(first, m.size())?;
    if let Some(&(no, _)) = lines.get(1) {
        return Err(Error::parse(no, "trailing content"));
    }
    Nucleus::new(m, table)
}

/// A congruence file lists one class per line.
pub fn parse_congruence(text: &str, n: usize) -> Result<Congruence> {
    let classes = content_lines(text)
        .into_iter()
        .map(|(no, l)| {
            l.split_whitespace()
                .map(|t| t.parse().map_err(|_| Error::parse(no, format!("bad index `{t}`"))))
                .collect::<Result<Vec<usize>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    Congruence::from_classes(n, &classes)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn l3() -> FiniteModule {
        FiniteModule::over_itself(Arc::new(FiniteQuantale::lukasiewicz_chain(3).unwrap()))
    }

    #[test]
    fn l3_self_module_passes_all_laws() {
        let r = check_module_laws(&l3());
        assert!(r.all_pass(), "{r}");
    }

    #[test]
    fn broken_unit_is_reported() {
        let q = Arc::new(FiniteQuantale::lukasiewicz_chain(3).unwrap());
        let join = q.lattice().join_table().to_vec();
        let mut action = q.product_table().to_vec();
        action[2 * 3 + 1] = 2; // e ⋆ 1/2 = 1
        let m = FiniteModule::from_tables_unchecked(q.clone(), join.clone(), 0, action.clone()).unwrap();
        let r = check_module_laws(&m);
        assert!(!r.get("M3 unit").unwrap().passed);
        assert!(FiniteModule::new(q, join, 0, action).is_err());
    }

    #[test]
    fn trivial_module() {
        let q = Arc::new(FiniteQuantale::lukasiewicz_chain(3).unwrap());
        let m = FiniteModule::new(q, vec![0], 0, vec![0, 0, 0]).unwrap();
        assert!(check_module_laws(&m).all_pass());
    }

    #[test]
    fn l3_residuals() {
        let m = l3();
        assert_eq!(m.over(0, 1), 1);
        for x in 0..3 {
            assert_eq!(m.under(2, x), x);
            assert!(m.quantale().leq(2, m.over(x, x)));
        }
    }

    #[test]
    fn generated_submodules() {
        let m = l3();
        assert_eq!(submodule_generated(&m, &[]), vec![0]);
        assert_eq!(submodule_generated(&m, &[2]), vec![0, 1, 2]);
        assert_eq!(submodule_generated(&m, &[1]), vec![0, 1]);
    }

    #[test]
    fn cyclic_generators_agree_with_generation() {
        let m = l3();
        for v in 0..3 {
            let full = submodule_generated(&m, &[v]).len() == m.size();
            assert_eq!(cyclic_generator_check(&m, v), full);
        }
        assert!(cyclic_generator_check(&m, 2));
        assert!(!cyclic_generator_check(&m, 1));
        assert!(!cyclic_generator_check(&m, 0));
    }

    #[test]
    fn ideals_of_l3() {
        let m = l3();
        assert_eq!(ideal_elements(&m), vec![0, 1, 2]);
        assert_eq!(ideal_closure(&m, &[1]), 1);
        for i in ideal_elements(&m) {
            assert!(is_ideal(&m, &principal_ideal(&m, i)));
        }
    }

    #[test]
    fn ideal_congruences_of_l3() {
        let m = l3();
        let c = congruence_of_ideal(&m, 1).unwrap();
        assert_eq!(c.classes(), vec![vec![0, 1], vec![2]]);
        assert_eq!(congruence_of_ideal(&m, 2).unwrap().classes().len(), 1);
        for i in 0..3 {
            assert!(verify_ideal_congruence_maximal(&m, i).unwrap());
        }
        let two = FiniteModule::over_itself(Arc::new(FiniteQuantale::godel_chain(2).unwrap()));
        assert_eq!(congruence_of_ideal(&two, 0).unwrap(), Congruence::identity(2));
    }

    #[test]
    fn partitions_are_counted_by_bell_numbers() {
        let bell = [1, 1, 2, 5, 15, 52, 203];
        for (n, &b) in bell.iter().enumerate() {
            assert_eq!(set_partitions(n).len(), b);
        }
    }

    #[test]
    fn l3_nucleus_and_quotient() {
        let m = l3();
        let g = Nucleus::new(&m, vec![1, 1, 2]).unwrap();
        let q = quotient_module(&m, &g).unwrap();
        assert_eq!(q.elements, vec![1, 2]);
        assert!(check_module_laws(&q.module).all_pass());
        assert!(check_homomorphism(&m, &q.module, &q.projection).all_pass());
        let back = nucleus_from_projection(&m, &q.module, &q.projection).unwrap();
        assert_eq!(back, g);

        let id = quotient_module(&m, &Nucleus::identity(&m)).unwrap();
        assert_eq!(id.module, m);
        let top = quotient_module(&m, &Nucleus::constant_top(&m)).unwrap();
        assert_eq!(top.module.size(), 1);
    }

    #[test]
    fn non_extensive_map_is_rejected() {
        let m = l3();
        let err = Nucleus::new(&m, vec![0, 0, 2]).unwrap_err();
        assert!(matches!(err, Error::InvalidNucleus(_)));
    }

    #[test]
    fn interval_modules() {
        let m = l3();
        let (i, elems) = interval_module(&m, 1).unwrap();
        assert_eq!(elems, vec![1, 2]);
        // 1/2 ⋆' 1 = 1/2 ∨ (1/2 ⊙ 1) = 1/2
        assert_eq!(i.act(1, 1), 0);
        assert!(check_module_laws(&i).all_pass());
        assert_eq!(interval_module(&m, 0).unwrap().0, m);
        assert_eq!(interval_module(&m, 2).unwrap().0.size(), 1);
    }

    #[test]
    fn text_formats() {
        let m = l3();
        let text = m.to_text("l3.quantale");
        assert_eq!(module_base_reference(&text).unwrap(), "l3.quantale");
        assert_eq!(parse_module(&text, m.quantale_arc()).unwrap(), m);
        assert_eq!(parse_nucleus("1 1 2\n", &m).unwrap().table(), &[1, 1, 2]);
        let c = parse_congruence("0 1\n2\n", 3).unwrap();
        assert_eq!(c, congruence_of_ideal(&m, 1).unwrap());
        assert!(parse_congruence("0 1\n1 2\n", 3).is_err());
    }
}
