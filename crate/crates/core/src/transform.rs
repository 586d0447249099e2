//! Transforms between free modules `Q^X → Q^Y` given by a kernel
//! `p ∈ Q^{X×Y}`, their residual inverses, and coder classification.

use crate::error::{Error, Result};
use crate::laws::LawReport;
use crate::quantale::{content_lines, Quantale, TNormQuantale};
use crate::tnorm::TNormKind;
use crate::unit::UnitValue;

/// A function `X → Q` stored densely in index order.
pub type FreeVector<E> = Vec<E>;

/// Which side scalars multiply on.
///
/// `Left`: `H f(y) = ⋁_x f(x)·p(x,y)` and `Λ g(x) = ⋀_y g(y)/p(x,y)`.
/// `Right`: `H f(y) = ⋁_x p(x,y)·f(x)` and `Λ g(x) = ⋀_y p(x,y)\g(y)`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum Handedness {
    #[default]
    Left,
    Right,
}

/// An `|X| × |Y|` matrix `p(x, y)`, row-major, optionally carrying the
/// embedding `Y → X` used when `Y` is read as a subset of `X`.
#[derive(Clone, Debug, PartialEq)]
pub struct Kernel<E> {
    rows: usize,
    cols: usize,
    entries: Vec<E>,
    embedding: Option<Vec<usize>>,
}

impl<E: Clone> Kernel<E> {
    pub fn new(rows: usize, cols: usize, entries: Vec<E>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::InvalidParameter("kernel index sets must be non-empty".into()));
        }
        if entries.len() != rows * cols {
            return Err(Error::IndexMismatch {
                expected: rows * cols,
                found: entries.len(),
            });
        }
        Ok(Kernel {
            rows,
            cols,
            entries,
            embedding: None,
        })
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> E) -> Result<Self> {
        let entries = (0..rows * cols).map(|i| f(i / cols, i % cols)).collect();
        Self::new(rows, cols, entries)
    }

    /// Attaches an injective embedding `Y → X`.
    pub fn with_embedding(mut self, embedding: Vec<usize>) -> Result<Self> {
        if embedding.len() != self.cols {
            return Err(Error::IndexMismatch {
                expected: self.cols,
                found: embedding.len(),
            });
        }
        let mut seen = vec![false; self.rows];
        for &x in &embedding {
            if x >= self.rows {
                return Err(Error::IndexOut {
                    index: x,
                    bound: self.rows,
                });
            }
            if std::mem::replace(&mut seen[x], true) {
                return Err(Error::InvalidParameter("embedding is not injective".into()));
            }
        }
        self.embedding = Some(embedding);
        Ok(self)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }
    pub fn cols(&self) -> usize {
        self.cols
    }
    #[inline]
    pub fn get(&self, x: usize, y: usize) -> &E {
        &self.entries[x * self.cols + y]
    }
    pub fn entries(&self) -> &[E] {
        &self.entries
    }
    pub fn stored_embedding(&self) -> Option<&[usize]> {
        self.embedding.as_deref()
    }

    /// The stored embedding, or the identity `y ↦ y` when `|Y| ≤ |X|`.
    pub fn embedding(&self) -> Option<Vec<usize>> {
        match &self.embedding {
            Some(e) => Some(e.clone()),
            None if self.cols <= self.rows => Some((0..self.cols).collect()),
            None => None,
        }
    }

    pub fn column(&self, y: usize) -> Vec<E> {
        (0..self.rows).map(|x| self.get(x, y).clone()).collect()
    }

    pub fn transpose(&self) -> Kernel<E> {
        Kernel {
            rows: self.cols,
            cols: self.rows,
            entries: (0..self.rows * self.cols)
                .map(|i| self.get(i % self.rows, i / self.rows).clone())
                .collect(),
            embedding: None,
        }
    }

    pub fn map<F: Clone>(&self, f: impl Fn(&E) -> F) -> Kernel<F> {
        Kernel {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(f).collect(),
            embedding: self.embedding.clone(),
        }
    }
}

/// The projection kernel `π_Y(x, y) = e` if `x = ε(y)`, else `⊥`.
pub fn projection_kernel<Q: Quantale>(q: &Q, rows: usize, embedding: &[usize]) -> Result<Kernel<Q::Elem>> {
    let cols = embedding.len();
    let k = Kernel::from_fn(rows, cols, |x, y| if embedding[y] == x { q.unit() } else { q.bottom() })?;
    k.with_embedding(embedding.to_vec())
}

/// `H_p f`.
pub fn transform_apply<Q: Quantale>(
    q: &Q,
    p: &Kernel<Q::Elem>,
    f: &[Q::Elem],
    hand: Handedness,
) -> Result<FreeVector<Q::Elem>> {
    if f.len() != p.rows {
        return Err(Error::IndexMismatch {
            expected: p.rows,
            found: f.len(),
        });
    }
    Ok((0..p.cols)
        .map(|y| {
            (0..p.rows).fold(q.bottom(), |acc, x| {
                let term = match hand {
                    Handedness::Left => q.mul(&f[x], p.get(x, y)),
                    Handedness::Right => q.mul(p.get(x, y), &f[x]),
                };
                q.join(&acc, &term)
            })
        })
        .collect())
}

/// `Λ_p g`, the residual of `H_p`.
pub fn inverse_apply<Q: Quantale>(
    q: &Q,
    p: &Kernel<Q::Elem>,
    g: &[Q::Elem],
    hand: Handedness,
) -> Result<FreeVector<Q::Elem>> {
    if g.len() != p.cols {
        return Err(Error::IndexMismatch {
            expected: p.cols,
            found: g.len(),
        });
    }
    Ok((0..p.rows)
        .map(|x| {
            (0..p.cols).fold(q.top(), |acc, y| {
                let term = match hand {
                    Handedness::Left => q.over(&g[y], p.get(x, y)),
                    Handedness::Right => q.under(p.get(x, y), &g[y]),
                };
                q.meet(&acc, &term)
            })
        })
        .collect())
}

pub fn vec_leq<Q: Quantale>(q: &Q, a: &[Q::Elem], b: &[Q::Elem]) -> bool {
    a.len() == b.len() && a.iter().zip(b).all(|(x, y)| q.leq(x, y))
}

pub fn vec_join<Q: Quantale>(q: &Q, a: &[Q::Elem], b: &[Q::Elem]) -> FreeVector<Q::Elem> {
    a.iter().zip(b).map(|(x, y)| q.join(x, y)).collect()
}

/// Scalar action on `Q^X` on the given side.
pub fn vec_scale<Q: Quantale>(q: &Q, s: &Q::Elem, a: &[Q::Elem], hand: Handedness) -> FreeVector<Q::Elem> {
    a.iter()
        .map(|x| match hand {
            Handedness::Left => q.mul(s, x),
            Handedness::Right => q.mul(x, s),
        })
        .collect()
}

/// Pointwise scalar residual: `s \ a(y)` on the left, `a(y) / s` on the
/// right.
pub fn vec_residual<Q: Quantale>(q: &Q, s: &Q::Elem, a: &[Q::Elem], hand: Handedness) -> FreeVector<Q::Elem> {
    a.iter()
        .map(|x| match hand {
            Handedness::Left => q.under(s, x),
            Handedness::Right => q.over(x, s),
        })
        .collect()
}

// ---------------------------------------------------------------------------
// coders

/// The classification flags of a kernel with witnesses `ε: Y → X`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CoderClass {
    pub is_coder: bool,
    pub is_normal: bool,
    pub is_strong: bool,
    pub is_orthogonal: bool,
    pub is_orthonormal: bool,
    pub coder_witness: Option<Vec<usize>>,
    pub normal_witness: Option<Vec<usize>>,
    pub strong_witness: Option<Vec<usize>>,
}

impl CoderClass {
    pub fn label(&self) -> &'static str {
        if self.is_orthonormal {
            "orthonormal"
        } else if self.is_strong {
            "strong"
        } else if self.is_normal {
            "normal"
        } else if self.is_coder {
            "coder"
        } else {
            "not a coder"
        }
    }
}

/// An injective `ε` with `allowed(ε(y), y)` for every `y`, preferring
/// `preferred` if it already works; otherwise a maximum bipartite matching.
fn find_injection(
    rows: usize,
    cols: usize,
    preferred: Option<&[usize]>,
    allowed: impl Fn(usize, usize) -> bool,
) -> Option<Vec<usize>> {
    if let Some(p) = preferred {
        if p.len() == cols && p.iter().enumerate().all(|(y, &x)| x < rows && allowed(x, y)) {
            return Some(p.to_vec());
        }
    }
    if cols > rows {
        return None;
    }
    let adj: Vec<Vec<usize>> = (0..cols).map(|y| (0..rows).filter(|&x| allowed(x, y)).collect()).collect();
    let mut owner: Vec<Option<usize>> = vec![None; rows];
    fn augment(y: usize, adj: &[Vec<usize>], seen: &mut [bool], owner: &mut [Option<usize>]) -> bool {
        for &x in &adj[y] {
            if !seen[x] {
                seen[x] = true;
                if owner[x].is_none_or(|o| augment(o, adj, seen, owner)) {
                    owner[x] = Some(y);
                    return true;
                }
            }
        }
        false
    }
    for y in 0..cols {
        let mut seen = vec![false; rows];
        if !augment(y, &adj, &mut seen, &mut owner) {
            return None;
        }
    }
    let mut eps = vec![0; cols];
    for (x, o) in owner.iter().enumerate() {
        if let Some(y) = o {
            eps[*y] = x;
        }
    }
    Some(eps)
}

pub fn classify_coder<Q: Quantale>(q: &Q, p: &Kernel<Q::Elem>) -> CoderClass {
    let (e, bot) = (q.unit(), q.bottom());
    let pref = p.embedding();
    let pref = pref.as_deref();
    let coder_witness = find_injection(p.rows, p.cols, pref, |x, y| q.leq(&e, p.get(x, y)));
    let normal_witness = find_injection(p.rows, p.cols, pref, |x, y| *p.get(x, y) == e);
    let strong_witness = find_injection(p.rows, p.cols, pref, |x, y| {
        *p.get(x, y) == e && (0..p.cols).all(|z| z == y || *p.get(x, z) == bot)
    });
    let is_orthogonal = (0..p.rows).all(|x| {
        (0..p.cols).all(|y1| {
            (0..p.cols).all(|y2| y1 == y2 || q.mul(p.get(x, y1), p.get(x, y2)) == bot)
        })
    });
    let is_normal = normal_witness.is_some();
    CoderClass {
        is_coder: coder_witness.is_some(),
        is_normal,
        is_strong: strong_witness.is_some(),
        is_orthogonal,
        is_orthonormal: is_orthogonal && is_normal,
        coder_witness,
        normal_witness,
        strong_witness,
    }
}

// ---------------------------------------------------------------------------
// kernels and homomorphisms

/// `χ_x`: `e` at `x`, `⊥` elsewhere.
pub fn basis_vector<Q: Quantale>(q: &Q, len: usize, x: usize) -> FreeVector<Q::Elem> {
    (0..len).map(|i| if i == x { q.unit() } else { q.bottom() }).collect()
}

/// Recovers the kernel `p(x, y) = h(χ_x)(y)` of a homomorphism, after a spot
/// check of `h` on the basis and on scaled basis vectors.
pub fn kernel_of_hom<Q: Quantale>(
    q: &Q,
    rows: usize,
    cols: usize,
    h: impl Fn(&[Q::Elem]) -> FreeVector<Q::Elem>,
    scalars: &[Q::Elem],
    hand: Handedness,
) -> Result<Kernel<Q::Elem>> {
    let images: Vec<FreeVector<Q::Elem>> = (0..rows).map(|x| h(&basis_vector(q, rows, x))).collect();
    if let Some(bad) = images.iter().find(|v| v.len() != cols) {
        return Err(Error::IndexMismatch {
            expected: cols,
            found: bad.len(),
        });
    }
    let zero = vec![q.bottom(); rows];
    if h(&zero) != vec![q.bottom(); cols] {
        return Err(Error::NotAHomomorphism("bottom is not preserved".into()));
    }
    for x1 in 0..rows {
        for x2 in x1 + 1..rows {
            let f = vec_join(q, &basis_vector(q, rows, x1), &basis_vector(q, rows, x2));
            if h(&f) != vec_join(q, &images[x1], &images[x2]) {
                return Err(Error::NotAHomomorphism(format!(
                    "join of basis vectors {x1} and {x2} is not preserved"
                )));
            }
        }
        for s in scalars {
            let f = vec_scale(q, s, &basis_vector(q, rows, x1), hand);
            if h(&f) != vec_scale(q, s, &images[x1], hand) {
                return Err(Error::NotAHomomorphism(format!(
                    "scalar {} on basis vector {x1} is not preserved",
                    q.show(s)
                )));
            }
        }
    }
    Kernel::from_fn(rows, cols, |x, y| images[x][y].clone())
}

/// `H_p` as a closure.
pub fn hom_of_kernel<'a, Q: Quantale>(
    q: &'a Q,
    p: &'a Kernel<Q::Elem>,
    hand: Handedness,
) -> impl Fn(&[Q::Elem]) -> FreeVector<Q::Elem> + 'a {
    move |f| transform_apply(q, p, f, hand).expect("vector length matches the kernel")
}

// ---------------------------------------------------------------------------
// support, core, closure

/// Support, core and closure of a coder whose `Y` is embedded in `X`.
#[derive(Clone, Debug, PartialEq)]
pub struct CoderAnatomy<E> {
    /// Columns (as indices of `Y`) that differ from the projection pattern.
    pub support: Vec<usize>,
    /// The restriction of `p` to the support, embedded accordingly.
    pub core: Option<Kernel<E>>,
    /// The extension to `X × X` padded with projection columns.
    pub closure: Kernel<E>,
}

fn is_projection_column<Q: Quantale>(q: &Q, p: &Kernel<Q::Elem>, y: usize, at: usize) -> bool {
    (0..p.rows).all(|x| *p.get(x, y) == if x == at { q.unit() } else { q.bottom() })
}

fn require_embedding<E: Clone>(p: &Kernel<E>) -> Result<Vec<usize>> {
    p.embedding()
        .ok_or_else(|| Error::SubsetViolation("Y does not embed in X".into()))
}

pub fn coder_anatomy<Q: Quantale>(q: &Q, p: &Kernel<Q::Elem>) -> Result<CoderAnatomy<Q::Elem>> {
    let emb = require_embedding(p)?;
    let support: Vec<usize> = (0..p.cols)
        .filter(|&y| !is_projection_column(q, p, y, emb[y]))
        .collect();
    let core = if support.is_empty() {
        None
    } else {
        let k = Kernel::from_fn(p.rows, support.len(), |x, j| p.get(x, support[j]).clone())?;
        Some(k.with_embedding(support.iter().map(|&y| emb[y]).collect())?)
    };
    let all: Vec<usize> = (0..p.rows).collect();
    let closure = projective_extension(q, p, &all)?;
    Ok(CoderAnatomy {
        support,
        core,
        closure,
    })
}

/// `p^Z` for `ε(Y) ⊆ Z ⊆ X`: columns of `p` on `Y`, projection columns on
/// `Z \ Y`. `z` lists elements of `X`; the result's columns follow it.
pub fn projective_extension<Q: Quantale>(q: &Q, p: &Kernel<Q::Elem>, z: &[usize]) -> Result<Kernel<Q::Elem>> {
    let emb = require_embedding(p)?;
    if let Some(&bad) = z.iter().find(|&&v| v >= p.rows) {
        return Err(Error::SubsetViolation(format!("{bad} is not an element of X")));
    }
    if let Some(y) = (0..p.cols).find(|&y| !z.contains(&emb[y])) {
        return Err(Error::SubsetViolation(format!(
            "column {y} (element {}) is not in Z",
            emb[y]
        )));
    }
    let col_of = |zi: usize| (0..p.cols).find(|&y| emb[y] == z[zi]);
    let k = Kernel::from_fn(p.rows, z.len(), |x, zi| match col_of(zi) {
        Some(y) => p.get(x, y).clone(),
        None if x == z[zi] => q.unit(),
        None => q.bottom(),
    })?;
    k.with_embedding(z.to_vec())
}

/// Same support (as elements of `X`) and equal columns there.
pub fn equivalent_up_to_projections<Q: Quantale>(q: &Q, p: &Kernel<Q::Elem>, r: &Kernel<Q::Elem>) -> Result<bool> {
    if p.rows != r.rows {
        return Ok(false);
    }
    let (a, b) = (coder_anatomy(q, p)?, coder_anatomy(q, r)?);
    let (ep, er) = (require_embedding(p)?, require_embedding(r)?);
    let mut sa: Vec<(usize, Vec<Q::Elem>)> = a.support.iter().map(|&y| (ep[y], p.column(y))).collect();
    let mut sb: Vec<(usize, Vec<Q::Elem>)> = b.support.iter().map(|&y| (er[y], r.column(y))).collect();
    sa.sort_by_key(|c| c.0);
    sb.sort_by_key(|c| c.0);
    Ok(sa == sb)
}

// ---------------------------------------------------------------------------
// adjunction harness

/// Checks, on the sampled vectors, the adjunction, the homomorphism laws of
/// `H`, the dual law of `Λ`, that `Λ∘H` is a nucleus and `H∘Λ ≤ id`, and, for
/// strong coders, `H∘Λ = id`.
pub fn adjunction_check<Q: Quantale>(
    q: &Q,
    p: &Kernel<Q::Elem>,
    hand: Handedness,
    fs: &[FreeVector<Q::Elem>],
    gs: &[FreeVector<Q::Elem>],
    scalars: &[Q::Elem],
) -> Result<LawReport> {
    let h = |f: &[Q::Elem]| transform_apply(q, p, f, hand);
    let l = |g: &[Q::Elem]| inverse_apply(q, p, g, hand);
    let hf: Vec<_> = fs.iter().map(|f| h(f)).collect::<Result<_>>()?;
    let lg: Vec<_> = gs.iter().map(|g| l(g)).collect::<Result<_>>()?;
    let lhf: Vec<_> = hf.iter().map(|v| l(v)).collect::<Result<_>>()?;
    let hlg: Vec<_> = lg.iter().map(|v| h(v)).collect::<Result<_>>()?;
    let show = |v: &[Q::Elem]| format!("[{}]", v.iter().map(|x| q.show(x)).collect::<Vec<_>>().join(", "));
    let mut r = LawReport::new();

    let fg = || (0..fs.len()).flat_map(|i| (0..gs.len()).map(move |j| (i, j)));
    r.check(
        "adjunction",
        fg(),
        |&(i, j)| vec_leq(q, &hf[i], &gs[j]) == vec_leq(q, &fs[i], &lg[j]),
        |&(i, j)| format!("f={}, g={}", show(&fs[i]), show(&gs[j])),
    );
    let ff = || (0..fs.len()).flat_map(|i| (0..fs.len()).map(move |j| (i, j)));
    r.check(
        "H preserves joins",
        ff(),
        |&(i, j)| h(&vec_join(q, &fs[i], &fs[j])).is_ok_and(|v| v == vec_join(q, &hf[i], &hf[j])),
        |&(i, j)| format!("f1={}, f2={}", show(&fs[i]), show(&fs[j])),
    );
    let sf = || (0..scalars.len()).flat_map(|s| (0..fs.len()).map(move |i| (s, i)));
    r.check(
        "H preserves the action",
        sf(),
        |&(s, i)| {
            h(&vec_scale(q, &scalars[s], &fs[i], hand))
                .is_ok_and(|v| v == vec_scale(q, &scalars[s], &hf[i], hand))
        },
        |&(s, i)| format!("q={}, f={}", q.show(&scalars[s]), show(&fs[i])),
    );
    let sg = || (0..scalars.len()).flat_map(|s| (0..gs.len()).map(move |j| (s, j)));
    r.check(
        "inverse preserves scalar residuals",
        sg(),
        |&(s, j)| {
            l(&vec_residual(q, &scalars[s], &gs[j], hand))
                .is_ok_and(|v| v == vec_residual(q, &scalars[s], &lg[j], hand))
        },
        |&(s, j)| format!("q={}, g={}", q.show(&scalars[s]), show(&gs[j])),
    );
    r.check(
        "closure extensive",
        0..fs.len(),
        |&i| vec_leq(q, &fs[i], &lhf[i]),
        |&i| format!("f={}", show(&fs[i])),
    );
    r.check(
        "closure idempotent",
        0..fs.len(),
        |&i| h(&lhf[i]).and_then(|v| l(&v)).is_ok_and(|v| v == lhf[i]),
        |&i| format!("f={}", show(&fs[i])),
    );
    r.check(
        "closure monotone",
        ff(),
        |&(i, j)| !vec_leq(q, &fs[i], &fs[j]) || vec_leq(q, &lhf[i], &lhf[j]),
        |&(i, j)| format!("f1={}, f2={}", show(&fs[i]), show(&fs[j])),
    );
    r.check(
        "closure structural",
        sf(),
        |&(s, i)| {
            let scaled = vec_scale(q, &scalars[s], &fs[i], hand);
            h(&scaled)
                .and_then(|v| l(&v))
                .is_ok_and(|v| vec_leq(q, &vec_scale(q, &scalars[s], &lhf[i], hand), &v))
        },
        |&(s, i)| format!("q={}, f={}", q.show(&scalars[s]), show(&fs[i])),
    );
    r.check(
        "interior below identity",
        0..gs.len(),
        |&j| vec_leq(q, &hlg[j], &gs[j]),
        |&j| format!("g={}", show(&gs[j])),
    );
    if classify_coder(q, p).is_strong {
        r.check(
            "strong coder: H after inverse is the identity",
            0..gs.len(),
            |&j| hlg[j] == gs[j],
            |&j| format!("g={}", show(&gs[j])),
        );
    }
    Ok(r)
}

// ---------------------------------------------------------------------------
// text format

/// Parses `kernel X Y <tnorm>`, `X` rows of `Y` values, and an optional
/// `embedding …` line. Values are exact fractions or decimals; float-only
/// t-norms receive float entries.
pub fn parse_kernel(text: &str) -> Result<(TNormQuantale, Kernel<UnitValue>)> {
    let lines = content_lines(text);
    let &(no, head) = lines.first().ok_or_else(|| Error::parse(1, "empty input"))?;
    let (rows, cols, kind) = match head.split_whitespace().collect::<Vec<_>>()[..] {
        ["kernel", r, c, t] => (
            r.parse::<usize>().map_err(|_| Error::parse(no, "bad row count"))?,
            c.parse::<usize>().map_err(|_| Error::parse(no, "bad column count"))?,
            t.parse::<TNormKind>().map_err(|e| Error::parse(no, e.to_string()))?,
        ),
        _ => return Err(Error::parse(no, "expected `kernel <X> <Y> <tnorm>`")),
    };
    let q = if kind.supports_exact() {
        TNormQuantale::exact(kind)?
    } else {
        TNormQuantale::float(kind)?
    };
    let last = lines.last().map_or(1, |l| l.0);
    let mut entries = Vec::with_capacity(rows * cols);
    for i in 0..rows {
        let &(no, row) = lines
            .get(1 + i)
            .ok_or_else(|| Error::parse(last, "kernel ends early"))?;
        let vals: Vec<UnitValue> = row
            .split_whitespace()
            .map(|t| {
                t.parse::<UnitValue>()
                    .map_err(|e| Error::parse(no, e.to_string()))
                    .map(|v| if q.is_float() { v.to_float() } else { v })
            })
            .collect::<Result<_>>()?;
        if vals.len() != cols {
            return Err(Error::parse(no, format!("expected {cols} entries, found {}", vals.len())));
        }
        entries.extend(vals);
    }
    let mut kernel = Kernel::new(rows, cols, entries)?;
    if let Some(&(no, line)) = lines.get(1 + rows) {
        let mut parts = line.split_whitespace();
        if parts.next() != Some("embedding") {
            return Err(Error::parse(no, "trailing content"));
        }
        let emb = parts
            .map(|t| t.parse::<usize>().map_err(|_| Error::parse(no, format!("bad index `{t}`"))))
            .collect::<Result<Vec<_>>>()?;
        kernel = kernel.with_embedding(emb)?;
        if let Some(&(no, _)) = lines.get(2 + rows) {
            return Err(Error::parse(no, "trailing content"));
        }
    }
    Ok((q, kernel))
}

pub fn kernel_to_text(kind: TNormKind, p: &Kernel<UnitValue>) -> String {
    let mut out = format!("kernel {} {} {}\n", p.rows, p.cols, kind);
    for row in p.entries.chunks(p.cols) {
        let row: Vec<String> = row.iter().map(|v| v.to_string()).collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    if let Some(e) = &p.embedding {
        let e: Vec<String> = e.iter().map(|v| v.to_string()).collect();
        out.push_str(&format!("embedding {}\n", e.join(" ")));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantale::FiniteQuantale;

    fn luk() -> TNormQuantale {
        TNormQuantale::exact(TNormKind::Lukasiewicz).unwrap()
    }

    fn ex(n: u64, d: u64) -> UnitValue {
        UnitValue::exact(n, d).unwrap()
    }

    /// `p(x, k) = max(0, 1 - |(n-1)x/(m-1) - k|)`, computed independently of
    /// the piecewise basis.
    fn tent(m: u64, n: u64) -> Kernel<UnitValue> {
        Kernel::from_fn(m as usize, n as usize, |x, k| {
            let num = ((n - 1) * x as u64) as i64 - (k as i64) * (m as i64 - 1);
            let den = m - 1;
            let d = num.unsigned_abs();
            if d >= den {
                UnitValue::ZERO
            } else {
                ex(den - d, den)
            }
        })
        .unwrap()
    }

    #[test]
    fn bottom_vector_maps_to_bottom() {
        let q = luk();
        let p = tent(5, 3);
        let out = transform_apply(&q, &p, &[UnitValue::ZERO; 5], Handedness::Left).unwrap();
        assert!(out.iter().all(|v| *v == UnitValue::ZERO));
    }

    #[test]
    fn indicator_through_order_three() {
        let q = luk();
        let p = tent(5, 3);
        let mut f = vec![UnitValue::ZERO; 5];
        f[1] = UnitValue::ONE;
        let out = transform_apply(&q, &p, &f, Handedness::Left).unwrap();
        assert_eq!(out, vec![ex(1, 2), ex(1, 2), UnitValue::ZERO]);
    }

    #[test]
    fn inverse_of_order_two() {
        let q = luk();
        let p = tent(4, 2);
        let out = inverse_apply(&q, &p, &[UnitValue::ONE, UnitValue::ZERO], Handedness::Left).unwrap();
        assert_eq!(out, vec![UnitValue::ONE, ex(2, 3), ex(1, 3), UnitValue::ZERO]);
        let top = inverse_apply(&q, &p, &[UnitValue::ONE; 2], Handedness::Left).unwrap();
        assert!(top.iter().all(|v| *v == UnitValue::ONE));
    }

    #[test]
    fn projection_restricts() {
        let q = luk();
        let p = projection_kernel(&q, 4, &[0, 2]).unwrap();
        let f = vec![ex(1, 4), ex(1, 2), ex(3, 4), UnitValue::ONE];
        let out = transform_apply(&q, &p, &f, Handedness::Left).unwrap();
        assert_eq!(out, vec![ex(1, 4), ex(3, 4)]);
        let c = classify_coder(&q, &p);
        assert!(c.is_orthonormal && c.is_strong && c.is_normal && c.is_coder);
    }

    #[test]
    fn length_mismatch() {
        let q = luk();
        let p = tent(4, 2);
        assert!(matches!(
            transform_apply(&q, &p, &[UnitValue::ZERO; 3], Handedness::Left),
            Err(Error::IndexMismatch { .. })
        ));
    }

    #[test]
    fn bottom_kernel_is_not_a_coder() {
        let q = luk();
        let p = Kernel::new(3, 2, vec![UnitValue::ZERO; 6]).unwrap();
        let c = classify_coder(&q, &p);
        assert!(!c.is_coder && !c.is_normal);
        assert!(c.is_orthogonal);
    }

    #[test]
    fn tent_coder_classes() {
        let q = luk();
        let c = classify_coder(&q, &tent(5, 3));
        assert!(c.is_orthonormal && c.is_strong);
        assert_eq!(c.normal_witness, Some(vec![0, 2, 4]));
        let c = classify_coder(&q, &tent(64, 25));
        assert!(c.is_orthogonal && !c.is_normal && !c.is_strong);
    }

    #[test]
    fn matching_finds_non_identity_witness() {
        let q = luk();
        // column 0 only reaches e at row 2, column 1 at rows 0 and 2
        let o = UnitValue::ONE;
        let z = UnitValue::ZERO;
        let p = Kernel::new(3, 2, vec![z, o, z, z, o, o]).unwrap();
        let c = classify_coder(&q, &p);
        assert_eq!(c.normal_witness, Some(vec![2, 0]));
        assert!(!c.is_orthogonal);
    }

    #[test]
    fn kernel_hom_round_trip() {
        let q = luk();
        let p = tent(5, 3);
        let scalars = q.grid(4);
        let h = hom_of_kernel(&q, &p, Handedness::Left);
        let back = kernel_of_hom(&q, 5, 3, h, &scalars, Handedness::Left).unwrap();
        assert_eq!(back, p);
        let id = kernel_of_hom(&q, 3, 3, |f: &[UnitValue]| f.to_vec(), &scalars, Handedness::Left).unwrap();
        assert_eq!(id.entries(), projection_kernel(&q, 3, &[0, 1, 2]).unwrap().entries());
        let zero = kernel_of_hom(&q, 2, 2, |_: &[UnitValue]| vec![UnitValue::ZERO; 2], &scalars, Handedness::Left)
            .unwrap();
        assert!(zero.entries().iter().all(|v| *v == UnitValue::ZERO));
    }

    #[test]
    fn non_homomorphism_is_detected() {
        let q = luk();
        let scalars = q.grid(2);
        let err = kernel_of_hom(
            &q,
            2,
            2,
            |f: &[UnitValue]| f.iter().map(|v| v.max(ex(1, 2))).collect(),
            &scalars,
            Handedness::Left,
        )
        .unwrap_err();
        assert!(matches!(err, Error::NotAHomomorphism(_)));
    }

    #[test]
    fn anatomy() {
        let q = luk();
        let pi = projection_kernel(&q, 4, &[1, 3]).unwrap();
        let a = coder_anatomy(&q, &pi).unwrap();
        assert!(a.support.is_empty() && a.core.is_none());
        assert_eq!(a.closure, projection_kernel(&q, 4, &[0, 1, 2, 3]).unwrap());

        let t = tent(5, 3).with_embedding(vec![0, 2, 4]).unwrap();
        assert_eq!(coder_anatomy(&q, &t).unwrap().support, vec![0, 1, 2]);

        // one projection column, one tent column
        let mixed = Kernel::from_fn(5, 2, |x, y| if y == 0 { if x == 0 { UnitValue::ONE } else { UnitValue::ZERO } } else { *t.get(x, 1) })
            .unwrap()
            .with_embedding(vec![0, 2])
            .unwrap();
        assert_eq!(coder_anatomy(&q, &mixed).unwrap().support, vec![1]);
        let only = Kernel::from_fn(5, 1, |x, _| *t.get(x, 1))
            .unwrap()
            .with_embedding(vec![2])
            .unwrap();
        assert!(equivalent_up_to_projections(&q, &mixed, &only).unwrap());
        assert_eq!(
            coder_anatomy(&q, &mixed).unwrap().closure,
            coder_anatomy(&q, &only).unwrap().closure
        );
        assert!(!equivalent_up_to_projections(&q, &mixed, &t).unwrap());
    }

    #[test]
    fn extension_requires_nested_sets() {
        let q = luk();
        let t = tent(5, 3).with_embedding(vec![0, 2, 4]).unwrap();
        assert!(matches!(projective_extension(&q, &t, &[0, 2]), Err(Error::SubsetViolation(_))));
        assert!(matches!(projective_extension(&q, &t, &[0, 2, 4, 7]), Err(Error::SubsetViolation(_))));
        let ext = projective_extension(&q, &t, &[0, 1, 2, 4]).unwrap();
        assert_eq!(ext.cols(), 4);
        assert_eq!(ext.column(1), projection_kernel(&q, 5, &[1]).unwrap().column(0));
    }

    #[test]
    fn strong_coder_reconstructs_g() {
        let q = luk();
        let p = tent(5, 3);
        let g = vec![ex(1, 5), ex(9, 10), ex(2, 5)];
        let back = transform_apply(&q, &p, &inverse_apply(&q, &p, &g, Handedness::Left).unwrap(), Handedness::Left)
            .unwrap();
        assert_eq!(back, g);
    }

    #[test]
    fn noncommutative_right_handed_adjunction() {
        // powerset of Z_3 is commutative; a 2×2 matrix quantale is not
        let base = FiniteQuantale::lukasiewicz_chain(2).unwrap();
        let mq = crate::matrix::MatrixQuantale::new(std::sync::Arc::new(base), 2);
        let elems = mq.elements();
        let p = Kernel::from_fn(2, 2, |x, y| elems[(x * 5 + y * 3 + 1) % elems.len()].clone()).unwrap();
        let fs: Vec<Vec<Vec<usize>>> = (0..40).map(|i| vec![elems[i % 16].clone(), elems[(i * 7) % 16].clone()]).collect();
        let scalars: Vec<Vec<usize>> = elems.iter().step_by(3).cloned().collect();
        for hand in [Handedness::Left, Handedness::Right] {
            let r = adjunction_check(&mq, &p, hand, &fs, &fs, &scalars).unwrap();
            assert!(r.all_pass(), "{hand:?}: {r}");
        }
    }

    #[test]
    fn kernel_text_round_trip() {
        let p = tent(4, 2).with_embedding(vec![0, 3]).unwrap();
        let text = kernel_to_text(TNormKind::Lukasiewicz, &p);
        let (q, back) = parse_kernel(&text).unwrap();
        assert_eq!(q.kind(), TNormKind::Lukasiewicz);
        assert_eq!(back, p);
        let (q, prod) = parse_kernel("kernel 1 1 product\n0.5\n").unwrap();
        assert!(q.is_float() && !prod.get(0, 0).is_exact());
        assert!(parse_kernel("kernel 2 1 godel\n1\n").is_err());
    }
}
