//! Fuzzy transforms over a partition sampled on nodes `p_1, …, p_l`.

use crate::error::{Error, Result};
use crate::laws::LawReport;
use crate::luk::basis_value;
use crate::quantale::{content_lines, TNormQuantale};
use crate::tnorm::TNormKind;
use crate::transform::{inverse_apply, transform_apply, FreeVector, Handedness, Kernel};
use crate::unit::{Ratio, UnitValue};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Direction {
    Up,
    Down,
}

impl std::str::FromStr for Direction {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "up" => Ok(Direction::Up),
            "down" => Ok(Direction::Down),
            _ => Err(Error::InvalidParameter(format!("unknown direction `{s}`"))),
        }
    }
}

/// Basic functions `A_1, …, A_n` stored as the `l × n` kernel
/// `k(j, i) = A_i(p_j)`.
#[derive(Clone, Debug, PartialEq)]
pub struct FuzzyPartition {
    kind: TNormKind,
    kernel: Kernel<UnitValue>,
}

impl FuzzyPartition {
    /// `values` is row-major over nodes: `values[j·n + i] = A_i(p_j)`.
    pub fn new(kind: TNormKind, l: usize, n: usize, values: Vec<UnitValue>) -> Result<Self> {
        let kind = kind.validate()?;
        let values = if kind.supports_exact() {
            values
        } else {
            values.iter().map(UnitValue::to_float).collect()
        };
        Ok(FuzzyPartition {
            kind,
            kernel: Kernel::new(l, n, values)?,
        })
    }

    /// The Łukasiewicz basis of order `n` on the nodes `j/(l−1)`.
    pub fn lukasiewicz(n: usize, l: usize) -> Result<Self> {
        if l < 2 {
            return Err(Error::InvalidParameter("need at least two nodes".into()));
        }
        let values = (0..l * n)
            .map(|idx| {
                let x = UnitValue::Exact(Ratio::new((idx / n) as u64, l as u64 - 1)?);
                basis_value(n, idx % n, x)
            })
            .collect::<Result<_>>()?;
        FuzzyPartition::new(TNormKind::Lukasiewicz, l, n, values)
    }

    pub fn kind(&self) -> TNormKind {
        self.kind
    }
    pub fn nodes(&self) -> usize {
        self.kernel.rows()
    }
    pub fn functions(&self) -> usize {
        self.kernel.cols()
    }
    /// `A_i(p_j)` at `(j, i)`.
    pub fn kernel(&self) -> &Kernel<UnitValue> {
        &self.kernel
    }

    fn quantale(&self) -> Result<TNormQuantale> {
        if self.kind.supports_exact() && self.kernel.entries().iter().all(UnitValue::is_exact) {
            TNormQuantale::exact(self.kind)
        } else {
            TNormQuantale::float(self.kind)
        }
    }
}

/// Covering at the nodes, sufficient density, and `n ≥ 2`, each reported
/// with a witness on failure.
pub fn validate_partition(part: &FuzzyPartition) -> LawReport {
    let k = &part.kernel;
    let (l, n) = (k.rows(), k.cols());
    let positive = |j: usize, i: usize| !k.get(j, i).leq(&UnitValue::ZERO);
    let mut r = LawReport::new();
    r.check(
        "at least two basic functions",
        std::iter::once(n),
        |&n| n >= 2,
        |&n| format!("n = {n}"),
    );
    r.check(
        "covering",
        0..l,
        |&j| (0..n).any(|i| positive(j, i)),
        |&j| format!("no basic function is positive at node {j}"),
    );
    r.check(
        "sufficient density",
        0..n,
        |&i| (0..l).any(|j| positive(j, i)),
        |&i| format!("basic function {i} vanishes on every node"),
    );
    r
}

fn require_valid(part: &FuzzyPartition, dir: Direction) -> Result<()> {
    let report = validate_partition(part);
    if let Some(e) = report.failures().next() {
        return Err(Error::InvalidPartition(format!(
            "{}: {}",
            e.law,
            e.counterexample.as_deref().unwrap_or("")
        )));
    }
    let (l, n) = (part.nodes(), part.functions());
    match dir {
        Direction::Up if n >= l => Err(Error::InvalidPartition(format!(
            "the upper transform needs fewer functions than nodes, got n = {n}, l = {l}"
        ))),
        Direction::Down if l > n => Err(Error::InvalidPartition(format!(
            "the lower transform needs at most as many nodes as functions, got l = {l}, n = {n}"
        ))),
        _ => Ok(()),
    }
}

fn coerce(q: &TNormQuantale, v: &[UnitValue]) -> Vec<UnitValue> {
    if q.is_float() {
        v.iter().map(UnitValue::to_float).collect()
    } else {
        v.to_vec()
    }
}

/// `Up`: `F_k = ⋁_j A_k(p_j) ∗ f(p_j)`.
/// `Down`: `F_k = ⋀_j A_k(p_j) → f(p_j)`.
pub fn f_transform(part: &FuzzyPartition, f: &[UnitValue], dir: Direction) -> Result<FreeVector<UnitValue>> {
    require_valid(part, dir)?;
    let q = part.quantale()?;
    let f = coerce(&q, f);
    match dir {
        Direction::Up => transform_apply(&q, &part.kernel, &f, Handedness::Left),
        Direction::Down => inverse_apply(&q, &part.kernel.transpose(), &f, Handedness::Left),
    }
}

/// `Up`: `f(p_j) = ⋀_k A_k(p_j) → F_k`.
/// `Down`: `f(p_j) = ⋁_k A_k(p_j) ∗ F_k`.
pub fn f_inverse(part: &FuzzyPartition, big_f: &[UnitValue], dir: Direction) -> Result<FreeVector<UnitValue>> {
    require_valid(part, dir)?;
    let q = part.quantale()?;
    let big_f = coerce(&q, big_f);
    match dir {
        Direction::Up => inverse_apply(&q, &part.kernel, &big_f, Handedness::Left),
        Direction::Down => transform_apply(&q, &part.kernel.transpose(), &big_f, Handedness::Left),
    }
}

/// Parses `partition l n <tnorm>` followed by `l` rows of `n` values.
pub fn parse_partition(text: &str) -> Result<FuzzyPartition> {
    let lines = content_lines(text);
    let &(no, head) = lines.first().ok_or_else(|| Error::parse(1, "empty input"))?;
    let (l, n, kind) = match head.split_whitespace().collect::<Vec<_>>()[..] {
        ["partition", l, n, t] => (
            l.parse::<usize>().map_err(|_| Error::parse(no, "bad node count"))?,
            n.parse::<usize>().map_err(|_| Error::parse(no, "bad function count"))?,
            t.parse::<TNormKind>().map_err(|e| Error::parse(no, e.to_string()))?,
        ),
        _ => return Err(Error::parse(no, "expected `partition <l> <n> <tnorm>`")),
    };
    if lines.len() != l + 1 {
        let at = lines.last().map_or(no, |x| x.0);
        return Err(Error::parse(at, format!("expected {l} rows, found {}", lines.len() - 1)));
    }
    let mut values = Vec::with_capacity(l * n);
    for &(no, row) in &lines[1..] {
        let before = values.len();
        for t in row.split_whitespace() {
            values.push(t.parse::<UnitValue>().map_err(|e| Error::parse(no, e.to_string()))?);
        }
        if values.len() - before != n {
            return Err(Error::parse(no, format!("expected {n} values, found {}", values.len() - before)));
        }
    }
    FuzzyPartition::new(kind, l, n, values)
}

pub fn partition_to_text(part: &FuzzyPartition) -> String {
    let k = &part.kernel;
    let mut out = format!("partition {} {} {}\n", k.rows(), k.cols(), part.kind);
    for row in k.entries().chunks(k.cols()) {
        out.push_str(&row.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(" "));
        out.push('\n');
    }
    out
}
