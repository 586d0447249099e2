//! Unital quantales: the operation contract, the t-norm instances on `[0,1]`,
//! and finite table-defined quantales with residuals derived by exhaustion.

use std::fmt::Debug;

use crate::error::{Error, Result};
use crate::tnorm::{luk_imp_num, luk_mul_num, TNormKind};
use crate::unit::UnitValue;

/// The operations of a unital quantale `⟨Q, ⋁, ·, ⊥, e⟩`.
///
/// Residual naming: `under(a, b)` is `a \ b = ⋁{z | a·z ≤ b}` and
/// `over(b, a)` is `b / a = ⋁{z | z·a ≤ b}`; the numerator always comes first
/// in `over`.
pub trait Quantale {
    type Elem: Clone + PartialEq + Debug;

    fn bottom(&self) -> Self::Elem;
    fn top(&self) -> Self::Elem;
    fn unit(&self) -> Self::Elem;
    fn join(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn meet(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn leq(&self, a: &Self::Elem, b: &Self::Elem) -> bool;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn under(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn over(&self, b: &Self::Elem, a: &Self::Elem) -> Self::Elem;

    fn is_commutative(&self) -> bool {
        false
    }

    fn show(&self, a: &Self::Elem) -> String {
        format!("{a:?}")
    }

    fn join_all<'a, I>(&self, items: I) -> Self::Elem
    where
        I: IntoIterator<Item = &'a Self::Elem>,
        Self::Elem: 'a,
    {
        items
            .into_iter()
            .fold(self.bottom(), |acc, x| self.join(&acc, x))
    }

    fn meet_all<'a, I>(&self, items: I) -> Self::Elem
    where
        I: IntoIterator<Item = &'a Self::Elem>,
        Self::Elem: 'a,
    {
        items.into_iter().fold(self.top(), |acc, x| self.meet(&acc, x))
    }
}

// ---------------------------------------------------------------------------
// t-norm quantales

/// `[0,1]` with a t-norm as product; join is max, unit is 1.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TNormQuantale {
    kind: TNormKind,
    float: bool,
}

impl TNormQuantale {
    /// Quantale on exact fractions.
    pub fn exact(kind: TNormKind) -> Result<Self> {
        let kind = kind.validate()?;
        if !kind.supports_exact() {
            return Err(Error::BackendMismatch(format!(
                "{kind} is only available on the float backend"
            )));
        }
        Ok(TNormQuantale { kind, float: false })
    }

    /// Quantale on binary floats; inputs are coerced to floats.
    pub fn float(kind: TNormKind) -> Result<Self> {
        Ok(TNormQuantale {
            kind: kind.validate()?,
            float: true,
        })
    }

    pub fn kind(&self) -> TNormKind {
        self.kind
    }

    pub fn is_float(&self) -> bool {
        self.float
    }

    fn coerce(&self, v: UnitValue) -> UnitValue {
        if self.float {
            v.to_float()
        } else {
            v
        }
    }

    /// Sample carrier `{k/den}` in this quantale's backend.
    pub fn grid(&self, den: u64) -> Vec<UnitValue> {
        UnitValue::grid(den)
            .into_iter()
            .map(|v| self.coerce(v))
            .collect()
    }
}

impl Quantale for TNormQuantale {
    type Elem = UnitValue;

    fn bottom(&self) -> UnitValue {
        self.coerce(UnitValue::ZERO)
    }
    fn top(&self) -> UnitValue {
        self.coerce(UnitValue::ONE)
    }
    fn unit(&self) -> UnitValue {
        self.top()
    }
    fn join(&self, a: &UnitValue, b: &UnitValue) -> UnitValue {
        a.max(*b)
    }
    fn meet(&self, a: &UnitValue, b: &UnitValue) -> UnitValue {
        a.min(*b)
    }
    fn leq(&self, a: &UnitValue, b: &UnitValue) -> bool {
        a.leq(b)
    }
    fn mul(&self, a: &UnitValue, b: &UnitValue) -> UnitValue {
        self.kind
            .apply_unchecked(self.coerce(*a), self.coerce(*b))
    }
    fn under(&self, a: &UnitValue, b: &UnitValue) -> UnitValue {
        self.kind
            .residuum_unchecked(self.coerce(*a), self.coerce(*b))
    }
    fn over(&self, b: &UnitValue, a: &UnitValue) -> UnitValue {
        self.under(a, b)
    }
    fn is_commutative(&self) -> bool {
        true
    }
    fn show(&self, a: &UnitValue) -> String {
        a.to_string()
    }
}

/// The Łukasiewicz quantale restricted to `{k/D}` and stored as numerators.
///
/// The set is closed under `⊙`, `→`, max and min, which is what makes the
/// block codec bit-exact.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FixedLukasiewicz {
    den: u64,
}

impl FixedLukasiewicz {
    pub fn new(den: u64) -> Result<Self> {
        if den == 0 {
            return Err(Error::InvalidParameter("denominator must be positive".into()));
        }
        Ok(FixedLukasiewicz { den })
    }

    pub fn denominator(&self) -> u64 {
        self.den
    }

    pub fn value(&self, num: u64) -> UnitValue {
        UnitValue::exact(num, self.den).expect("numerator within denominator")
    }
}

impl Quantale for FixedLukasiewicz {
    type Elem = u64;

    fn bottom(&self) -> u64 {
        0
    }
    fn top(&self) -> u64 {
        self.den
    }
    fn unit(&self) -> u64 {
        self.den
    }
    fn join(&self, a: &u64, b: &u64) -> u64 {
        *a.max(b)
    }
    fn meet(&self, a: &u64, b: &u64) -> u64 {
        *a.min(b)
    }
    fn leq(&self, a: &u64, b: &u64) -> bool {
        a <= b
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        luk_mul_num(*a, *b, self.den)
    }
    fn under(&self, a: &u64, b: &u64) -> u64 {
        luk_imp_num(*a, *b, self.den)
    }
    fn over(&self, b: &u64, a: &u64) -> u64 {
        luk_imp_num(*a, *b, self.den)
    }
    fn is_commutative(&self) -> bool {
        true
    }
    fn show(&self, a: &u64) -> String {
        self.value(*a).to_string()
    }
}

// ---------------------------------------------------------------------------
// finite lattices

/// A finite lattice given by its join table; the order is `x ≤ y ⟺ x∨y = y`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteLattice {
    n: usize,
    join: Vec<usize>,
    meet: Vec<usize>,
    bottom: usize,
    top: usize,
}

impl FiniteLattice {
    /// Validates the join table and derives meets.
    pub fn new(n: usize, join: Vec<usize>, bottom: usize) -> Result<Self> {
        let lat = Self::from_join_unchecked(n, join, bottom)?;
        if let Some(msg) = lat.semilattice_violation() {
            return Err(Error::InvalidAlgebra(msg));
        }
        Ok(lat)
    }

    /// Derives meets and top without checking the semilattice axioms.
    pub fn from_join_unchecked(n: usize, join: Vec<usize>, bottom: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidAlgebra("empty carrier".into()));
        }
        if join.len() != n * n {
            return Err(Error::IndexMismatch {
                expected: n * n,
                found: join.len(),
            });
        }
        if let Some(&bad) = join.iter().find(|&&v| v >= n) {
            return Err(Error::IndexOut { index: bad, bound: n });
        }
        if bottom >= n {
            return Err(Error::IndexOut {
                index: bottom,
                bound: n,
            });
        }
        let top = (0..n).fold(bottom, |acc, x| join[acc * n + x]);
        let mut lat = FiniteLattice {
            n,
            join,
            meet: vec![0; n * n],
            bottom,
            top,
        };
        for x in 0..n {
            for y in 0..n {
                let m = (0..n)
                    .filter(|&z| lat.leq(z, x) && lat.leq(z, y))
                    .fold(bottom, |acc, z| lat.join(acc, z));
                lat.meet[x * n + y] = m;
            }
        }
        Ok(lat)
    }

    /// Chain `0 < 1 < … < n-1`.
    pub fn chain(n: usize) -> Self {
        let join = (0..n * n).map(|i| (i / n).max(i % n)).collect();
        Self::new(n, join, 0).expect("chains are lattices")
    }

    /// The Boolean lattice of subsets of a `k`-element set, as bitmasks.
    pub fn boolean(k: u32) -> Self {
        let n = 1usize << k;
        let join = (0..n * n).map(|i| (i / n) | (i % n)).collect();
        Self::new(n, join, 0).expect("Boolean algebras are lattices")
    }

    fn semilattice_violation(&self) -> Option<String> {
        let n = self.n;
        for x in 0..n {
            if self.join(x, x) != x {
                return Some(format!("join is not idempotent at {x}"));
            }
            if self.join(self.bottom, x) != x {
                return Some(format!("bottom {} is not neutral for {x}", self.bottom));
            }
            for y in 0..n {
                if self.join(x, y) != self.join(y, x) {
                    return Some(format!("join is not commutative at ({x}, {y})"));
                }
                for z in 0..n {
                    if self.join(self.join(x, y), z) != self.join(x, self.join(y, z)) {
                        return Some(format!("join is not associative at ({x}, {y}, {z})"));
                    }
                }
            }
        }
        None
    }

    pub fn size(&self) -> usize {
        self.n
    }
    pub fn bottom(&self) -> usize {
        self.bottom
    }
    pub fn top(&self) -> usize {
        self.top
    }
    #[inline]
    pub fn join(&self, x: usize, y: usize) -> usize {
        self.join[x * self.n + y]
    }
    #[inline]
    pub fn meet(&self, x: usize, y: usize) -> usize {
        self.meet[x * self.n + y]
    }
    #[inline]
    pub fn leq(&self, x: usize, y: usize) -> bool {
        self.join(x, y) == y
    }
    pub fn join_table(&self) -> &[usize] {
        &self.join
    }

    pub fn join_all(&self, items: impl IntoIterator<Item = usize>) -> usize {
        items.into_iter().fold(self.bottom, |a, x| self.join(a, x))
    }

    pub fn meet_all(&self, items: impl IntoIterator<Item = usize>) -> usize {
        items.into_iter().fold(self.top, |a, x| self.meet(a, x))
    }
}

// ---------------------------------------------------------------------------
// finite quantales

/// A table-defined unital quantale on `0..n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteQuantale {
    lattice: FiniteLattice,
    product: Vec<usize>,
    unit: usize,
    /// `left_res[x*n+y] = x \ y`
    left_res: Vec<usize>,
    /// `right_res[y*n+x] = y / x`
    right_res: Vec<usize>,
    commutative: bool,
}

impl FiniteQuantale {
    /// Validates Q1–Q3 and the unit, then derives both residual tables.
    pub fn new(n: usize, join: Vec<usize>, product: Vec<usize>, unit: usize, bottom: usize) -> Result<Self> {
        let lattice = FiniteLattice::new(n, join, bottom)?;
        let q = Self::assemble(lattice, product, unit)?;
        if let Some(msg) = q.quantale_violation() {
            return Err(Error::InvalidAlgebra(msg));
        }
        Ok(q)
    }

    /// Builds the tables without checking the quantale axioms, so that the
    /// law checker can be pointed at broken algebras.
    pub fn from_tables_unchecked(
        n: usize,
        join: Vec<usize>,
        product: Vec<usize>,
        unit: usize,
        bottom: usize,
    ) -> Result<Self> {
        let lattice = FiniteLattice::from_join_unchecked(n, join, bottom)?;
        Self::assemble(lattice, product, unit)
    }

    fn assemble(lattice: FiniteLattice, product: Vec<usize>, unit: usize) -> Result<Self> {
        let n = lattice.size();
        if product.len() != n * n {
            return Err(Error::IndexMismatch {
                expected: n * n,
                found: product.len(),
            });
        }
        if let Some(&bad) = product.iter().find(|&&v| v >= n) {
            return Err(Error::IndexOut { index: bad, bound: n });
        }
        if unit >= n {
            return Err(Error::IndexOut { index: unit, bound: n });
        }
        let mut q = FiniteQuantale {
            lattice,
            product,
            unit,
            left_res: Vec::new(),
            right_res: Vec::new(),
            commutative: false,
        };
        q.commutative = (0..n).all(|x| (0..n).all(|y| q.mul(x, y) == q.mul(y, x)));
        q.fill_residuals();
        Ok(q)
    }

    /// `x \ y = ⋁{z | x·z ≤ y}` and `y / x = ⋁{z | z·x ≤ y}` by exhaustion.
    fn fill_residuals(&mut self) {
        let n = self.size();
        let lat = &self.lattice;
        let mut left = vec![0; n * n];
        let mut right = vec![0; n * n];
        for x in 0..n {
            for y in 0..n {
                left[x * n + y] =
                    lat.join_all((0..n).filter(|&z| lat.leq(self.product[x * n + z], y)));
                right[y * n + x] =
                    lat.join_all((0..n).filter(|&z| lat.leq(self.product[z * n + x], y)));
            }
        }
        self.left_res = left;
        self.right_res = right;
    }

    fn quantale_violation(&self) -> Option<String> {
        let n = self.size();
        let (bot, e) = (self.bottom(), self.unit);
        for x in 0..n {
            if self.mul(e, x) != x || self.mul(x, e) != x {
                return Some(format!("{e} is not a unit at {x}"));
            }
            if self.mul(x, bot) != bot || self.mul(bot, x) != bot {
                return Some(format!("product with bottom is not bottom at {x}"));
            }
            for y in 0..n {
                for z in 0..n {
                    if self.mul(self.mul(x, y), z) != self.mul(x, self.mul(y, z)) {
                        return Some(format!("product is not associative at ({x}, {y}, {z})"));
                    }
                    let j = self.join(y, z);
                    if self.mul(x, j) != self.join(self.mul(x, y), self.mul(x, z)) {
                        return Some(format!("left distributivity fails at ({x}, {y}, {z})"));
                    }
                    if self.mul(j, x) != self.join(self.mul(y, x), self.mul(z, x)) {
                        return Some(format!("right distributivity fails at ({x}, {y}, {z})"));
                    }
                }
            }
        }
        None
    }

    /// The Łukasiewicz chain `Ł_k = {0, 1/(k-1), …, 1}`, element `i` standing
    /// for `i/(k-1)`.
    pub fn lukasiewicz_chain(k: usize) -> Result<Self> {
        if k < 2 {
            return Err(Error::InvalidParameter("a Łukasiewicz chain needs at least 2 elements".into()));
        }
        let top = k - 1;
        let join = (0..k * k).map(|i| (i / k).max(i % k)).collect();
        let product = (0..k * k).map(|i| (i / k + i % k).saturating_sub(top)).collect();
        Self::new(k, join, product, top, 0)
    }

    /// The Gödel chain on `k` elements (product = min).
    pub fn godel_chain(k: usize) -> Result<Self> {
        if k < 1 {
            return Err(Error::InvalidParameter("empty chain".into()));
        }
        let join = (0..k * k).map(|i| (i / k).max(i % k)).collect();
        let product = (0..k * k).map(|i| (i / k).min(i % k)).collect();
        Self::new(k, join, product, k - 1, 0)
    }

    /// Restricts an exact t-norm quantale to the grid `{j/den}`.
    ///
    /// Residual tables are filled from the closed-form residuum, not by
    /// search, so a law check on the result tests the printed formulas.
    pub fn tabulate_tnorm(kind: TNormKind, den: u64) -> Result<Self> {
        let tq = TNormQuantale::exact(kind)?;
        if den == 0 {
            return Err(Error::InvalidParameter("grid denominator must be positive".into()));
        }
        let grid = tq.grid(den);
        let n = grid.len();
        let index = |v: UnitValue| -> Result<usize> {
            let r = v.as_exact().expect("exact backend");
            r.numerator_at(den).map(|k| k as usize).ok_or_else(|| {
                Error::InvalidAlgebra(format!("{kind} leaves the grid 1/{den} at {v}"))
            })
        };
        let join = (0..n * n).map(|i| (i / n).max(i % n)).collect();
        let mut product = vec![0; n * n];
        let mut res = vec![0; n * n];
        for x in 0..n {
            for y in 0..n {
                product[x * n + y] = index(tq.mul(&grid[x], &grid[y]))?;
                res[x * n + y] = index(tq.under(&grid[x], &grid[y]))?;
            }
        }
        let lattice = FiniteLattice::new(n, join, 0)?;
        let mut right = vec![0; n * n];
        for x in 0..n {
            for y in 0..n {
                right[y * n + x] = res[x * n + y];
            }
        }
        Ok(FiniteQuantale {
            lattice,
            product,
            unit: n - 1,
            left_res: res,
            right_res: right,
            commutative: true,
        })
    }

    pub fn size(&self) -> usize {
        self.lattice.size()
    }
    pub fn lattice(&self) -> &FiniteLattice {
        &self.lattice
    }
    pub fn bottom(&self) -> usize {
        self.lattice.bottom()
    }
    pub fn top(&self) -> usize {
        self.lattice.top()
    }
    pub fn unit(&self) -> usize {
        self.unit
    }
    pub fn commutative(&self) -> bool {
        self.commutative
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
    pub fn mul(&self, x: usize, y: usize) -> usize {
        self.product[x * self.size() + y]
    }
    /// `x \ y`
    #[inline]
    pub fn left_residual(&self, x: usize, y: usize) -> usize {
        self.left_res[x * self.size() + y]
    }
    /// `y / x`
    #[inline]
    pub fn right_residual(&self, y: usize, x: usize) -> usize {
        self.right_res[y * self.size() + x]
    }
    pub fn product_table(&self) -> &[usize] {
        &self.product
    }

    /// Text form accepted by [`parse_quantale`].
    pub fn to_text(&self) -> String {
        let n = self.size();
        let mut out = format!("quantale {n}\n");
        for table in [self.lattice.join_table(), &self.product[..]] {
            for row in table.chunks(n) {
                let row: Vec<String> = row.iter().map(|v| v.to_string()).collect();
                out.push_str(&row.join(" "));
                out.push('\n');
            }
        }
        out.push_str(&format!("unit {}\nbottom {}\n", self.unit, self.bottom()));
        out
    }
}

/// Fills residual tables of a finite quantale by exhaustive search.
///
/// The tables are recomputed from scratch; the result agrees with the input
/// whenever the input's residuals were already correct.
pub fn finite_residuals(q: &FiniteQuantale) -> Result<FiniteQuantale> {
    FiniteQuantale::new(
        q.size(),
        q.lattice.join_table().to_vec(),
        q.product.clone(),
        q.unit,
        q.bottom(),
    )
}

impl Quantale for FiniteQuantale {
    type Elem = usize;

    fn bottom(&self) -> usize {
        FiniteQuantale::bottom(self)
    }
    fn top(&self) -> usize {
        FiniteQuantale::top(self)
    }
    fn unit(&self) -> usize {
        self.unit
    }
    fn join(&self, a: &usize, b: &usize) -> usize {
        FiniteQuantale::join(self, *a, *b)
    }
    fn meet(&self, a: &usize, b: &usize) -> usize {
        FiniteQuantale::meet(self, *a, *b)
    }
    fn leq(&self, a: &usize, b: &usize) -> bool {
        FiniteQuantale::leq(self, *a, *b)
    }
    fn mul(&self, a: &usize, b: &usize) -> usize {
        FiniteQuantale::mul(self, *a, *b)
    }
    fn under(&self, a: &usize, b: &usize) -> usize {
        self.left_residual(*a, *b)
    }
    fn over(&self, b: &usize, a: &usize) -> usize {
        self.right_residual(*b, *a)
    }
    fn is_commutative(&self) -> bool {
        self.commutative
    }
    fn show(&self, a: &usize) -> String {
        a.to_string()
    }
}

// ---------------------------------------------------------------------------
// monoids and powerset quantales

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteMonoid {
    n: usize,
    product: Vec<usize>,
    unit: usize,
}

impl FiniteMonoid {
    pub fn new(n: usize, product: Vec<usize>, unit: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidAlgebra("empty monoid".into()));
        }
        if product.len() != n * n {
            return Err(Error::IndexMismatch {
                expected: n * n,
                found: product.len(),
            });
        }
        if let Some(&bad) = product.iter().chain(std::iter::once(&unit)).find(|&&v| v >= n) {
            return Err(Error::IndexOut { index: bad, bound: n });
        }
        let m = FiniteMonoid { n, product, unit };
        for x in 0..n {
            if m.mul(unit, x) != x || m.mul(x, unit) != x {
                return Err(Error::InvalidAlgebra(format!("{unit} is not a unit at {x}")));
            }
            for y in 0..n {
                for z in 0..n {
                    if m.mul(m.mul(x, y), z) != m.mul(x, m.mul(y, z)) {
                        return Err(Error::InvalidAlgebra(format!(
                            "product is not associative at ({x}, {y}, {z})"
                        )));
                    }
                }
            }
        }
        Ok(m)
    }

    /// The cyclic group `Z_k` with unit 0.
    pub fn cyclic(k: usize) -> Self {
        let product = (0..k * k).map(|i| (i / k + i % k) % k).collect();
        Self::new(k, product, 0).expect("cyclic groups are monoids")
    }

    pub fn size(&self) -> usize {
        self.n
    }
    pub fn unit(&self) -> usize {
        self.unit
    }
    #[inline]
    pub fn mul(&self, x: usize, y: usize) -> usize {
        self.product[x * self.n + y]
    }
}

/// Default largest monoid accepted by [`powerset_quantale`].
pub const POWERSET_MONOID_BOUND: usize = 4;

/// `℘(M)` with union and complex multiplication `A·B = {a·b}`; subsets are
/// encoded as bitmasks.
pub fn powerset_quantale(m: &FiniteMonoid) -> Result<FiniteQuantale> {
    powerset_quantale_bounded(m, POWERSET_MONOID_BOUND)
}

pub fn powerset_quantale_bounded(m: &FiniteMonoid, bound: usize) -> Result<FiniteQuantale> {
    let k = m.size();
    if k > bound {
        return Err(Error::SizeBound(format!(
            "powerset of a {k}-element monoid exceeds the bound of {bound} generators"
        )));
    }
    let n = 1usize << k;
    let join = (0..n * n).map(|i| (i / n) | (i % n)).collect();
    let mut product = vec![0; n * n];
    for a in 0..n {
        for b in 0..n {
            let mut c = 0usize;
            for x in (0..k).filter(|x| a >> x & 1 == 1) {
                for y in (0..k).filter(|y| b >> y & 1 == 1) {
                    c |= 1 << m.mul(x, y);
                }
            }
            product[a * n + b] = c;
        }
    }
    FiniteQuantale::new(n, join, product, 1 << m.unit(), 0)
}

// ---------------------------------------------------------------------------
// text format

/// Non-empty, comment-stripped lines with their 1-based line numbers.
pub(crate) fn content_lines(text: &str) -> Vec<(usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty())
        .collect()
}

pub(crate) fn parse_header(line: (usize, &str), keyword: &str) -> Result<usize> {
    let (no, text) = line;
    let mut parts = text.split_whitespace();
    if parts.next() != Some(keyword) {
        return Err(Error::parse(no, format!("expected `{keyword} <n>`")));
    }
    parts
        .next()
        .and_then(|v| v.parse().ok())
        .ok_or_else(|| Error::parse(no, format!("expected `{keyword} <n>`")))
}

pub(crate) fn parse_row(line: (usize, &str), len: usize) -> Result<Vec<usize>> {
    let (no, text) = line;
    let row: Vec<usize> = text
        .split_whitespace()
        .map(|t| t.parse().map_err(|_| Error::parse(no, format!("bad index `{t}`"))))
        .collect::<Result<_>>()?;
    if row.len() != len {
        return Err(Error::parse(no, format!("expected {len} entries, found {}", row.len())));
    }
    Ok(row)
}

pub(crate) fn parse_keyword(line: Option<&(usize, &str)>, keyword: &str, last: usize) -> Result<usize> {
    let &(no, text) = line.ok_or_else(|| Error::parse(last, format!("missing `{keyword}` line")))?;
    match text.split_whitespace().collect::<Vec<_>>()[..] {
        [k, v] if k == keyword => v
            .parse()
            .map_err(|_| Error::parse(no, format!("bad index in `{keyword}` line"))),
        _ => Err(Error::parse(no, format!("expected `{keyword} <i>`"))),
    }
}

pub(crate) fn take_rows(lines: &[(usize, &str)], start: usize, count: usize, len: usize) -> Result<Vec<usize>> {
    let last = lines.last().map_or(1, |l| l.0);
    let mut out = Vec::with_capacity(count * len);
    for i in 0..count {
        let line = lines
            .get(start + i)
            .ok_or_else(|| Error::parse(last, "table ends early"))?;
        out.extend(parse_row(*line, len)?);
    }
    Ok(out)
}

/// Parses `quantale n`, `n` join rows, `n` product rows, `unit i`, `bottom j`.
pub fn parse_quantale(text: &str) -> Result<FiniteQuantale> {
    let lines = content_lines(text);
    let first = *lines.first().ok_or_else(|| Error::parse(1, "empty input"))?;
    let n = parse_header(first, "quantale")?;
    let join = take_rows(&lines, 1, n, n)?;
    let product = take_rows(&lines, 1 + n, n, n)?;
    let last = lines.last().map_or(1, |l| l.0);
    let unit = parse_keyword(lines.get(1 + 2 * n), "unit", last)?;
    let bottom = parse_keyword(lines.get(2 + 2 * n), "bottom", last)?;
    if let Some(&(no, _)) = lines.get(3 + 2 * n) {
        return Err(Error::parse(no, "trailing content"));
    }
    FiniteQuantale::new(n, join, product, unit, bottom)
}

/// Parses `monoid n`, `n` product rows, `unit i`.
pub fn parse_monoid(text: &str) -> Result<FiniteMonoid> {
    let lines = content_lines(text);
    let first = *lines.first().ok_or_else(|| Error::parse(1, "empty input"))?;
    let n = parse_header(first, "monoid")?;
    let product = take_rows(&lines, 1, n, n)?;
    let last = lines.last().map_or(1, |l| l.0);
    let unit = parse_keyword(lines.get(1 + n), "unit", last)?;
    if let Some(&(no, _)) = lines.get(2 + n) {
        return Err(Error::parse(no, "trailing content"));
    }
    FiniteMonoid::new(n, product, unit)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_chain_residuals_are_boolean_implication() {
        let q = FiniteQuantale::godel_chain(2).unwrap();
        for x in 0..2 {
            for y in 0..2 {
                let expected = if x == 1 { y } else { 1 };
                assert_eq!(q.left_residual(x, y), expected);
                assert_eq!(q.right_residual(y, x), expected);
            }
        }
    }

    #[test]
    fn l3_half_under_zero() {
        let q = FiniteQuantale::lukasiewicz_chain(3).unwrap();
        assert_eq!(q.left_residual(1, 0), 1);
        for x in 0..3 {
            assert_eq!(q.left_residual(q.unit(), x), x);
        }
    }

    #[test]
    fn tabulated_lukasiewicz_matches_chain() {
        let a = FiniteQuantale::tabulate_tnorm(TNormKind::Lukasiewicz, 4).unwrap();
        let b = FiniteQuantale::lukasiewicz_chain(5).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn tabulation_rejects_float_kinds() {
        let err = FiniteQuantale::tabulate_tnorm(TNormKind::Product, 10).unwrap_err();
        assert!(matches!(err, Error::BackendMismatch(_)));
    }

    #[test]
    fn nonassociative_product_is_rejected() {
        // 4-chain, monotone and unital, but (1·2)·2 = 1 while 1·(2·2) = 0
        let join = (0..16).map(|i| (i / 4).max(i % 4)).collect::<Vec<_>>();
        let bad = vec![0, 0, 0, 0, 0, 0, 1, 1, 0, 1, 1, 2, 0, 1, 2, 3];
        let err = FiniteQuantale::new(4, join, bad, 3, 0).unwrap_err();
        assert!(matches!(err, Error::InvalidAlgebra(_)));
    }

    #[test]
    fn powerset_of_z2() {
        let m = FiniteMonoid::cyclic(2);
        let q = powerset_quantale(&m).unwrap();
        assert_eq!(q.size(), 4);
        // A = B = {a}; A·B = {e}
        assert_eq!(q.mul(0b10, 0b10), 0b01);
        for x in 0..4 {
            assert_eq!(q.mul(0b01, x), x);
        }
        let trivial = powerset_quantale(&FiniteMonoid::cyclic(1)).unwrap();
        assert_eq!(trivial, FiniteQuantale::godel_chain(2).unwrap());
    }

    #[test]
    fn powerset_bound() {
        let err = powerset_quantale(&FiniteMonoid::cyclic(5)).unwrap_err();
        assert!(matches!(err, Error::SizeBound(_)));
    }

    #[test]
    fn text_round_trip() {
        let q = FiniteQuantale::lukasiewicz_chain(4).unwrap();
        assert_eq!(parse_quantale(&q.to_text()).unwrap(), q);
        let err = parse_quantale("quantale 2\n0 1\n1 1\n0 0\n").unwrap_err();
        assert!(matches!(err, Error::Parse { .. }));
        let m = parse_monoid("monoid 2\n0 1\n1 0\nunit 0\n").unwrap();
        assert_eq!(m, FiniteMonoid::cyclic(2));
    }

    #[test]
    fn lattice_meets() {
        let b = FiniteLattice::boolean(3);
        assert_eq!(b.meet(0b110, 0b011), 0b010);
        assert_eq!(b.top(), 7);
        let c = FiniteLattice::chain(4);
        assert_eq!(c.meet(3, 1), 1);
    }
}
