//! The Łukasiewicz partition of unity `p_0, …, p_{n-1}` on `[0,1]` and the
//! coder it induces on the grid `I_m`.

use crate::error::{Error, Result};
use crate::laws::LawReport;
use crate::quantale::{Quantale, TNormQuantale};
use crate::tnorm::TNormKind;
use crate::transform::{classify_coder, inverse_apply, transform_apply, CoderClass, FreeVector, Handedness, Kernel};
use crate::unit::{Ratio, UnitValue};

/// Basis of order `n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LukBasis {
    n: usize,
}

impl LukBasis {
    pub fn new(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidParameter(format!("basis order must be at least 2, got {n}")));
        }
        Ok(LukBasis { n })
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn value(&self, k: usize, x: UnitValue) -> Result<UnitValue> {
        basis_value(self.n, k, x)
    }
}

/// Which linear piece of `p_k` is active at `t = (n-1)x`, given the
/// breakpoints as multiples of the denominator `b`.
enum Piece {
    Rising,
    Falling,
    Zero,
}

fn piece(n: i128, k: i128, t: i128, b: i128) -> Piece {
    if k >= 1 && (k - 1) * b <= t && t <= k * b {
        Piece::Rising
    } else if k <= n - 2 && k * b <= t && t <= (k + 1) * b {
        Piece::Falling
    } else {
        Piece::Zero
    }
}

/// `p_k(x)`: rising as `(n-1)x - (k-1)` on `[(k-1)/(n-1), k/(n-1)]`, falling
/// as `-(n-1)x + (k+1)` on `[k/(n-1), (k+1)/(n-1)]`, zero elsewhere.
pub fn basis_value(n: usize, k: usize, x: UnitValue) -> Result<UnitValue> {
    if n < 2 {
        return Err(Error::InvalidParameter(format!("basis order must be at least 2, got {n}")));
    }
    if k >= n {
        return Err(Error::IndexOut { index: k, bound: n });
    }
    let (nn, kk) = (n as i128, k as i128);
    match x {
        UnitValue::Exact(r) => {
            let b = r.denom() as i128;
            let t = (nn - 1) * r.numer() as i128;
            let num = match piece(nn, kk, t, b) {
                Piece::Rising => t - (kk - 1) * b,
                Piece::Falling => (kk + 1) * b - t,
                Piece::Zero => 0,
            };
            Ok(UnitValue::Exact(Ratio::reduced(num as u128, b as u128)))
        }
        UnitValue::Float(v) => {
            let t = (n as f64 - 1.0) * v;
            let (kf, nf) = (k as f64, n as f64);
            let y = if k >= 1 && kf - 1.0 <= t && t <= kf {
                t - (kf - 1.0)
            } else if kf <= nf - 2.0 && kf <= t && t <= kf + 1.0 {
                kf + 1.0 - t
            } else {
                0.0
            };
            Ok(UnitValue::float_clamped(y))
        }
    }
}

/// The kernel `p(x, k) = p_k(x/(m-1))` on `I_m × I_n` with its class.
#[derive(Clone, Debug)]
pub struct LukCoder {
    n: usize,
    m: usize,
    kernel: Kernel<UnitValue>,
    class: CoderClass,
}

impl LukCoder {
    pub fn order(&self) -> usize {
        self.n
    }
    pub fn grid_size(&self) -> usize {
        self.m
    }
    pub fn kernel(&self) -> &Kernel<UnitValue> {
        &self.kernel
    }
    pub fn class(&self) -> &CoderClass {
        &self.class
    }

    /// `p(x, k)` as a numerator over `m - 1`.
    pub fn numerator_kernel(&self) -> Kernel<u64> {
        let den = self.m as u64 - 1;
        self.kernel
            .map(|v| v.as_exact().and_then(|r| r.numerator_at(den)).expect("grid entries have denominator m-1"))
    }
}

pub fn build_coder(n: usize, m: usize) -> Result<LukCoder> {
    if n < 2 || m <= n {
        return Err(Error::InvalidParameter(format!("coder needs 2 <= n < m, got n={n}, m={m}")));
    }
    let den = m as u64 - 1;
    let mut kernel = Kernel::from_fn(m, n, |x, k| {
        basis_value(n, k, UnitValue::Exact(Ratio::reduced(x as u128, den as u128))).expect("k < n")
    })?;
    if (m - 1).is_multiple_of(n - 1) {
        let step = (m - 1) / (n - 1);
        kernel = kernel.with_embedding((0..n).map(|k| k * step).collect())?;
    }
    let q = luk_quantale();
    let class = classify_coder(&q, &kernel);
    Ok(LukCoder { n, m, kernel, class })
}

pub fn luk_quantale() -> TNormQuantale {
    TNormQuantale::exact(TNormKind::Lukasiewicz).expect("Łukasiewicz is exact")
}

/// `H f(k) = ⋁_x f(x) ⊙ p(x, k)`.
pub fn luk_transform(c: &LukCoder, f: &[UnitValue]) -> Result<FreeVector<UnitValue>> {
    transform_apply(&backend_for(f), &c.kernel, f, Handedness::Left)
}

/// `Λ g(x) = ⋀_k p(x, k) →Ł g(k)`.
pub fn luk_inverse(c: &LukCoder, g: &[UnitValue]) -> Result<FreeVector<UnitValue>> {
    inverse_apply(&backend_for(g), &c.kernel, g, Handedness::Left)
}

fn backend_for(v: &[UnitValue]) -> TNormQuantale {
    if v.iter().all(|x| x.is_exact()) {
        luk_quantale()
    } else {
        TNormQuantale::float(TNormKind::Lukasiewicz).expect("valid kind")
    }
}

/// Exhaustive check on the grids `{j/den}`: the basis sums to 1, distinct
/// members have zero Łukasiewicz product, and `p_k` is 1 exactly at its node.
pub fn partition_check(n: usize, denominators: &[u64]) -> Result<LawReport> {
    LukBasis::new(n)?;
    let q = luk_quantale();
    let mut report = LawReport::new();
    for &den in denominators {
        if den == 0 {
            return Err(Error::InvalidParameter("grid denominator must be positive".into()));
        }
        let grid = UnitValue::grid(den);
        let values: Vec<Vec<UnitValue>> = grid
            .iter()
            .map(|&x| (0..n).map(|k| basis_value(n, k, x)).collect::<Result<_>>())
            .collect::<Result<_>>()?;
        report.check(
            &format!("sum to one on grid {den}"),
            0..grid.len(),
            |&i| {
                let nums: Option<Vec<u64>> = values[i].iter().map(|v| v.as_exact()?.numerator_at(den)).collect();
                nums.is_some_and(|v| v.iter().sum::<u64>() == den)
            },
            |&i| format!("x = {}", grid[i]),
        );
        report.check(
            &format!("distinct members are orthogonal on grid {den}"),
            (0..grid.len()).flat_map(|i| (0..n).flat_map(move |k| (k + 1..n).map(move |h| (i, k, h)))),
            |&(i, k, h)| q.mul(&values[i][k], &values[i][h]) == UnitValue::ZERO,
            |&(i, k, h)| format!("x = {}, k = {k}, h = {h}", grid[i]),
        );
    }
    report.check(
        "nodes",
        (0..n).flat_map(|k| (0..n).map(move |h| (k, h))),
        |&(k, h)| {
            let node = UnitValue::Exact(Ratio::reduced(k as u128, (n - 1) as u128));
            basis_value(n, h, node).is_ok_and(|v| v == if h == k { UnitValue::ONE } else { UnitValue::ZERO })
        },
        |&(k, h)| format!("p_{h} at node {k}"),
    );
    Ok(report)
}
