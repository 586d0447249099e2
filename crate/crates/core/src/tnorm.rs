//! The standard t-norms on `[0,1]` and their residua.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::unit::UnitValue;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TNormKind {
    Godel,
    Product,
    Lukasiewicz,
    /// `x ⊙_p y = (max{0, x^p + y^p - 1})^(1/p)`.
    GeneralizedLukasiewicz(u32),
    NilpotentMinimum,
}

impl TNormKind {
    /// Whether the kind can run on exact fractions.
    pub fn supports_exact(self) -> bool {
        !matches!(
            self,
            TNormKind::Product | TNormKind::GeneralizedLukasiewicz(_)
        )
    }

    pub fn validate(self) -> Result<Self> {
        match self {
            TNormKind::GeneralizedLukasiewicz(0) => Err(Error::InvalidParameter(
                "generalized Łukasiewicz exponent must be at least 1".into(),
            )),
            k => Ok(k),
        }
    }

    fn check_backend(self, x: &UnitValue, y: &UnitValue) -> Result<()> {
        self.validate()?;
        if !self.supports_exact() && (x.is_exact() || y.is_exact()) {
            return Err(Error::BackendMismatch(format!(
                "{self} is only available on the float backend"
            )));
        }
        Ok(())
    }

    /// The t-norm without backend checks; exact inputs to float-only kinds
    /// are read as floats.
    pub(crate) fn apply_unchecked(self, x: UnitValue, y: UnitValue) -> UnitValue {
        use UnitValue::{Exact, Float};
        match self {
            TNormKind::Godel => x.min(y),
            TNormKind::Lukasiewicz => match (x, y) {
                (Exact(a), Exact(b)) => Exact(a.saturating_sub(b.complement())),
                _ => UnitValue::float_clamped((x.to_f64() + y.to_f64() - 1.0).max(0.0)),
            },
            TNormKind::NilpotentMinimum => {
                let sum_exceeds_one = match (x, y) {
                    (Exact(a), Exact(b)) => b.complement() < a,
                    _ => x.to_f64() + y.to_f64() > 1.0,
                };
                if sum_exceeds_one {
                    x.min(y)
                } else {
                    match (x, y) {
                        (Exact(_), Exact(_)) => UnitValue::ZERO,
                        _ => Float(0.0),
                    }
                }
            }
            TNormKind::Product => UnitValue::float_clamped(x.to_f64() * y.to_f64()),
            TNormKind::GeneralizedLukasiewicz(p) => {
                let p = p as i32;
                let s = (x.to_f64().powi(p) + y.to_f64().powi(p) - 1.0).max(0.0);
                UnitValue::float_clamped(s.powf(1.0 / p as f64))
            }
        }
    }

    /// The residuum `x → y` without backend checks.
    pub(crate) fn residuum_unchecked(self, x: UnitValue, y: UnitValue) -> UnitValue {
        use UnitValue::{Exact, Float};
        let one = |exact: bool| if exact { UnitValue::ONE } else { Float(1.0) };
        let both_exact = x.is_exact() && y.is_exact();
        match self {
            TNormKind::Godel => {
                if x.leq(&y) {
                    one(both_exact)
                } else {
                    y
                }
            }
            TNormKind::Lukasiewicz => match (x, y) {
                (Exact(a), Exact(b)) => Exact(a.complement().saturating_add(b)),
                _ => UnitValue::float_clamped((1.0 - x.to_f64() + y.to_f64()).min(1.0)),
            },
            TNormKind::NilpotentMinimum => {
                if x.leq(&y) {
                    one(both_exact)
                } else {
                    x.complement().max(y)
                }
            }
            TNormKind::Product => {
                let (a, b) = (x.to_f64(), y.to_f64());
                if a <= b {
                    Float(1.0)
                } else {
                    UnitValue::float_clamped(b / a)
                }
            }
            TNormKind::GeneralizedLukasiewicz(p) => {
                let p = p as i32;
                let s = 1.0 - x.to_f64().powi(p) + y.to_f64().powi(p);
                UnitValue::float_clamped(s.min(1.0).powf(1.0 / p as f64))
            }
        }
    }
}

impl fmt::Display for TNormKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TNormKind::Godel => write!(f, "godel"),
            TNormKind::Product => write!(f, "product"),
            TNormKind::Lukasiewicz => write!(f, "lukasiewicz"),
            TNormKind::GeneralizedLukasiewicz(p) => write!(f, "lukasiewicz:{p}"),
            TNormKind::NilpotentMinimum => write!(f, "nilpotent-minimum"),
        }
    }
}

impl FromStr for TNormKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let lower = s.trim().to_ascii_lowercase();
        let kind = match lower.as_str() {
            "godel" | "goedel" | "minimum" | "min" => TNormKind::Godel,
            "product" | "prod" => TNormKind::Product,
            "lukasiewicz" | "luk" => TNormKind::Lukasiewicz,
            "nilpotent-minimum" | "nilpotent_minimum" | "nm" => TNormKind::NilpotentMinimum,
            other => {
                let p = other
                    .strip_prefix("lukasiewicz:")
                    .or_else(|| other.strip_prefix("luk:"))
                    .and_then(|p| p.parse::<u32>().ok())
                    .ok_or_else(|| Error::InvalidParameter(format!("unknown t-norm `{s}`")))?;
                TNormKind::GeneralizedLukasiewicz(p)
            }
        };
        kind.validate()
    }
}

/// Evaluates the t-norm `x ∗ y`.
pub fn tnorm_apply(kind: TNormKind, x: UnitValue, y: UnitValue) -> Result<UnitValue> {
    kind.check_backend(&x, &y)?;
    Ok(kind.apply_unchecked(x, y))
}

/// Evaluates the residuum `x → y = ⋁{z | z ∗ x ≤ y}`.
pub fn tnorm_residuum(kind: TNormKind, x: UnitValue, y: UnitValue) -> Result<UnitValue> {
    kind.check_backend(&x, &y)?;
    Ok(kind.residuum_unchecked(x, y))
}

/// Exact Łukasiewicz product on a shared denominator, in numerator form.
#[inline]
pub(crate) fn luk_mul_num(a: u64, b: u64, den: u64) -> u64 {
    (a + b).saturating_sub(den)
}

/// Exact Łukasiewicz residuum on a shared denominator, in numerator form.
#[inline]
pub(crate) fn luk_imp_num(a: u64, b: u64, den: u64) -> u64 {
    if a <= b {
        den
    } else {
        den - a + b
    }
}
