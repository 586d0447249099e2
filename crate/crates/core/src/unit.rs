//! Values of the real unit interval.
//!
//! Two backends share one type: exact reduced fractions, which are closed
//! under the Łukasiewicz, Gödel and nilpotent-minimum operations, and binary
//! floats for the t-norms whose results are irrational.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Tolerance used for equality whenever a float value is involved.
pub const FLOAT_EQ_TOL: f64 = 1e-12;

fn gcd(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// A reduced fraction `num / den` with `0 <= num <= den`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Ratio {
    num: u64,
    den: u64,
}

impl Ratio {
    pub const ZERO: Ratio = Ratio { num: 0, den: 1 };
    pub const ONE: Ratio = Ratio { num: 1, den: 1 };

    pub fn new(num: u64, den: u64) -> Result<Self> {
        if den == 0 {
            return Err(Error::InvalidValue("zero denominator".into()));
        }
        if num > den {
            return Err(Error::InvalidValue(format!("{num}/{den} lies outside [0,1]")));
        }
        Ok(Self::reduced(num as u128, den as u128))
    }

    /// Reduces `num / den`; callers guarantee `num <= den` and `den > 0`.
    pub(crate) fn reduced(num: u128, den: u128) -> Self {
        debug_assert!(den > 0 && num <= den);
        if num == 0 {
            return Self::ZERO;
        }
        let g = gcd(num, den);
        let (num, den) = (num / g, den / g);
        let den = u64::try_from(den).expect("denominator overflow in exact unit arithmetic");
        Ratio {
            num: num as u64,
            den,
        }
    }

    pub fn numer(self) -> u64 {
        self.num
    }

    pub fn denom(self) -> u64 {
        self.den
    }

    pub fn to_f64(self) -> f64 {
        self.num as f64 / self.den as f64
    }

    /// Numerators of `self` and `other` over `lcm(den, other.den)`.
    fn common(self, other: Ratio) -> (u128, u128, u128) {
        let (d1, d2) = (self.den as u128, other.den as u128);
        let l = d1 / gcd(d1, d2) * d2;
        (self.num as u128 * (l / d1), other.num as u128 * (l / d2), l)
    }

    pub fn complement(self) -> Ratio {
        Ratio {
            num: self.den - self.num,
            den: self.den,
        }
    }

    /// `min(1, self + other)`.
    pub fn saturating_add(self, other: Ratio) -> Ratio {
        let (a, b, l) = self.common(other);
        Self::reduced((a + b).min(l), l)
    }

    /// `max(0, self - other)`.
    pub fn saturating_sub(self, other: Ratio) -> Ratio {
        let (a, b, l) = self.common(other);
        Self::reduced(a.saturating_sub(b), l)
    }

    /// Numerator over the given denominator, if `den` is a multiple of ours.
    pub fn numerator_at(self, den: u64) -> Option<u64> {
        if !den.is_multiple_of(self.den) {
            return None;
        }
        Some(self.num * (den / self.den))
    }
}

impl Ord for Ratio {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.num as u128 * other.den as u128).cmp(&(other.num as u128 * self.den as u128))
    }
}

impl PartialOrd for Ratio {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Ratio {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.num, self.den) {
            (0, _) => write!(f, "0"),
            (n, d) if n == d => write!(f, "1"),
            (n, d) => write!(f, "{n}/{d}"),
        }
    }
}

/// A point of `[0,1]` on either the exact or the float backend.
#[derive(Clone, Copy, Debug)]
pub enum UnitValue {
    Exact(Ratio),
    Float(f64),
}

impl UnitValue {
    pub const ZERO: UnitValue = UnitValue::Exact(Ratio::ZERO);
    pub const ONE: UnitValue = UnitValue::Exact(Ratio::ONE);

    pub fn exact(num: u64, den: u64) -> Result<Self> {
        Ratio::new(num, den).map(UnitValue::Exact)
    }

    pub fn float(v: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&v) {
            return Err(Error::InvalidValue(format!("{v} lies outside [0,1]")));
        }
        Ok(UnitValue::Float(v))
    }

    /// Float constructor that clamps rounding noise back into `[0,1]`.
    pub(crate) fn float_clamped(v: f64) -> Self {
        UnitValue::Float(v.clamp(0.0, 1.0))
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, UnitValue::Exact(_))
    }

    pub fn as_exact(&self) -> Option<Ratio> {
        match self {
            UnitValue::Exact(r) => Some(*r),
            UnitValue::Float(_) => None,
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            UnitValue::Exact(r) => r.to_f64(),
            UnitValue::Float(v) => *v,
        }
    }

    pub fn to_float(&self) -> UnitValue {
        UnitValue::Float(self.to_f64())
    }

    /// Order test; exact on two exact values, tolerant otherwise.
    pub fn leq(&self, other: &UnitValue) -> bool {
        match (self, other) {
            (UnitValue::Exact(a), UnitValue::Exact(b)) => a <= b,
            _ => self.to_f64() <= other.to_f64() + FLOAT_EQ_TOL,
        }
    }

    pub fn max(self, other: UnitValue) -> UnitValue {
        if self.leq(&other) {
            other
        } else {
            self
        }
    }

    pub fn min(self, other: UnitValue) -> UnitValue {
        if self.leq(&other) {
            self
        } else {
            other
        }
    }

    pub fn complement(self) -> UnitValue {
        match self {
            UnitValue::Exact(r) => UnitValue::Exact(r.complement()),
            UnitValue::Float(v) => UnitValue::float_clamped(1.0 - v),
        }
    }

    /// `max(0, self - other)`, the truncated difference.
    pub fn truncated_sub(self, other: UnitValue) -> UnitValue {
        match (self, other) {
            (UnitValue::Exact(a), UnitValue::Exact(b)) => UnitValue::Exact(a.saturating_sub(b)),
            (a, b) => UnitValue::float_clamped(a.to_f64() - b.to_f64()),
        }
    }

    /// `k / den` for `k = 0..=den`.
    pub fn grid(den: u64) -> Vec<UnitValue> {
        (0..=den)
            .map(|k| UnitValue::Exact(Ratio::reduced(k as u128, den as u128)))
            .collect()
    }
}

impl PartialEq for UnitValue {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (UnitValue::Exact(a), UnitValue::Exact(b)) => a == b,
            _ => (self.to_f64() - other.to_f64()).abs() <= FLOAT_EQ_TOL,
        }
    }
}

impl From<Ratio> for UnitValue {
    fn from(r: Ratio) -> Self {
        UnitValue::Exact(r)
    }
}

impl fmt::Display for UnitValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            UnitValue::Exact(r) => r.fmt(f),
            UnitValue::Float(v) => write!(f, "{v}"),
        }
    }
}

impl FromStr for Ratio {
    type Err = Error;

    /// Accepts `a/b`, integers `0`/`1`, and finite decimals such as `0.25`,
    /// all parsed exactly.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::InvalidValue(format!("cannot parse `{s}` as a unit value"));
        if let Some((n, d)) = s.split_once('/') {
            let n: u64 = n.trim().parse().map_err(|_| bad())?;
            let d: u64 = d.trim().parse().map_err(|_| bad())?;
            return Ratio::new(n, d);
        }
        let (int, frac) = s.split_once('.').unwrap_or((s, ""));
        if int.is_empty() && frac.is_empty() {
            return Err(bad());
        }
        if !int.chars().all(|c| c.is_ascii_digit()) || !frac.chars().all(|c| c.is_ascii_digit()) {
            return Err(bad());
        }
        if frac.len() > 18 {
            return Err(bad());
        }
        let den = 10u64.pow(frac.len() as u32);
        let int: u64 = if int.is_empty() { 0 } else { int.parse().map_err(|_| bad())? };
        let frac: u64 = if frac.is_empty() { 0 } else { frac.parse().map_err(|_| bad())? };
        let num = int
            .checked_mul(den)
            .and_then(|v| v.checked_add(frac))
            .ok_or_else(bad)?;
        Ratio::new(num, den)
    }
}

impl FromStr for UnitValue {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        s.parse::<Ratio>().map(UnitValue::Exact)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reduces_on_construction() {
        let r = Ratio::new(6, 8).unwrap();
        assert_eq!((r.numer(), r.denom()), (3, 4));
        assert_eq!(Ratio::new(0, 7).unwrap(), Ratio::ZERO);
        assert!(Ratio::new(3, 2).is_err());
        assert!(Ratio::new(1, 0).is_err());
    }

    #[test]
    fn parses_fractions_and_decimals() {
        assert_eq!("2/4".parse::<Ratio>().unwrap(), Ratio::new(1, 2).unwrap());
        assert_eq!("0.25".parse::<Ratio>().unwrap(), Ratio::new(1, 4).unwrap());
        assert_eq!("1".parse::<Ratio>().unwrap(), Ratio::ONE);
        assert_eq!(".5".parse::<Ratio>().unwrap(), Ratio::new(1, 2).unwrap());
        assert!("1.5".parse::<Ratio>().is_err());
        assert!("-0.5".parse::<Ratio>().is_err());
        assert!("abc".parse::<Ratio>().is_err());
    }

    #[test]
    fn saturating_ops_stay_on_lcm_grid() {
        let a = Ratio::new(2, 3).unwrap();
        let b = Ratio::new(3, 4).unwrap();
        assert_eq!(a.saturating_add(b), Ratio::ONE);
        assert_eq!(b.saturating_sub(a), Ratio::new(1, 12).unwrap());
        assert_eq!(a.saturating_sub(b), Ratio::ZERO);
    }

    #[test]
    fn float_equality_is_tolerant() {
        let a = UnitValue::Float(0.3);
        let b = UnitValue::Float(0.1 + 0.2);
        assert_eq!(a, b);
        assert_eq!(UnitValue::exact(1, 2).unwrap(), UnitValue::Float(0.5));
        assert!(UnitValue::float(1.5).is_err());
    }

    #[test]
    fn numerator_at_requires_divisible_denominator() {
        let r = Ratio::new(1, 3).unwrap();
        assert_eq!(r.numerator_at(765), Some(255));
        assert_eq!(r.numerator_at(10), None);
    }
}
