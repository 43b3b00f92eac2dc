//! Numeric tower shared by every module: exact rationals and `f64`.
//!
//! Generators produce exact graphons; spectral work converts to floats.
//! Code that is generic over [`Scalar`] runs identically in both modes, with
//! comparisons that are exact for rationals and tolerance-based for floats.

use std::fmt;
use std::hash::Hash;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{FromPrimitive, Num, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

/// Numeric mode of a graphon or computation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Exact,
    Float,
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exact" => Ok(Mode::Exact),
            "float" => Ok(Mode::Float),
            other => Err(Error::Parse(format!("unknown mode `{other}`"))),
        }
    }
}

/// Borrowed view of a scalar used by engines that specialise per mode.
pub enum Repr<'a> {
    Exact(&'a Rational),
    Float(f64),
}

pub trait Scalar:
    Clone + fmt::Debug + fmt::Display + PartialEq + PartialOrd + Num + Signed + Send + Sync + 'static
{
    const MODE: Mode;

    /// Ordered, hashable bucket of a value: the value itself in exact mode,
    /// a rounded multiple of `tol` in float mode.
    type Key: Ord + Hash + Clone + fmt::Debug + Send + Sync;

    fn key(&self, tol: f64) -> Self::Key;
    fn from_rational(r: &Rational) -> Self;
    fn to_f64(&self) -> f64;

    /// Converts a float produced by a float-mode computation. Only called
    /// on finite values.
    fn from_float(x: f64) -> Self;
    fn repr(&self) -> Repr<'_>;

    /// Equality up to `tol`; exact equality for rationals.
    fn approx_eq(&self, other: &Self, tol: f64) -> bool;

    /// `self <= other` up to `tol`; exact for rationals.
    fn approx_le(&self, other: &Self, tol: f64) -> bool;

    fn from_int(n: i64) -> Self {
        Self::from_rational(&Rational::from_integer(BigInt::from(n)))
    }

    fn ratio(n: i64, d: i64) -> Self {
        Self::from_rational(&Rational::new(BigInt::from(n), BigInt::from(d)))
    }

    fn pow_u32(&self, n: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..n {
            acc = acc * self.clone();
        }
        acc
    }

    /// Default tolerance for twin merging and symmetry checks.
    fn default_tol() -> f64 {
        match Self::MODE {
            Mode::Exact => 0.0,
            Mode::Float => 1e-9,
        }
    }
}

impl Scalar for Rational {
    const MODE: Mode = Mode::Exact;
    type Key = Rational;

    fn key(&self, _tol: f64) -> Rational {
        self.clone()
    }

    fn from_rational(r: &Rational) -> Self {
        r.clone()
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }

    fn from_float(x: f64) -> Self {
        Rational::from_f64(x).expect("finite float")
    }

    fn repr(&self) -> Repr<'_> {
        Repr::Exact(self)
    }

    fn approx_eq(&self, other: &Self, _tol: f64) -> bool {
        self == other
    }

    fn approx_le(&self, other: &Self, _tol: f64) -> bool {
        self <= other
    }
}

impl Scalar for f64 {
    const MODE: Mode = Mode::Float;
    type Key = i64;

    fn key(&self, tol: f64) -> i64 {
        let tol = if tol > 0.0 { tol } else { 1e-12 };
        (self / tol).round() as i64
    }

    fn from_rational(r: &Rational) -> Self {
        ToPrimitive::to_f64(r).unwrap_or(f64::NAN)
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn from_float(x: f64) -> Self {
        x
    }

    fn repr(&self) -> Repr<'_> {
        Repr::Float(*self)
    }

    fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        (self - other).abs() <= tol
    }

    fn approx_le(&self, other: &Self, tol: f64) -> bool {
        *self <= *other + tol
    }
}

/// Parses `"p/q"`, an integer, or a finite decimal such as `"0.25"` exactly.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational number: `{s}`"));
    if let Some((p, q)) = s.split_once('/') {
        let p = BigInt::from_str(p.trim()).map_err(|_| bad())?;
        let q = BigInt::from_str(q.trim()).map_err(|_| bad())?;
        if q.is_zero() {
            return Err(bad());
        }
        return Ok(Rational::new(p, q));
    }
    if let Ok(n) = BigInt::from_str(s) {
        return Ok(Rational::from_integer(n));
    }
    parse_decimal(s).ok_or_else(bad)
}

fn parse_decimal(s: &str) -> Option<Rational> {
    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i32>().ok()?),
        None => (s, 0),
    };
    let (neg, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return None;
    }
    let all: String = format!("{int_part}{frac_part}");
    let mut num = BigInt::from_str(if all.is_empty() { "0" } else { &all }).ok()?;
    if neg {
        num = -num;
    }
    let scale = exponent - frac_part.len() as i32;
    let ten = BigInt::from(10);
    let r = if scale >= 0 {
        Rational::from_integer(num * num_traits::pow(ten, scale as usize))
    } else {
        Rational::new(num, num_traits::pow(ten, (-scale) as usize))
    };
    Some(r)
}

/// Exact rational value of a finite `f64`.
pub fn rational_from_f64(x: f64) -> Result<Rational> {
    Rational::from_f64(x).ok_or_else(|| Error::invalid(format!("non-finite number {x}")))
}

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}
