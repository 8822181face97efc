//! Scalars shared by the exact and floating paths.
//!
//! [`Ratio`] is an arbitrary-precision rational kept in canonical form
//! (positive denominator, coprime parts). The [`Scalar`] trait lets the
//! broken-line machinery run unchanged over `Ratio` (exact mode) and `f64`
//! (approximate mode).

use std::fmt::Debug;
use std::ops::Neg;

use num_bigint::BigInt;
use num_traits::{Num, One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Exact rational number.
pub type Ratio = num_rational::BigRational;

/// Field-like scalar usable for exact and floating geometry.
pub trait Scalar: Clone + Debug + PartialEq + Num + Neg<Output = Self> + Send + Sync + 'static {
    /// Whether this scalar is exact (no tolerances apply).
    const EXACT: bool;

    /// Zero test: exact equality for rationals, `|x| <= tol` for floats.
    fn is_negligible(&self, tol: f64) -> bool;

    fn to_f64(&self) -> f64;

    fn from_i64(v: i64) -> Self;

    /// `"p/q"` (or `"p"`) for rationals, shortest round-trip decimal for floats.
    fn render(&self) -> String;

    /// Parses the textual form produced by [`Scalar::render`].
    fn parse_text(s: &str) -> Result<Self>;
}

impl Scalar for Ratio {
    const EXACT: bool = true;

    fn is_negligible(&self, _tol: f64) -> bool {
        self.is_zero()
    }

    fn to_f64(&self) -> f64 {
        ratio_to_f64(self)
    }

    fn from_i64(v: i64) -> Self {
        Ratio::from_integer(BigInt::from(v))
    }

    fn render(&self) -> String {
        format_ratio(self)
    }

    fn parse_text(s: &str) -> Result<Self> {
        parse_ratio(s)
    }
}

impl Scalar for f64 {
    const EXACT: bool = false;

    fn is_negligible(&self, tol: f64) -> bool {
        self.abs() <= tol
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn from_i64(v: i64) -> Self {
        v as f64
    }

    fn render(&self) -> String {
        format!("{self}")
    }

    fn parse_text(s: &str) -> Result<Self> {
        let s = s.trim();
        if let Some((p, q)) = s.split_once('/') {
            let p: f64 = p.trim().parse().map_err(|_| Error::ParseScalar(s.into()))?;
            let q: f64 = q.trim().parse().map_err(|_| Error::ParseScalar(s.into()))?;
            return Ok(p / q);
        }
        let v: f64 = s.parse().map_err(|_| Error::ParseScalar(s.into()))?;
        if !v.is_finite() {
            return Err(Error::NonFinite(v));
        }
        Ok(v)
    }
}

/// Parses `"p/q"` or an integer `"p"` into a canonical rational.
pub fn parse_ratio(s: &str) -> Result<Ratio> {
    let s = s.trim();
    let bad = || Error::ParseScalar(s.to_string());
    match s.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().map_err(|_| bad())?;
            let q: BigInt = q.trim().parse().map_err(|_| bad())?;
            if q.is_zero() {
                return Err(bad());
            }
            Ok(Ratio::new(p, q))
        }
        None => {
            let p: BigInt = s.parse().map_err(|_| bad())?;
            Ok(Ratio::from_integer(p))
        }
    }
}

/// True when the text looks like a decimal rather than `p/q` or an integer.
pub fn is_decimal_text(s: &str) -> bool {
    let s = s.trim();
    !s.contains('/') && (s.contains('.') || s.contains('e') || s.contains('E'))
}

pub fn format_ratio(r: &Ratio) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Nearest-ish `f64` of a rational, robust to huge numerators/denominators.
pub fn ratio_to_f64(r: &Ratio) -> f64 {
    if let (Some(n), Some(d)) = (r.numer().to_f64(), r.denom().to_f64()) {
        if n.is_finite() && d.is_finite() {
            return n / d;
        }
    }
    // Shift both parts down to a representable range.
    let nb = r.numer().bits() as i64;
    let db = r.denom().bits() as i64;
    let shift_n = (nb - 900).max(0) as usize;
    let shift_d = (db - 900).max(0) as usize;
    let n = (r.numer() >> shift_n).to_f64().unwrap_or(0.0);
    let d = (r.denom() >> shift_d).to_f64().unwrap_or(1.0);
    n / d * 2f64.powi((shift_n as i64 - shift_d as i64) as i32)
}

/// Integer rational helper.
pub fn int(v: i64) -> Ratio {
    Ratio::from_integer(BigInt::from(v))
}

/// `p/q` rational helper; panics on `q == 0`.
pub fn frac(p: i64, q: i64) -> Ratio {
    Ratio::new(BigInt::from(p), BigInt::from(q))
}

/// Sign of a scalar as -1, 0 or 1 (exact for rationals).
pub fn sign_of(r: &Ratio) -> i32 {
    if r.is_positive() {
        1
    } else if r.is_negative() {
        -1
    } else {
        0
    }
}

/// A point (or vector) of the plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Point2<T> {
    pub x: T,
    pub y: T,
}

impl<T: Scalar> Point2<T> {
    pub fn new(x: T, y: T) -> Self {
        Point2 { x, y }
    }

    pub fn origin() -> Self {
        Point2::new(T::zero(), T::zero())
    }

    pub fn sub(&self, o: &Self) -> Self {
        Point2::new(self.x.clone() - o.x.clone(), self.y.clone() - o.y.clone())
    }

    pub fn add(&self, o: &Self) -> Self {
        Point2::new(self.x.clone() + o.x.clone(), self.y.clone() + o.y.clone())
    }

    pub fn scale(&self, k: &T) -> Self {
        Point2::new(self.x.clone() * k.clone(), self.y.clone() * k.clone())
    }

    /// Oriented parallelogram area `|self x o|`.
    pub fn cross(&self, o: &Self) -> T {
        self.x.clone() * o.y.clone() - self.y.clone() * o.x.clone()
    }

    pub fn to_f64(&self) -> Point2<f64> {
        Point2 { x: self.x.to_f64(), y: self.y.to_f64() }
    }
}

impl Point2<f64> {
    pub fn dot(&self, o: &Self) -> f64 {
        self.x * o.x + self.y * o.y
    }

    pub fn norm(&self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn dist(&self, o: &Self) -> f64 {
        (self.x - o.x).hypot(self.y - o.y)
    }
}

impl Point2<Ratio> {
    pub fn from_ints(x: i64, y: i64) -> Self {
        Point2::new(int(x), int(y))
    }
}
