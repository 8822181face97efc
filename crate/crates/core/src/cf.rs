//! Continued fractions with arbitrary elements.
//!
//! A finite continued fraction `[a_0, a_1, ..., a_n]` is evaluated through
//! its continuant pair `(P, Q)`, the numerator and denominator obtained from
//! the three-term recurrence
//!
//! ```text
//! P_k = a_k P_{k-1} + P_{k-2},   P_{-1} = 1, P_{-2} = 0
//! Q_k = a_k Q_{k-1} + Q_{k-2},   Q_{-1} = 0, Q_{-2} = 1
//! ```
//!
//! Zero elements and vanishing denominators are legal: values live on the
//! projective line, so `[1, 0]` evaluates to `1/0` (infinity) rather than
//! failing.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::scalar::{format_ratio, parse_ratio, Ratio, Scalar};

/// Ordered elements of a finite continued fraction.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CfSequence(Vec<Ratio>);

impl CfSequence {
    pub fn new(elements: Vec<Ratio>) -> Result<Self> {
        if elements.is_empty() {
            return Err(Error::EmptySequence);
        }
        Ok(CfSequence(elements))
    }

    pub fn from_ints(elements: &[i64]) -> Result<Self> {
        Self::new(elements.iter().map(|&a| Ratio::from_integer(a.into())).collect())
    }

    /// Parses a comma-separated list such as `"2,-1,3,-2,1"` or `"1,-1/2"`.
    pub fn parse(s: &str) -> Result<Self> {
        let elems = s
            .split(',')
            .filter(|t| !t.trim().is_empty())
            .map(parse_ratio)
            .collect::<Result<Vec<_>>>()?;
        Self::new(elems)
    }

    pub fn elements(&self) -> &[Ratio] {
        &self.0
    }

    pub fn into_elements(self) -> Vec<Ratio> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Ordinary: `a_0` integer, every later element a positive integer.
    pub fn is_ordinary(&self) -> bool {
        self.0[0].is_integer()
            && self.0[1..].iter().all(|a| a.is_integer() && a.is_positive())
    }
}

impl fmt::Display for CfSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(format_ratio).collect();
        write!(f, "[{}]", parts.join(","))
    }
}

impl Serialize for CfSequence {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let parts: Vec<String> = self.0.iter().map(format_ratio).collect();
        parts.serialize(s)
    }
}

impl<'de> Deserialize<'de> for CfSequence {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let parts = Vec::<String>::deserialize(d)?;
        let elems = parts
            .iter()
            .map(|p| parse_ratio(p))
            .collect::<Result<Vec<_>>>()
            .map_err(D::Error::custom)?;
        CfSequence::new(elems).map_err(D::Error::custom)
    }
}

/// Raw continuant pair `(P_k, Q_k)` of a prefix, not normalized.
///
/// For rational elements both entries are rationals; the pair itself
/// (not only its ratio) carries geometric meaning as an endpoint.
#[derive(Debug, Clone, PartialEq)]
pub struct Continuant<T> {
    pub p: T,
    pub q: T,
}

impl Continuant<Ratio> {
    pub fn projective(&self) -> ProjectiveRatio {
        ProjectiveRatio::from_ratios(&self.p, &self.q)
    }
}

impl<T: Scalar> Continuant<T> {
    /// Finite value `P/Q`, or `None` when `Q` vanishes (within `tol` for floats).
    pub fn value(&self, tol: f64) -> Option<T> {
        if self.q.is_negligible(tol) {
            None
        } else {
            Some(self.p.clone() / self.q.clone())
        }
    }
}

/// A point of the projective line `p : q` with integer coordinates.
///
/// Canonical form: `gcd(p, q) = 1`, `q >= 0`, and `q = 0` forces `p = 1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ProjectiveRatio {
    p: BigInt,
    q: BigInt,
}

impl ProjectiveRatio {
    /// Canonicalizes `p : q`; panics if both are zero.
    pub fn new(p: BigInt, q: BigInt) -> Self {
        assert!(!(p.is_zero() && q.is_zero()), "0:0 is not a projective point");
        if q.is_zero() {
            return ProjectiveRatio { p: BigInt::one(), q: BigInt::zero() };
        }
        let g = p.gcd(&q);
        let (mut p, mut q) = (p / &g, q / &g);
        if q.is_negative() {
            p = -p;
            q = -q;
        }
        ProjectiveRatio { p, q }
    }

    pub fn from_ratios(p: &Ratio, q: &Ratio) -> Self {
        // Clear denominators: p : q = p*lcm : q*lcm.
        let l = p.denom().lcm(q.denom());
        let pi = p.numer() * (&l / p.denom());
        let qi = q.numer() * (&l / q.denom());
        ProjectiveRatio::new(pi, qi)
    }

    pub fn from_ratio(r: &Ratio) -> Self {
        ProjectiveRatio::new(r.numer().clone(), r.denom().clone())
    }

    pub fn infinity() -> Self {
        ProjectiveRatio { p: BigInt::one(), q: BigInt::zero() }
    }

    pub fn p(&self) -> &BigInt {
        &self.p
    }

    pub fn q(&self) -> &BigInt {
        &self.q
    }

    pub fn is_infinite(&self) -> bool {
        self.q.is_zero()
    }

    pub fn to_ratio(&self) -> Option<Ratio> {
        if self.is_infinite() {
            None
        } else {
            Some(Ratio::new(self.p.clone(), self.q.clone()))
        }
    }
}

impl fmt::Display for ProjectiveRatio {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.p, self.q)
    }
}

#[derive(Serialize, Deserialize)]
struct ProjectiveWire {
    p: String,
    q: String,
}

impl Serialize for ProjectiveRatio {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        ProjectiveWire { p: self.p.to_string(), q: self.q.to_string() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for ProjectiveRatio {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let w = ProjectiveWire::deserialize(d)?;
        let p: BigInt = w.p.parse().map_err(D::Error::custom)?;
        let q: BigInt = w.q.parse().map_err(D::Error::custom)?;
        if p.is_zero() && q.is_zero() {
            return Err(D::Error::custom("0:0 is not a projective point"));
        }
        Ok(ProjectiveRatio::new(p, q))
    }
}

/// Continuant pairs of every prefix `[a_0..a_k]`, `k = 0..len-1`.
pub fn continuants<T: Scalar>(elements: &[T]) -> Vec<Continuant<T>> {
    let (mut p2, mut p1) = (T::zero(), T::one());
    let (mut q2, mut q1) = (T::one(), T::zero());
    let mut out = Vec::with_capacity(elements.len());
    for a in elements {
        let p = a.clone() * p1.clone() + p2;
        let q = a.clone() * q1.clone() + q2;
        p2 = std::mem::replace(&mut p1, p.clone());
        q2 = std::mem::replace(&mut q1, q.clone());
        out.push(Continuant { p, q });
    }
    out
}

/// Continuant pair of the whole sequence. Panics on an empty slice.
pub fn final_continuant<T: Scalar>(elements: &[T]) -> Continuant<T> {
    continuants(elements).pop().expect("nonempty sequence")
}

/// Value of a finite continued fraction on the projective line.
pub fn eval_cf(seq: &CfSequence) -> ProjectiveRatio {
    final_continuant(seq.elements()).projective()
}

/// Requested parity of the number of elements.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Parity {
    Odd,
    Even,
}

impl std::str::FromStr for Parity {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "odd" => Ok(Parity::Odd),
            "even" => Ok(Parity::Even),
            other => Err(Error::InvalidArgument(format!("parity must be odd|even, got {other}"))),
        }
    }
}

/// Ordinary continued fraction of `x` with an odd or even number of elements.
///
/// The floor expansion is adjusted with `[.., a] = [.., a-1, 1]` or
/// `[.., b, 1] = [.., b+1]`; every rational has exactly one expansion of
/// each parity.
pub fn expand_rational(x: &Ratio, parity: Parity) -> CfSequence {
    let mut elems: Vec<BigInt> = Vec::new();
    let (mut num, mut den) = (x.numer().clone(), x.denom().clone());
    loop {
        let (a, r) = num.div_mod_floor(&den);
        elems.push(a);
        if r.is_zero() {
            break;
        }
        num = den;
        den = r;
    }
    let want_odd = parity == Parity::Odd;
    if (elems.len() % 2 == 1) != want_odd {
        let n = elems.len();
        let last = elems[n - 1].clone();
        if n >= 2 && last.is_one() {
            elems.pop();
            elems[n - 2] += 1;
        } else {
            elems[n - 1] = last - 1;
            elems.push(BigInt::one());
        }
    }
    CfSequence(elems.into_iter().map(Ratio::from_integer).collect())
}

/// Prefix of the ordinary expansion of a real number.
///
/// Stops after `max_terms` elements or once the fractional part drops below
/// `tol`. The convergent `p/q` of the result satisfies `|x - p/q| <= 1/q^2`
/// up to floating rounding.
pub fn expand_real(x: f64, max_terms: usize, tol: f64) -> Result<CfSequence> {
    if !x.is_finite() {
        return Err(Error::NonFinite(x));
    }
    if max_terms == 0 {
        return Err(Error::InvalidArgument("max_terms must be >= 1".into()));
    }
    if !(tol > 0.0) {
        return Err(Error::InvalidArgument("tol must be > 0".into()));
    }
    let mut elems = Vec::new();
    let mut y = x;
    loop {
        // a remainder within tol of an integer ends the expansion
        let near = y.round();
        if (y - near).abs() < tol * y.abs().max(1.0) {
            elems.push(Ratio::from_integer(BigInt::from(near as i64)));
            break;
        }
        let a = y.floor();
        elems.push(Ratio::from_integer(BigInt::from(a as i64)));
        if elems.len() >= max_terms {
            break;
        }
        let frac = y - a;
        y = 1.0 / frac;
        if !y.is_finite() || y > 9.0e18 {
            break;
        }
    }
    CfSequence::new(elems)
}
