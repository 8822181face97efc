//! Integer trigonometry and sails of the cones `C_alpha`.
//!
//! `C_alpha` is the cone at the origin spanned by the rays `{(t, 0)}` and
//! `{(t, alpha t)}`, `t >= 0`. Its sail is the origin-facing broken line on
//! the boundary of the convex hull of the nonzero integer points of the cone.
//! Interleaving the integer lengths of the sail edges with the integer sines
//! at its interior vertices gives the LLS-sequence, whose continued fraction
//! is `alpha` again.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::cf::CfSequence;
use crate::error::{Error, Result};
use crate::scalar::{format_ratio, Ratio};

/// Integer point of the plane.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LatticePoint {
    pub x: BigInt,
    pub y: BigInt,
}

impl LatticePoint {
    pub fn new(x: impl Into<BigInt>, y: impl Into<BigInt>) -> Self {
        LatticePoint { x: x.into(), y: y.into() }
    }

    fn minus(&self, o: &LatticePoint) -> (BigInt, BigInt) {
        (&self.x - &o.x, &self.y - &o.y)
    }
}

/// Number of integer points strictly inside `AB`, plus one.
pub fn integer_length(a: &LatticePoint, b: &LatticePoint) -> Result<BigInt> {
    if a == b {
        return Err(Error::CoincidentPoints(format!("({}, {})", a.x, a.y)));
    }
    let (dx, dy) = b.minus(a);
    Ok(dx.abs().gcd(&dy.abs()))
}

/// Index in `Z^2` of the sublattice spanned by the primitive vectors along
/// `BA` and `BC`.
pub fn integer_sine(a: &LatticePoint, b: &LatticePoint, c: &LatticePoint) -> Result<BigInt> {
    let la = integer_length(b, a)?;
    let lc = integer_length(b, c)?;
    let (ux, uy) = a.minus(b);
    let (vx, vy) = c.minus(b);
    let det = &ux * &vy - &uy * &vx;
    if det.is_zero() {
        return Err(Error::Collinear(format!(
            "({}, {}), ({}, {}), ({}, {})",
            a.x, a.y, b.x, b.y, c.x, c.y
        )));
    }
    Ok(det.abs() / (la * lc))
}

/// The cone `C_alpha` for a rational `alpha >= 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct ConeSpec {
    alpha: Ratio,
}

impl ConeSpec {
    pub fn new(alpha: Ratio) -> Result<Self> {
        if alpha < Ratio::one() {
            return Err(Error::InvalidCone(format_ratio(&alpha)));
        }
        Ok(ConeSpec { alpha })
    }

    /// Cone for a real slope, routed through a convergent with at most
    /// `max_terms` elements of its continued fraction.
    pub fn from_real(alpha: f64, max_terms: usize) -> Result<Self> {
        if !(alpha >= 1.0) {
            return Err(Error::InvalidCone(format!("{alpha}")));
        }
        let cf = crate::cf::expand_real(alpha, max_terms, 1e-12)?;
        let value = crate::cf::eval_cf(&cf)
            .to_ratio()
            .ok_or_else(|| Error::InvalidCone(format!("{alpha}")))?;
        ConeSpec::new(value)
    }

    pub fn alpha(&self) -> &Ratio {
        &self.alpha
    }

    /// Whether an integer point lies in the closed cone.
    pub fn contains(&self, p: &LatticePoint) -> bool {
        // 0 <= y and q*y <= p*x
        !p.y.is_negative() && &p.y * self.alpha.denom() <= &p.x * self.alpha.numer()
    }
}

/// Vertices of a sail and its LLS-sequence.
#[derive(Debug, Clone, PartialEq)]
pub struct SailResult {
    pub vertices: Vec<LatticePoint>,
    pub lls: CfSequence,
}

/// Largest numerator accepted by [`sail`]; the hull works on `i128`.
const MAX_ENUM: i64 = 1 << 24;

/// Sail of `C_alpha`, ordered from `(1, 0)` to `(q, p)` where `alpha = p/q`.
///
/// The integer points of the cone inside `[0, q] x [0, p]` are reduced to
/// the leftmost point of every row (a point further right in its row is
/// swept by the leftmost one plus the recession direction `(1, 0)`).
/// Two far sentinels on the bounding rays close the hull; the sail is the
/// hull chain running back from `(q, p)` to `(1, 0)`.
pub fn sail(cone: &ConeSpec) -> Result<SailResult> {
    let num = cone.alpha.numer().to_i64().filter(|&v| v <= MAX_ENUM);
    let den = cone.alpha.denom().to_i64();
    let (p, q) = match (num, den) {
        (Some(p), Some(q)) => (p, q),
        _ => return Err(Error::ConeTooLarge(format_ratio(&cone.alpha))),
    };

    let mut pts: Vec<(i128, i128)> = Vec::with_capacity(p as usize + 3);
    pts.push((1, 0));
    for y in 1..=p {
        // smallest x with q*y <= p*x
        let x = (q * y + p - 1) / p;
        pts.push((x as i128, y as i128));
    }
    let far = (p as i128) * (q as i128) + 2;
    pts.push((far, 0));
    pts.push((far * q as i128, far * p as i128));

    let hull = convex_hull(pts);
    let start = hull.iter().position(|&v| v == (1, 0)).expect("(1,0) is a hull vertex");
    let apex = (q as i128, p as i128);
    // Counterclockwise: (1,0) -> sentinels -> (q,p) -> ... -> (1,0).
    let n = hull.len();
    let apex_at = (0..n)
        .find(|&k| hull[(start + k) % n] == apex)
        .expect("(q,p) is a hull vertex");
    let mut vertices: Vec<LatticePoint> = (apex_at..=n)
        .map(|k| hull[(start + k) % n])
        .map(|(x, y)| LatticePoint::new(x as i64, y as i64))
        .collect();
    vertices.reverse();

    let lls = lls_of_vertices(&vertices)?;
    Ok(SailResult { vertices, lls })
}

/// `(l_0, s_1, l_1, s_2, ...)`: integer lengths of edges interleaved with
/// integer sines of interior vertices.
pub fn lls_of_sail(s: &SailResult) -> Result<CfSequence> {
    lls_of_vertices(&s.vertices)
}

fn lls_of_vertices(v: &[LatticePoint]) -> Result<CfSequence> {
    if v.len() < 2 {
        return Err(Error::DegenerateSail);
    }
    let mut out = Vec::with_capacity(2 * v.len() - 3);
    for k in 0..v.len() - 1 {
        if k > 0 {
            out.push(Ratio::from_integer(integer_sine(&v[k - 1], &v[k], &v[k + 1])?));
        }
        out.push(Ratio::from_integer(integer_length(&v[k], &v[k + 1])?));
    }
    CfSequence::new(out)
}

fn cross(o: (i128, i128), a: (i128, i128), b: (i128, i128)) -> i128 {
    (a.0 - o.0) * (b.1 - o.1) - (a.1 - o.1) * (b.0 - o.0)
}

/// Andrew's monotone chain; strict hull (collinear points dropped), CCW.
fn convex_hull(mut pts: Vec<(i128, i128)>) -> Vec<(i128, i128)> {
    pts.sort_unstable();
    pts.dedup();
    if pts.len() < 3 {
        return pts;
    }
    let mut lower: Vec<(i128, i128)> = Vec::new();
    for &p in &pts {
        while lower.len() >= 2 && cross(lower[lower.len() - 2], lower[lower.len() - 1], p) <= 0 {
            lower.pop();
        }
        lower.push(p);
    }
    let mut upper: Vec<(i128, i128)> = Vec::new();
    for &p in pts.iter().rev() {
        while upper.len() >= 2 && cross(upper[upper.len() - 2], upper[upper.len() - 1], p) <= 0 {
            upper.pop();
        }
        upper.push(p);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

#[derive(Serialize)]
struct SailWire {
    vertices: Vec<[String; 2]>,
    lls: CfSequence,
}

impl SailResult {
    /// `{"vertices": [[x, y], ...], "lls": ["a", ...]}`
    pub fn to_json(&self) -> serde_json::Value {
        let w = SailWire {
            vertices: self.vertices.iter().map(|v| [v.x.to_string(), v.y.to_string()]).collect(),
            lls: self.lls.clone(),
        };
        let mut j = serde_json::to_value(w).expect("serializable");
        // coordinates are integers; emit them as JSON numbers when they fit
        if let Some(arr) = j.get_mut("vertices").and_then(|v| v.as_array_mut()) {
            for (slot, v) in arr.iter_mut().zip(&self.vertices) {
                if let (Some(x), Some(y)) = (v.x.to_i64(), v.y.to_i64()) {
                    *slot = serde_json::json!([x, y]);
                }
            }
        }
        j
    }

    /// One vertex per row under the header `x,y`.
    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["x", "y"])?;
        for v in &self.vertices {
            w.write_record([v.x.to_string(), v.y.to_string()])?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Io(e.to_string()))?;
        Ok(String::from_utf8(bytes).expect("utf-8"))
    }
}
