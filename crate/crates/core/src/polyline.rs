//! Broken lines and their LLS-sequences with respect to an observation point.
//!
//! Elements are indexed from zero: even positions are *area elements*
//! `det(A_k - O, A_{k+1} - O)`, one per edge, and odd positions are *angle
//! elements* `det(A_k - A_{k+1}, A_{k+2} - A_{k+1}) / (area_k * area_{k+1})`,
//! one per interior vertex. All areas are oriented.
//!
//! [`build`] synthesizes a broken line from a frame and a sequence, and
//! [`lls_of`] recovers the sequence exactly. With the normalized frame
//! `O = (0,0)`, `A_0 = (1,0)`, `v = (0,1)` the last vertex is `(Q, P)`, the
//! continuant pair of the sequence; closure is `P = 0, Q = 1`.

use crate::cf::{final_continuant, CfSequence, Continuant};
use crate::error::{Error, Result};
use crate::scalar::{Point2, Ratio, Scalar};

/// Default collinearity tolerance for the floating path.
pub const COLLINEAR_TOL: f64 = 1e-12;
/// Default closure tolerance for the floating path.
pub const CLOSURE_TOL: f64 = 1e-9;

/// Tolerances used by the floating path; ignored by exact scalars.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    pub collinear: f64,
    pub closure: f64,
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance { collinear: COLLINEAR_TOL, closure: CLOSURE_TOL }
    }
}

/// Observation point, first vertex and direction of the first edge.
#[derive(Debug, Clone, PartialEq)]
pub struct Frame<T> {
    pub o: Point2<T>,
    pub a0: Point2<T>,
    pub v: Point2<T>,
}

impl<T: Scalar> Frame<T> {
    pub fn new(o: Point2<T>, a0: Point2<T>, v: Point2<T>) -> Self {
        Frame { o, a0, v }
    }

    /// `O = (0,0)`, `A_0 = (1,0)`, `v = (0,1)`.
    pub fn normalized() -> Self {
        Frame {
            o: Point2::origin(),
            a0: Point2::new(T::one(), T::zero()),
            v: Point2::new(T::zero(), T::one()),
        }
    }

    fn validate(&self, tol: &Tolerance) -> Result<T> {
        let d = self.a0.sub(&self.o).cross(&self.v);
        if d.is_negligible(tol.collinear) {
            return Err(Error::DegenerateFrame);
        }
        Ok(d)
    }
}

/// Alternating area/angle elements of a broken line; odd length `2n - 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct LlsSequence<T> {
    elements: Vec<T>,
}

impl<T: Scalar> LlsSequence<T> {
    pub fn new(elements: Vec<T>) -> Result<Self> {
        Self::with_tolerance(elements, &Tolerance::default())
    }

    pub fn with_tolerance(elements: Vec<T>, tol: &Tolerance) -> Result<Self> {
        if elements.len() % 2 == 0 {
            return Err(Error::InvalidLls(format!(
                "length must be odd (2n-1 for n edges), got {}",
                elements.len()
            )));
        }
        if let Some(i) = elements.iter().step_by(2).position(|a| a.is_negligible(tol.collinear)) {
            return Err(Error::InvalidLls(format!("area element at position {} is zero", 2 * i)));
        }
        Ok(LlsSequence { elements })
    }

    pub fn parse(s: &str) -> Result<Self> {
        let elems = s
            .split(',')
            .filter(|t| !t.trim().is_empty())
            .map(T::parse_text)
            .collect::<Result<Vec<_>>>()?;
        Self::new(elems)
    }

    pub fn elements(&self) -> &[T] {
        &self.elements
    }

    pub fn edges(&self) -> usize {
        self.elements.len().div_ceil(2)
    }

    /// Area element of edge `k`.
    pub fn area(&self, k: usize) -> &T {
        &self.elements[2 * k]
    }

    /// Angle element at vertex `k + 1`.
    pub fn angle(&self, k: usize) -> &T {
        &self.elements[2 * k + 1]
    }

    pub fn areas(&self) -> impl Iterator<Item = &T> {
        self.elements.iter().step_by(2)
    }

    pub fn angles(&self) -> impl Iterator<Item = &T> {
        self.elements.iter().skip(1).step_by(2)
    }

    pub fn render(&self) -> String {
        self.elements.iter().map(Scalar::render).collect::<Vec<_>>().join(",")
    }
}

impl TryFrom<CfSequence> for LlsSequence<Ratio> {
    type Error = Error;

    fn try_from(s: CfSequence) -> Result<Self> {
        LlsSequence::new(s.into_elements())
    }
}

impl From<LlsSequence<Ratio>> for CfSequence {
    fn from(s: LlsSequence<Ratio>) -> Self {
        CfSequence::new(s.elements).expect("LLS sequences are nonempty")
    }
}

/// Ordered vertices with a distinguished observation point.
#[derive(Debug, Clone, PartialEq)]
pub struct Polyline<T> {
    pub vertices: Vec<Point2<T>>,
    pub o: Point2<T>,
}

impl<T: Scalar> Polyline<T> {
    pub fn new(vertices: Vec<Point2<T>>, o: Point2<T>) -> Self {
        Polyline { vertices, o }
    }

    pub fn first(&self) -> &Point2<T> {
        &self.vertices[0]
    }

    pub fn last(&self) -> &Point2<T> {
        self.vertices.last().expect("nonempty polyline")
    }
}

/// Synthesizes the broken line of `lls` starting from `frame`.
///
/// `A_1 = A_0 + lambda v` with `det(A_0 - O, lambda v) = area_0`. For `k >= 1`
/// the auxiliary point `P` on line `A_{k-1} A_k` has `det(A_k - O, P - O) = 1`,
/// `Q = P + angle_{k-1} (A_k - O)` and `A_{k+1} = A_k + area_k (Q - A_k)`.
pub fn build<T: Scalar>(frame: &Frame<T>, lls: &LlsSequence<T>) -> Result<Polyline<T>> {
    build_with(frame, lls, &Tolerance::default())
}

pub fn build_with<T: Scalar>(
    frame: &Frame<T>,
    lls: &LlsSequence<T>,
    tol: &Tolerance,
) -> Result<Polyline<T>> {
    let d = frame.validate(tol)?;
    let o = &frame.o;
    let lambda = lls.area(0).clone() / d;
    let mut verts = Vec::with_capacity(lls.edges() + 1);
    verts.push(frame.a0.clone());
    verts.push(frame.a0.add(&frame.v.scale(&lambda)));
    for k in 1..lls.edges() {
        let prev = &verts[k - 1];
        let cur = &verts[k];
        let inv = T::one() / lls.area(k - 1).clone();
        let p = cur.add(&cur.sub(prev).scale(&inv));
        let q = p.add(&cur.sub(o).scale(lls.angle(k - 1)));
        let next = cur.add(&q.sub(cur).scale(lls.area(k)));
        verts.push(next);
    }
    Ok(Polyline::new(verts, o.clone()))
}

/// LLS-sequence of a broken line with respect to its observation point.
pub fn lls_of<T: Scalar>(p: &Polyline<T>) -> Result<LlsSequence<T>> {
    lls_of_with(p, &Tolerance::default())
}

pub fn lls_of_with<T: Scalar>(p: &Polyline<T>, tol: &Tolerance) -> Result<LlsSequence<T>> {
    let v = &p.vertices;
    if v.len() < 2 {
        return Err(Error::InvalidArgument("a broken line needs at least two vertices".into()));
    }
    let areas: Vec<T> = v
        .windows(2)
        .enumerate()
        .map(|(k, w)| {
            let a = w[0].sub(&p.o).cross(&w[1].sub(&p.o));
            if a.is_negligible(tol.collinear) {
                Err(Error::DegeneratePolyline { index: k })
            } else {
                Ok(a)
            }
        })
        .collect::<Result<_>>()?;
    let mut out = Vec::with_capacity(2 * areas.len() - 1);
    for k in 0..areas.len() {
        if k > 0 {
            let num = v[k - 1].sub(&v[k]).cross(&v[k + 1].sub(&v[k]));
            out.push(num / (areas[k - 1].clone() * areas[k].clone()));
        }
        out.push(areas[k].clone());
    }
    Ok(LlsSequence { elements: out })
}

/// A 2x2 matrix `[[a, b], [c, d]]` acting on column vectors.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix2<T> {
    pub a: T,
    pub b: T,
    pub c: T,
    pub d: T,
}

impl<T: Scalar> Matrix2<T> {
    pub fn new(a: T, b: T, c: T, d: T) -> Self {
        Matrix2 { a, b, c, d }
    }

    pub fn identity() -> Self {
        Matrix2::new(T::one(), T::zero(), T::zero(), T::one())
    }

    pub fn det(&self) -> T {
        self.a.clone() * self.d.clone() - self.b.clone() * self.c.clone()
    }

    pub fn apply(&self, p: &Point2<T>) -> Point2<T> {
        Point2::new(
            self.a.clone() * p.x.clone() + self.b.clone() * p.y.clone(),
            self.c.clone() * p.x.clone() + self.d.clone() * p.y.clone(),
        )
    }

    pub fn mul(&self, o: &Self) -> Self {
        Matrix2::new(
            self.a.clone() * o.a.clone() + self.b.clone() * o.c.clone(),
            self.a.clone() * o.b.clone() + self.b.clone() * o.d.clone(),
            self.c.clone() * o.a.clone() + self.d.clone() * o.c.clone(),
            self.c.clone() * o.b.clone() + self.d.clone() * o.d.clone(),
        )
    }
}

/// Image of a broken line (and of its observation point) under `m`.
///
/// If `det m = lambda`, area elements scale by `lambda` and angle elements
/// by `1/lambda`.
pub fn transform<T: Scalar>(p: &Polyline<T>, m: &Matrix2<T>) -> Result<Polyline<T>> {
    if m.det().is_negligible(COLLINEAR_TOL) {
        return Err(Error::SingularMatrix);
    }
    Ok(Polyline::new(p.vertices.iter().map(|v| m.apply(v)).collect(), m.apply(&p.o)))
}

/// Continuant pair `(P, Q)` of the full sequence; the normalized frame ends
/// at `(Q, P)`.
pub fn endpoint_pair<T: Scalar>(lls: &LlsSequence<T>) -> Continuant<T> {
    final_continuant(lls.elements())
}

/// Whether the broken line built in the normalized frame returns to `A_0`.
pub fn is_closed<T: Scalar>(lls: &LlsSequence<T>) -> bool {
    is_closed_with(lls, &Tolerance::default())
}

pub fn is_closed_with<T: Scalar>(lls: &LlsSequence<T>, tol: &Tolerance) -> bool {
    let c = endpoint_pair(lls);
    c.p.is_negligible(tol.closure) && (c.q - T::one()).is_negligible(tol.closure)
}

/// Whether both continued fractions have the same (projective) value, i.e.
/// the endpoints of the two broken lines are collinear with `O` when they
/// share the start data.
///
/// Takes raw elements so that any finite continued fraction (of either
/// parity) can be compared; panics on an empty slice.
pub fn collinear_endpoints<T: Scalar>(l1: &[T], l2: &[T]) -> bool {
    let (a, b) = (final_continuant(l1), final_continuant(l2));
    let cross = a.p.clone() * b.q.clone() - a.q.clone() * b.p.clone();
    if T::EXACT {
        return cross.is_negligible(0.0);
    }
    let scale = (a.p.to_f64().hypot(a.q.to_f64()) * b.p.to_f64().hypot(b.q.to_f64())).max(1.0);
    cross.to_f64().abs() <= CLOSURE_TOL * scale
}

/// The two closure polynomials of a three-edge broken line `[a0, .., a4]`,
/// written out monomial by monomial: `(P, Q)` of the continued fraction.
///
/// A 5-element sequence closes into a triangle iff this returns `(0, 1)`.
pub fn triangle_polynomials<T: Scalar>(s: &[T; 5]) -> (T, T) {
    let [a0, a1, a2, a3, a4] = s.clone();
    let m = |xs: &[&T]| xs.iter().fold(T::one(), |acc, x| acc * (*x).clone());
    let numer = m(&[&a0, &a1, &a2, &a3, &a4])
        + m(&[&a0, &a1, &a2])
        + m(&[&a0, &a1, &a4])
        + m(&[&a0, &a3, &a4])
        + m(&[&a2, &a3, &a4])
        + a0.clone()
        + a2.clone()
        + a4.clone();
    let denom = m(&[&a1, &a2, &a3, &a4]) + m(&[&a1, &a2]) + m(&[&a1, &a4]) + m(&[&a3, &a4]) + T::one();
    (numer, denom)
}

impl<T: Scalar> Polyline<T> {
    /// CSV with header `x,y`, one vertex per row.
    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["x", "y"])?;
        for v in &self.vertices {
            w.write_record([v.x.render(), v.y.render()])?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Io(e.to_string()))?;
        Ok(String::from_utf8(bytes).expect("utf-8"))
    }

    /// `{"O": [x, y], "vertices": [[x, y], ...]}`; exact scalars as `"p/q"`
    /// strings, floats as JSON numbers.
    pub fn to_json(&self) -> serde_json::Value {
        let pt = |p: &Point2<T>| -> serde_json::Value {
            if T::EXACT {
                serde_json::json!([p.x.render(), p.y.render()])
            } else {
                serde_json::json!([p.x.to_f64(), p.y.to_f64()])
            }
        };
        serde_json::json!({
            "O": pt(&self.o),
            "vertices": self.vertices.iter().map(pt).collect::<Vec<_>>(),
        })
    }

    /// Reads the CSV produced by [`Polyline::to_csv`]; `o` is supplied separately.
    pub fn from_csv(text: &str, o: Point2<T>) -> Result<Self> {
        let mut r = csv::Reader::from_reader(text.as_bytes());
        let headers = r.headers()?.clone();
        if headers.iter().map(str::trim).collect::<Vec<_>>() != ["x", "y"] {
            return Err(Error::Io(format!("expected header x,y, got {:?}", headers)));
        }
        let mut vertices = Vec::new();
        for rec in r.records() {
            let rec = rec?;
            vertices.push(Point2::new(T::parse_text(&rec[0])?, T::parse_text(&rec[1])?));
        }
        Ok(Polyline::new(vertices, o))
    }

    /// Reads the JSON produced by [`Polyline::to_json`]; coordinates may be
    /// strings or numbers.
    pub fn from_json(v: &serde_json::Value) -> Result<Self> {
        let scalar = |x: &serde_json::Value| -> Result<T> {
            match x {
                serde_json::Value::String(s) => T::parse_text(s),
                serde_json::Value::Number(n) => T::parse_text(&n.to_string()),
                other => Err(Error::Io(format!("bad coordinate {other}"))),
            }
        };
        let point = |x: &serde_json::Value| -> Result<Point2<T>> {
            match x.as_array().map(|a| a.as_slice()) {
                Some([a, b]) => Ok(Point2::new(scalar(a)?, scalar(b)?)),
                _ => Err(Error::Io(format!("bad point {x}"))),
            }
        };
        let o = match v.get("O") {
            Some(o) => point(o)?,
            None => Point2::origin(),
        };
        let vertices = v
            .get("vertices")
            .and_then(|a| a.as_array())
            .ok_or_else(|| Error::Io("missing \"vertices\" array".into()))?
            .iter()
            .map(point)
            .collect::<Result<Vec<_>>>()?;
        Ok(Polyline::new(vertices, o))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{frac, int};

    fn lls(v: &[i64]) -> LlsSequence<Ratio> {
        LlsSequence::new(v.iter().map(|&x| int(x)).collect()).unwrap()
    }

    fn pt(x: i64, y: i64) -> Point2<Ratio> {
        Point2::from_ints(x, y)
    }

    #[test]
    fn three_element_example() {
        // [a, b, c] = [3, 5, 7]: A1 = (1, a), A2 = (1 + bc, a + c + abc)
        let (a, b, c) = (3, 5, 7);
        let p = build(&Frame::normalized(), &lls(&[a, b, c])).unwrap();
        assert_eq!(p.vertices, vec![pt(1, 0), pt(1, a), pt(1 + b * c, a + c + a * b * c)]);
        assert_eq!(lls_of(&p).unwrap(), lls(&[a, b, c]));
    }

    #[test]
    fn single_edge() {
        let p = build(&Frame::normalized(), &lls(&[5])).unwrap();
        assert_eq!(p.vertices, vec![pt(1, 0), pt(1, 5)]);
        let q = Polyline::new(vec![pt(2, 1), pt(-1, 3)], Point2::origin());
        assert_eq!(lls_of(&q).unwrap(), lls(&[7]));
    }

    #[test]
    fn triangle_closes() {
        let s = lls(&[2, -1, 3, -2, 1]);
        let p = build(&Frame::normalized(), &s).unwrap();
        assert_eq!(p.vertices.len(), 4);
        assert_eq!(p.last(), &pt(1, 0));
        assert!(is_closed(&s));
        let e = endpoint_pair(&s);
        assert_eq!((e.p, e.q), (int(0), int(1)));
    }

    #[test]
    fn square() {
        let sq = Polyline::new(
            vec![pt(1, 1), pt(-1, 1), pt(-1, -1), pt(1, -1), pt(1, 1)],
            Point2::origin(),
        );
        let s = lls_of(&sq).unwrap();
        assert_eq!(s, lls(&[2, -1, 2, -1, 2, -1, 2]));
        assert!(is_closed(&s));
    }

    #[test]
    fn open_sequence() {
        assert!(!is_closed(&lls(&[1, 2, 2])));
    }

    #[test]
    fn second_figure_endpoint() {
        let s: LlsSequence<Ratio> = LlsSequence::parse("1,-2,2,-1/2,-4").unwrap();
        let e = endpoint_pair(&s);
        assert_eq!((e.p.clone(), e.q.clone()), (int(1), int(-1)));
        let p = build(&Frame::normalized(), &s).unwrap();
        assert_eq!(p.last(), &Point2::new(e.q, e.p));
    }

    #[test]
    fn invalid_sequences() {
        assert!(matches!(LlsSequence::<Ratio>::parse("1,2"), Err(Error::InvalidLls(_))));
        assert!(matches!(LlsSequence::<Ratio>::parse("1,2,0"), Err(Error::InvalidLls(_))));
        // zero angle elements are fine
        assert!(LlsSequence::<Ratio>::parse("1,0,1").is_ok());
    }

    #[test]
    fn degenerate_frame_and_polyline() {
        let f = Frame::new(Point2::origin(), pt(1, 0), pt(2, 0));
        assert_eq!(build(&f, &lls(&[1])), Err(Error::DegenerateFrame));
        let p = Polyline::new(vec![pt(1, 0), pt(1, 1), pt(2, 2)], Point2::origin());
        assert_eq!(lls_of(&p), Err(Error::DegeneratePolyline { index: 1 }));
    }

    #[test]
    fn general_observation_point() {
        let f = Frame::new(pt(3, -2), pt(4, -2), pt(0, 1));
        let s = lls(&[2, -1, 3, -2, 1]);
        let p = build(&f, &s).unwrap();
        assert_eq!(p.last(), &pt(4, -2));
        assert_eq!(lls_of(&p).unwrap(), s);
    }

    #[test]
    fn diagonal_scaling() {
        let p = build(&Frame::normalized(), &lls(&[3, 5, 7])).unwrap();
        let m = Matrix2::new(int(2), int(0), int(0), int(1));
        let img = lls_of(&transform(&p, &m).unwrap()).unwrap();
        assert_eq!(img.elements(), &[int(6), frac(5, 2), int(14)]);
        assert_eq!(lls_of(&transform(&p, &Matrix2::identity()).unwrap()).unwrap(), lls(&[3, 5, 7]));
        let sing = Matrix2::new(int(1), int(2), int(2), int(4));
        assert_eq!(transform(&p, &sing), Err(Error::SingularMatrix));
    }

    #[test]
    fn collinear_endpoint_criterion() {
        let ints = |v: &[i64]| v.iter().map(|&x| int(x)).collect::<Vec<_>>();
        assert!(collinear_endpoints(&ints(&[1, 2, 2]), &ints(&[1, 2, 1, 1])));
        assert!(!collinear_endpoints(&ints(&[1, 2, 2]), &ints(&[1, 2, 1])));
        let tri = lls(&[2, -1, 3, -2, 1]);
        let sq = lls(&[2, -1, 2, -1, 2, -1, 2]);
        assert!(collinear_endpoints(tri.elements(), sq.elements()));
        assert!(!collinear_endpoints(&ints(&[1]), &ints(&[2])));
        assert!(collinear_endpoints(&[1.0, 2.0, 2.0], &[1.0, 2.0, 1.0, 1.0]));
    }

    #[test]
    fn triangle_polynomials_match_continuants() {
        let s = [int(2), int(-1), int(3), int(-2), int(1)];
        assert_eq!(triangle_polynomials(&s), (int(0), int(1)));
    }

    #[test]
    fn float_mode_mirrors_exact() {
        let s: LlsSequence<f64> = LlsSequence::new(vec![2.0, -1.0, 3.0, -2.0, 1.0]).unwrap();
        let p = build(&Frame::normalized(), &s).unwrap();
        assert!(p.last().dist(&Point2::new(1.0, 0.0)) < 1e-12);
        assert!(is_closed(&s));
        let back = lls_of(&p).unwrap();
        for (x, y) in back.elements().iter().zip(s.elements()) {
            assert!((x - y).abs() < 1e-12);
        }
        assert!(LlsSequence::<f64>::new(vec![1e-13]).is_err());
    }

    #[test]
    fn csv_and_json_round_trip() {
        let p = build(&Frame::normalized(), &LlsSequence::parse("1,-2,2,-1/2,-4").unwrap()).unwrap();
        let csv = p.to_csv().unwrap();
        assert!(csv.starts_with("x,y\n1,0\n1,1\n"));
        assert_eq!(Polyline::<Ratio>::from_csv(&csv, Point2::origin()).unwrap(), p);
        let j = p.to_json();
        assert_eq!(j["O"], serde_json::json!(["0", "0"]));
        assert_eq!(Polyline::<Ratio>::from_json(&j).unwrap(), p);
    }
}
