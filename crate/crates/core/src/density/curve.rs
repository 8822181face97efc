//! Parametrized plane curves, closed-form presets and arclength
//! reparametrization.

use std::f64::consts::PI;
use std::fmt;

use crate::error::{Error, Result};
use crate::quadrature::{gk15, integrate};
use crate::scalar::Point2;

pub type Vec2 = Point2<f64>;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ParamKind {
    /// Unit speed.
    Arclength,
    General,
}

/// A regular `C^2` plane curve with analytic first and second derivatives.
pub trait ParamCurve: Send + Sync {
    fn point(&self, t: f64) -> Vec2;
    fn deriv1(&self, t: f64) -> Vec2;
    fn deriv2(&self, t: f64) -> Vec2;
    fn domain(&self) -> (f64, f64);
    fn param_kind(&self) -> ParamKind;

    fn speed(&self, t: f64) -> f64 {
        self.deriv1(t).norm()
    }
}

impl<C: ParamCurve + ?Sized> ParamCurve for &C {
    fn point(&self, t: f64) -> Vec2 {
        (**self).point(t)
    }
    fn deriv1(&self, t: f64) -> Vec2 {
        (**self).deriv1(t)
    }
    fn deriv2(&self, t: f64) -> Vec2 {
        (**self).deriv2(t)
    }
    fn domain(&self) -> (f64, f64) {
        (**self).domain()
    }
    fn param_kind(&self) -> ParamKind {
        (**self).param_kind()
    }
}

impl<C: ParamCurve + ?Sized> ParamCurve for Box<C> {
    fn point(&self, t: f64) -> Vec2 {
        (**self).point(t)
    }
    fn deriv1(&self, t: f64) -> Vec2 {
        (**self).deriv1(t)
    }
    fn deriv2(&self, t: f64) -> Vec2 {
        (**self).deriv2(t)
    }
    fn domain(&self) -> (f64, f64) {
        (**self).domain()
    }
    fn param_kind(&self) -> ParamKind {
        (**self).param_kind()
    }
}

fn v(x: f64, y: f64) -> Vec2 {
    Point2 { x, y }
}

/// Curves with known areal and angular densities.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Preset {
    /// The vertical line `x = a`, `gamma(s) = (a, s)`, observed from the origin.
    Line { a: f64 },
    /// `(a cos t, b sin t)` observed from its center.
    EllipseCenter { a: f64, b: f64 },
    /// `(a cos t, b sin t)` observed from the focus `(-sqrt(a^2 - b^2), 0)`.
    EllipseFocus { a: f64, b: f64 },
    /// `(a e^{bt} cos t, a e^{bt} sin t)` observed from the origin.
    LogSpiral { a: f64, b: f64 },
}

impl Preset {
    pub fn line(a: f64) -> Result<Self> {
        Preset::Line { a }.validated()
    }

    pub fn ellipse_center(a: f64, b: f64) -> Result<Self> {
        Preset::EllipseCenter { a, b }.validated()
    }

    pub fn ellipse_focus(a: f64, b: f64) -> Result<Self> {
        Preset::EllipseFocus { a, b }.validated()
    }

    pub fn log_spiral(a: f64, b: f64) -> Result<Self> {
        Preset::LogSpiral { a, b }.validated()
    }

    /// Builds a preset from its name and the `a`, `b` parameters.
    pub fn from_name(name: &str, a: f64, b: f64) -> Result<Self> {
        match name {
            "line" => Preset::line(a),
            "ellipse_center" => Preset::ellipse_center(a, b),
            "ellipse_focus" => Preset::ellipse_focus(a, b),
            "log_spiral" => Preset::log_spiral(a, b),
            other => Err(Error::InvalidPreset(format!(
                "unknown preset {other:?} (line|ellipse_center|ellipse_focus|log_spiral)"
            ))),
        }
    }

    fn validated(self) -> Result<Self> {
        let finite = |x: f64| x.is_finite();
        match self {
            Preset::Line { a } if finite(a) => Ok(self),
            Preset::EllipseCenter { a, b } | Preset::EllipseFocus { a, b }
                if finite(a) && finite(b) && a >= b && b > 0.0 =>
            {
                Ok(self)
            }
            Preset::LogSpiral { a, b } if finite(a) && finite(b) && a > 0.0 => Ok(self),
            Preset::Line { .. } => Err(Error::InvalidPreset("line needs a finite a".into())),
            Preset::EllipseCenter { .. } | Preset::EllipseFocus { .. } => {
                Err(Error::InvalidPreset("ellipse needs a >= b > 0".into()))
            }
            Preset::LogSpiral { .. } => Err(Error::InvalidPreset("spiral needs a > 0".into())),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Preset::Line { .. } => "line",
            Preset::EllipseCenter { .. } => "ellipse_center",
            Preset::EllipseFocus { .. } => "ellipse_focus",
            Preset::LogSpiral { .. } => "log_spiral",
        }
    }

    /// The observation point the closed forms refer to.
    pub fn observer(&self) -> Vec2 {
        match *self {
            Preset::EllipseFocus { a, b } => v(-(a * a - b * b).sqrt(), 0.0),
            _ => v(0.0, 0.0),
        }
    }

    pub fn default_domain(&self) -> (f64, f64) {
        match self {
            Preset::Line { .. } => (-5.0, 5.0),
            _ => (0.0, 2.0 * PI),
        }
    }

    pub fn curve(&self) -> PresetCurve {
        PresetCurve { preset: *self, domain: self.default_domain() }
    }

    pub fn curve_on(&self, lo: f64, hi: f64) -> Result<PresetCurve> {
        if !(lo < hi) || !lo.is_finite() || !hi.is_finite() {
            return Err(Error::InvalidArgument(format!("bad domain [{lo}, {hi}]")));
        }
        Ok(PresetCurve { preset: *self, domain: (lo, hi) })
    }

    /// Closed-form areal density at the curve parameter `t`.
    pub fn areal_closed(&self, t: f64) -> f64 {
        let (s, c) = t.sin_cos();
        match *self {
            Preset::Line { a } => a,
            Preset::EllipseCenter { a, b } => a * b / (a * a * s * s + b * b * c * c).sqrt(),
            Preset::EllipseFocus { a, b } => {
                let f = (a * a - b * b).sqrt();
                (a * b + b * f * c) / (a * a * s * s + b * b * c * c).sqrt()
            }
            Preset::LogSpiral { a, b } => a * (b * t).exp() / (b * b + 1.0).sqrt(),
        }
    }

    /// Closed-form angular density at the curve parameter `t`.
    pub fn angular_closed(&self, t: f64) -> f64 {
        let (s, c) = t.sin_cos();
        match *self {
            Preset::Line { .. } => 0.0,
            Preset::EllipseCenter { a, b } => 1.0 / (a * b * (a * a * s * s + b * b * c * c).sqrt()),
            Preset::EllipseFocus { a, b } => {
                let f = (a * a - b * b).sqrt();
                let k = a + c * f;
                a / (b * (a * a * s * s + b * b * c * c).sqrt() * k * k)
            }
            Preset::LogSpiral { a, b } => (-3.0 * b * t).exp() * (b * b + 1.0).sqrt() / a.powi(3),
        }
    }
}

impl fmt::Display for Preset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Preset::Line { a } => write!(f, "line(a={a})"),
            Preset::EllipseCenter { a, b } => write!(f, "ellipse_center(a={a}, b={b})"),
            Preset::EllipseFocus { a, b } => write!(f, "ellipse_focus(a={a}, b={b})"),
            Preset::LogSpiral { a, b } => write!(f, "log_spiral(a={a}, b={b})"),
        }
    }
}

/// A preset evaluated on a parameter interval.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PresetCurve {
    pub preset: Preset,
    pub domain: (f64, f64),
}

impl ParamCurve for PresetCurve {
    fn point(&self, t: f64) -> Vec2 {
        let (s, c) = t.sin_cos();
        match self.preset {
            Preset::Line { a } => v(a, t),
            Preset::EllipseCenter { a, b } | Preset::EllipseFocus { a, b } => v(a * c, b * s),
            Preset::LogSpiral { a, b } => {
                let r = a * (b * t).exp();
                v(r * c, r * s)
            }
        }
    }

    fn deriv1(&self, t: f64) -> Vec2 {
        let (s, c) = t.sin_cos();
        match self.preset {
            Preset::Line { .. } => v(0.0, 1.0),
            Preset::EllipseCenter { a, b } | Preset::EllipseFocus { a, b } => v(-a * s, b * c),
            Preset::LogSpiral { a, b } => {
                let r = a * (b * t).exp();
                v(r * (b * c - s), r * (b * s + c))
            }
        }
    }

    fn deriv2(&self, t: f64) -> Vec2 {
        let (s, c) = t.sin_cos();
        match self.preset {
            Preset::Line { .. } => v(0.0, 0.0),
            Preset::EllipseCenter { a, b } | Preset::EllipseFocus { a, b } => v(-a * c, -b * s),
            Preset::LogSpiral { a, b } => {
                let r = a * (b * t).exp();
                let k = b * b - 1.0;
                v(r * (k * c - 2.0 * b * s), r * (k * s + 2.0 * b * c))
            }
        }
    }

    fn domain(&self) -> (f64, f64) {
        self.domain
    }

    fn param_kind(&self) -> ParamKind {
        match self.preset {
            Preset::Line { .. } => ParamKind::Arclength,
            Preset::EllipseCenter { a, b } | Preset::EllipseFocus { a, b } if a == 1.0 && b == 1.0 => {
                ParamKind::Arclength
            }
            Preset::LogSpiral { a, b } if a == 1.0 && b == 0.0 => ParamKind::Arclength,
            _ => ParamKind::General,
        }
    }
}

/// Nodes of the cumulative-length table used by [`ArclengthCurve`].
const TABLE_SEGMENTS: usize = 1024;

/// A curve reparametrized by arclength `s in [0, L]`.
#[derive(Debug, Clone)]
pub struct ArclengthCurve<C> {
    inner: C,
    nodes: Vec<f64>,
    cumulative: Vec<f64>,
}

/// Reparametrizes `c` by arclength.
///
/// Cumulative length is tabulated by adaptive quadrature; positions are
/// found by Newton iteration on `L(t) = s` to a tolerance of `1e-10`
/// relative or better. Derivatives follow from the chain rule, so the speed
/// is one to rounding.
pub fn by_arclength<C: ParamCurve>(c: C) -> Result<ArclengthCurve<C>> {
    let (lo, hi) = c.domain();
    let h = (hi - lo) / TABLE_SEGMENTS as f64;
    let nodes: Vec<f64> = (0..=TABLE_SEGMENTS).map(|j| lo + h * j as f64).collect();
    for &t in &nodes {
        if !(c.speed(t) > 0.0) {
            return Err(Error::NotRegular { t });
        }
    }
    let mut cumulative = Vec::with_capacity(nodes.len());
    cumulative.push(0.0);
    let mut acc = 0.0;
    for w in nodes.windows(2) {
        acc += integrate(|t| c.speed(t), w[0], w[1], 1e-14, 256)?.value;
        cumulative.push(acc);
    }
    Ok(ArclengthCurve { inner: c, nodes, cumulative })
}

impl<C: ParamCurve> ArclengthCurve<C> {
    pub fn length(&self) -> f64 {
        *self.cumulative.last().expect("nonempty table")
    }

    pub fn inner(&self) -> &C {
        &self.inner
    }

    /// Original parameter at arclength `s`; extrapolates slightly outside `[0, L]`.
    pub fn param_at(&self, s: f64) -> f64 {
        let j = match self.cumulative.binary_search_by(|x| x.total_cmp(&s)) {
            Ok(j) => return self.nodes[j],
            Err(j) => j.clamp(1, self.nodes.len() - 1) - 1,
        };
        let (t0, t1) = (self.nodes[j], self.nodes[j + 1]);
        let (c0, c1) = (self.cumulative[j], self.cumulative[j + 1]);
        let mut t = t0 + (t1 - t0) * (s - c0) / (c1 - c0);
        for _ in 0..30 {
            let (len, _) = gk15(&|u| self.inner.speed(u), t0, t);
            let g = c0 + len - s;
            let step = g / self.inner.speed(t);
            t -= step;
            if step.abs() <= 1e-15 * (1.0 + t.abs()) {
                break;
            }
        }
        t
    }
}

impl<C: ParamCurve> ParamCurve for ArclengthCurve<C> {
    fn point(&self, s: f64) -> Vec2 {
        self.inner.point(self.param_at(s))
    }

    fn deriv1(&self, s: f64) -> Vec2 {
        let d = self.inner.deriv1(self.param_at(s));
        let n = d.norm();
        v(d.x / n, d.y / n)
    }

    fn deriv2(&self, s: f64) -> Vec2 {
        let t = self.param_at(s);
        let d1 = self.inner.deriv1(t);
        let d2 = self.inner.deriv2(t);
        let n = d1.norm();
        let tan = v(d1.x / n, d1.y / n);
        let along = tan.dot(&d2);
        v((d2.x - tan.x * along) / (n * n), (d2.y - tan.y * along) / (n * n))
    }

    fn domain(&self) -> (f64, f64) {
        (0.0, self.length())
    }

    fn param_kind(&self) -> ParamKind {
        ParamKind::Arclength
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn preset_validation() {
        assert!(Preset::ellipse_center(1.0, 2.0).is_err());
        assert!(Preset::ellipse_focus(2.0, 0.0).is_err());
        assert!(Preset::log_spiral(-1.0, 0.2).is_err());
        assert!(Preset::from_name("parabola", 1.0, 1.0).is_err());
        assert_eq!(Preset::from_name("line", 3.0, 0.0).unwrap(), Preset::Line { a: 3.0 });
    }

    #[test]
    fn analytic_derivatives_match_differences() {
        let h = 1e-5;
        for p in [
            Preset::ellipse_center(2.0, 1.0).unwrap(),
            Preset::log_spiral(1.3, -0.2).unwrap(),
            Preset::line(2.0).unwrap(),
        ] {
            let c = p.curve();
            for t in [0.1, 0.7, 2.0] {
                let (a, b) = (c.point(t - h), c.point(t + h));
                let d1 = c.deriv1(t);
                assert!(((b.x - a.x) / (2.0 * h) - d1.x).abs() < 1e-8, "{p}");
                assert!(((b.y - a.y) / (2.0 * h) - d1.y).abs() < 1e-8, "{p}");
                let (a, b) = (c.deriv1(t - h), c.deriv1(t + h));
                let d2 = c.deriv2(t);
                assert!(((b.x - a.x) / (2.0 * h) - d2.x).abs() < 1e-8, "{p}");
                assert!(((b.y - a.y) / (2.0 * h) - d2.y).abs() < 1e-8, "{p}");
            }
        }
    }

    #[test]
    fn circle_is_already_unit_speed() {
        let c = Preset::ellipse_center(1.0, 1.0).unwrap().curve();
        let s = by_arclength(c).unwrap();
        assert!((s.length() - 2.0 * PI).abs() < 1e-12);
        for x in [0.0, 1.0, 3.0, 6.0] {
            assert!((s.param_at(x) - x).abs() < 1e-12);
            assert!(s.point(x).dist(&c.point(x)) < 1e-12);
        }
    }

    #[test]
    fn scaled_circle_doubles_domain() {
        let c = Preset::ellipse_center(2.0, 2.0).unwrap().curve();
        let s = by_arclength(c).unwrap();
        assert!((s.length() - 4.0 * PI).abs() < 1e-12);
        for x in [0.3, 2.0, 7.5] {
            assert!((s.deriv1(x).norm() - 1.0).abs() < 1e-8);
            assert!((s.param_at(x) - x / 2.0).abs() < 1e-12);
        }
    }

    #[test]
    fn ellipse_length_matches_quarter_integral() {
        let (a, b) = (2.0f64, 1.0f64);
        let s = by_arclength(Preset::ellipse_center(a, b).unwrap().curve()).unwrap();
        let k = 1.0 - b * b / (a * a);
        let quarter = integrate(|t: f64| (1.0 - k * t.cos().powi(2)).sqrt(), 0.0, PI / 2.0, 1e-13, 512)
            .unwrap()
            .value;
        assert!((s.length() - 4.0 * a * quarter).abs() < 1e-8);
        // inversion consistency: the arc from 0 to param_at(x) has length x
        for x in [0.5, 3.0, 9.0] {
            let t = s.param_at(x);
            let len = integrate(|u| s.inner().speed(u), 0.0, t, 1e-13, 512).unwrap().value;
            assert!((len - x).abs() < 1e-10);
            let d2 = s.deriv2(x);
            assert!(s.deriv1(x).dot(&d2).abs() < 1e-10);
        }
    }

    #[test]
    fn degenerate_curve_rejected() {
        struct Stuck;
        impl ParamCurve for Stuck {
            fn point(&self, _: f64) -> Vec2 {
                v(1.0, 1.0)
            }
            fn deriv1(&self, _: f64) -> Vec2 {
                v(0.0, 0.0)
            }
            fn deriv2(&self, _: f64) -> Vec2 {
                v(0.0, 0.0)
            }
            fn domain(&self) -> (f64, f64) {
                (0.0, 1.0)
            }
            fn param_kind(&self) -> ParamKind {
                ParamKind::General
            }
        }
        assert!(matches!(by_arclength(Stuck), Err(Error::NotRegular { .. })));
    }
}
