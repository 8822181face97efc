//! Areal and angular densities of plane curves.
//!
//! For a unit-speed curve `gamma` and an observation point `O`:
//!
//! * areal density `A(t) = det(gamma(t) - O, gamma'(t))`, the rate at which
//!   the radius vector sweeps (parallelogram) area;
//! * signed curvature `kappa(t)`;
//! * angular density `B(t)`, the triple-point limit of the angle elements,
//!   equal to `kappa / A^2`.
//!
//! All three are signed, counterclockwise positive. General parametrizations
//! are normalized to unit speed on the fly.

mod curve;
mod kepler;

pub use curve::{by_arclength, ArclengthCurve, ParamCurve, ParamKind, Preset, PresetCurve, Vec2};
pub use kepler::{kepler_lambda, kepler_lambda_with, kepler_motion, sector_law_residual, KeplerLambda, KeplerSample};

use crate::error::{Error, Result};
use crate::polyline::{lls_of, Polyline};
use crate::quadrature::{integrate, MAX_INTERVALS, REL_TOL};

/// `|A|` below which `B = kappa / A^2` is reported as degenerate.
pub const DEGENERACY_TOL: f64 = 1e-9;
/// Default arclength step of the finite-difference angular density.
pub const FD_EPSILON: f64 = 1e-4;

/// How the angular density is evaluated.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum AngularMethod {
    /// `kappa / A^2`.
    Curvature,
    /// Triple-point quotient at arclength step `eps` and `eps / 2`, combined
    /// by one Richardson step.
    FiniteDifference { eps: f64 },
}

fn check_domain<C: ParamCurve + ?Sized>(c: &C, t: f64) -> Result<()> {
    let (lo, hi) = c.domain();
    let slack = 1e-12 * (1.0 + lo.abs().max(hi.abs()));
    if t < lo - slack || t > hi + slack || t.is_nan() {
        return Err(Error::OutOfDomain { t, lo, hi });
    }
    Ok(())
}

/// Signed areal density `det(gamma - O, gamma') / |gamma'|`.
pub fn areal_density<C: ParamCurve + ?Sized>(c: &C, o: &Vec2, t: f64) -> Result<f64> {
    check_domain(c, t)?;
    let d1 = c.deriv1(t);
    Ok(c.point(t).sub(o).cross(&d1) / d1.norm())
}

/// Signed curvature `det(gamma', gamma'') / |gamma'|^3`.
pub fn curvature<C: ParamCurve + ?Sized>(c: &C, t: f64) -> Result<f64> {
    check_domain(c, t)?;
    let d1 = c.deriv1(t);
    Ok(d1.cross(&c.deriv2(t)) / d1.norm().powi(3))
}

/// Angular density `B(t)`; both methods return `kappa / A^2` in the limit.
pub fn angular_density<C: ParamCurve + ?Sized>(
    c: &C,
    o: &Vec2,
    t: f64,
    method: AngularMethod,
) -> Result<f64> {
    let a = areal_density(c, o, t)?;
    if a.abs() <= DEGENERACY_TOL {
        return Err(Error::DegenerateDensity { t });
    }
    match method {
        AngularMethod::Curvature => Ok(curvature(c, t)? / (a * a)),
        AngularMethod::FiniteDifference { eps } => {
            if !(eps > 0.0) {
                return Err(Error::InvalidArgument("finite-difference step must be > 0".into()));
            }
            let full = triple_point_quotient(c, o, t, eps);
            let half = triple_point_quotient(c, o, t, eps / 2.0);
            // the quotient is even in eps: error O(eps^2)
            Ok((4.0 * half - full) / 3.0)
        }
    }
}

/// `det(g(t+e) - g(t), g(t-e) - g(t)) / (e det(g(t-e) - O, g(t) - O) det(g(t) - O, g(t+e) - O))`
/// with `e` an arclength step, realized as the parameter step `e / |gamma'(t)|`.
fn triple_point_quotient<C: ParamCurve + ?Sized>(c: &C, o: &Vec2, t: f64, eps: f64) -> f64 {
    let h = eps / c.speed(t);
    let (prev, here, next) = (c.point(t - h), c.point(t), c.point(t + h));
    let num = next.sub(&here).cross(&prev.sub(&here));
    let back = prev.sub(o).cross(&here.sub(o));
    let fwd = here.sub(o).cross(&next.sub(o));
    num / (eps * back * fwd)
}

/// One row of a density dump.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensitySample {
    pub t: f64,
    pub point: Vec2,
    pub a: f64,
    /// `NaN` where the areal density is degenerate.
    pub b: f64,
    pub kappa: f64,
}

/// `n` uniformly spaced samples over the whole domain (endpoints included).
pub fn sample<C: ParamCurve + ?Sized>(c: &C, o: &Vec2, n: usize) -> Result<Vec<DensitySample>> {
    if n < 2 {
        return Err(Error::InvalidArgument("need at least two samples".into()));
    }
    let (lo, hi) = c.domain();
    (0..n)
        .map(|i| {
            let t = lo + (hi - lo) * i as f64 / (n - 1) as f64;
            let a = areal_density(c, o, t)?;
            let b = match angular_density(c, o, t, AngularMethod::Curvature) {
                Ok(b) => b,
                Err(Error::DegenerateDensity { .. }) => f64::NAN,
                Err(e) => return Err(e),
            };
            Ok(DensitySample { t, point: c.point(t), a, b, kappa: curvature(c, t)? })
        })
        .collect()
}

/// CSV with header `t,x,y,A,B,kappa`.
pub fn samples_to_csv(samples: &[DensitySample]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["t", "x", "y", "A", "B", "kappa"])?;
    for s in samples {
        w.write_record(
            [s.t, s.point.x, s.point.y, s.a, s.b, s.kappa].iter().map(|v| v.to_string()),
        )?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Io(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("utf-8"))
}

/// Triangle-sector area `1/2 int det(gamma - O, gamma') dt` swept from `t0` to `t1`.
pub fn sector_area<C: ParamCurve + ?Sized>(c: &C, o: &Vec2, t0: f64, t1: f64) -> Result<f64> {
    sector_area_with(c, o, t0, t1, REL_TOL)
}

/// [`sector_area`] with quadrature relative tolerance `rel_tol`.
pub fn sector_area_with<C: ParamCurve + ?Sized>(
    c: &C,
    o: &Vec2,
    t0: f64,
    t1: f64,
    rel_tol: f64,
) -> Result<f64> {
    check_domain(c, t0)?;
    check_domain(c, t1)?;
    let q = integrate(
        |t| c.point(t).sub(o).cross(&c.deriv1(t)),
        t0,
        t1,
        rel_tol,
        MAX_INTERVALS,
    )?;
    Ok(0.5 * q.value)
}

/// Piecewise-constant density built from a discretized curve.
///
/// `at(t)` reads `values[floor(n (t - start) / span) - first_index]`, i.e. the
/// element of the cell (areas) or of the left vertex of the cell (angles).
#[derive(Debug, Clone, PartialEq)]
pub struct StepDensity {
    pub n: usize,
    pub start: f64,
    pub span: f64,
    pub first_index: usize,
    pub values: Vec<f64>,
}

impl StepDensity {
    /// `None` outside the cells covered by `values`.
    pub fn at(&self, t: f64) -> Option<f64> {
        let cell = (self.n as f64 * (t - self.start) / self.span).floor();
        if cell < self.first_index as f64 {
            return None;
        }
        self.values.get(cell as usize - self.first_index).copied()
    }
}

/// Normalized step densities of the inscribed broken line with `n` edges.
///
/// Vertices sit at `t_lo + i T / n`. Area elements scale like `T / n`, so
/// both step functions are multiplied by `n / T`. Angle elements of a
/// counterclockwise-turning chord carry the opposite sign of `kappa`, so the
/// angular step function is negated to approximate `B = kappa / A^2`.
pub fn discretize<C: ParamCurve + ?Sized>(
    c: &C,
    o: &Vec2,
    n: usize,
) -> Result<(StepDensity, StepDensity)> {
    if c.param_kind() != ParamKind::Arclength {
        return Err(Error::InvalidArgument(
            "discretize needs an arclength parametrization; use by_arclength first".into(),
        ));
    }
    if n < 3 {
        return Err(Error::InvalidArgument("discretize needs n >= 3".into()));
    }
    let (lo, hi) = c.domain();
    let span = hi - lo;
    let vertices = (0..=n).map(|i| c.point(lo + span * i as f64 / n as f64)).collect();
    let lls = lls_of(&Polyline::new(vertices, *o))?;
    let scale = n as f64 / span;
    let areas = lls.areas().map(|a| a * scale).collect();
    let angles = lls.angles().map(|b| -b * scale).collect();
    Ok((
        StepDensity { n, start: lo, span, first_index: 0, values: areas },
        StepDensity { n, start: lo, span, first_index: 1, values: angles },
    ))
}

/// Curvature of the circle through three points (signed, CCW positive).
pub fn circumcurvature(p: &Vec2, q: &Vec2, r: &Vec2) -> f64 {
    2.0 * q.sub(p).cross(&r.sub(p)) / (p.dist(q) * q.dist(r) * r.dist(p))
}
