//! Motion with speed `1/A` (second Kepler law) and the third-law constant.

use std::f64::consts::PI;

use super::curve::{ParamCurve, Preset, Vec2};
use crate::error::{Error, Result};
use crate::quadrature::{integrate, MAX_INTERVALS, REL_TOL};

/// Speed constant of a planet on `ellipse_focus(a, b)` under the third law.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KeplerLambda {
    /// Positive branch of the speed constant.
    pub lambda: f64,
    /// Perimeter `L` of the ellipse.
    pub length: f64,
    /// `int_0^L |1/A(s)| ds` with `A` observed from the focus.
    pub inverse_density_integral: f64,
    /// `lambda * inverse_density_integral`.
    pub period: f64,
}

/// `lambda = T_e / int_0^L |1/A(s)| ds * (a / a_e)^{3/2}` for the ellipse with
/// semi-axes `a >= b > 0` and a reference orbit with period `t_e` and
/// semi-major axis `a_e`.
pub fn kepler_lambda(a: f64, b: f64, t_e: f64, a_e: f64) -> Result<KeplerLambda> {
    kepler_lambda_with(a, b, t_e, a_e, REL_TOL)
}

/// [`kepler_lambda`] with quadrature relative tolerance `rel_tol`.
pub fn kepler_lambda_with(a: f64, b: f64, t_e: f64, a_e: f64, rel_tol: f64) -> Result<KeplerLambda> {
    let focus = Preset::ellipse_focus(a, b)?;
    if !(t_e > 0.0 && a_e > 0.0) {
        return Err(Error::InvalidArgument("reference period and axis must be positive".into()));
    }
    let k = 1.0 - b * b / (a * a);
    let quarter = integrate(
        |t: f64| (1.0 - k * t.cos().powi(2)).sqrt(),
        0.0,
        PI / 2.0,
        rel_tol,
        MAX_INTERVALS,
    )?;
    let length = 4.0 * a * quarter.value;
    // ds = |gamma'(t)| dt
    let inv = integrate(
        |t: f64| {
            let (s, c) = t.sin_cos();
            (a * a * s * s + b * b * c * c).sqrt() / focus.areal_closed(t).abs()
        },
        0.0,
        2.0 * PI,
        rel_tol,
        MAX_INTERVALS,
    )?;
    let lambda = t_e / inv.value * (a / a_e).powf(1.5);
    Ok(KeplerLambda {
        lambda,
        length,
        inverse_density_integral: inv.value,
        period: lambda * inv.value,
    })
}

/// Position of a body driven at speed `1/A` at clock time `tau`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KeplerSample {
    pub tau: f64,
    /// Curve parameter.
    pub t: f64,
    pub point: Vec2,
}

/// Integrates `dt/dtau = 1 / det(gamma(t) - O, gamma'(t))` with classical RK4
/// from the start of the domain, so that `|d gamma / d tau| = 1 / A`.
pub fn kepler_motion<C: ParamCurve + ?Sized>(
    c: &C,
    o: &Vec2,
    tau_end: f64,
    dtau: f64,
) -> Result<Vec<KeplerSample>> {
    if !(dtau > 0.0) || !(tau_end > 0.0) {
        return Err(Error::InvalidArgument("clock step and span must be positive".into()));
    }
    let rate = |t: f64| -> Result<f64> {
        let d = c.point(t).sub(o).cross(&c.deriv1(t));
        if d.abs() <= super::DEGENERACY_TOL {
            return Err(Error::DegenerateDensity { t });
        }
        Ok(1.0 / d)
    };
    let mut t = c.domain().0;
    let mut tau = 0.0;
    let mut out = vec![KeplerSample { tau, t, point: c.point(t) }];
    while tau < tau_end - 1e-12 * tau_end {
        let h = dtau.min(tau_end - tau);
        let k1 = rate(t)?;
        let k2 = rate(t + 0.5 * h * k1)?;
        let k3 = rate(t + 0.5 * h * k2)?;
        let k4 = rate(t + h * k3)?;
        t += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        tau += h;
        out.push(KeplerSample { tau, t, point: c.point(t) });
    }
    Ok(out)
}

/// Largest deviation between swept parallelogram area (twice the triangle
/// sector) and elapsed clock time along a sampled motion.
pub fn sector_law_residual<C: ParamCurve + ?Sized>(
    c: &C,
    o: &Vec2,
    samples: &[KeplerSample],
) -> Result<f64> {
    let mut swept = 0.0;
    let mut worst: f64 = 0.0;
    for w in samples.windows(2) {
        swept += integrate(
            |t| c.point(t).sub(o).cross(&c.deriv1(t)),
            w[0].t,
            w[1].t,
            REL_TOL,
            MAX_INTERVALS,
        )?
        .value;
        worst = worst.max((swept - (w[1].tau - samples[0].tau)).abs());
    }
    Ok(worst)
}
