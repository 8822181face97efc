//! Reconstruction of a unit-speed curve from its areal density.
//!
//! In polar coordinates `(r, phi)` around the observation point the areal
//! density `A(t)` of an arclength-parametrized curve determines the motion
//! through
//!
//! ```text
//! phi' = A / r^2,    r' = branch * sqrt(1 - A^2 / r^2)
//! ```
//!
//! with `branch = +1` while the radius grows and `-1` while it shrinks. The
//! branch flips where the radicand vanishes (closest and farthest approach).
//! A start with `|A| > r` admits no curve at all.

use std::f64::consts::PI;

use crate::density::{areal_density, by_arclength, ArclengthCurve, ParamCurve, Preset, PresetCurve, Vec2};
use crate::error::{Error, Result};
use crate::quadrature::gk15;

/// Default tolerance on the radicand `1 - A^2/r^2` and on `|A| = r` tests.
pub const SWITCH_TOL: f64 = 1e-9;

/// Classification of start data `(A_0, r_0)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Feasibility {
    /// `|A_0| > r_0`: no finite curve has this data.
    NoCurve,
    /// `r_0 > |A_0| > 0`: the curve is unique near the start.
    UniqueLocal,
    /// `|A_0| = 0` or `|A_0| = r_0`: radius vector and tangent are collinear
    /// or orthogonal, and the density alone does not fix the continuation.
    Degenerate,
}

pub fn feasible(a0: f64, r0: f64, switch_tol: f64) -> Result<Feasibility> {
    if !(r0 > 0.0) {
        return Err(Error::InvalidArgument(format!("start radius must be > 0, got {r0}")));
    }
    let a = a0.abs();
    Ok(if a <= switch_tol || (a - r0).abs() <= switch_tol {
        Feasibility::Degenerate
    } else if a > r0 {
        Feasibility::NoCurve
    } else {
        Feasibility::UniqueLocal
    })
}

/// Sign of `r'`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    Outward,
    Inward,
}

impl Branch {
    pub fn sign(self) -> f64 {
        match self {
            Branch::Outward => 1.0,
            Branch::Inward => -1.0,
        }
    }

    pub fn flipped(self) -> Self {
        match self {
            Branch::Outward => Branch::Inward,
            Branch::Inward => Branch::Outward,
        }
    }

    pub fn from_sign(s: f64) -> Self {
        if s < 0.0 {
            Branch::Inward
        } else {
            Branch::Outward
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PolarState {
    pub r: f64,
    pub phi: f64,
    pub branch: Branch,
}

/// Input of [`reconstruct`]; `a_fn` is the areal density as a function of
/// arclength measured from the start.
pub struct ReconstructionSpec<F> {
    pub a_fn: F,
    pub start: PolarState,
    pub span: f64,
    pub step: f64,
    pub switch_tol: f64,
}

impl<F: Fn(f64) -> f64> ReconstructionSpec<F> {
    pub fn new(a_fn: F, start: PolarState, span: f64, step: f64) -> Self {
        ReconstructionSpec { a_fn, start, span, step, switch_tol: SWITCH_TOL }
    }
}

/// One output row; `(x, y)` are relative to the observation point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReconSample {
    pub t: f64,
    pub x: f64,
    pub y: f64,
    pub r: f64,
    pub phi: f64,
    pub branch: Branch,
    /// True for rows inserted at a turning point.
    pub event: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Reconstruction {
    pub samples: Vec<ReconSample>,
    pub branch_switches: usize,
    pub rhs_evaluations: usize,
}

impl Reconstruction {
    pub fn points(&self) -> impl Iterator<Item = Vec2> + '_ {
        self.samples.iter().map(|s| Vec2 { x: s.x, y: s.y })
    }

    /// CSV with header `t,x,y,r,phi,branch`.
    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["t", "x", "y", "r", "phi", "branch"])?;
        for s in &self.samples {
            w.write_record([
                s.t.to_string(),
                s.x.to_string(),
                s.y.to_string(),
                s.r.to_string(),
                s.phi.to_string(),
                (s.branch.sign() as i32).to_string(),
            ])?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Io(e.to_string()))?;
        Ok(String::from_utf8(bytes).expect("utf-8"))
    }
}

struct Integrator<'a, F> {
    a_fn: &'a F,
    evals: usize,
}

impl<F: Fn(f64) -> f64> Integrator<'_, F> {
    fn radicand(&mut self, t: f64, r: f64) -> f64 {
        let a = (self.a_fn)(t);
        1.0 - (a * a) / (r * r)
    }

    fn rhs(&mut self, t: f64, r: f64, sign: f64) -> (f64, f64) {
        self.evals += 1;
        let a = (self.a_fn)(t);
        let rad = (1.0 - (a * a) / (r * r)).max(0.0);
        (sign * rad.sqrt(), a / (r * r))
    }

    /// One RK4 step for `(r, phi)`.
    fn step(&mut self, t: f64, r: f64, phi: f64, h: f64, sign: f64) -> (f64, f64) {
        let (k1r, k1p) = self.rhs(t, r, sign);
        let (k2r, k2p) = self.rhs(t + 0.5 * h, r + 0.5 * h * k1r, sign);
        let (k3r, k3p) = self.rhs(t + 0.5 * h, r + 0.5 * h * k2r, sign);
        let (k4r, k4p) = self.rhs(t + h, r + h * k3r, sign);
        (
            r + h / 6.0 * (k1r + 2.0 * k2r + 2.0 * k3r + k4r),
            phi + h / 6.0 * (k1p + 2.0 * k2p + 2.0 * k3p + k4p),
        )
    }
}

fn sample(t: f64, r: f64, phi: f64, branch: Branch, event: bool) -> ReconSample {
    let (s, c) = phi.sin_cos();
    ReconSample { t, x: r * c, y: r * s, r, phi, branch, event }
}

/// Integrates the polar system with fixed-step RK4 from arclength 0 to `span`.
///
/// Near a turning point the square root field is not Lipschitz (its
/// derivative in `r` grows like `1/|t - t*|`) and the circle `r = |A|` is a
/// second solution, so turning points are not stepped through. When the local
/// model `r + v tau + u tau^2 / 2` (with `u = r''` from
/// [`turning_acceleration`]) puts a turn within `step / theta`, or a step
/// ends with a negative radicand, the approach continues with substeps of
/// `theta` times the remaining distance (`theta` from [`grading`]), the turn is crossed on the model,
/// the branch flips, and the departure mirrors the approach until substeps
/// reach the grid step again. Output rows land on the grid `k * step` plus one
/// row per turning point.
///
/// A start with `|A_0| = r_0` is accepted only if the radicand stays within
/// `switch_tol` of zero for the whole span (circular motion).
pub fn reconstruct<F: Fn(f64) -> f64>(spec: &ReconstructionSpec<F>) -> Result<Reconstruction> {
    let ReconstructionSpec { a_fn, start, span, step, switch_tol } = spec;
    let (span, step, tol) = (*span, *step, *switch_tol);
    if !(span > 0.0) || !(step > 0.0) || step > span / 10.0 {
        return Err(Error::InvalidArgument(format!(
            "need span > 0 and 0 < step <= span/10 (span {span}, step {step})"
        )));
    }
    if !(tol > 0.0) {
        return Err(Error::InvalidArgument("switch tolerance must be > 0".into()));
    }
    let a0 = a_fn(0.0);
    let circular = match feasible(a0, start.r, tol)? {
        Feasibility::NoCurve => return Err(Error::NoCurve { a: a0, r: start.r }),
        Feasibility::UniqueLocal => false,
        Feasibility::Degenerate if a0.abs() <= tol => {
            return Err(Error::InvalidArgument(
                "degenerate start: A = 0 (radial motion) needs curvature data".into(),
            ))
        }
        Feasibility::Degenerate => true,
    };

    let mut run = Run {
        ig: Integrator { a_fn, evals: 0 },
        span,
        step,
        theta: grading(step),
        tol,
        t: 0.0,
        r: start.r,
        phi: start.phi,
        branch: start.branch,
        out: vec![sample(0.0, start.r, start.phi, start.branch, false)],
        switches: 0,
        prev_v: None,
    };
    while run.t < span {
        let tg = run.next_grid();
        if circular {
            let (r1, phi1) = run.ig.step(run.t, run.r, run.phi, tg - run.t, run.branch.sign());
            let rad1 = run.ig.radicand(tg, r1);
            if rad1.abs() > tol {
                return Err(Error::InconsistentDensity { t: tg, radicand: rad1 });
            }
            run.advance(tg, r1, run.phi + (phi1 - run.phi));
            continue;
        }
        run.regular_step(tg)?;
    }
    Ok(Reconstruction { samples: run.out, branch_switches: run.switches, rhs_evaluations: run.ig.evals })
}

/// Largest substep length relative to the distance from a turning point.
pub const GRADING: f64 = 0.05;

/// Grading per unit grid step once `GRADING_PER_STEP * h < GRADING`.
pub const GRADING_PER_STEP: f64 = 5.0;

/// Grading used for grid step `h`; shrinking it in proportion to `h` keeps
/// the local errors of the substeps near turns at fourth order.
pub fn grading(h: f64) -> f64 {
    GRADING.min(GRADING_PER_STEP * h)
}

/// Smallest `|A''|` (relative to `max(|A|, 1)`) for locating turns on `A'`.
const CURVATURE_FLOOR: f64 = 1e-4;

struct Run<'a, F> {
    ig: Integrator<'a, F>,
    span: f64,
    step: f64,
    theta: f64,
    tol: f64,
    t: f64,
    r: f64,
    phi: f64,
    branch: Branch,
    out: Vec<ReconSample>,
    switches: usize,
    // (t, r') at the previous accepted state
    prev_v: Option<(f64, f64)>,
}

impl<F: Fn(f64) -> f64> Run<'_, F> {
    /// Smallest grid point strictly after `t`.
    fn next_grid(&self) -> f64 {
        let k = (self.t / self.step).floor() + 1.0;
        let mut g = (k * self.step).min(self.span);
        if g - self.t <= 1e-9 * self.step {
            g = ((k + 1.0) * self.step).min(self.span);
        }
        g
    }

    fn on_grid(&self, t: f64) -> bool {
        t >= self.span || ((t / self.step).round() * self.step - t).abs() <= 1e-9 * self.step
    }

    fn velocity(&mut self) -> Result<f64> {
        let rad = self.ig.radicand(self.t, self.r);
        if rad < -self.tol {
            return Err(Error::InconsistentDensity { t: self.t, radicand: rad });
        }
        Ok(self.branch.sign() * rad.max(0.0).sqrt())
    }

    /// Moves to `(t, r, phi)`; records a row if `t` is a grid point.
    fn advance(&mut self, t: f64, r: f64, phi: f64) {
        self.t = t;
        self.r = r;
        self.phi = phi;
        if self.on_grid(t) {
            self.out.push(sample(t, r, phi, self.branch, false));
        }
    }

    fn regular_step(&mut self, tg: f64) -> Result<()> {
        let h = tg - self.t;
        let v = self.velocity()?;
        let u_fd = self.prev_v.map(|(tp, vp)| (v - vp) / (self.t - tp));
        let near = matches!(u_fd, Some(ue) if v * ue < 0.0 && v.abs() * self.theta <= ue.abs() * self.step);
        if near {
            if let Some(u) = self.locate_turn(v, self.step / self.theta, u_fd)? {
                return self.cross_turn(u);
            }
        }
        let (r1, phi1) = self.ig.step(self.t, self.r, self.phi, h, self.branch.sign());
        let rad1 = self.ig.radicand(tg, r1);
        if rad1 >= 0.0 {
            if !(r1 > 0.0) {
                return Err(Error::Integration { t: tg, reason: "radius collapsed to zero".into() });
            }
            self.prev_v = Some((self.t, v));
            self.advance(tg, r1, phi1);
            return Ok(());
        }
        match self.locate_turn(v, 2.0 * h, u_fd)? {
            Some(u) => self.cross_turn(u),
            None => Err(Error::Integration {
                t: self.t,
                reason: format!("radicand {rad1:e} at step end without a turning point"),
            }),
        }
    }

    /// `r''` at a turn ahead of the current state, if the local model puts
    /// one within `horizon`.
    fn locate_turn(&mut self, v: f64, horizon: f64, u_hint: Option<f64>) -> Result<Option<f64>> {
        let (t, r) = (self.t, self.r);
        let mut tau: f64 = 0.0;
        let mut u = 0.0;
        // A'' is taken at the predicted turn; a few passes settle it
        for _ in 0..3 {
            let rt = r + v * tau + 0.5 * u * tau * tau;
            let at = (t + tau).min(self.span);
            // far from a turn the quadratic may have no real root
            u = match turning_acceleration(&mut self.ig, at, rt, self.span, self.step, self.branch, u_hint) {
                Ok(u) => u,
                Err(_) => return Ok(None),
            };
            if u * v >= 0.0 {
                return Ok(None);
            }
            tau = -v / u;
            if tau > 2.0 * horizon {
                return Ok(None);
            }
        }
        Ok(if tau <= horizon { Some(u) } else { None })
    }

    /// Critical point of `A` within `window` of `t_pred`, by Newton on a
    /// central difference of `A`. Turns with nonzero curvature are critical
    /// points of `A` (`A' = kappa r r'`), and unlike the radicand this does
    /// not depend on the accumulated state. `None` when `A''` is too small
    /// to locate one reliably (nearly straight motion).
    fn critical_point(&mut self, t_pred: f64, window: f64) -> Option<f64> {
        let (h1, h2) = (1e-5, 1e-4);
        let mut x = t_pred.min(self.span - 2.0 * h2);
        for _ in 0..30 {
            if x - h2 < 0.0 || x + h2 > self.span {
                return None;
            }
            let f = &self.ig.a_fn;
            let (am, a0, ap) = (f(x - h2), f(x), f(x + h2));
            let d1 = (f(x + h1) - f(x - h1)) / (2.0 * h1);
            let d2 = (ap - 2.0 * a0 + am) / (h2 * h2);
            self.ig.evals += 5;
            if d2.abs() < CURVATURE_FLOOR * a0.abs().max(1.0) {
                return None;
            }
            let dx = -d1 / d2;
            x += dx;
            if (x - t_pred).abs() > window || x <= self.t {
                return None;
            }
            // difference noise in A' is ~1e-11, so roots settle near 1e-10
            if dx.abs() <= 1e-10 * x.abs().max(1.0) {
                return Some(x);
            }
        }
        None
    }

    /// Graded approach to the turn, the turn itself on [`TurnSeries`], graded
    /// departure.
    fn cross_turn(&mut self, u: f64) -> Result<()> {
        let sign = self.branch.sign();
        let v0 = self.velocity()?;
        let rem0 = -v0 / u;
        let target = self.critical_point(self.t + rem0, 2.0 * rem0 + self.step);
        let remaining = |run: &mut Self| -> Result<(f64, f64)> {
            let v = run.velocity()?;
            let rem = match target {
                Some(ts) => ts - run.t,
                None if u * v < 0.0 => -v / u,
                None => 0.0,
            };
            Ok((v, rem))
        };

        // approach; the farthest state within PROBE_SPAN of the turn decides
        // between the two continuations of the series
        let mut probe: Option<(f64, f64)> = None;
        loop {
            let (v, rem) = remaining(self)?;
            if rem <= PROBE_SPAN && probe.is_none() {
                probe = Some((self.t, self.r));
            }
            if rem <= SERIES_SPAN || self.t + rem >= self.span {
                break;
            }
            let tg = self.next_grid();
            let sigma = (self.theta * rem).min(tg - self.t);
            let (r1, phi1) = self.ig.step(self.t, self.r, self.phi, sigma, sign);
            if self.ig.radicand(self.t + sigma, r1) < 0.0 {
                // the state meets |A| early; the series takes over from here
                break;
            }
            self.prev_v = Some((self.t, v));
            self.advance(self.t + sigma, r1, phi1);
        }
        let (v, rem) = remaining(self)?;
        let rem = rem.max(0.0);
        let ts = self.t + rem;
        if ts >= self.span {
            // turn lies past the end: finish on the local model
            let d = self.span - self.t;
            let (r0, phi0, t0) = (self.r, self.phi, self.t);
            let phi1 = phi0 + simpson(&mut self.ig, t0, d, |s| r0 + v * s + 0.5 * u * s * s);
            self.advance(self.span, r0 + v * d + 0.5 * u * d * d, phi1);
            return Ok(());
        }
        if rem > 0.5 * FIT_HALF {
            return Err(Error::Integration { t: self.t, reason: "turning point not resolved".into() });
        }
        let lam_hint = u * self.ig_a(ts).abs();
        let probe = probe.filter(|&(tp, _)| ts - tp >= 0.1 * SERIES_SPAN).unwrap_or((self.t, self.r));
        let series = TurnSeries::new(&mut self.ig, ts, self.span, lam_hint, probe)?;

        // to the turn along the series
        let (t0, phi0) = (self.t, self.phi);
        self.series_rows(&series, t0, phi0, ts);
        let phie = phi0 + series.phase(&mut self.ig, t0, ts)?;
        let re = series.r(0.0);
        self.t = ts;
        self.r = re;
        self.phi = phie;
        self.branch = self.branch.flipped();
        self.switches += 1;
        self.out.push(sample(ts, re, phie, self.branch, true));
        let sign = self.branch.sign();

        // away from it
        let s_end = SERIES_SPAN.min(self.span - ts);
        self.series_rows(&series, ts, phie, ts + s_end);
        let phi1 = phie + series.phase(&mut self.ig, ts, ts + s_end)?;
        self.t = ts;
        self.advance(ts + s_end, series.r(s_end), phi1);
        self.prev_v = Some((ts, 0.0));
        // leaving a minimum with c_2 < 1, neighbours separate like s^(1/c_2)
        let lam = series.c[2];
        let theta = if lam > 0.0 && lam < 1.0 { self.theta * lam * lam } else { self.theta };
        while self.t < self.span {
            let el = self.t - ts;
            let sigma = theta * el;
            if sigma >= self.step {
                break;
            }
            let tg = self.next_grid();
            let sigma = sigma.min(tg - self.t);
            let (r1, phi1) = self.ig.step(self.t, self.r, self.phi, sigma, sign);
            let rad = self.ig.radicand(self.t + sigma, r1);
            if rad < -self.tol {
                return Err(Error::Integration {
                    t: ts,
                    reason: format!("second branch flip right after a turn (radicand {rad:e})"),
                });
            }
            let v = self.velocity()?;
            self.prev_v = Some((self.t, v));
            self.advance(self.t + sigma, r1, phi1);
        }
        Ok(())
    }

    fn ig_a(&mut self, t: f64) -> f64 {
        self.ig.evals += 1;
        (self.ig.a_fn)(t)
    }

    /// Grid rows strictly between `from` and `to`, evaluated on the series.
    fn series_rows(&mut self, series: &TurnSeries, from: f64, phi_from: f64, to: f64) {
        let mut g = ((from / self.step).floor() + 1.0) * self.step;
        while g < to - 1e-9 * self.step {
            if g > from + 1e-9 * self.step {
                if let Ok(dphi) = series.phase(&mut self.ig, from, g) {
                    let row = sample(g, series.r(g - series.t0), phi_from + dphi, self.branch, false);
                    self.out.push(row);
                }
            }
            g += self.step;
        }
    }
}

/// Half-width of the window on which `A` is fitted around a turn.
const FIT_HALF: f64 = 0.04;
/// Chebyshev degree of that fit.
const FIT_DEGREE: usize = 16;
/// Order of the power series of `r^2` at a turn.
const SERIES_ORDER: usize = 8;
/// Distance on each side of a turn covered by the series.
const SERIES_SPAN: f64 = 0.01;
/// Approach states this close to a turn are compared against the series.
const PROBE_SPAN: f64 = 0.03;

/// Power series of `q = r^2` at a turning point `t0`.
///
/// With `A(t0 + s) = sum a_k s^k`, the relation `q'^2 = 4 (q - A^2)` fixes
/// `q = sum c_k s^k` order by order: `c_0 = a_0^2`, `c_1 = 0`,
/// `c_2^2 - c_2 + [A^2]_2 = 0` (the two continuations; the one matching the
/// approach is kept) and for `n >= 3`
/// `c_n (n c_2 - 1) = -[A^2]_n - (1/4) sum i j c_i c_j` over `i + j = n + 2`,
/// `3 <= i, j <= n - 1`. This is the analytic continuation through the turn;
/// starting a step method at the turn instead picks up non-analytic
/// neighbours that separate like `s^(1/c_2)`.
#[derive(Debug, Clone)]
pub struct TurnSeries {
    pub t0: f64,
    pub c: Vec<f64>,
}

impl TurnSeries {
    fn new<F: Fn(f64) -> f64>(
        ig: &mut Integrator<'_, F>,
        t0: f64,
        span: f64,
        lam_hint: f64,
        probe: (f64, f64),
    ) -> Result<Self> {
        let lo = (t0 - FIT_HALF).max(0.0);
        let hi = (t0 + FIT_HALF).min(span);
        ig.evals += FIT_DEGREE + 1;
        let a = taylor_coefficients(ig.a_fn, lo, hi, t0, SERIES_ORDER);
        let sq = |n: usize| (0..=n).map(|i| a[i] * a[n - i]).sum::<f64>();
        let mut c = vec![0.0; SERIES_ORDER + 1];
        c[0] = a[0] * a[0];
        let disc = 1.0 - 4.0 * sq(2);
        if disc < -1e-6 {
            return Err(Error::InconsistentDensity { t: t0, radicand: disc });
        }
        let root = disc.max(0.0).sqrt();
        let fill = |c2: f64| {
            let mut c = c.clone();
            c[2] = c2;
            for n in 3..=SERIES_ORDER {
                let s: f64 = (3..n).map(|i| (i * (n + 2 - i)) as f64 * c[i] * c[n + 2 - i]).sum();
                let den = n as f64 * c[2] - 1.0;
                c[n] = if den.abs() < 1e-9 { 0.0 } else { -(sq(n) + 0.25 * s) / den };
            }
            TurnSeries { t0, c }
        };
        let lo_root = fill(0.5 * (1.0 - root));
        let hi_root = fill(0.5 * (1.0 + root));
        let (tp, rp) = probe;
        let s = tp - t0;
        let gap = 0.5 * root * s * s;
        Ok(if gap > 1e-9 * rp * rp {
            let e1 = (lo_root.q(s) - rp * rp).abs();
            let e2 = (hi_root.q(s) - rp * rp).abs();
            if e1 <= e2 {
                lo_root
            } else {
                hi_root
            }
        } else if (lo_root.c[2] - lam_hint).abs() <= (hi_root.c[2] - lam_hint).abs() {
            lo_root
        } else {
            hi_root
        })
    }

    pub fn q(&self, s: f64) -> f64 {
        self.c.iter().rev().fold(0.0, |acc, &ck| acc * s + ck)
    }

    pub fn r(&self, s: f64) -> f64 {
        self.q(s).max(0.0).sqrt()
    }

    /// `r''` at the turn.
    pub fn acceleration(&self) -> f64 {
        self.c[2] / self.r(0.0)
    }

    /// `int A / r^2` between two arclengths.
    fn phase<F: Fn(f64) -> f64>(&self, ig: &mut Integrator<'_, F>, from: f64, to: f64) -> Result<f64> {
        if to == from {
            return Ok(0.0);
        }
        let f = |t: f64| (ig.a_fn)(t) / self.q(t - self.t0);
        let pieces = ((to - from).abs() / 2.5e-3).ceil().max(1.0) as usize;
        let h = (to - from) / pieces as f64;
        let mut total = 0.0;
        for k in 0..pieces {
            let a = from + k as f64 * h;
            total += gk15(&f, a, a + h).0;
        }
        ig.evals += 15 * pieces;
        Ok(total)
    }
}

/// Taylor coefficients of `f` at `at`, from a Chebyshev interpolant on
/// `[lo, hi]`.
fn taylor_coefficients<F: Fn(f64) -> f64>(f: &F, lo: f64, hi: f64, at: f64, order: usize) -> Vec<f64> {
    let n = FIT_DEGREE;
    let (mid, half) = (0.5 * (lo + hi), 0.5 * (hi - lo));
    let vals: Vec<f64> = (0..=n).map(|j| f(mid + half * (PI * j as f64 / n as f64).cos())).collect();
    // coefficients of c_0/2 + sum_{k>=1} c_k T_k
    let mut c: Vec<f64> = (0..=n)
        .map(|k| {
            let s: f64 = (0..=n)
                .map(|j| {
                    let w = if j == 0 || j == n { 0.5 } else { 1.0 };
                    w * vals[j] * (PI * (j * k) as f64 / n as f64).cos()
                })
                .sum();
            2.0 / n as f64 * s
        })
        .collect();
    c[n] *= 0.5;
    let x0 = (at - mid) / half;
    let mut out = Vec::with_capacity(order + 1);
    let mut fact = 1.0;
    let mut scale = 1.0;
    for m in 0..=order {
        if m > 0 {
            fact *= m as f64;
            scale *= half;
        }
        out.push(cheb_eval(&c, x0) / (fact * scale));
        c = cheb_derivative(&c);
    }
    out
}

fn cheb_eval(c: &[f64], x: f64) -> f64 {
    if c.is_empty() {
        return 0.0;
    }
    let (mut t_prev, mut t_cur) = (1.0, x);
    let mut sum = 0.5 * c[0];
    for (k, &ck) in c.iter().enumerate().skip(1) {
        if k > 1 {
            let t_next = 2.0 * x * t_cur - t_prev;
            t_prev = t_cur;
            t_cur = t_next;
        }
        sum += ck * t_cur;
    }
    sum
}

fn cheb_derivative(c: &[f64]) -> Vec<f64> {
    let n = c.len();
    if n <= 1 {
        return vec![0.0];
    }
    let mut d = vec![0.0; n + 1];
    for k in (1..n).rev() {
        d[k - 1] = d[k + 1] + 2.0 * k as f64 * c[k];
    }
    d.truncate(n - 1);
    d
}

/// `int_0^d A(t0 + s) / r(s)^2 ds` by Simpson's rule.
fn simpson<F: Fn(f64) -> f64>(ig: &mut Integrator<'_, F>, t0: f64, d: f64, r: impl Fn(f64) -> f64) -> f64 {
    let mut w = |s: f64| {
        ig.evals += 1;
        (ig.a_fn)(t0 + s) / (r(s) * r(s))
    };
    d / 6.0 * (w(0.0) + 4.0 * w(0.5 * d) + w(d))
}

/// Second derivative of `r` at a turning point, where `A^2 = r^2`.
///
/// Differentiating `r'^2 = 1 - A^2/r^2` twice gives
/// `r^2 u^2 - r u + A A'' = 0`. Of the two roots, the one closest to the
/// estimate from the approach is used; without one, the sign implied by the
/// approach (a minimum after an inward branch) decides.
fn turning_acceleration<F: Fn(f64) -> f64>(
    ig: &mut Integrator<'_, F>,
    te: f64,
    r: f64,
    span: f64,
    step: f64,
    before: Branch,
    u_est: Option<f64>,
) -> Result<f64> {
    let h = (0.1 * step).min(1e-3);
    let a = (ig.a_fn)(te);
    let a2 = if te + h <= span && te - h >= 0.0 {
        ((ig.a_fn)(te + h) - 2.0 * a + (ig.a_fn)(te - h)) / (h * h)
    } else if te - 2.0 * h >= 0.0 {
        (a - 2.0 * (ig.a_fn)(te - h) + (ig.a_fn)(te - 2.0 * h)) / (h * h)
    } else {
        ((ig.a_fn)(te + 2.0 * h) - 2.0 * (ig.a_fn)(te + h) + a) / (h * h)
    };
    ig.evals += 3;
    let disc = 1.0 - 4.0 * a * a2;
    if disc < -1e-6 {
        return Err(Error::InconsistentDensity { t: te, radicand: disc });
    }
    let root = disc.max(0.0).sqrt();
    let (u1, u2) = ((1.0 - root) / (2.0 * r), (1.0 + root) / (2.0 * r));
    let want = before.flipped().sign();
    Ok(match u_est {
        Some(e) => {
            if (u1 - e).abs() <= (u2 - e).abs() {
                u1
            } else {
                u2
            }
        }
        None if u1 * want > 0.0 && u2 * want <= 0.0 => u1,
        None if u2 * want > 0.0 && u1 * want <= 0.0 => u2,
        None => {
            if u1.abs() >= u2.abs() {
                u1
            } else {
                u2
            }
        }
    })
}

/// Outcome of [`roundtrip_error`].
#[derive(Debug, Clone, PartialEq)]
pub struct RoundtripReport {
    pub max_error: f64,
    pub steps: usize,
    pub rhs_evaluations: usize,
    pub branch_switches: usize,
}

/// A preset followed by arclength from a chosen parameter, with the start
/// state the true curve implies.
pub struct PresetTrack {
    arc: ArclengthCurve<PresetCurve>,
    o: Vec2,
    pub start: PolarState,
}

impl PresetTrack {
    /// Tracks `preset` from parameter `t_start` for at least arclength `span`.
    pub fn new(preset: &Preset, t_start: f64, span: f64) -> Result<Self> {
        if !(span > 0.0) || !t_start.is_finite() {
            return Err(Error::InvalidArgument("span must be positive and t_start finite".into()));
        }
        let o = preset.observer();
        let mut width = match preset {
            Preset::Line { .. } => span,
            _ => 2.0 * PI,
        };
        let arc = loop {
            let arc = by_arclength(preset.curve_on(t_start, t_start + width)?)?;
            if arc.length() >= span {
                break arc;
            }
            width *= 2.0;
            if width > 1e6 {
                return Err(Error::InvalidArgument("span too long for this preset".into()));
            }
        };
        let p0 = arc.point(0.0).sub(&o);
        let start = PolarState {
            r: p0.norm(),
            phi: p0.y.atan2(p0.x),
            branch: Branch::from_sign(p0.dot(&arc.deriv1(0.0))),
        };
        Ok(PresetTrack { arc, o, start })
    }

    /// Areal density at arclength `t`, clamped to the tracked piece.
    pub fn density(&self, t: f64) -> f64 {
        let t = t.clamp(0.0, self.arc.length());
        areal_density(&self.arc, &self.o, t).expect("inside domain")
    }

    /// True position at arclength `t`, relative to the observation point.
    pub fn point(&self, t: f64) -> Vec2 {
        self.arc.point(t).sub(&self.o)
    }
}

/// Reconstructs a preset from its own areal density and measures the largest
/// distance to the true curve.
///
/// The curve starts at parameter `t_start` and is followed for arclength
/// `span`; the start state comes from the true curve.
pub fn roundtrip_error(preset: &Preset, t_start: f64, span: f64, step: f64) -> Result<RoundtripReport> {
    let track = PresetTrack::new(preset, t_start, span)?;
    let rec = reconstruct(&ReconstructionSpec::new(|t| track.density(t), track.start, span, step))?;
    let max_error = rec
        .samples
        .iter()
        .map(|s| track.point(s.t).dist(&Vec2 { x: s.x, y: s.y }))
        .fold(0.0, f64::max);
    Ok(RoundtripReport {
        max_error,
        steps: rec.samples.len() - 1,
        rhs_evaluations: rec.rhs_evaluations,
        branch_switches: rec.branch_switches,
    })
}

/// Areal density given as a table `(t, A)`, read with linear interpolation.
///
/// Interpolation is continuous but not smooth, so turning points inside
/// the table are located less accurately than for a smooth density.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityTable {
    t: Vec<f64>,
    a: Vec<f64>,
}

impl DensityTable {
    /// Needs at least two rows with strictly increasing finite `t`.
    pub fn new(t: Vec<f64>, a: Vec<f64>) -> Result<Self> {
        if t.len() != a.len() || t.len() < 2 {
            return Err(Error::InvalidArgument("density table needs at least two (t, A) rows".into()));
        }
        if t.iter().chain(&a).any(|v| !v.is_finite()) {
            return Err(Error::InvalidArgument("density table has non-finite entries".into()));
        }
        if t.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidArgument("density table t must increase strictly".into()));
        }
        Ok(DensityTable { t, a })
    }

    /// Reads CSV with header `t,A`.
    pub fn from_csv(text: &str) -> Result<Self> {
        let mut r = csv::Reader::from_reader(text.as_bytes());
        let headers = r.headers()?.clone();
        if headers.iter().map(str::trim).collect::<Vec<_>>() != ["t", "A"] {
            return Err(Error::Io(format!("expected header t,A, got {:?}", headers)));
        }
        let (mut t, mut a) = (Vec::new(), Vec::new());
        for rec in r.records() {
            let rec = rec?;
            let num = |i: usize| -> Result<f64> {
                rec[i].trim().parse().map_err(|_| Error::ParseScalar(rec[i].to_string()))
            };
            t.push(num(0)?);
            a.push(num(1)?);
        }
        Self::new(t, a)
    }

    /// `(first t, last t)`.
    pub fn range(&self) -> (f64, f64) {
        (self.t[0], self.t[self.t.len() - 1])
    }

    /// Linear interpolation, constant beyond the ends.
    pub fn eval(&self, t: f64) -> f64 {
        let n = self.t.len();
        if t <= self.t[0] {
            return self.a[0];
        }
        if t >= self.t[n - 1] {
            return self.a[n - 1];
        }
        let j = self.t.partition_point(|&x| x <= t) - 1;
        let w = (t - self.t[j]) / (self.t[j + 1] - self.t[j]);
        self.a[j] + w * (self.a[j + 1] - self.a[j])
    }
}
