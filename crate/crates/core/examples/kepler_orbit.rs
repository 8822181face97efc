//! Motion at speed 1/A sweeps area at unit rate; the third-law constant.

use std::fmt::Write;

use sailfrac::density::{kepler_lambda, kepler_motion, sector_law_residual, ParamCurve, Preset};

pub fn run_example() -> String {
    let mut out = String::new();
    let orbit = Preset::ellipse_focus(2.0, 1.0).unwrap();
    let (c, o) = (orbit.curve(), orbit.observer());
    let period = 4.0 * std::f64::consts::PI;
    let motion = kepler_motion(&c, &o, period, 1e-3).unwrap();
    let residual = sector_law_residual(&c, &o, &motion).unwrap();
    let turned = motion.last().unwrap().t - c.domain().0;
    writeln!(out, "one revolution in clock time {period:.6}: parameter advanced {turned:.6}").unwrap();
    writeln!(out, "largest |swept area - time|: {residual:.1e}").unwrap();

    let earth = kepler_lambda(1.0, 1.0, 365.25, 1.0).unwrap();
    writeln!(out, "circle of radius 1: period {:.6} days", earth.period).unwrap();
    let mars = kepler_lambda(1.5237, 1.5170, 365.25, 1.0).unwrap();
    writeln!(out, "a = 1.5237, b = 1.5170: period {:.2} days, lambda {:.6}", mars.period, mars.lambda).unwrap();
    out
}

#[allow(dead_code)]
fn main() {
    print!("{}", run_example());
}
