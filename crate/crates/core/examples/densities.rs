//! Areal and angular densities of the preset curves, and their discretization.

use std::fmt::Write;

use sailfrac::density::{
    angular_density, areal_density, by_arclength, curvature, discretize, sector_area, AngularMethod, Preset,
};

pub fn run_example() -> String {
    let mut out = String::new();
    let presets = [
        Preset::line(2.0).unwrap(),
        Preset::ellipse_center(2.0, 1.0).unwrap(),
        Preset::ellipse_focus(2.0, 1.0).unwrap(),
        Preset::log_spiral(1.0, 0.1).unwrap(),
    ];
    for p in &presets {
        let (c, o, t) = (p.curve(), p.observer(), 0.7);
        let a = areal_density(&c, &o, t).unwrap();
        let b = angular_density(&c, &o, t, AngularMethod::Curvature).unwrap();
        let k = curvature(&c, t).unwrap();
        writeln!(out, "{p}: A = {a:.6}, B = {b:.6}, A^2 B - kappa = {:.1e}", a * a * b - k).unwrap();
    }
    let e = presets[1];
    let area = sector_area(&e.curve(), &e.observer(), 0.0, 2.0 * std::f64::consts::PI).unwrap();
    writeln!(out, "enclosed area of the ellipse: {area:.10}").unwrap();

    let arc = by_arclength(e.curve()).unwrap();
    for n in [16, 64] {
        let (a_hat, _) = discretize(&arc, &e.observer(), n).unwrap();
        let x = 0.3 * arc.length();
        let exact = areal_density(&arc, &e.observer(), x).unwrap();
        writeln!(out, "n = {n}: A_hat = {:.6} vs A = {exact:.6}", a_hat.at(x).unwrap()).unwrap();
    }
    out
}

#[allow(dead_code)]
fn main() {
    print!("{}", run_example());
}
