//! Rebuilding curves from their areal density.

use std::fmt::Write;

use sailfrac::density::{by_arclength, Preset};
use sailfrac::reconstruct::{feasible, reconstruct, roundtrip_error, Branch, PolarState, ReconstructionSpec, SWITCH_TOL};

pub fn run_example() -> String {
    let mut out = String::new();
    let start = PolarState { r: 5f64.sqrt(), phi: 1f64.atan2(2.0), branch: Branch::Outward };
    let line = reconstruct(&ReconstructionSpec::new(|_| 2.0, start, 3.0, 1e-3)).unwrap();
    let end = line.samples.last().unwrap();
    writeln!(out, "A = 2 from (2, 1): ends at ({:.9}, {:.9})", end.x, end.y).unwrap();

    let e = Preset::ellipse_center(2.0, 1.0).unwrap();
    let period = by_arclength(e.curve()).unwrap().length();
    let r = roundtrip_error(&e, 0.3, period, 1e-3).unwrap();
    writeln!(out, "{e} over one period: error {:.1e}, {} branch switches", r.max_error, r.branch_switches).unwrap();

    for (a0, r0) in [(2.0, 1.0), (1.0, 2.0), (1.0, 1.0)] {
        writeln!(out, "A0 = {a0}, r0 = {r0}: {:?}", feasible(a0, r0, SWITCH_TOL).unwrap()).unwrap();
    }
    out
}

#[allow(dead_code)]
fn main() {
    print!("{}", run_example());
}
