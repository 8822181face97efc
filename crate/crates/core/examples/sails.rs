//! Sails of integer cones and their LLS-sequences.

use std::fmt::Write;

use sailfrac::cf::eval_cf;
use sailfrac::sail::{integer_length, integer_sine, sail, ConeSpec, LatticePoint};
use sailfrac::scalar::frac;

pub fn run_example() -> String {
    let mut out = String::new();
    for (p, q) in [(7, 5), (17, 12), (5, 1)] {
        let s = sail(&ConeSpec::new(frac(p, q)).unwrap()).unwrap();
        let vertices: Vec<String> = s.vertices.iter().map(|v| format!("({}, {})", v.x, v.y)).collect();
        writeln!(out, "{p}/{q}: sail {} lls {} -> {}", vertices.join(" "), s.lls, eval_cf(&s.lls)).unwrap();
    }
    let (a, b, c) = (LatticePoint::new(1, 0), LatticePoint::new(1, 1), LatticePoint::new(5, 7));
    writeln!(out, "l(B, C) = {}", integer_length(&b, &c).unwrap()).unwrap();
    writeln!(out, "sin(A, B, C) = {}", integer_sine(&a, &b, &c).unwrap()).unwrap();
    out
}

#[allow(dead_code)]
fn main() {
    print!("{}", run_example());
}
