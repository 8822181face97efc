//! Evaluating and expanding continued fractions with arbitrary elements.

use std::fmt::Write;

use sailfrac::cf::{continuants, eval_cf, expand_rational, expand_real, CfSequence, Parity};
use sailfrac::scalar::frac;

pub fn run_example() -> String {
    let mut out = String::new();
    for text in ["2,-1,3,-2,1", "1,-2,2,-1/2,-4", "1,2,2"] {
        let seq = CfSequence::parse(text).unwrap();
        writeln!(out, "[{text}] = {}", eval_cf(&seq)).unwrap();
    }
    let x = frac(7, 5);
    writeln!(out, "7/5 odd  = {}", expand_rational(&x, Parity::Odd)).unwrap();
    writeln!(out, "7/5 even = {}", expand_rational(&x, Parity::Even)).unwrap();
    let sqrt2 = expand_real(2f64.sqrt(), 8, 1e-12).unwrap();
    writeln!(out, "sqrt(2) ~ {sqrt2} = {}", eval_cf(&sqrt2)).unwrap();
    for c in continuants(CfSequence::from_ints(&[1, 2, 2]).unwrap().elements()) {
        writeln!(out, "P/Q = {}/{}", c.p, c.q).unwrap();
    }
    out
}

#[allow(dead_code)]
fn main() {
    print!("{}", run_example());
}
