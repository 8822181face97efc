//! Broken lines from LLS data: synthesis, analysis, closure and linear maps.

use std::fmt::Write;

use sailfrac::polyline::{build, endpoint_pair, is_closed, lls_of, transform, Frame, LlsSequence, Matrix2};
use sailfrac::scalar::{frac, int, Point2, Scalar};

pub fn run_example() -> String {
    let mut out = String::new();
    let triangle = LlsSequence::new([2, -1, 3, -2, 1].map(int).to_vec()).unwrap();
    let line = build(&Frame::normalized(), &triangle).unwrap();
    let pts: Vec<String> = line.vertices.iter().map(|p| format!("({}, {})", p.x.render(), p.y.render())).collect();
    writeln!(out, "[{}] -> {}", triangle.render(), pts.join(" ")).unwrap();
    writeln!(out, "closed: {}", is_closed(&triangle)).unwrap();

    let seq = LlsSequence::new(vec![int(1), frac(-1, 2), int(3)]).unwrap();
    let frame = Frame::new(Point2::from_ints(1, 1), Point2::from_ints(2, 1), Point2::from_ints(1, 3));
    let shifted = build(&frame, &seq).unwrap();
    writeln!(out, "read back: [{}]", lls_of(&shifted).unwrap().render()).unwrap();
    let c = endpoint_pair(&seq);
    writeln!(out, "endpoint in the normalized frame: ({}, {})", c.q.render(), c.p.render()).unwrap();

    let stretch = Matrix2::new(int(2), int(1), int(0), int(1));
    let image = lls_of(&transform(&shifted, &stretch).unwrap()).unwrap();
    writeln!(out, "after a map of determinant 2: [{}]", image.render()).unwrap();
    out
}

#[allow(dead_code)]
fn main() {
    print!("{}", run_example());
}
