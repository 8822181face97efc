//! The command-line interface driven in-process.

use std::fmt::Write;

use sailfrac::cli::run;

pub fn run_example() -> String {
    let mut out = String::new();
    let calls: [&[&str]; 5] = [
        &["cf", "eval", "--seq", "2,-1,3,-2,1"],
        &["sail", "compute", "--alpha", "7/5"],
        &["polyline", "closed", "--seq", "2,-1,3,-2,1"],
        &["--format", "json", "density", "kepler-lambda", "--a", "1", "--b", "1", "--te", "365.25", "--ae", "1"],
        &["sail", "compute", "--alpha", "1/2"],
    ];
    for args in calls {
        let o = run(std::iter::once("sailfrac").chain(args.iter().copied()));
        writeln!(out, "$ sailfrac {}  (exit {})\n{}{}", args.join(" "), o.code, o.stdout, o.stderr).unwrap();
    }
    out
}

#[allow(dead_code)]
fn main() {
    print!("{}", run_example());
}
