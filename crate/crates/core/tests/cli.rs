use std::path::PathBuf;
use std::process::Command;

use sailfrac::cli::{run, Outcome, CONFIG_ENV, EXIT_DOMAIN, EXIT_NUMERICAL, EXIT_OK, EXIT_USAGE};
use serde_json::{json, Value};

fn go(args: &[&str]) -> Outcome {
    run(std::iter::once("sailfrac").chain(args.iter().copied()))
}

fn ok(args: &[&str]) -> String {
    let o = go(args);
    assert_eq!(o.code, EXIT_OK, "{args:?}: {}", o.stderr);
    assert!(o.stderr.is_empty());
    o.stdout
}

fn json_of(args: &[&str]) -> Value {
    let mut full = vec!["--format", "json"];
    full.extend_from_slice(args);
    serde_json::from_str(&ok(&full)).unwrap()
}

/// Rows of a CSV reply as strings, header first.
fn rows(text: &str) -> Vec<Vec<String>> {
    let mut r = csv::ReaderBuilder::new().has_headers(false).from_reader(text.as_bytes());
    r.records().map(|x| x.unwrap().iter().map(String::from).collect()).collect()
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("sailfrac-cli-tests-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn cf_commands() {
    assert_eq!(ok(&["cf", "eval", "--seq", "2,-1,3,-2,1"]), "0/1\n");
    assert_eq!(ok(&["cf", "eval", "--seq", "1,-2,2,-1/2,-4"]), "-1/1\n");
    assert_eq!(json_of(&["cf", "eval", "--seq", "1,2,2"]), json!({ "value": "7/5" }));
    assert_eq!(ok(&["cf", "eval", "--seq", "0.5,2"]), "1\n");
    assert_eq!(ok(&["cf", "expand", "--x", "7/5"]), "1,2,2\n");
    assert_eq!(ok(&["cf", "expand", "--x", "7/5", "--parity", "even"]), "1,2,1,1\n");
    assert_eq!(ok(&["cf", "expand", "--x", "-7/5"]), "-2,1,1,1,1\n");
    let c = rows(&ok(&["cf", "continuants", "--seq", "1,2,2"]));
    assert_eq!(c[0], ["k", "P", "Q"]);
    assert_eq!(c.last().unwrap()[1..], ["7", "5"]);
}

#[test]
fn sail_command() {
    let r = rows(&ok(&["sail", "compute", "--alpha", "7/5"]));
    assert_eq!(r, [["x", "y"], ["1", "0"], ["1", "1"], ["5", "7"]]);
    let j = json_of(&["sail", "compute", "--alpha", "7/5"]);
    assert_eq!(j["lls"], json!(["1", "2", "2"]));
    assert_eq!(go(&["sail", "compute", "--alpha", "1/2"]).code, EXIT_DOMAIN);
}

#[test]
fn polyline_commands() {
    let built = ok(&["polyline", "build", "--seq", "2,-1,3,-2,1"]);
    assert_eq!(rows(&built).last().unwrap(), &["1", "0"]);
    let j = json_of(&["polyline", "build", "--seq", "1,2,2"]);
    assert_eq!(j["vertices"][2], json!(["5", "7"]));

    let csv_path = scratch("line.csv");
    std::fs::write(&csv_path, ok(&["polyline", "build", "--seq", "1,-1/2,3"])).unwrap();
    assert_eq!(ok(&["polyline", "lls", "--input", csv_path.to_str().unwrap()]), "1,-1/2,3\n");
    let json_path = scratch("line.json");
    std::fs::write(&json_path, serde_json::to_string(&j).unwrap()).unwrap();
    assert_eq!(ok(&["polyline", "lls", "--input", json_path.to_str().unwrap()]), "1,2,2\n");
    assert_eq!(ok(&["polyline", "lls", "--vertices", "1,1;-1,1;-1,-1;1,-1;1,1"]), "2,-1,2,-1,2,-1,2\n");

    assert_eq!(ok(&["polyline", "closed", "--seq", "2,-1,3,-2,1"]), "true\n");
    assert_eq!(json_of(&["polyline", "closed", "--seq", "1,2,2"]), json!({ "value": false }));

    let moved = ok(&["polyline", "transform", "--vertices", "1,0;1,1;5,7", "--matrix", "2,0,0,1"]);
    let out = scratch("moved.csv");
    std::fs::write(&out, moved).unwrap();
    assert_eq!(ok(&["polyline", "lls", "--input", out.to_str().unwrap()]), "2,1,4\n");
    assert_eq!(go(&["polyline", "transform", "--vertices", "1,0;1,1", "--matrix", "1,2,2,4"]).code, EXIT_DOMAIN);

    assert_eq!(rows(&ok(&["polyline", "endpoint", "--seq", "1,2,2"]))[1], ["7", "5", "5", "7"]);
    assert_eq!(
        go(&["polyline", "lls", "--vertices", "1,0;1,1;2,2"]).code,
        EXIT_DOMAIN,
        "collinear vertices"
    );
}

#[test]
fn float_mode_follows_decimals() {
    let exact = ok(&["polyline", "build", "--seq", "1/2,2,3"]);
    let float = ok(&["polyline", "build", "--seq", "0.5,2,3"]);
    let (e, f) = (rows(&exact), rows(&float));
    assert_eq!(e.len(), f.len());
    for (a, b) in e.iter().zip(&f).skip(1) {
        for (x, y) in a.iter().zip(b) {
            let x: f64 = sailfrac::scalar::parse_ratio(x).map(|r| sailfrac::scalar::ratio_to_f64(&r)).unwrap();
            let y: f64 = y.parse().unwrap();
            assert!((x - y).abs() < 1e-12);
        }
    }
    assert_eq!(go(&["--mode", "exact", "polyline", "build", "--seq", "0.5,2,3"]).code, EXIT_DOMAIN);
    assert_eq!(ok(&["--mode", "float", "cf", "eval", "--seq", "1,2,2"]), "1.4\n");
}

#[test]
fn density_commands() {
    let r = rows(&ok(&["density", "sample", "--preset", "line", "--a", "3", "--n", "5"]));
    assert_eq!(r[0], ["t", "x", "y", "A", "B", "kappa"]);
    assert_eq!(r.len(), 6);
    assert!(r[1..].iter().all(|row| row[3] == "3"));

    let j = json_of(&["density", "sample", "--preset", "ellipse_center", "--a", "2", "--b", "1", "--n", "3"]);
    assert_eq!(j.as_array().unwrap().len(), 3);
    assert!((j[0]["A"].as_f64().unwrap() - 2.0).abs() < 1e-12);

    let d = rows(&ok(&["density", "discretize", "--preset", "ellipse_center", "--a", "1", "--b", "1", "--n", "36"]));
    assert_eq!(d[0], ["k", "s", "A_hat", "B_hat"]);
    assert_eq!(d.len(), 37);
    assert_eq!(d[1][3], "", "no angle in the first cell");
    let b: f64 = d[10][3].parse().unwrap();
    assert!((b - 1.0).abs() < 0.01);

    let area: f64 = ok(&["density", "sector", "--preset", "ellipse_focus", "--a", "2", "--b", "1", "--t0", "0", "--t1", "3.141592653589793"])
        .trim()
        .parse()
        .unwrap();
    assert!((area - std::f64::consts::PI).abs() < 1e-10);

    let k = json_of(&["density", "kepler-lambda", "--a", "1", "--b", "1", "--te", "365.25", "--ae", "1"]);
    assert!((k["period"].as_f64().unwrap() - 365.25).abs() < 1e-6);
    assert_eq!(go(&["density", "sample", "--preset", "parabola"]).code, EXIT_DOMAIN);
    assert_eq!(go(&["density", "kepler-lambda", "--a", "1", "--b", "2", "--te", "1", "--ae", "1"]).code, EXIT_DOMAIN);
}

#[test]
fn reconstruct_commands() {
    let r = rows(&ok(&["reconstruct", "run", "--preset", "line", "--a", "2", "--t-start", "1", "--span", "1", "--step", "0.01"]));
    assert_eq!(r[0], ["t", "x", "y", "r", "phi", "branch"]);
    assert_eq!(r.len(), 102);
    assert!(r[1..].iter().all(|row| (row[1].parse::<f64>().unwrap() - 2.0).abs() < 1e-9));

    let table = scratch("const.csv");
    std::fs::write(&table, "t,A\n0,2\n3,2\n").unwrap();
    let j = json_of(&[
        "reconstruct", "run", "--table", table.to_str().unwrap(), "--r0", "2.23606797749979",
        "--phi0", "0.4636476090008061", "--span", "3", "--step", "0.01",
    ]);
    assert_eq!(j["branch_switches"], 0);
    let last = j["samples"].as_array().unwrap().last().unwrap().clone();
    assert!((last["x"].as_f64().unwrap() - 2.0).abs() < 1e-6);
    assert!((last["y"].as_f64().unwrap() - 4.0).abs() < 1e-6);

    assert_eq!(go(&["reconstruct", "run", "--table", table.to_str().unwrap(), "--span", "1"]).code, EXIT_USAGE);
    assert_eq!(
        go(&["reconstruct", "run", "--table", table.to_str().unwrap(), "--r0", "3", "--span", "9"]).code,
        EXIT_DOMAIN
    );

    let rt = json_of(&["reconstruct", "roundtrip", "--preset", "ellipse_center", "--a", "2", "--b", "1", "--t-start", "0.3"]);
    assert!(rt["max_error"].as_f64().unwrap() < 1e-5);
    assert_eq!(rt["branch_switches"], 4);
    assert_eq!(go(&["reconstruct", "roundtrip", "--preset", "line"]).code, EXIT_USAGE);
}

#[test]
fn output_file_and_config() {
    let out = scratch("eval.txt");
    let o = go(&["--out", out.to_str().unwrap(), "cf", "eval", "--seq", "1,2,2"]);
    assert_eq!((o.code, o.stdout.as_str()), (EXIT_OK, ""));
    assert_eq!(std::fs::read_to_string(&out).unwrap(), "7/5\n");

    let cfg = scratch("settings.toml");
    std::fs::write(&cfg, "output = \"json\"\nmode = \"float\"\n[tolerances]\nquadrature = 1e-10\n").unwrap();
    let c = cfg.to_str().unwrap();
    let v: Value = serde_json::from_str(&ok(&["--config", c, "cf", "eval", "--seq", "1,2,2"])).unwrap();
    assert_eq!(v, json!({ "value": 1.4 }));
    // flags win over the file
    assert_eq!(ok(&["--config", c, "--format", "csv", "--mode", "exact", "cf", "eval", "--seq", "1,2,2"]), "7/5\n");

    let bad = scratch("bad.toml");
    std::fs::write(&bad, "colour = \"blue\"\n").unwrap();
    let o = go(&["--config", bad.to_str().unwrap(), "cf", "eval", "--seq", "1"]);
    assert_eq!(o.code, EXIT_USAGE);
    assert_eq!(go(&["--tol", "switch=-1", "cf", "eval", "--seq", "1"]).code, EXIT_USAGE);
    assert_eq!(go(&["--tol", "switch", "cf", "eval", "--seq", "1"]).code, EXIT_USAGE);
    ok(&["--tol", "switch=1e-8", "--tol", "closure=1e-12", "cf", "eval", "--seq", "1"]);
}

#[test]
fn paper_repro_passes() {
    let text = ok(&["paper", "repro"]);
    assert!(text.lines().count() >= 10);
    assert!(text.lines().all(|l| l.starts_with("PASS ")), "{text}");
    let j = json_of(&["paper", "repro", "--seed", "99"]);
    assert!(j.as_array().unwrap().iter().all(|c| c["passed"] == true));
}

#[test]
fn binary_exit_codes_and_environment() {
    let bin = env!("CARGO_BIN_EXE_sailfrac");
    let out = Command::new(bin).args(["cf", "eval", "--seq", "2,-1,3,-2,1"]).output().unwrap();
    assert_eq!(out.status.code(), Some(EXIT_OK));
    assert_eq!(String::from_utf8_lossy(&out.stdout), "0/1\n");

    let out = Command::new(bin).args(["cf", "eval"]).output().unwrap();
    assert_eq!(out.status.code(), Some(EXIT_USAGE));
    assert_eq!(String::from_utf8_lossy(&out.stderr).lines().count(), 1);

    let out = Command::new(bin).args(["sail", "compute", "--alpha", "1/3"]).output().unwrap();
    assert_eq!(out.status.code(), Some(EXIT_DOMAIN));

    let table = scratch("grow.csv");
    std::fs::write(&table, "t,A\n0,1\n1,3\n").unwrap();
    let out = Command::new(bin)
        .args(["reconstruct", "run", "--table", table.to_str().unwrap(), "--r0", "2", "--span", "1", "--step", "0.01"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(EXIT_NUMERICAL));

    let cfg = scratch("env.toml");
    std::fs::write(&cfg, "output = \"json\"\n").unwrap();
    let out = Command::new(bin).env(CONFIG_ENV, &cfg).args(["cf", "eval", "--seq", "1,2,2"]).output().unwrap();
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["value"], "7/5");
}
