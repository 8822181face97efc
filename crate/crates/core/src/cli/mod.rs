//! Command-line surface: one subcommand per library operation.
//!
//! Exit status is 0 on success, 1 on usage errors, 2 on domain errors (bad
//! input, violated preconditions) and 3 on numerical failures.

mod config;
mod repro;

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde_json::json;

pub use config::{Config, Format, Mode, Settings, Tolerances, CONFIG_ENV, DEFAULT_SEED};
pub use repro::{paper_checks, CheckResult};

use crate::cf::{continuants, eval_cf, expand_rational, expand_real, final_continuant, CfSequence, Parity};
use crate::density::{
    by_arclength, discretize, kepler_lambda_with, sample, samples_to_csv, sector_area_with, Preset,
    PresetCurve,
};
use crate::error::Error;
use crate::polyline::{build_with, is_closed_with, lls_of_with, transform, Frame, LlsSequence, Matrix2, Polyline};
use crate::reconstruct::{
    reconstruct, roundtrip_error, Branch, DensityTable, PolarState, PresetTrack, ReconstructionSpec,
};
use crate::sail::{sail, ConeSpec};
use crate::scalar::{is_decimal_text, parse_ratio, Point2, Ratio, Scalar};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_DOMAIN: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "sailfrac", version, about = "Continued fractions, sails, broken lines and curve densities")]
pub struct Cli {
    /// Arithmetic; by default exact unless a scalar is written as a decimal.
    #[arg(long, global = true, value_enum)]
    mode: Option<Mode>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// TOML config file (default: the file named by SAILFRAC_CONFIG).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Tolerance override `name=value`; repeatable.
    #[arg(long = "tol", global = true, value_name = "NAME=VALUE")]
    tol: Vec<String>,
    /// Write the result to this file instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Continued fractions.
    #[command(subcommand)]
    Cf(CfCmd),
    /// Sails of rational cones.
    #[command(subcommand)]
    Sail(SailCmd),
    /// Broken lines and their LLS-sequences.
    #[command(subcommand)]
    Polyline(PolylineCmd),
    /// Areal and angular densities of preset curves.
    #[command(subcommand)]
    Density(DensityCmd),
    /// Curves from their areal density.
    #[command(subcommand)]
    Reconstruct(ReconstructCmd),
    /// Worked examples.
    #[command(subcommand)]
    Paper(PaperCmd),
}

#[derive(Debug, Subcommand)]
enum CfCmd {
    /// Value of a continued fraction.
    Eval(SeqArg),
    /// Ordinary expansion of a number.
    Expand {
        #[arg(long, allow_hyphen_values = true)]
        x: String,
        #[arg(long, default_value = "odd")]
        parity: Parity,
        /// Cap on the number of elements for decimal input.
        #[arg(long, default_value_t = 32)]
        max_terms: usize,
    },
    /// Continuant pairs of every prefix.
    Continuants(SeqArg),
}

#[derive(Debug, Subcommand)]
enum SailCmd {
    /// Sail of the cone between the x-axis and the ray of slope alpha.
    Compute {
        #[arg(long)]
        alpha: String,
        /// Convergent length used for decimal alpha.
        #[arg(long, default_value_t = 32)]
        max_terms: usize,
    },
}

#[derive(Debug, Subcommand)]
enum PolylineCmd {
    /// Broken line of an LLS-sequence.
    Build {
        #[command(flatten)]
        seq: SeqArg,
        #[command(flatten)]
        frame: FrameArgs,
    },
    /// LLS-sequence of a broken line.
    Lls(PolylineInput),
    /// Whether the broken line of an LLS-sequence closes up.
    Closed(SeqArg),
    /// Image of a broken line under a linear map.
    Transform {
        #[command(flatten)]
        input: PolylineInput,
        /// Row-major entries `a,b,c,d`.
        #[arg(long, allow_hyphen_values = true)]
        matrix: String,
    },
    /// Continuant pair `(P, Q)` and endpoint `(Q, P)` in the normalized frame.
    Endpoint(SeqArg),
}

#[derive(Debug, Subcommand)]
enum DensityCmd {
    /// `t,x,y,A,B,kappa` at uniformly spaced parameters.
    Sample {
        #[command(flatten)]
        preset: PresetArgs,
        #[command(flatten)]
        domain: DomainArgs,
        #[arg(long, default_value_t = 100)]
        n: usize,
    },
    /// Normalized step densities of the inscribed broken line with `n` edges.
    Discretize {
        #[command(flatten)]
        preset: PresetArgs,
        #[command(flatten)]
        domain: DomainArgs,
        #[arg(long, default_value_t = 64)]
        n: usize,
    },
    /// Triangle-sector area swept between two parameters.
    Sector {
        #[command(flatten)]
        preset: PresetArgs,
        #[arg(long, allow_hyphen_values = true)]
        t0: f64,
        #[arg(long, allow_hyphen_values = true)]
        t1: f64,
    },
    /// Speed constant of an elliptic orbit under the third law.
    KeplerLambda {
        #[arg(long)]
        a: f64,
        #[arg(long)]
        b: f64,
        /// Reference period.
        #[arg(long)]
        te: f64,
        /// Reference semi-major axis.
        #[arg(long)]
        ae: f64,
    },
}

#[derive(Debug, Subcommand)]
enum ReconstructCmd {
    /// Integrates the polar system and prints `t,x,y,r,phi,branch`.
    Run {
        /// Preset whose own density drives the run.
        #[arg(long, conflicts_with = "table")]
        preset: Option<String>,
        #[arg(long, default_value_t = 2.0, allow_hyphen_values = true)]
        a: f64,
        #[arg(long, visible_alias = "spiral-b", default_value_t = 1.0, allow_hyphen_values = true)]
        b: f64,
        /// Curve parameter of the preset start point.
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        t_start: f64,
        /// CSV `t,A`, read with linear interpolation from its first row.
        #[arg(long)]
        table: Option<PathBuf>,
        /// Start radius (required with --table).
        #[arg(long)]
        r0: Option<f64>,
        #[arg(long, allow_hyphen_values = true)]
        phi0: Option<f64>,
        /// `out` (radius growing) or `in`.
        #[arg(long)]
        branch: Option<BranchArg>,
        #[arg(long)]
        span: f64,
        #[arg(long, default_value_t = 1e-3)]
        step: f64,
    },
    /// Reconstructs a preset from its own density and reports the error.
    Roundtrip {
        #[command(flatten)]
        preset: PresetArgs,
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        t_start: f64,
        /// Arclength; defaults to the perimeter of a closed preset.
        #[arg(long)]
        span: Option<f64>,
        #[arg(long, default_value_t = 1e-3)]
        step: f64,
    },
}

#[derive(Debug, Subcommand)]
enum PaperCmd {
    /// Runs every worked example and prints PASS/FAIL per check.
    Repro,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
enum BranchArg {
    Out,
    In,
}

#[derive(Debug, Args)]
struct SeqArg {
    /// Comma-separated elements, e.g. "2,-1,3,-2,1" or "1,-1/2".
    #[arg(long, allow_hyphen_values = true)]
    seq: String,
}

#[derive(Debug, Args)]
struct FrameArgs {
    /// Observation point `x,y`.
    #[arg(long, default_value = "0,0", allow_hyphen_values = true)]
    o: String,
    /// First vertex `x,y`.
    #[arg(long, default_value = "1,0", allow_hyphen_values = true)]
    a0: String,
    /// Direction of the first edge `x,y`.
    #[arg(long, default_value = "0,1", allow_hyphen_values = true)]
    v: String,
}

#[derive(Debug, Args)]
struct PolylineInput {
    /// Vertex file: JSON `{"O": [x,y], "vertices": [...]}` or CSV `x,y`.
    #[arg(long, conflicts_with = "vertices", required_unless_present = "vertices")]
    input: Option<PathBuf>,
    /// Inline vertices `x,y;x,y;...`.
    #[arg(long, allow_hyphen_values = true)]
    vertices: Option<String>,
    /// Observation point `x,y` for CSV and inline input.
    #[arg(long, default_value = "0,0", allow_hyphen_values = true)]
    o: String,
}

#[derive(Debug, Args)]
struct PresetArgs {
    /// line | ellipse_center | ellipse_focus | log_spiral
    #[arg(long)]
    preset: String,
    #[arg(long, default_value_t = 2.0, allow_hyphen_values = true)]
    a: f64,
    /// Second parameter; the growth rate of a spiral.
    #[arg(long, visible_alias = "spiral-b", default_value_t = 1.0, allow_hyphen_values = true)]
    b: f64,
}

impl PresetArgs {
    fn preset(&self) -> Result<Preset, Error> {
        Preset::from_name(&self.preset, self.a, self.b)
    }
}

#[derive(Debug, Args)]
struct DomainArgs {
    #[arg(long, allow_hyphen_values = true)]
    t0: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    t1: Option<f64>,
}

impl DomainArgs {
    fn curve(&self, p: &Preset) -> Result<PresetCurve, Error> {
        let (lo, hi) = p.default_domain();
        p.curve_on(self.t0.unwrap_or(lo), self.t1.unwrap_or(hi))
    }
}

/// Result of one invocation.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

enum Failure {
    Usage(String),
    Lib(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

type CmdResult<T = Output> = Result<T, Failure>;

/// Text produced by a command plus its exit status.
struct Output {
    text: String,
    code: i32,
}

impl Output {
    fn ok(text: String) -> Self {
        Output { text, code: EXIT_OK }
    }
}

/// Parses `args` (program name first) and runs the command.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    Outcome { code: EXIT_OK, stdout: text, stderr: String::new() }
                }
                _ => Outcome {
                    code: EXIT_USAGE,
                    stdout: String::new(),
                    stderr: format!("{}\n", one_line(&text)),
                },
            };
        }
    };
    match execute(&cli) {
        Ok(out) => match &cli.out {
            Some(path) => match std::fs::write(path, &out.text) {
                Ok(()) => Outcome { code: out.code, stdout: String::new(), stderr: String::new() },
                Err(e) => fail(Failure::Lib(Error::Io(format!("{}: {e}", path.display())))),
            },
            None => Outcome { code: out.code, stdout: out.text, stderr: String::new() },
        },
        Err(f) => fail(f),
    }
}

/// The diagnostic part of a clap message, folded onto one line.
fn one_line(text: &str) -> String {
    let head = text.split("\n\n").next().unwrap_or("usage error");
    head.split_whitespace().collect::<Vec<_>>().join(" ")
}

fn fail(f: Failure) -> Outcome {
    let (code, msg) = match f {
        Failure::Usage(m) => (EXIT_USAGE, m),
        Failure::Lib(e) if e.is_numerical() => (EXIT_NUMERICAL, e.to_string()),
        Failure::Lib(e) => (EXIT_DOMAIN, e.to_string()),
    };
    Outcome { code, stdout: String::new(), stderr: format!("error: {msg}\n") }
}

fn settings(cli: &Cli) -> CmdResult<Settings> {
    let config = Config::discover(cli.config.as_deref()).map_err(Failure::Usage)?;
    let mut over = Tolerances::default();
    for item in &cli.tol {
        let (name, value) = item
            .split_once('=')
            .ok_or_else(|| Failure::Usage(format!("--tol expects name=value, got {item:?}")))?;
        let value: f64 = value
            .trim()
            .parse()
            .map_err(|_| Failure::Usage(format!("--tol {name}: not a number")))?;
        over.set(name.trim(), value).map_err(Failure::Usage)?;
    }
    Ok(Settings::resolve(config, cli.mode, cli.format, cli.seed, &over))
}

fn execute(cli: &Cli) -> CmdResult {
    let s = settings(cli)?;
    match &cli.command {
        Command::Cf(c) => cf_cmd(c, &s),
        Command::Sail(SailCmd::Compute { alpha, max_terms }) => sail_cmd(alpha, *max_terms, &s),
        Command::Polyline(c) => polyline_cmd(c, &s),
        Command::Density(c) => density_cmd(c, &s),
        Command::Reconstruct(c) => reconstruct_cmd(c, &s),
        Command::Paper(PaperCmd::Repro) => Ok(repro_cmd(&s)),
    }
}

/// Exact unless forced to float or some text is a decimal; decimals under
/// `--mode exact` are rejected rather than rounded.
fn exact_mode(s: &Settings, texts: &[&str]) -> CmdResult<bool> {
    let decimal = texts
        .iter()
        .flat_map(|t| t.split([',', ';']))
        .find(|t| is_decimal_text(t));
    match (s.mode, decimal) {
        (Some(Mode::Exact), Some(d)) => Err(Failure::Lib(Error::InvalidArgument(format!(
            "decimal {:?} is not allowed with --mode exact; write it as p/q",
            d.trim()
        )))),
        (Some(Mode::Exact), None) => Ok(true),
        (Some(Mode::Float), _) => Ok(false),
        (None, d) => Ok(d.is_none()),
    }
}

fn split_list<T: Scalar>(s: &str) -> Result<Vec<T>, Error> {
    s.split(',').filter(|t| !t.trim().is_empty()).map(T::parse_text).collect()
}

fn parse_point<T: Scalar>(s: &str) -> Result<Point2<T>, Error> {
    match split_list::<T>(s)?.as_slice() {
        [x, y] => Ok(Point2::new(x.clone(), y.clone())),
        _ => Err(Error::InvalidArgument(format!("expected a point x,y, got {s:?}"))),
    }
}

fn csv_table(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> Result<String, Error> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header)?;
    for r in rows {
        w.write_record(r)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Io(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("utf-8"))
}

fn emit_json(v: serde_json::Value) -> Output {
    Output::ok(format!("{}\n", serde_json::to_string_pretty(&v).expect("serializable")))
}

/// One value: a bare line in CSV mode, `{"value": ...}` in JSON mode.
fn emit_value(s: &Settings, v: serde_json::Value) -> Output {
    match s.format {
        Format::Csv => Output::ok(match &v {
            serde_json::Value::String(t) => format!("{t}\n"),
            serde_json::Value::Number(n) if n.is_f64() => format!("{}\n", n.as_f64().expect("f64")),
            other => format!("{other}\n"),
        }),
        Format::Json => emit_json(json!({ "value": v })),
    }
}

fn num(x: f64) -> serde_json::Value {
    serde_json::Number::from_f64(x).map_or(serde_json::Value::Null, serde_json::Value::Number)
}

fn cf_cmd(c: &CfCmd, s: &Settings) -> CmdResult {
    match c {
        CfCmd::Eval(SeqArg { seq }) => {
            if exact_mode(s, &[seq])? {
                let v = eval_cf(&CfSequence::parse(seq)?);
                Ok(emit_value(s, json!(v.to_string())))
            } else {
                let e = split_list::<f64>(seq)?;
                if e.is_empty() {
                    return Err(Error::EmptySequence.into());
                }
                let c = final_continuant(&e);
                Ok(emit_value(s, num(c.p / c.q)))
            }
        }
        CfCmd::Expand { x, parity, max_terms } => {
            let seq = if exact_mode(s, &[x])? {
                expand_rational(&parse_ratio(x)?, *parity)
            } else {
                expand_real(f64::parse_text(x)?, *max_terms, s.expand_tol())?
            };
            let elems: Vec<String> = seq.elements().iter().map(Scalar::render).collect();
            Ok(match s.format {
                Format::Csv => Output::ok(format!("{}\n", elems.join(","))),
                Format::Json => emit_json(json!({ "elements": elems })),
            })
        }
        CfCmd::Continuants(SeqArg { seq }) => {
            if exact_mode(s, &[seq])? {
                continuants_table(CfSequence::parse(seq)?.elements(), s)
            } else {
                let e = split_list::<f64>(seq)?;
                if e.is_empty() {
                    return Err(Error::EmptySequence.into());
                }
                continuants_table(&e, s)
            }
        }
    }
}

fn continuants_table<T: Scalar>(e: &[T], s: &Settings) -> CmdResult {
    let pairs = continuants(e);
    Ok(match s.format {
        Format::Csv => Output::ok(csv_table(
            &["k", "P", "Q"],
            pairs.iter().enumerate().map(|(k, c)| vec![k.to_string(), c.p.render(), c.q.render()]),
        )?),
        Format::Json => emit_json(json!(pairs
            .iter()
            .enumerate()
            .map(|(k, c)| json!({ "k": k, "P": c.p.render(), "Q": c.q.render() }))
            .collect::<Vec<_>>())),
    })
}

fn sail_cmd(alpha: &str, max_terms: usize, s: &Settings) -> CmdResult {
    let cone = if exact_mode(s, &[alpha])? {
        ConeSpec::new(parse_ratio(alpha)?)?
    } else {
        ConeSpec::from_real(f64::parse_text(alpha)?, max_terms)?
    };
    let r = sail(&cone)?;
    Ok(match s.format {
        Format::Csv => Output::ok(r.to_csv()?),
        Format::Json => emit_json(r.to_json()),
    })
}

fn polyline_cmd(c: &PolylineCmd, s: &Settings) -> CmdResult {
    match c {
        PolylineCmd::Build { seq: SeqArg { seq }, frame } => {
            if exact_mode(s, &[seq, &frame.o, &frame.a0, &frame.v])? {
                build_cmd::<Ratio>(seq, frame, s)
            } else {
                build_cmd::<f64>(seq, frame, s)
            }
        }
        PolylineCmd::Lls(input) => {
            let (texts, json_input) = read_polyline_text(input)?;
            if exact_mode(s, &[&texts, &input.o])? && !json_input.as_ref().is_some_and(json_has_floats) {
                lls_cmd::<Ratio>(input, &texts, json_input.as_ref(), s)
            } else {
                lls_cmd::<f64>(input, &texts, json_input.as_ref(), s)
            }
        }
        PolylineCmd::Closed(SeqArg { seq }) => {
            let closed = if exact_mode(s, &[seq])? {
                is_closed_with(&LlsSequence::<Ratio>::parse(seq)?, &s.polyline_tol())
            } else {
                let e = split_list::<f64>(seq)?;
                is_closed_with(&LlsSequence::with_tolerance(e, &s.polyline_tol())?, &s.polyline_tol())
            };
            Ok(emit_value(s, json!(closed)))
        }
        PolylineCmd::Transform { input, matrix } => {
            let (texts, json_input) = read_polyline_text(input)?;
            if exact_mode(s, &[&texts, &input.o, matrix])?
                && !json_input.as_ref().is_some_and(json_has_floats)
            {
                transform_cmd::<Ratio>(input, &texts, json_input.as_ref(), matrix, s)
            } else {
                transform_cmd::<f64>(input, &texts, json_input.as_ref(), matrix, s)
            }
        }
        PolylineCmd::Endpoint(SeqArg { seq }) => {
            if exact_mode(s, &[seq])? {
                endpoint_cmd::<Ratio>(seq, s)
            } else {
                endpoint_cmd::<f64>(seq, s)
            }
        }
    }
}

fn emit_polyline<T: Scalar>(p: &Polyline<T>, s: &Settings) -> CmdResult {
    Ok(match s.format {
        Format::Csv => Output::ok(p.to_csv()?),
        Format::Json => emit_json(p.to_json()),
    })
}

fn build_cmd<T: Scalar>(seq: &str, f: &FrameArgs, s: &Settings) -> CmdResult {
    let tol = s.polyline_tol();
    let lls = LlsSequence::<T>::with_tolerance(split_list(seq)?, &tol)?;
    let frame = Frame::new(parse_point(&f.o)?, parse_point(&f.a0)?, parse_point(&f.v)?);
    emit_polyline(&build_with(&frame, &lls, &tol)?, s)
}

/// Raw text of the vertex input (for mode detection) and parsed JSON, if any.
fn read_polyline_text(input: &PolylineInput) -> CmdResult<(String, Option<serde_json::Value>)> {
    match (&input.input, &input.vertices) {
        (Some(path), _) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
            if is_json_path(path) {
                let v: serde_json::Value = serde_json::from_str(&text).map_err(Error::from)?;
                Ok((String::new(), Some(v)))
            } else {
                let body = text.lines().skip(1).collect::<Vec<_>>().join(";");
                Ok((body, None))
            }
        }
        (None, Some(inline)) => Ok((inline.clone(), None)),
        (None, None) => Err(Failure::Usage("give --input or --vertices".into())),
    }
}

fn is_json_path(p: &Path) -> bool {
    p.extension().is_some_and(|e| e.eq_ignore_ascii_case("json"))
}

fn json_has_floats(v: &serde_json::Value) -> bool {
    match v {
        serde_json::Value::Number(n) => n.is_f64(),
        serde_json::Value::String(t) => is_decimal_text(t),
        serde_json::Value::Array(a) => a.iter().any(json_has_floats),
        serde_json::Value::Object(o) => o.values().any(json_has_floats),
        _ => false,
    }
}

fn load_polyline<T: Scalar>(
    input: &PolylineInput,
    texts: &str,
    json_input: Option<&serde_json::Value>,
) -> Result<Polyline<T>, Error> {
    if let Some(v) = json_input {
        return Polyline::from_json(v);
    }
    let vertices = texts
        .split(';')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(parse_point)
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Polyline::new(vertices, parse_point(&input.o)?))
}

fn emit_lls<T: Scalar>(lls: &LlsSequence<T>, s: &Settings) -> Output {
    match s.format {
        Format::Csv => Output::ok(format!("{}\n", lls.render())),
        Format::Json => emit_json(json!({
            "lls": lls.elements().iter().map(Scalar::render).collect::<Vec<_>>()
        })),
    }
}

fn lls_cmd<T: Scalar>(
    input: &PolylineInput,
    texts: &str,
    json_input: Option<&serde_json::Value>,
    s: &Settings,
) -> CmdResult {
    let p = load_polyline::<T>(input, texts, json_input)?;
    Ok(emit_lls(&lls_of_with(&p, &s.polyline_tol())?, s))
}

fn transform_cmd<T: Scalar>(
    input: &PolylineInput,
    texts: &str,
    json_input: Option<&serde_json::Value>,
    matrix: &str,
    s: &Settings,
) -> CmdResult {
    let p = load_polyline::<T>(input, texts, json_input)?;
    let m = match split_list::<T>(matrix)?.as_slice() {
        [a, b, c, d] => Matrix2::new(a.clone(), b.clone(), c.clone(), d.clone()),
        _ => return Err(Error::InvalidArgument("--matrix expects a,b,c,d".into()).into()),
    };
    emit_polyline(&transform(&p, &m)?, s)
}

fn endpoint_cmd<T: Scalar>(seq: &str, s: &Settings) -> CmdResult {
    let lls = LlsSequence::<T>::with_tolerance(split_list(seq)?, &s.polyline_tol())?;
    let c = crate::polyline::endpoint_pair(&lls);
    let (p, q) = (c.p.render(), c.q.render());
    Ok(match s.format {
        Format::Csv => Output::ok(csv_table(&["P", "Q", "x", "y"], [vec![p.clone(), q.clone(), q, p]])?),
        Format::Json => emit_json(json!({ "P": p, "Q": q, "endpoint": [q, p] })),
    })
}

fn density_cmd(c: &DensityCmd, s: &Settings) -> CmdResult {
    match c {
        DensityCmd::Sample { preset, domain, n } => {
            let p = preset.preset()?;
            let rows = sample(&domain.curve(&p)?, &p.observer(), *n)?;
            Ok(match s.format {
                Format::Csv => Output::ok(samples_to_csv(&rows)?),
                Format::Json => emit_json(json!(rows
                    .iter()
                    .map(|r| json!({
                        "t": num(r.t), "x": num(r.point.x), "y": num(r.point.y),
                        "A": num(r.a), "B": num(r.b), "kappa": num(r.kappa),
                    }))
                    .collect::<Vec<_>>())),
            })
        }
        DensityCmd::Discretize { preset, domain, n } => {
            let p = preset.preset()?;
            let arc = by_arclength(domain.curve(&p)?)?;
            let (areas, angles) = discretize(&arc, &p.observer(), *n)?;
            let h = areas.span / *n as f64;
            let rows: Vec<(usize, f64, f64, Option<f64>)> = (0..*n)
                .map(|k| {
                    let t = areas.start + h * k as f64;
                    (k, t, areas.values[k], angles.at(t + 0.5 * h))
                })
                .collect();
            Ok(match s.format {
                Format::Csv => Output::ok(csv_table(
                    &["k", "s", "A_hat", "B_hat"],
                    rows.iter().map(|(k, t, a, b)| {
                        vec![k.to_string(), t.to_string(), a.to_string(), b.map_or(String::new(), |b| b.to_string())]
                    }),
                )?),
                Format::Json => emit_json(json!({
                    "n": n,
                    "length": areas.span,
                    "cells": rows
                        .iter()
                        .map(|(k, t, a, b)| json!({ "k": k, "s": num(*t), "A_hat": num(*a), "B_hat": b.map(num) }))
                        .collect::<Vec<_>>(),
                })),
            })
        }
        DensityCmd::Sector { preset, t0, t1 } => {
            let p = preset.preset()?;
            let (lo, hi) = p.default_domain();
            let c = p.curve_on(lo.min(*t0).min(*t1), hi.max(*t0).max(*t1))?;
            let area = sector_area_with(&c, &p.observer(), *t0, *t1, s.quadrature_tol())?;
            Ok(emit_value(s, num(area)))
        }
        DensityCmd::KeplerLambda { a, b, te, ae } => {
            let k = kepler_lambda_with(*a, *b, *te, *ae, s.quadrature_tol())?;
            Ok(match s.format {
                Format::Csv => Output::ok(csv_table(
                    &["lambda", "length", "inverse_density_integral", "period"],
                    [vec![
                        k.lambda.to_string(),
                        k.length.to_string(),
                        k.inverse_density_integral.to_string(),
                        k.period.to_string(),
                    ]],
                )?),
                Format::Json => emit_json(json!({
                    "lambda": num(k.lambda),
                    "length": num(k.length),
                    "inverse_density_integral": num(k.inverse_density_integral),
                    "period": num(k.period),
                })),
            })
        }
    }
}

fn reconstruct_cmd(c: &ReconstructCmd, s: &Settings) -> CmdResult {
    match c {
        ReconstructCmd::Run { preset, a, b, t_start, table, r0, phi0, branch, span, step } => {
            let branch_of = |d: Branch| match branch {
                Some(BranchArg::Out) => Branch::Outward,
                Some(BranchArg::In) => Branch::Inward,
                None => d,
            };
            let rec = match (preset, table) {
                (Some(name), None) => {
                    let track = PresetTrack::new(&Preset::from_name(name, *a, *b)?, *t_start, *span)?;
                    let start = PolarState {
                        r: r0.unwrap_or(track.start.r),
                        phi: phi0.unwrap_or(track.start.phi),
                        branch: branch_of(track.start.branch),
                    };
                    let mut spec = ReconstructionSpec::new(|t| track.density(t), start, *span, *step);
                    spec.switch_tol = s.switch_tol();
                    reconstruct(&spec)?
                }
                (None, Some(path)) => {
                    let text = std::fs::read_to_string(path)
                        .map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
                    let tab = DensityTable::from_csv(&text)?;
                    let (lo, hi) = tab.range();
                    if *span > hi - lo {
                        return Err(Error::InvalidArgument(format!(
                            "span {span} exceeds the table range {}",
                            hi - lo
                        ))
                        .into());
                    }
                    let r0 = r0.ok_or_else(|| Failure::Usage("--table needs --r0".into()))?;
                    let start = PolarState { r: r0, phi: phi0.unwrap_or(0.0), branch: branch_of(Branch::Outward) };
                    let mut spec = ReconstructionSpec::new(|t| tab.eval(lo + t), start, *span, *step);
                    spec.switch_tol = s.switch_tol();
                    reconstruct(&spec)?
                }
                _ => return Err(Failure::Usage("give exactly one of --preset or --table".into())),
            };
            Ok(match s.format {
                Format::Csv => Output::ok(rec.to_csv()?),
                Format::Json => emit_json(json!({
                    "branch_switches": rec.branch_switches,
                    "rhs_evaluations": rec.rhs_evaluations,
                    "samples": rec
                        .samples
                        .iter()
                        .map(|r| json!({
                            "t": num(r.t), "x": num(r.x), "y": num(r.y), "r": num(r.r),
                            "phi": num(r.phi), "branch": r.branch.sign() as i32,
                        }))
                        .collect::<Vec<_>>(),
                })),
            })
        }
        ReconstructCmd::Roundtrip { preset, t_start, span, step } => {
            let p = preset.preset()?;
            let span = match (span, p) {
                (Some(v), _) => *v,
                (None, Preset::EllipseCenter { .. } | Preset::EllipseFocus { .. }) => {
                    by_arclength(p.curve())?.length()
                }
                (None, _) => {
                    return Err(Failure::Usage(format!("preset {} needs --span", p.name())));
                }
            };
            let r = roundtrip_error(&p, *t_start, span, *step)?;
            Ok(match s.format {
                Format::Csv => Output::ok(csv_table(
                    &["max_error", "steps", "rhs_evaluations", "branch_switches"],
                    [vec![
                        r.max_error.to_string(),
                        r.steps.to_string(),
                        r.rhs_evaluations.to_string(),
                        r.branch_switches.to_string(),
                    ]],
                )?),
                Format::Json => emit_json(json!({
                    "max_error": num(r.max_error),
                    "steps": r.steps,
                    "rhs_evaluations": r.rhs_evaluations,
                    "branch_switches": r.branch_switches,
                })),
            })
        }
    }
}

fn repro_cmd(s: &Settings) -> Output {
    let results = paper_checks(s.seed);
    let all = results.iter().all(|r| r.passed);
    let text = match s.format {
        Format::Csv => results.iter().map(|r| format!("{r}\n")).collect(),
        Format::Json => format!(
            "{}\n",
            serde_json::to_string_pretty(&json!(results
                .iter()
                .map(|r| json!({ "name": r.name, "passed": r.passed, "detail": r.detail }))
                .collect::<Vec<_>>()))
            .expect("serializable")
        ),
    };
    Output { text, code: if all { EXIT_OK } else { EXIT_NUMERICAL } }
}
