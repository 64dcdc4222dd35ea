//! Command-line front end.
//!
//! Every command builds one JSON envelope `{command, params, results,
//! diagnostics}`. Text and CSV output are renderings of that envelope. Keys
//! are sorted and no timings are recorded, so identical arguments give
//! byte-identical output.
//!
//! Exit codes: 0 success, 1 a verification property failed, 2 usage or input
//! error.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};

use crate::bounds::{
    bounded_density_upper_bound, gauss_tail_bound, one_sided_extremal, one_sided_tail_bound,
    shift_lower_bound, symmetric_unimodal_extremal, symmetric_unimodal_tail_bound,
    two_sided_unimodal_bound, BoundResult,
};
use crate::error::Error;
use crate::extremal::{ExtremalDistribution, TailConvention};
use crate::input::{parse_sample_text, parse_values, SampleInput};
use crate::normal::normal_cdf;
use crate::roc::{auc_mann_whitney, roc_curve, ClassLabel, EmpiricalSample};
use crate::verify::{prob_leq_shift, run_suites, Suite, SuiteConfig};

pub const EXIT_OK: u8 = 0;
pub const EXIT_VERIFY_FAILED: u8 = 1;
pub const EXIT_USAGE: u8 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "rocbounds",
    version,
    about = "Distribution-free bounds on P(X <= Y + mu) and ROC/AUC tools"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    #[arg(long, value_enum, default_value_t = OutputFormat::Json, global = true)]
    pub format: OutputFormat,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Json,
    Text,
    Csv,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate one of the closed-form bounds.
    Bound(BoundArgs),
    /// Empirical ROC curve and both AUC estimates.
    Roc(RocArgs),
    /// Run verification suites; exits 1 if any property fails.
    Verify(VerifyArgs),
    /// Distribution-free lower bound against two independent unit Gaussians.
    CompareGaussian(CompareArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BoundKind {
    /// P(X >= t), symmetric unimodal, unit variance (--t)
    Lemma2,
    /// P(|X| > t sqrt(1 + mu_x^2)), unimodal at 0, unit variance (--t, --mu-x)
    Cor3,
    /// P(X > t), unimodal at 0, unit variance (--t)
    Thm4,
    /// lower bound on P(X <= Y + mu) (--mu)
    Cor6,
    /// upper bound on P(X <= Y + mu), densities bounded by b (--b, --mu)
    Thm9,
    /// Gauss's inequality P(|X - m| > s) (--s, --tau)
    Gauss,
}

#[derive(Debug, Args)]
pub struct BoundArgs {
    #[arg(value_enum)]
    pub kind: BoundKind,
    #[arg(long, allow_negative_numbers = true)]
    pub t: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub mu: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub b: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub s: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub tau: Option<f64>,
    #[arg(long = "mu-x", allow_negative_numbers = true)]
    pub mu_x: Option<f64>,
    #[arg(long, value_enum, default_value_t = ConventionArg::Gt)]
    pub tail_convention: ConventionArg,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ConventionArg {
    Gt,
    Ge,
}

impl From<ConventionArg> for TailConvention {
    fn from(c: ConventionArg) -> Self {
        match c {
            ConventionArg::Gt => TailConvention::Gt,
            ConventionArg::Ge => TailConvention::Ge,
        }
    }
}

#[derive(Debug, Args)]
pub struct RocArgs {
    /// Class-0 then class-1 files, or a single `value,label` file.
    #[arg(long = "in", required = true)]
    pub inputs: Vec<PathBuf>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Suite to run (default: all).
    #[arg(long, value_parser = Suite::ALL.map(Suite::name))]
    pub suite: Vec<String>,
    #[arg(long)]
    pub t: Option<f64>,
    /// Sweep grid points per parameter.
    #[arg(long, default_value_t = 1001)]
    pub grid: usize,
    /// Monte Carlo draws per configuration.
    #[arg(long, default_value_t = 1_000_000)]
    pub n: usize,
    #[arg(long, env = "ROCBOUNDS_SEED", default_value_t = 0)]
    pub seed: u64,
    /// Random cases per suite (default depends on the suite).
    #[arg(long)]
    pub cases: Option<usize>,
}

#[derive(Debug, Args)]
pub struct CompareArgs {
    #[arg(long, allow_negative_numbers = true)]
    pub mu: f64,
}

/// Rendered output and exit code of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub stdout: String,
    pub code: u8,
}

#[derive(Debug)]
struct UsageError(String);

impl From<Error> for UsageError {
    fn from(e: Error) -> Self {
        UsageError(e.to_string())
    }
}

type CmdResult<T> = std::result::Result<T, UsageError>;

struct Envelope {
    command: &'static str,
    params: Map<String, Value>,
    results: Value,
    diagnostics: Map<String, Value>,
    code: u8,
}

impl Envelope {
    fn to_json(&self) -> Value {
        json!({
            "command": self.command,
            "params": self.params,
            "results": self.results,
            "diagnostics": self.diagnostics,
        })
    }
}

/// Runs a parsed command. Errors become a message on the returned error
/// string with exit code 2.
pub fn run(cli: &Cli) -> std::result::Result<Outcome, (String, u8)> {
    let envelope = match &cli.command {
        Command::Bound(a) => cmd_bound(a),
        Command::Roc(a) => cmd_roc(a),
        Command::Verify(a) => cmd_verify(a),
        Command::CompareGaussian(a) => cmd_compare_gaussian(a),
    }
    .map_err(|UsageError(m)| (m, EXIT_USAGE))?;
    Ok(Outcome {
        stdout: render(&envelope, cli.format),
        code: envelope.code,
    })
}

fn require(name: &str, v: Option<f64>) -> CmdResult<f64> {
    let v = v.ok_or_else(|| UsageError(format!("missing required parameter --{name}")))?;
    finite(name, v)
}

fn finite(name: &str, v: f64) -> CmdResult<f64> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(UsageError(format!(
            "parameter --{name} must be finite, got {v}"
        )))
    }
}

fn to_value<T: serde::Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("result types serialize to JSON")
}

fn cmd_bound(a: &BoundArgs) -> CmdResult<Envelope> {
    let convention = TailConvention::from(a.tail_convention);
    let mut params = Map::new();
    let mut record = |name: &str, v: f64| {
        params.insert(name.to_string(), json!(v));
        v
    };
    let (kind, bound, attaining): (&str, BoundResult, Option<(ExtremalDistribution, f64)>) =
        match a.kind {
            BoundKind::Lemma2 => {
                let t = record("t", require("t", a.t)?);
                let d = symmetric_unimodal_extremal(t)?;
                let tail = d.tail_prob_with(t, convention);
                ("lemma2", symmetric_unimodal_tail_bound(t)?, Some((d, tail)))
            }
            BoundKind::Cor3 => {
                let t = record("t", require("t", a.t)?);
                let mu_x = record("mu_x", finite("mu-x", a.mu_x.unwrap_or(0.0))?);
                ("cor3", two_sided_unimodal_bound(t, mu_x)?, None)
            }
            BoundKind::Thm4 => {
                let t = record("t", require("t", a.t)?);
                let d = one_sided_extremal(t)?;
                let tail = d.tail_prob_with(t, convention);
                ("thm4", one_sided_tail_bound(t)?, Some((d, tail)))
            }
            BoundKind::Cor6 => {
                let mu = record("mu", require("mu", a.mu)?);
                ("cor6", shift_lower_bound(mu)?, None)
            }
            BoundKind::Thm9 => {
                let b = record("b", require("b", a.b)?);
                let mu = record("mu", require("mu", a.mu)?);
                let bound = bounded_density_upper_bound(b, mu)?;
                let d = ExtremalDistribution::uniform_bounded_density(b)?;
                let p = prob_leq_shift(&d, &d, mu);
                ("thm9", bound, Some((d, p)))
            }
            BoundKind::Gauss => {
                let s = record("s", require("s", a.s)?);
                let tau = record("tau", finite("tau", a.tau.unwrap_or(1.0))?);
                ("gauss", gauss_tail_bound(s, tau)?, None)
            }
        };
    params.insert("inequality".into(), json!(kind));
    if attaining.is_some() && a.kind != BoundKind::Thm9 {
        params.insert("tail_convention".into(), to_value(&convention));
    }
    let mut results = to_value(&bound);
    let mut diagnostics = Map::new();
    if let Some((d, attained)) = attaining {
        results["attaining_distribution"] = to_value(&d);
        results["attained"] = json!(attained);
        diagnostics.insert("bound_minus_attained".into(), json!(bound.value - attained));
    }
    Ok(Envelope {
        command: "bound",
        params,
        results,
        diagnostics,
        code: EXIT_OK,
    })
}

fn read_file(path: &Path) -> CmdResult<String> {
    std::fs::read_to_string(path)
        .map_err(|e| UsageError(format!("cannot read {}: {e}", path.display())))
}

fn in_file<T>(path: &Path, r: crate::error::Result<T>) -> CmdResult<T> {
    r.map_err(|e| UsageError(format!("{}: {e}", path.display())))
}

fn sample(path: &Path, values: Vec<f64>, label: ClassLabel) -> CmdResult<EmpiricalSample> {
    in_file(path, EmpiricalSample::new(values, label))
}

fn cmd_roc(a: &RocArgs) -> CmdResult<Envelope> {
    let (s0, s1) = match a.inputs.as_slice() {
        [path] => {
            let text = read_file(path)?;
            match in_file(path, parse_sample_text(&text))? {
                SampleInput::Labeled(l) => (
                    sample(path, l.class0, ClassLabel::Class0)?,
                    sample(path, l.class1, ClassLabel::Class1)?,
                ),
                SampleInput::Single(_) => {
                    return Err(UsageError(format!(
                        "{}: a single input must have `value,label` rows; otherwise pass two files",
                        path.display()
                    )))
                }
            }
        }
        [p0, p1] => {
            let v0 = in_file(p0, parse_values(&read_file(p0)?))?;
            let v1 = in_file(p1, parse_values(&read_file(p1)?))?;
            (
                sample(p0, v0, ClassLabel::Class0)?,
                sample(p1, v1, ClassLabel::Class1)?,
            )
        }
        other => {
            return Err(UsageError(format!(
                "roc takes one labeled file or two class files, got {}",
                other.len()
            )))
        }
    };
    let curve = roc_curve(&s0, &s1);
    let mw = auc_mann_whitney(&s0, &s1);
    let mut params = Map::new();
    params.insert(
        "inputs".into(),
        json!(a
            .inputs
            .iter()
            .map(|p| p.display().to_string())
            .collect::<Vec<_>>()),
    );
    let mut diagnostics = Map::new();
    diagnostics.insert("n0".into(), json!(s0.len()));
    diagnostics.insert("n1".into(), json!(s1.len()));
    Ok(Envelope {
        command: "roc",
        params,
        results: json!({
            "points": curve.points,
            "auc_trapezoid": curve.auc_trapezoid,
            "auc_mann_whitney": mw,
            "difference": curve.auc_trapezoid - mw,
        }),
        diagnostics,
        code: EXIT_OK,
    })
}

fn cmd_verify(a: &VerifyArgs) -> CmdResult<Envelope> {
    let suites: Vec<Suite> = if a.suite.is_empty() {
        Suite::ALL.to_vec()
    } else {
        a.suite
            .iter()
            .map(|s| s.parse::<Suite>())
            .collect::<crate::error::Result<_>>()?
    };
    if let Some(t) = a.t {
        finite("t", t)?;
    }
    let config = SuiteConfig {
        t: a.t,
        grid: a.grid,
        n: a.n,
        seed: a.seed,
        cases: a.cases,
    };
    let outcomes = run_suites(&suites, &config)?;
    let failed: Vec<&str> = outcomes
        .iter()
        .filter(|o| !o.passed)
        .map(|o| o.name.as_str())
        .collect();
    let mut params = to_value(&config)
        .as_object()
        .cloned()
        .expect("config serializes to an object");
    params.insert("suites".into(), to_value(&suites));
    let mut diagnostics = Map::new();
    diagnostics.insert("total".into(), json!(outcomes.len()));
    diagnostics.insert("passed".into(), json!(outcomes.len() - failed.len()));
    diagnostics.insert("failed".into(), json!(failed));
    let code = if failed.is_empty() {
        EXIT_OK
    } else {
        EXIT_VERIFY_FAILED
    };
    Ok(Envelope {
        command: "verify",
        params,
        results: to_value(&outcomes),
        diagnostics,
        code,
    })
}

fn cmd_compare_gaussian(a: &CompareArgs) -> CmdResult<Envelope> {
    let mu = finite("mu", a.mu)?;
    if mu <= 0.0 {
        return Err(UsageError(format!(
            "parameter --mu must be positive, got {mu}"
        )));
    }
    let bound = shift_lower_bound(mu)?;
    // X - Y ~ N(0, 2) for independent standard normals
    let gaussian = normal_cdf(mu / std::f64::consts::SQRT_2);
    let mut params = Map::new();
    params.insert("mu".into(), json!(mu));
    let mut diagnostics = Map::new();
    diagnostics.insert("gaussian_cdf_abs_error_bound".into(), json!(1e-14));
    Ok(Envelope {
        command: "compare-gaussian",
        params,
        results: json!({
            "distribution_free": bound,
            "gaussian": gaussian,
            "difference": gaussian - bound.value,
        }),
        diagnostics,
        code: EXIT_OK,
    })
}

fn render(env: &Envelope, format: OutputFormat) -> String {
    let json = env.to_json();
    match format {
        OutputFormat::Json => {
            let mut s = serde_json::to_string_pretty(&json).expect("JSON value serializes");
            s.push('\n');
            s
        }
        OutputFormat::Text => {
            let mut rows = Vec::new();
            flatten("", &json, &mut rows);
            let width = rows.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
            let mut s = String::new();
            for (k, v) in rows {
                let _ = writeln!(s, "{k:<width$}  {v}");
            }
            s
        }
        OutputFormat::Csv => render_csv(env),
    }
}

fn scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

fn flatten(prefix: &str, v: &Value, out: &mut Vec<(String, String)>) {
    let key = |k: &str| {
        if prefix.is_empty() {
            k.to_string()
        } else {
            format!("{prefix}.{k}")
        }
    };
    match v {
        Value::Object(m) => m.iter().for_each(|(k, v)| flatten(&key(k), v, out)),
        Value::Array(a) => a
            .iter()
            .enumerate()
            .for_each(|(i, v)| flatten(&key(&i.to_string()), v, out)),
        other => out.push((prefix.to_string(), scalar(other))),
    }
}

fn csv_line(fields: &[String]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(fields).expect("writing to memory");
    String::from_utf8(w.into_inner().expect("flushing to memory")).expect("UTF-8 input")
}

/// ROC points and suite outcomes are tables; everything else is
/// `key,value` rows.
fn render_csv(env: &Envelope) -> String {
    let mut s = String::new();
    match env.command {
        "roc" => {
            s.push_str("alpha,power\n");
            for p in env.results["points"].as_array().into_iter().flatten() {
                s.push_str(&csv_line(&[scalar(&p["alpha"]), scalar(&p["power"])]));
            }
        }
        "verify" => {
            s.push_str("suite,name,passed,observed,tolerance,detail\n");
            for o in env.results.as_array().into_iter().flatten() {
                let fields = ["suite", "name", "passed", "observed", "tolerance", "detail"]
                    .map(|k| scalar(&o[k]));
                s.push_str(&csv_line(&fields));
            }
        }
        _ => {
            s.push_str("key,value\n");
            let mut rows = Vec::new();
            flatten("", &env.results, &mut rows);
            for (k, v) in rows {
                s.push_str(&csv_line(&[k, v]));
            }
        }
    }
    s
}
