//! `asalab` command-line front end.
//!
//! Exit codes: 0 success, 1 verification failures, 2 argument errors,
//! 3 domain errors.

use asalab::asa::{ball_value, eval_asa, eval_lp};
use asalab::extremal::{extremal_bounds, optimize_extremal, BoundsInterval, Budget, ExtremalKind};
use asalab::funclass::AdmissibleFunction;
use asalab::geometry::{BodySpec, ConvexBody, Transform};
use asalab::verify::run_suite;
use asalab::{Error, QuadratureConfig};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

const GRID_ENV: &str = "ASALAB_GRID";

#[derive(Parser)]
#[command(name = "asalab", version, about = "General affine surface areas of planar convex bodies")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Output {
    /// Quadrature grid size (even, ≥ 64). Defaults to $ASALAB_GRID or 1024.
    #[arg(long, global = true)]
    grid: Option<usize>,
    /// Write the result here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate as_f(K), or the L_p value with --p.
    Compute {
        /// Body spec: a JSON file or inline JSON.
        #[arg(long)]
        body: String,
        /// Function spec: a JSON file or inline JSON.
        #[arg(long, required_unless_present = "p", conflicts_with = "p")]
        func: Option<String>,
        /// L_p exponent; accepts `inf` and `-inf`.
        #[arg(long, allow_hyphen_values = true)]
        p: Option<String>,
        #[command(flatten)]
        output: Output,
    },
    /// Certified interval for an extremal functional, with a witness body.
    Extremal {
        #[arg(long)]
        body: String,
        #[arg(long)]
        func: String,
        /// IS_phi, os_psi, OS_phi_star, is_star_psi, or any other kind tag.
        #[arg(long, default_value = "IS_phi")]
        kind: String,
        /// `starts:steps:kmax`, or just `starts`.
        #[arg(long)]
        budget: Option<String>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Report the certified interval only.
        #[arg(long)]
        no_optimize: bool,
        #[command(flatten)]
        output: Output,
    },
    /// Run a verification suite and report every checked instance.
    Verify {
        #[arg(long, default_value = "all")]
        suite: String,
        #[arg(long, default_value_t = 7)]
        seed: u64,
        /// Number of random bodies.
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[command(flatten)]
        output: Output,
    },
    /// Tabulate a quantity against a radius or scale factor.
    Sweep {
        /// as_phi_ball (as_f(rB₂)) or as_scaled (as_f(rK), needs --body).
        #[arg(long)]
        quantity: String,
        #[arg(long)]
        func: String,
        #[arg(long)]
        body: Option<String>,
        /// `start:stop:count`, evenly spaced and inclusive.
        #[arg(long)]
        r: String,
        /// Column manifest path; defaults to `<out>.columns.json` with --out.
        #[arg(long)]
        manifest: Option<PathBuf>,
        #[command(flatten)]
        output: Output,
    },
}

enum Failure {
    Usage(String),
    Domain(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Spec(_) | Error::UnknownSuite(_) => Failure::Usage(e.to_string()),
            other => Failure::Domain(other),
        }
    }
}

type CliResult<T> = std::result::Result<T, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => code,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Domain(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(3)
        }
    }
}

fn run(command: Command) -> CliResult<ExitCode> {
    match command {
        Command::Compute { body, func, p, output } => {
            let cfg = config(&output)?;
            json_only(&output, "compute")?;
            let k = load_body(&body, &cfg)?;
            let text = match (func, p) {
                (Some(f), None) => to_json(&eval_asa(&k, &load_function(&f)?, &cfg)?),
                (None, Some(p)) => to_json(&eval_lp(&k, parse_p(&p)?, &cfg)?),
                _ => unreachable!("clap enforces exactly one of --func and --p"),
            };
            emit(&output, &text)?;
        }
        Command::Extremal {
            body,
            func,
            kind,
            budget,
            seed,
            no_optimize,
            output,
        } => {
            let cfg = config(&output)?;
            json_only(&output, "extremal")?;
            let k = load_body(&body, &cfg)?;
            let f = load_function(&func)?;
            let kind: ExtremalKind = kind.parse().map_err(|e: Error| Failure::Usage(e.to_string()))?;
            let budget = parse_budget(budget.as_deref())?;
            let bounds = extremal_bounds(&k, &f, kind, &cfg)?;
            let optimizable = bounds.symbolic.is_none()
                && matches!(
                    kind,
                    ExtremalKind::InnerMaxPhi
                        | ExtremalKind::OuterMinPsi
                        | ExtremalKind::OuterMaxPhiStar
                        | ExtremalKind::InnerMinStarPsi
                );
            let report = if no_optimize || !optimizable {
                ExtremalReport {
                    bounds,
                    witness: None,
                    estimate: None,
                    evaluations: None,
                }
            } else {
                let r = optimize_extremal(&k, &f, kind, budget, seed, &cfg)?;
                ExtremalReport {
                    bounds: r.bounds,
                    witness: Some(r.witness.to_spec()),
                    estimate: Some(r.estimate),
                    evaluations: Some(r.evaluations),
                }
            };
            emit(&output, &to_json(&report))?;
        }
        Command::Verify {
            suite,
            seed,
            trials,
            output,
        } => {
            let cfg = config(&output)?;
            let report = run_suite(&suite, seed, trials, &cfg)?;
            let text = match output.format.unwrap_or(Format::Json) {
                Format::Json => report.to_json(),
                Format::Csv => report.to_csv()?,
            };
            emit(&output, &text)?;
            if !report.passed() {
                eprintln!("{} of {} checks failed", report.summary.failures, report.records.len());
                return Ok(ExitCode::from(1));
            }
        }
        Command::Sweep {
            quantity,
            func,
            body,
            r,
            manifest,
            output,
        } => {
            let cfg = config(&output)?;
            let f = load_function(&func)?;
            let radii = parse_range(&r)?;
            let (rows, spec) = match quantity.as_str() {
                "as_phi_ball" | "as_psi_ball" | "as_ball" => {
                    (radii.iter().map(|&r| (r, ball_value(2, r, &f))).collect::<Vec<_>>(), None)
                }
                "as_scaled" => {
                    let src = body.ok_or_else(|| Failure::Usage("as_scaled needs --body".into()))?;
                    let k = load_body(&src, &cfg)?;
                    let mut rows = Vec::with_capacity(radii.len());
                    for &r in &radii {
                        let v = eval_asa(&k.transform(Transform::Scale(r), &cfg)?, &f, &cfg)?;
                        rows.push((r, v.as_f64()));
                    }
                    (rows, Some(k.to_spec()))
                }
                other => {
                    return Err(Failure::Usage(format!(
                        "unknown quantity `{other}`; expected as_phi_ball or as_scaled"
                    )))
                }
            };
            let text = match output.format.unwrap_or(Format::Csv) {
                Format::Csv => {
                    let mut s = String::from("r,value\n");
                    for (r, v) in &rows {
                        s.push_str(&format!("{r},{v}\n"));
                    }
                    s
                }
                Format::Json => to_json(&rows.iter().map(|&(r, value)| SweepRow { r, value }).collect::<Vec<_>>()),
            };
            emit(&output, &text)?;
            let manifest_path = manifest.or_else(|| {
                output.out.as_ref().map(|p| {
                    let mut s = p.clone().into_os_string();
                    s.push(".columns.json");
                    PathBuf::from(s)
                })
            });
            if let Some(path) = manifest_path {
                let m = Manifest {
                    quantity: quantity.clone(),
                    function: f.name(),
                    body: spec,
                    rows: rows.len(),
                    columns: vec![
                        Column {
                            name: "r",
                            description: "radius of the ball, or scale factor applied to the body",
                        },
                        Column {
                            name: "value",
                            description: "affine surface area of the scaled body",
                        },
                    ],
                };
                write_file(&path, &to_json(&m))?;
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

#[derive(Serialize)]
struct ExtremalReport {
    bounds: BoundsInterval,
    /// Fourier spec of the witness, accepted as `--body` by `compute`.
    #[serde(skip_serializing_if = "Option::is_none")]
    witness: Option<BodySpec>,
    #[serde(skip_serializing_if = "Option::is_none")]
    estimate: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    evaluations: Option<usize>,
}

#[derive(Serialize)]
struct SweepRow {
    r: f64,
    value: f64,
}

#[derive(Serialize)]
struct Column {
    name: &'static str,
    description: &'static str,
}

#[derive(Serialize)]
struct Manifest {
    quantity: String,
    function: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    body: Option<BodySpec>,
    rows: usize,
    columns: Vec<Column>,
}

fn config(output: &Output) -> CliResult<QuadratureConfig> {
    let grid = match output.grid {
        Some(g) => g,
        None => match std::env::var(GRID_ENV) {
            Ok(v) => v
                .trim()
                .parse()
                .map_err(|_| Failure::Usage(format!("{GRID_ENV} must be an integer, got `{v}`")))?,
            Err(_) => asalab::config::DEFAULT_GRID,
        },
    };
    QuadratureConfig::with_grid(grid).map_err(|e| Failure::Usage(e.to_string()))
}

fn json_only(output: &Output, command: &str) -> CliResult<()> {
    if output.format == Some(Format::Csv) {
        return Err(Failure::Usage(format!("{command} emits JSON only")));
    }
    Ok(())
}

/// Inline JSON, or the contents of a file.
fn read_spec(arg: &str) -> CliResult<String> {
    if arg.trim_start().starts_with('{') {
        return Ok(arg.to_string());
    }
    std::fs::read_to_string(arg).map_err(|e| Failure::Usage(format!("cannot read `{arg}`: {e}")))
}

fn load_body(arg: &str, cfg: &QuadratureConfig) -> CliResult<ConvexBody> {
    let spec = BodySpec::from_json(&read_spec(arg)?)?;
    Ok(ConvexBody::from_spec(&spec, cfg)?)
}

fn load_function(arg: &str) -> CliResult<AdmissibleFunction> {
    Ok(AdmissibleFunction::from_json(&read_spec(arg)?)?)
}

fn parse_p(s: &str) -> CliResult<f64> {
    match s {
        "inf" | "+inf" => Ok(f64::INFINITY),
        "-inf" => Ok(f64::NEG_INFINITY),
        _ => s
            .parse::<f64>()
            .ok()
            .filter(|p| p.is_finite())
            .ok_or_else(|| Failure::Usage(format!("--p must be a number or ±inf, got `{s}`"))),
    }
}

fn parse_budget(s: Option<&str>) -> CliResult<Budget> {
    let mut b = Budget::default();
    let Some(s) = s else { return Ok(b) };
    let parts: Vec<&str> = s.split(':').collect();
    let bad = || Failure::Usage(format!("--budget expects starts[:steps[:kmax]], got `{s}`"));
    if parts.len() > 3 {
        return Err(bad());
    }
    let nums = parts
        .iter()
        .map(|p| p.parse::<usize>().map_err(|_| bad()))
        .collect::<CliResult<Vec<_>>>()?;
    b.starts = nums[0];
    if let Some(&steps) = nums.get(1) {
        b.steps = steps;
    }
    if let Some(&kmax) = nums.get(2) {
        b.kmax = kmax;
    }
    Ok(b)
}

fn parse_range(s: &str) -> CliResult<Vec<f64>> {
    let bad = || Failure::Usage(format!("--r expects start:stop:count with 0 < start, got `{s}`"));
    let parts: Vec<&str> = s.split(':').collect();
    if parts.len() != 3 {
        return Err(bad());
    }
    let a: f64 = parts[0].parse().map_err(|_| bad())?;
    let b: f64 = parts[1].parse().map_err(|_| bad())?;
    let n: usize = parts[2].parse().map_err(|_| bad())?;
    if !(a > 0.0 && b > 0.0 && a.is_finite() && b.is_finite()) || n == 0 {
        return Err(bad());
    }
    if n == 1 {
        return Ok(vec![a]);
    }
    Ok((0..n).map(|i| a + (b - a) * i as f64 / (n - 1) as f64).collect())
}

fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("outputs serialize")
}

fn emit(output: &Output, text: &str) -> CliResult<()> {
    match &output.out {
        Some(path) => write_file(path, text),
        None => {
            let mut out = std::io::stdout().lock();
            match out.write_all(terminated(text).as_bytes()).and_then(|_| out.flush()) {
                // a closed reader (e.g. `| head`) is not an error
                Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => {
                    Err(Failure::Usage(format!("cannot write to stdout: {e}")))
                }
                _ => Ok(()),
            }
        }
    }
}

fn terminated(text: &str) -> String {
    let mut body = text.to_string();
    if !body.ends_with('\n') {
        body.push('\n');
    }
    body
}

fn write_file(path: &Path, text: &str) -> CliResult<()> {
    std::fs::write(path, terminated(text)).map_err(|e| Failure::Usage(format!("cannot write `{}`: {e}", path.display())))
}
