//! The `hbtfisher` command-line interface.
//!
//! Exit codes: 0 success, 2 usage, 3 computation error, 4 no critical
//! distance in the bracket. Data goes to stdout (or `--out`), diagnostics to
//! stderr.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use hbtfisher_core::coherent::{self, CoherentConfig, PrefactorConvention};
use hbtfisher_core::crb::{self, CriticalDistanceQuery};
use hbtfisher_core::fisher::{self, PointError};
use hbtfisher_core::mc::{McConfig, McEstimate, MlStudy, MlStudyConfig, Outcome, ValidationReport};
use hbtfisher_core::{
    DetectionModel, Error, EventSet, ExperimentConfig, FisherResult, GaussianPsfPair, Routing,
    SweepAxis,
};

use crate::config;
use crate::manifest::RunManifest;
use crate::output::{format_number, json_document, json_number, CsvTable};
use crate::parallel;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_COMPUTE: i32 = 3;
pub const EXIT_NO_SOLUTION: i32 = 4;

#[derive(Debug, Parser)]
#[command(
    name = "hbtfisher",
    version,
    about = "Fisher information and Cramér-Rao bounds for two-emitter coincidence imaging",
    after_help = "Any subcommand accepts --config <file> with `flag = value` lines; flags on the command line take precedence."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Fisher information of one configuration.
    Fisher(FisherArgs),
    /// Fisher information and bound over a grid of eta or d (CSV).
    Sweep(SweepArgs),
    /// Separation at which the Cramér-Rao bound equals the separation.
    CriticalDistance(CriticalArgs),
    /// Monte Carlo event frequencies checked against the closed forms.
    Mc(McArgs),
    /// n-detector coherent-state coincidence quantities.
    Coherent(CoherentArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Events {
    Ab,
    Abg,
}

impl From<Events> for EventSet {
    fn from(e: Events) -> Self {
        match e {
            Events::Ab => EventSet::AB,
            Events::Abg => EventSet::ABG,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum RoutingArg {
    Paper,
    Classical,
}

impl From<RoutingArg> for Routing {
    fn from(r: RoutingArg) -> Self {
        match r {
            RoutingArg::Paper => Routing::PaperModel,
            RoutingArg::Classical => Routing::ClassicalRouting,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Axis {
    Eta,
    D,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Prefactor {
    Paper,
    Derived,
}

#[derive(Debug, Args)]
struct ModelArgs {
    /// PSF width.
    #[arg(long, default_value_t = 1.0)]
    sigma: f64,
    /// Number of imaging repetitions M.
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u32).range(1..))]
    m: u32,
    #[arg(long, value_enum, default_value = "abg")]
    events: Events,
    #[arg(long, value_enum, default_value = "paper")]
    routing: RoutingArg,
}

impl ModelArgs {
    fn describe(&self, m: RunManifest) -> RunManifest {
        let set: EventSet = self.events.into();
        let routing: Routing = self.routing.into();
        m.param("sigma", self.sigma)
            .param("m", self.m)
            .param("events", set.label())
            .param("routing", routing.label())
    }

    fn config(&self, d: f64, eta: f64) -> Result<ExperimentConfig, Error> {
        ExperimentConfig::new(
            GaussianPsfPair::new(self.sigma, d)?,
            DetectionModel::new(eta, self.events.into(), self.routing.into())?,
            self.m,
        )
    }
}

#[derive(Debug, Args)]
struct FisherArgs {
    #[arg(long)]
    d: f64,
    #[arg(long)]
    eta: f64,
    #[command(flatten)]
    model: ModelArgs,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
}

#[derive(Debug, Args)]
struct SweepArgs {
    #[arg(long, value_enum)]
    axis: Axis,
    #[arg(long)]
    min: f64,
    #[arg(long)]
    max: f64,
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
    steps: u32,
    /// Separation, required when sweeping eta.
    #[arg(long)]
    d: Option<f64>,
    /// Efficiency, required when sweeping d.
    #[arg(long)]
    eta: Option<f64>,
    #[command(flatten)]
    model: ModelArgs,
    /// Write the CSV here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct CriticalArgs {
    #[arg(long)]
    eta: f64,
    #[command(flatten)]
    model: ModelArgs,
    #[arg(long, default_value_t = 0.2)]
    bracket_lo: f64,
    #[arg(long, default_value_t = 3.0)]
    bracket_hi: f64,
    #[arg(long, default_value_t = 1e-4)]
    tol: f64,
}

#[derive(Debug, Args)]
struct McArgs {
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    trials: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 0.0)]
    x: f64,
    #[arg(long)]
    d: f64,
    #[arg(long)]
    eta: f64,
    #[arg(long, default_value_t = 1.0)]
    sigma: f64,
    /// Also run the maximum-likelihood variance study at d_true = --d with
    /// --trials shots per sample.
    #[arg(long)]
    ml_study: bool,
    #[arg(long, default_value_t = 200, value_parser = clap::value_parser!(u32).range(2..))]
    samples: u32,
}

#[derive(Debug, Args)]
struct CoherentArgs {
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u32).range(1..))]
    n: u32,
    #[arg(long, default_value_t = 0.0)]
    x: f64,
    #[arg(long, default_value_t = 0.0)]
    d: f64,
    #[arg(long, default_value_t = 1.0)]
    sigma: f64,
    #[arg(long, default_value_t = 1.0)]
    mean_photons: f64,
    #[arg(long, default_value_t = 1.0)]
    field_scale: f64,
    #[arg(long, value_enum, default_value = "paper")]
    prefactor: Prefactor,
    /// Emit one row for every n = 1..=max instead of a single n.
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
    sweep_n: Option<u32>,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
}

/// A failed run: exit code plus the diagnostic line.
#[derive(Debug)]
struct Failure {
    code: i32,
    message: String,
    /// Written to stdout before failing (e.g. the scan behind NoSignChange).
    payload: Option<String>,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Self { code: EXIT_USAGE, message: message.into(), payload: None }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Self { code: EXIT_COMPUTE, message: format!("{}: {e}", e.name()), payload: None }
    }
}

impl From<PointError> for Failure {
    fn from(e: PointError) -> Self {
        Self {
            code: EXIT_COMPUTE,
            message: format!("{}: {e}", e.error.name()),
            payload: None,
        }
    }
}

/// Output produced by a successful command.
struct Output {
    text: String,
    path: Option<PathBuf>,
}

/// Runs the CLI on `args` (including the program name) and returns the exit
/// code. Never panics on bad input.
pub fn run(args: Vec<OsString>, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32 {
    let args = match config::merge_into_args(args) {
        Ok(a) => a,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            return EXIT_USAGE;
        }
    };
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let rendered = e.render().to_string();
            if e.use_stderr() {
                let _ = write!(stderr, "{rendered}");
            } else {
                let _ = write!(stdout, "{rendered}");
            }
            return code;
        }
    };
    let result = match cli.command {
        Command::Fisher(a) => cmd_fisher(&a),
        Command::Sweep(a) => cmd_sweep(&a),
        Command::CriticalDistance(a) => cmd_critical_distance(&a),
        Command::Mc(a) => cmd_mc(&a),
        Command::Coherent(a) => cmd_coherent(&a),
    };
    match result {
        Ok(Output { text, path: None }) => match stdout.write_all(text.as_bytes()) {
            Ok(()) => EXIT_OK,
            Err(e) => {
                let _ = writeln!(stderr, "error: cannot write output: {e}");
                EXIT_COMPUTE
            }
        },
        Ok(Output { text, path: Some(p) }) => match std::fs::write(&p, text) {
            Ok(()) => EXIT_OK,
            Err(e) => {
                let _ = writeln!(stderr, "error: cannot write {}: {e}", p.display());
                EXIT_USAGE
            }
        },
        Err(f) => {
            if let Some(payload) = f.payload {
                let _ = stdout.write_all(payload.as_bytes());
            }
            let _ = writeln!(stderr, "{}", f.message);
            f.code
        }
    }
}

fn stdout(text: String) -> Result<Output, Failure> {
    Ok(Output { text, path: None })
}

fn bound_of(fisher: f64) -> f64 {
    if fisher > 0.0 {
        1.0 / fisher.sqrt()
    } else {
        f64::INFINITY
    }
}

fn fisher_json(r: &FisherResult) -> Value {
    json!({
        "normalization": r.normalization,
        "f_normalized": r.f_normalized,
        "n_eff": r.n_eff,
        "fisher": r.fisher,
        "crb": json_number(bound_of(r.fisher)),
        "quad_error_estimate": r.quad_error_estimate,
        "per_event": { "alpha": r.per_event[0], "beta": r.per_event[1], "gamma": r.per_event[2] },
    })
}

const FISHER_COLUMNS: [&str; 7] =
    ["d", "eta", "normalization", "f_normalized", "n_eff", "fisher", "crb"];

fn cmd_fisher(a: &FisherArgs) -> Result<Output, Failure> {
    let manifest = a.model.describe(RunManifest::new("fisher").param("d", a.d).param("eta", a.eta));
    let cfg = a.model.config(a.d, a.eta)?;
    let r = fisher::fisher_information(&cfg)?;
    match a.format {
        Format::Json => {
            let mut result = fisher_json(&r);
            result["d"] = json!(a.d);
            result["eta"] = json!(a.eta);
            result["event_set"] = json!(cfg.model.event_set.label());
            stdout(json_document(&manifest, result))
        }
        Format::Csv => {
            let mut t = CsvTable::new(FISHER_COLUMNS.to_vec());
            t.push(
                [a.d, a.eta, r.normalization, r.f_normalized, r.n_eff, r.fisher, bound_of(r.fisher)]
                    .map(format_number)
                    .to_vec(),
            );
            stdout(t.render(&manifest))
        }
    }
}

/// `steps` evenly spaced values from `min` to `max` inclusive.
pub fn linspace(min: f64, max: f64, steps: u32) -> Vec<f64> {
    if steps == 1 {
        return vec![min];
    }
    let step = (max - min) / f64::from(steps - 1);
    (0..steps)
        .map(|i| if i == steps - 1 { max } else { min + f64::from(i) * step })
        .collect()
}

pub const SWEEP_COLUMNS: [&str; 6] = ["axis_value", "fisher", "crb", "n_eff", "f_normalized", "event_set"];

fn cmd_sweep(a: &SweepArgs) -> Result<Output, Failure> {
    if !(a.min.is_finite() && a.max.is_finite() && a.min <= a.max) {
        return Err(Failure::usage("--min and --max must be finite with min <= max"));
    }
    let (axis, d, eta) = match a.axis {
        Axis::Eta => {
            let d = a.d.ok_or_else(|| Failure::usage("--d is required when sweeping eta"))?;
            (SweepAxis::Eta, d, a.min)
        }
        Axis::D => {
            let eta = a.eta.ok_or_else(|| Failure::usage("--eta is required when sweeping d"))?;
            (SweepAxis::D, a.min, eta)
        }
    };
    let mut manifest = RunManifest::new("sweep")
        .param("axis", axis.label())
        .param("min", a.min)
        .param("max", a.max)
        .param("steps", a.steps);
    manifest = match axis {
        SweepAxis::Eta => manifest.param("d", d),
        SweepAxis::D => manifest.param("eta", eta),
    };
    let manifest = a.model.describe(manifest);
    let template = a.model.config(d, eta)?;
    let grid = linspace(a.min, a.max, a.steps);
    let rows = parallel::fisher_sweep(&template, axis, &grid)?;
    let mut t = CsvTable::new(SWEEP_COLUMNS.to_vec());
    for (value, r) in rows {
        t.push(vec![
            format_number(value),
            format_number(r.fisher),
            format_number(bound_of(r.fisher)),
            format_number(r.n_eff),
            format_number(r.f_normalized),
            template.model.event_set.label().to_owned(),
        ]);
    }
    Ok(Output { text: t.render(&manifest), path: a.out.clone() })
}

fn cmd_critical_distance(a: &CriticalArgs) -> Result<Output, Failure> {
    let manifest = a
        .model
        .describe(RunManifest::new("critical-distance").param("eta", a.eta))
        .param("bracket_lo", a.bracket_lo)
        .param("bracket_hi", a.bracket_hi)
        .param("tol", a.tol);
    let query = CriticalDistanceQuery {
        eta: a.eta,
        event_set: a.model.events.into(),
        routing: a.model.routing.into(),
        sigma: a.model.sigma,
        repeats: a.model.m,
        lo: a.bracket_lo,
        hi: a.bracket_hi,
        tol: a.tol,
    };
    match crb::critical_distance(&query) {
        Ok(r) => {
            let crossings: Vec<Value> = r.crossings.iter().map(|(lo, hi)| json!([lo, hi])).collect();
            stdout(json_document(
                &manifest,
                json!({
                    "d_star": r.d_star,
                    "iterations": r.iterations,
                    "residual": r.residual,
                    "crossings": crossings,
                }),
            ))
        }
        Err(Error::NoSignChange { lo, hi, scan }) => {
            let scan_json: Vec<Value> =
                scan.iter().map(|(d, g)| json!({ "d": d, "g": json_number(*g) })).collect();
            Err(Failure {
                code: EXIT_NO_SOLUTION,
                message: format!("NoSignChange: crb(d) - d does not change sign on [{lo}, {hi}]"),
                payload: Some(json_document(
                    &manifest,
                    json!({ "error": "NoSignChange", "scan": scan_json }),
                )),
            })
        }
        Err(e) => Err(e.into()),
    }
}

fn estimate_json(e: &McEstimate) -> Value {
    let per = |values: [f64; 4]| -> Value {
        Outcome::ALL.iter().map(|o| (o.label().to_owned(), json!(values[*o as usize]))).collect()
    };
    let counts: Value =
        Outcome::ALL.iter().map(|o| (o.label().to_owned(), json!(e.counts[*o as usize]))).collect();
    json!({
        "trials": e.trials,
        "counts": counts,
        "freq": per(e.freq),
        "ci_halfwidth": per(e.ci_halfwidth),
    })
}

fn report_json(r: &ValidationReport) -> Value {
    let rows: Vec<Value> = r
        .rows
        .iter()
        .map(|row| {
            json!({
                "outcome": row.outcome.label(),
                "count": row.count,
                "freq": row.freq,
                "ci_halfwidth": row.ci_halfwidth,
                "classical": row.classical,
                "pass": row.pass,
                "paper": row.paper,
                "paper_delta": row.paper_delta,
                "paper_delta_flagged": row.paper_delta_flagged,
            })
        })
        .collect();
    json!({ "reference": "classical", "pass": r.pass, "rows": rows })
}

fn ml_json(s: &MlStudy, study: &MlStudyConfig) -> Value {
    json!({
        "d_true": study.d_true,
        "samples": study.samples,
        "trials_per_sample": study.trials_per_sample,
        "grid": { "points": s.grid.len(), "lo": s.grid[0], "hi": s.grid[s.grid.len() - 1] },
        "mean": s.mean,
        "variance": s.variance,
        "crb_reference": s.crb_reference,
        "variance_over_crb": s.variance / s.crb_reference,
    })
}

fn cmd_mc(a: &McArgs) -> Result<Output, Failure> {
    let mut manifest = RunManifest::new("mc")
        .param("trials", a.trials)
        .param("x", a.x)
        .param("d", a.d)
        .param("eta", a.eta)
        .param("sigma", a.sigma)
        .seed(a.seed);
    if a.ml_study {
        manifest = manifest.param("ml_study", true).param("samples", a.samples);
    }
    let cfg = McConfig {
        trials: a.trials,
        seed: a.seed,
        x: a.x,
        pair: GaussianPsfPair::new(a.sigma, a.d)?,
        eta: a.eta,
    };
    let (estimate, report) = parallel::validate_against_analytic(&cfg)?;
    let mut result = json!({
        "estimate": estimate_json(&estimate),
        "validation": report_json(&report),
    });
    if a.ml_study {
        let study = MlStudyConfig {
            d_true: a.d,
            eta: a.eta,
            sigma: a.sigma,
            samples: a.samples,
            trials_per_sample: a.trials,
            seed: a.seed,
        };
        let s = parallel::ml_variance_study(&study)?;
        result["ml_study"] = ml_json(&s, &study);
    }
    stdout(json_document(&manifest, result))
}

pub const COHERENT_COLUMNS: [&str; 5] =
    ["n", "overlap_ratio", "nth_order_intensity", "interior_sum", "prefactor"];

fn cmd_coherent(a: &CoherentArgs) -> Result<Output, Failure> {
    let convention = match a.prefactor {
        Prefactor::Paper => PrefactorConvention::PaperVerbatim,
        Prefactor::Derived => PrefactorConvention::DerivedCascade,
    };
    let mut manifest = RunManifest::new("coherent");
    manifest = match a.sweep_n {
        Some(max) => manifest.param("sweep_n", max),
        None => manifest.param("n", a.n),
    };
    let manifest = manifest
        .param("x", a.x)
        .param("d", a.d)
        .param("sigma", a.sigma)
        .param("mean_photons", a.mean_photons)
        .param("field_scale", a.field_scale)
        .param("prefactor", convention.label());
    let pair = GaussianPsfPair::new(a.sigma, a.d)?;
    let ns: Vec<u32> = match a.sweep_n {
        Some(max) => (1..=max).collect(),
        None => vec![a.n],
    };
    let mut rows = Vec::with_capacity(ns.len());
    for n in ns {
        let cfg = CoherentConfig::new(n, a.mean_photons, pair, convention, a.field_scale)?;
        rows.push((
            n,
            coherent::overlap_ratio(a.x, n, &pair)?,
            coherent::nth_order_intensity(a.x, &cfg),
            coherent::interior_weight_sum(n),
            coherent::cascade_prefactor(n, convention),
        ));
    }
    match a.format {
        Format::Json => {
            let to_json = |&(n, ratio, intensity, interior, pre): &(u32, f64, f64, f64, f64)| {
                json!({
                    "n": n,
                    "overlap_ratio": ratio,
                    "nth_order_intensity": intensity,
                    "interior_sum": interior,
                    "prefactor": pre,
                })
            };
            let result = if a.sweep_n.is_some() {
                json!({ "rows": rows.iter().map(to_json).collect::<Vec<_>>() })
            } else {
                to_json(&rows[0])
            };
            stdout(json_document(&manifest, result))
        }
        Format::Csv => {
            let mut t = CsvTable::new(COHERENT_COLUMNS.to_vec());
            for (n, ratio, intensity, interior, pre) in rows {
                t.push(vec![
                    n.to_string(),
                    format_number(ratio),
                    format_number(intensity),
                    format_number(interior),
                    format_number(pre),
                ]);
            }
            stdout(t.render(&manifest))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_str(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let mut argv = vec![OsString::from("hbtfisher")];
        argv.extend(args.iter().map(OsString::from));
        let code = run(argv, &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn linspace_endpoints() {
        assert_eq!(linspace(0.1, 1.0, 1), [0.1]);
        let g = linspace(0.1, 1.0, 10);
        assert_eq!(g.len(), 10);
        assert_eq!(g[9], 1.0);
        assert!((g[1] - 0.2).abs() < 1e-15);
    }

    #[test]
    fn usage_errors_exit_2() {
        assert_eq!(run_str(&["fisher", "--d", "1"]).0, EXIT_USAGE);
        assert_eq!(run_str(&["fisher", "--d", "x", "--eta", "1"]).0, EXIT_USAGE);
        assert_eq!(run_str(&["bogus"]).0, EXIT_USAGE);
        assert_eq!(run_str(&["sweep", "--axis", "eta", "--min", "0.1", "--max", "1", "--steps", "3"]).0, EXIT_USAGE);
        assert_eq!(run_str(&["sweep", "--axis", "d", "--min", "2", "--max", "1", "--steps", "3", "--eta", "1"]).0, EXIT_USAGE);
        assert_eq!(run_str(&["coherent", "--n", "0"]).0, EXIT_USAGE);
        assert_eq!(run_str(&["fisher", "--d", "1", "--eta", "1", "--m", "0"]).0, EXIT_USAGE);
    }

    #[test]
    fn help_exits_0() {
        let (code, out, _) = run_str(&["--help"]);
        assert_eq!(code, EXIT_OK);
        assert!(out.contains("critical-distance"));
    }

    #[test]
    fn compute_errors_exit_3() {
        let (code, _, err) = run_str(&["fisher", "--d", "1", "--eta", "1", "--sigma", "0.2"]);
        assert_eq!(code, EXIT_COMPUTE);
        assert!(err.starts_with("SigmaTooSmall"));
        let (code, _, err) = run_str(&["fisher", "--d", "1", "--eta", "1.5"]);
        assert_eq!(code, EXIT_COMPUTE);
        assert!(err.starts_with("EtaOutOfRange"));
        let (code, _, err) = run_str(&["coherent", "--n", "2", "--x", "1e4"]);
        assert_eq!(code, EXIT_COMPUTE);
        assert!(err.starts_with("ZeroDenominator"));
    }
}
