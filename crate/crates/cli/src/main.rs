//! `rayreg` command-line front end.
//!
//! Exit codes: 0 success, 1 usage error, 2 data error, 3 non-convergence.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use nalgebra::DMatrix;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use rayreg::diagnostics::{quantile_residuals, r_squared, standard_errors, ResidualSeries};
use rayreg::distribution::RayleighMean;
use rayreg::montecarlo::{run_scenario, ScenarioSpec, DEFAULT_SEED};
use rayreg::numfmt::{format_significant, round_significant};
use rayreg::regression::{fit_mle, FitOptions, RegressionDataset};
use rayreg::sar::{detect_regions, load_region_image};
use rayreg::{Error, Link};

#[derive(Parser)]
#[command(name = "rayreg", version, about = "Rayleigh regression fitting, region detection and simulation")]
struct Cli {
    /// Random seed for `sample`; overrides the config seed for `simulate`.
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Output format.
    #[arg(long, global = true, value_enum)]
    output: Option<Format>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Fit a Rayleigh regression to a CSV with a `y` column and covariate columns.
    Fit {
        csv: PathBuf,
        #[arg(long, default_value = "log")]
        link: Link,
        /// Do not add an intercept column.
        #[arg(long)]
        no_intercept: bool,
        /// Write quantile residuals (index, residual) to this CSV.
        #[arg(long)]
        residuals: Option<PathBuf>,
    },
    /// Fit region indicators on an amplitude image and test each region against the baseline.
    Detect {
        #[arg(long)]
        amplitude: PathBuf,
        #[arg(long)]
        mask: PathBuf,
        /// Baseline region label (default: smallest label in the mask).
        #[arg(long)]
        baseline: Option<u32>,
        #[arg(long, default_value_t = 0.05)]
        pfa: f64,
        #[arg(long)]
        residuals: Option<PathBuf>,
    },
    /// Run a Monte Carlo scenario described by a config file.
    Simulate {
        #[arg(long)]
        config: PathBuf,
    },
    /// Draw Rayleigh variates with the given mean.
    Sample {
        #[arg(long, allow_negative_numbers = true)]
        mu: f64,
        #[arg(long, default_value_t = 1)]
        count: usize,
    },
}

enum Failure {
    Usage(String),
    Data(String),
    NonConvergence(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 1,
            Failure::Data(_) => 2,
            Failure::NonConvergence(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Usage(m) | Failure::Data(m) | Failure::NonConvergence(m) => m,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let msg = e.to_string();
        match e {
            Error::NonConvergence { .. } => Failure::NonConvergence(msg),
            Error::Domain { .. } | Error::InvalidScenario(_) | Error::InvalidHypothesis(_) => Failure::Usage(msg),
            _ => Failure::Data(msg),
        }
    }
}

type CmdResult = Result<String, Failure>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(cli) {
        Ok(out) => {
            let mut stdout = std::io::stdout().lock();
            let _ = stdout.write_all(out.as_bytes());
            ExitCode::SUCCESS
        }
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}

fn run(cli: Cli) -> CmdResult {
    match cli.command {
        Command::Fit {
            csv,
            link,
            no_intercept,
            residuals,
        } => cmd_fit(&csv, link, !no_intercept, residuals.as_deref(), cli.output),
        Command::Detect {
            amplitude,
            mask,
            baseline,
            pfa,
            residuals,
        } => cmd_detect(&amplitude, &mask, baseline, pfa, residuals.as_deref(), cli.output),
        Command::Simulate { config } => cmd_simulate(&config, cli.seed, cli.output),
        Command::Sample { mu, count } => cmd_sample(mu, count, cli.seed.unwrap_or(DEFAULT_SEED), cli.output),
    }
}

/// Recursively rounds every number to 15 significant digits.
fn rounded(value: Value) -> Value {
    match value {
        Value::Number(n) => match n.as_f64() {
            Some(x) if !n.is_u64() && !n.is_i64() => json!(round_significant(x)),
            _ => Value::Number(n),
        },
        Value::Array(a) => Value::Array(a.into_iter().map(rounded).collect()),
        Value::Object(o) => Value::Object(o.into_iter().map(|(k, v)| (k, rounded(v))).collect()),
        other => other,
    }
}

fn to_json<T: Serialize>(payload: &T) -> String {
    let value = serde_json::to_value(payload).expect("payload serializes");
    let mut text = serde_json::to_string_pretty(&rounded(value)).expect("value serializes");
    text.push('\n');
    text
}

fn write_residuals(path: &Path, series: &ResidualSeries) -> Result<(), Failure> {
    let mut text = String::from("index,residual\n");
    for (i, r) in series.values.iter().enumerate() {
        text.push_str(&format!("{},{}\n", i + 1, format_significant(*r)));
    }
    std::fs::write(path, text).map_err(|e| Failure::Data(format!("{}: {e}", path.display())))
}

fn read_fit_csv(path: &Path, intercept: bool) -> Result<(RegressionDataset, Vec<String>), Failure> {
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| Failure::Data(format!("{}: {e}", path.display())))?;
    let headers = reader
        .headers()
        .map_err(|e| Failure::Data(format!("{}: {e}", path.display())))?
        .clone();
    let y_col = headers
        .iter()
        .position(|h| h == "y")
        .ok_or_else(|| Failure::Usage(format!("{}: header has no 'y' column", path.display())))?;
    let covariate_cols: Vec<usize> = (0..headers.len()).filter(|&c| c != y_col).collect();
    let mut names: Vec<String> = Vec::new();
    if intercept {
        names.push("intercept".into());
    }
    names.extend(covariate_cols.iter().map(|&c| headers[c].to_string()));

    let mut y = Vec::new();
    let mut rows: Vec<f64> = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let row = i + 1;
        let record = record.map_err(|e| Failure::Data(format!("{}: {e}", path.display())))?;
        let parse = |c: usize| -> Result<f64, Failure> {
            let cell = record.get(c).unwrap_or("");
            cell.parse::<f64>().map_err(|_| {
                Failure::Data(format!("row {row}: column '{}' value '{cell}' is not a number", &headers[c]))
            })
        };
        let yi = parse(y_col)?;
        if !(yi > 0.0) {
            return Err(Failure::Data(format!("row {row}: y = {yi} is not strictly positive")));
        }
        y.push(yi);
        if intercept {
            rows.push(1.0);
        }
        for &c in &covariate_cols {
            rows.push(parse(c)?);
        }
    }
    if names.is_empty() {
        return Err(Failure::Usage("no covariates and no intercept: nothing to fit".into()));
    }
    let x = DMatrix::from_row_slice(y.len(), names.len(), &rows);
    let data = RegressionDataset::new(y, x)?;
    Ok((data, names))
}

#[derive(Serialize)]
struct FitReport {
    names: Vec<String>,
    coefficients: Vec<f64>,
    standard_errors: Vec<f64>,
    log_likelihood: f64,
    r_squared: f64,
    link: Link,
    n: usize,
    converged: bool,
    iterations: usize,
    gradient_norm: f64,
    termination: String,
}

fn cmd_fit(path: &Path, link: Link, intercept: bool, residuals: Option<&Path>, output: Option<Format>) -> CmdResult {
    let (data, names) = read_fit_csv(path, intercept)?;
    let fit = fit_mle(&data, link, &FitOptions::default())?;
    if !fit.converged {
        return Err(Failure::NonConvergence(format!(
            "fit did not converge after {} iterations ({:?}), score norm {}",
            fit.iterations, fit.termination, fit.gradient_norm
        )));
    }
    if let Some(p) = residuals {
        write_residuals(p, &quantile_residuals(&fit, &data)?)?;
    }
    let report = FitReport {
        names,
        coefficients: fit.beta_hat.iter().copied().collect(),
        standard_errors: standard_errors(&fit),
        log_likelihood: fit.log_likelihood,
        r_squared: r_squared(&fit, &data, link)?,
        link,
        n: data.len(),
        converged: fit.converged,
        iterations: fit.iterations,
        gradient_norm: fit.gradient_norm,
        termination: format!("{:?}", fit.termination),
    };
    Ok(match output.unwrap_or(Format::Json) {
        Format::Json => to_json(&report),
        Format::Csv => {
            let mut out = String::from("name,estimate,std_error\n");
            for ((n, b), s) in report.names.iter().zip(&report.coefficients).zip(&report.standard_errors) {
                out.push_str(&format!("{n},{},{}\n", format_significant(*b), format_significant(*s)));
            }
            out
        }
    })
}

fn cmd_detect(
    amplitude: &Path,
    mask: &Path,
    baseline: Option<u32>,
    pfa: f64,
    residuals: Option<&Path>,
    output: Option<Format>,
) -> CmdResult {
    if !(pfa > 0.0 && pfa < 1.0) {
        return Err(Failure::Usage(format!("--pfa must lie in (0, 1), got {pfa}")));
    }
    let image = load_region_image(amplitude, mask)?;
    let baseline = baseline.unwrap_or_else(|| image.default_baseline());
    if !image.region_labels().contains(&baseline) {
        return Err(Failure::Usage(format!(
            "baseline label {baseline} is not in the mask (labels: {:?})",
            image.region_labels()
        )));
    }
    let det = detect_regions(&image, baseline, pfa)?;
    if let Some(p) = residuals {
        write_residuals(p, &det.residuals)?;
    }
    let r = &det.report;
    Ok(match output.unwrap_or(Format::Json) {
        Format::Json => to_json(r),
        Format::Csv => {
            let mut out = String::from("name,estimate,std_error,p_value,threshold\n");
            for i in 0..r.coefficients.len() {
                out.push_str(&format!(
                    "{},{},{},{},{}\n",
                    r.coefficient_names[i],
                    format_significant(r.coefficients[i]),
                    format_significant(r.standard_errors[i]),
                    format_significant(r.p_values[i]),
                    format_significant(r.thresholds[i])
                ));
            }
            out
        }
    })
}

fn cmd_simulate(config: &Path, seed: Option<u64>, output: Option<Format>) -> CmdResult {
    let mut spec = ScenarioSpec::from_config_file(config).map_err(|e| match e {
        Error::Io { .. } => Failure::Data(e.to_string()),
        other => Failure::Usage(other.to_string()),
    })?;
    if let Some(s) = seed {
        spec.seed = s;
    }
    let summary = run_scenario(&spec)?;
    Ok(match output.unwrap_or(Format::Json) {
        Format::Json => to_json(&json!({
            "summary": summary,
            "replications": spec.replications,
            "link": spec.link,
            "table": summary.to_csv(),
        })),
        Format::Csv => summary.to_csv(),
    })
}

fn cmd_sample(mu: f64, count: usize, seed: u64, output: Option<Format>) -> CmdResult {
    if count == 0 {
        return Err(Failure::Usage("--count must be at least 1".into()));
    }
    let dist = RayleighMean::new(mu).map_err(|e| Failure::Usage(e.to_string()))?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let draws: Vec<f64> = (0..count).map(|_| dist.sample(&mut rng)).collect();
    Ok(match output {
        Some(Format::Json) => to_json(&json!({ "mu": mu, "seed": seed, "count": count, "samples": draws })),
        _ => {
            let mut out = String::with_capacity(count * 20);
            for d in draws {
                out.push_str(&format_significant(d));
                out.push('\n');
            }
            out
        }
    })
}
