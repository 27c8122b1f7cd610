//! `mlefit` — sampling, fitting, function evaluation, and Monte Carlo
//! table reproduction for the ML(α, δ) and GML(α, β) distributions.
//!
//! Exit codes: 0 success, 2 usage or validation error, 3 numerical
//! non-convergence (partial output is still printed).

mod config;
mod fmt;
mod output;

use clap::{Parser, Subcommand, ValueEnum};
use mlefit::error::Error as CoreError;
use mlefit::estimators::{
    estimate_gml_fractional, estimate_gml_logmoment, estimate_ml_fractional,
    estimate_ml_logmoment, log_summary, ml_confidence_intervals, FitResult, Method,
    GML_FRACTIONAL_Q,
};
use mlefit::harness::{run_experiment, table1_config, table2_config, ExperimentConfig};
use mlefit::sampling::{sample_gml, sample_ml, RngStream};
use mlefit::special::PsiMode;
use mlefit::{GMLParams, MLParams};

use std::io::{BufRead, Write};
use std::path::PathBuf;
use std::process::ExitCode;

const EXIT_USAGE: u8 = 2;
const EXIT_NONCONVERGENCE: u8 = 3;

/// Failure carrying the process exit code.
#[derive(Debug)]
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn usage(msg: impl Into<String>) -> Self {
        Failure {
            code: EXIT_USAGE,
            message: msg.into(),
        }
    }

    fn numeric(msg: impl Into<String>) -> Self {
        Failure {
            code: EXIT_NONCONVERGENCE,
            message: msg.into(),
        }
    }

    fn from_core(err: CoreError) -> Self {
        match err {
            CoreError::Domain(_) => Failure::usage(err.to_string()),
            _ => Failure::numeric(err.to_string()),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::usage(format!("i/o error: {e}"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum DistArg {
    Ml,
    Gml,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MethodArg {
    Log,
    Frac,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum PsiModeArg {
    Accurate,
    Paper,
}

impl From<PsiModeArg> for PsiMode {
    fn from(m: PsiModeArg) -> Self {
        match m {
            PsiModeArg::Accurate => PsiMode::Accurate,
            PsiModeArg::Paper => PsiMode::PaperTruncated,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
    Pretty,
}

#[derive(Parser)]
#[command(
    name = "mlefit",
    about = "Mittag-Leffler and generalized Mittag-Leffler distributions: \
             sampling, estimation, and Monte Carlo comparison tables",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Draw variates and write them one per line (17 significant digits).
    Sample {
        #[arg(long, value_enum)]
        dist: DistArg,
        /// Tail index, 0 < α ≤ 1.
        #[arg(long)]
        alpha: f64,
        /// Scale δ > 0 (ml only).
        #[arg(long)]
        delta: Option<f64>,
        /// Shape β > 0 (gml only).
        #[arg(long)]
        beta: Option<f64>,
        /// Number of variates.
        #[arg(long)]
        n: usize,
        /// Seed; falls back to MLEFIT_SEED, then OS entropy.
        #[arg(long)]
        seed: Option<u64>,
        /// Output file (stdout when absent).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Fit parameters to data (one positive real per line) and print JSON.
    Fit {
        #[arg(long, value_enum)]
        dist: DistArg,
        #[arg(long, value_enum)]
        method: MethodArg,
        /// Input file (stdin when absent).
        #[arg(long)]
        input: Option<PathBuf>,
        /// Confidence level in (0,1) for parameter intervals (ml only).
        #[arg(long)]
        ci_level: Option<f64>,
        /// Digamma/trigamma evaluation used by the gml log-moment solver.
        #[arg(long, value_enum, default_value = "accurate")]
        psi_mode: PsiModeArg,
    },
    /// Run a Monte Carlo bias/RMSE experiment and write one row per
    /// (cell × estimator).
    Mc {
        /// Built-in table preset (1 = ML grid, 2 = GML grid) or "custom".
        #[arg(long)]
        table: String,
        /// Experiment file for --table custom (see README for the grammar).
        #[arg(long)]
        config: Option<PathBuf>,
        /// Replicates per cell (default 10000; --quick sets 500).
        #[arg(long)]
        replicates: Option<usize>,
        /// Shorthand for a fast 500-replicate profile.
        #[arg(long)]
        quick: bool,
        /// Master seed; falls back to MLEFIT_SEED, then the config file.
        /// Mandatory one way or another: mc runs must be reproducible.
        #[arg(long)]
        seed: Option<u64>,
        /// Worker threads for the replicate loop.
        #[arg(long, default_value = "1")]
        threads: usize,
        #[arg(long, value_enum, default_value = "csv")]
        format: FormatArg,
        /// Output file (stdout when absent).
        #[arg(long)]
        out: Option<PathBuf>,
        /// Emit tidy long-format CSV (one metric per row) for plotting.
        #[arg(long)]
        plot_data: bool,
        #[arg(long, value_enum, default_value = "accurate")]
        psi_mode: PsiModeArg,
    },
    /// Evaluate a distribution function or moment formula.
    Eval {
        /// One of: mlf, ml-pdf, gml-cdf, ml-moment, gml-moment, log-moments.
        #[arg(long = "fn")]
        function: String,
        #[arg(long)]
        dist: Option<DistArg>,
        #[arg(long)]
        alpha: Option<f64>,
        #[arg(long)]
        nu: Option<f64>,
        #[arg(long)]
        tau: Option<f64>,
        #[arg(long)]
        delta: Option<f64>,
        #[arg(long)]
        beta: Option<f64>,
        #[arg(long)]
        q: Option<f64>,
        #[arg(long)]
        t: Option<f64>,
        #[arg(long)]
        x: Option<f64>,
        #[arg(long, value_enum, default_value = "accurate")]
        psi_mode: PsiModeArg,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn dispatch(cmd: Command) -> Result<(), Failure> {
    match cmd {
        Command::Sample {
            dist,
            alpha,
            delta,
            beta,
            n,
            seed,
            out,
        } => cmd_sample(dist, alpha, delta, beta, n, seed, out),
        Command::Fit {
            dist,
            method,
            input,
            ci_level,
            psi_mode,
        } => cmd_fit(dist, method, input, ci_level, psi_mode.into()),
        Command::Mc {
            table,
            config,
            replicates,
            quick,
            seed,
            threads,
            format,
            out,
            plot_data,
            psi_mode,
        } => cmd_mc(
            &table,
            config,
            replicates,
            quick,
            seed,
            threads,
            format,
            out,
            plot_data,
            psi_mode.into(),
        ),
        Command::Eval {
            function,
            dist,
            alpha,
            nu,
            tau,
            delta,
            beta,
            q,
            t,
            x,
            psi_mode,
        } => cmd_eval(EvalArgs {
            function,
            dist,
            alpha,
            nu,
            tau,
            delta,
            beta,
            q,
            t,
            x,
            psi_mode: psi_mode.into(),
        }),
    }
}

fn env_seed() -> Result<Option<u64>, Failure> {
    match std::env::var("MLEFIT_SEED") {
        Ok(s) => s
            .trim()
            .parse::<u64>()
            .map(Some)
            .map_err(|_| Failure::usage(format!("MLEFIT_SEED is not a valid u64: {s:?}"))),
        Err(_) => Ok(None),
    }
}

/// Entropy seed for commands where reproducibility is optional.
fn entropy_seed() -> u64 {
    use std::time::{SystemTime, UNIX_EPOCH};
    let nanos = SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_nanos() as u64)
        .unwrap_or(0);
    nanos ^ (std::process::id() as u64).rotate_left(32)
}

fn cmd_sample(
    dist: DistArg,
    alpha: f64,
    delta: Option<f64>,
    beta: Option<f64>,
    n: usize,
    seed: Option<u64>,
    out: Option<PathBuf>,
) -> Result<(), Failure> {
    if n == 0 {
        return Err(Failure::usage("--n must be at least 1"));
    }
    let seed = match seed.or(env_seed()?) {
        Some(s) => s,
        None => entropy_seed(),
    };
    let mut rng = RngStream::from_seed(seed);

    let mut buf = String::with_capacity(n * 24);
    match dist {
        DistArg::Ml => {
            let delta =
                delta.ok_or_else(|| Failure::usage("--dist ml requires --delta (δ > 0)"))?;
            if beta.is_some() {
                return Err(Failure::usage("--beta is a gml parameter; ml takes --delta"));
            }
            let params = MLParams::new(alpha, delta).map_err(Failure::from_core)?;
            for _ in 0..n {
                buf.push_str(&format!("{:.16e}\n", sample_ml(&mut rng, &params)));
            }
        }
        DistArg::Gml => {
            let beta = beta.ok_or_else(|| Failure::usage("--dist gml requires --beta (β > 0)"))?;
            if delta.is_some() {
                return Err(Failure::usage("--delta is an ml parameter; gml takes --beta"));
            }
            let params = GMLParams::new(alpha, beta).map_err(Failure::from_core)?;
            for _ in 0..n {
                buf.push_str(&format!("{:.16e}\n", sample_gml(&mut rng, &params)));
            }
        }
    }
    write_output(out.as_deref(), &buf)?;
    Ok(())
}

fn read_data(input: Option<&std::path::Path>) -> Result<Vec<f64>, Failure> {
    let reader: Box<dyn BufRead> = match input {
        Some(path) => Box::new(std::io::BufReader::new(std::fs::File::open(path)?)),
        None => Box::new(std::io::BufReader::new(std::io::stdin())),
    };
    let mut data = Vec::new();
    for (idx, line) in reader.lines().enumerate() {
        let line = line?;
        let line_no = idx + 1;
        let trimmed = line.trim();
        if trimmed.is_empty() {
            continue;
        }
        let value: f64 = trimmed
            .parse()
            .map_err(|_| Failure::usage(format!("line {line_no}: could not parse {trimmed:?}")))?;
        #[allow(clippy::neg_cmp_op_on_partial_ord)] // NaN must fail too
        if !(value > 0.0) || !value.is_finite() {
            return Err(Failure::usage(format!(
                "line {line_no}: datum must be positive, got {trimmed}"
            )));
        }
        data.push(value);
    }
    if data.len() < 2 {
        return Err(Failure::usage(format!(
            "need at least 2 observations, got {}",
            data.len()
        )));
    }
    Ok(data)
}

fn cmd_fit(
    dist: DistArg,
    method: MethodArg,
    input: Option<PathBuf>,
    ci_level: Option<f64>,
    psi_mode: PsiMode,
) -> Result<(), Failure> {
    if let Some(level) = ci_level {
        if dist == DistArg::Gml {
            return Err(Failure::usage(
                "confidence intervals are unsupported for gml (interval theory covers ml only)",
            ));
        }
        if !(level > 0.0 && level < 1.0) {
            return Err(Failure::usage(format!(
                "--ci-level must lie in (0, 1), got {level}"
            )));
        }
    }
    let data = read_data(input.as_deref())?;

    let fit: Result<FitResult, CoreError> = match (dist, method) {
        (DistArg::Ml, MethodArg::Log) => {
            log_summary(&data).map(|s| estimate_ml_logmoment(&s))
        }
        (DistArg::Ml, MethodArg::Frac) => estimate_ml_fractional(&data),
        (DistArg::Gml, MethodArg::Log) => {
            log_summary(&data).and_then(|s| estimate_gml_logmoment(&s, psi_mode))
        }
        (DistArg::Gml, MethodArg::Frac) => {
            let (q1, q2) = GML_FRACTIONAL_Q;
            estimate_gml_fractional(&data, q1, q2)
        }
    };

    match fit {
        Ok(fit) => {
            let ci = match ci_level {
                Some(level) => Some(
                    ml_confidence_intervals(&fit, data.len(), level).map_err(Failure::from_core)?,
                ),
                None => None,
            };
            println!("{}", output::fit_json(&fit, ci.as_ref()));
            if fit.converged {
                Ok(())
            } else {
                Err(Failure::numeric("solver did not converge".to_string()))
            }
        }
        Err(CoreError::Domain(msg)) => Err(Failure::usage(msg)),
        Err(err) => {
            // Print a diagnostic object so scripts still get structured
            // output, then signal non-convergence.
            println!("{}", output::fit_error_json(method_tag(method), &err));
            Err(Failure::numeric(err.to_string()))
        }
    }
}

fn method_tag(method: MethodArg) -> &'static str {
    match method {
        MethodArg::Log => Method::LogMoment.tag(),
        MethodArg::Frac => Method::FractionalMoment.tag(),
    }
}

#[allow(clippy::too_many_arguments)]
fn cmd_mc(
    table: &str,
    config_path: Option<PathBuf>,
    replicates: Option<usize>,
    quick: bool,
    seed: Option<u64>,
    threads: usize,
    format: FormatArg,
    out: Option<PathBuf>,
    plot_data: bool,
    psi_mode: PsiMode,
) -> Result<(), Failure> {
    if threads == 0 {
        return Err(Failure::usage("--threads must be at least 1"));
    }
    let reps = replicates.unwrap_or(if quick { 500 } else { 10_000 });
    if reps == 0 {
        return Err(Failure::usage("--replicates must be at least 1"));
    }

    let file_cfg = match (&config_path, table) {
        (Some(path), "custom") => Some(config::parse_file(path)?),
        (Some(_), _) => {
            return Err(Failure::usage("--config is only valid with --table custom"));
        }
        (None, "custom") => {
            return Err(Failure::usage("--table custom requires --config <file>"));
        }
        (None, _) => None,
    };

    let seed = match seed
        .or(env_seed()?)
        .or(file_cfg.as_ref().and_then(|c| c.seed))
    {
        Some(s) => s,
        None => {
            return Err(Failure::usage(
                "mc requires a seed (--seed, MLEFIT_SEED, or a config-file seed): \
                 reproducibility is mandatory",
            ));
        }
    };

    let cfg: ExperimentConfig = match table {
        "1" => table1_config(reps, seed),
        "2" => table2_config(reps, seed, psi_mode),
        "custom" => {
            let parsed = file_cfg.expect("checked above");
            parsed.into_experiment(reps, seed, psi_mode, replicates.is_some() || quick)
        }
        other => {
            return Err(Failure::usage(format!(
                "--table must be 1, 2, or custom, got {other:?}"
            )));
        }
    };
    cfg.validate()
        .map_err(|e| Failure::usage(format!("invalid experiment: {e}")))?;

    let reports = run_experiment(&cfg, threads).map_err(Failure::from_core)?;
    let rendered = match (format, plot_data) {
        (FormatArg::Csv, false) => output::reports_csv(&reports),
        (FormatArg::Csv, true) => output::reports_plot_csv(&reports),
        (FormatArg::Json, _) => output::reports_json(&reports),
        (FormatArg::Pretty, _) => output::reports_pretty(&reports),
    };
    write_output(out.as_deref(), &rendered)?;
    Ok(())
}

struct EvalArgs {
    function: String,
    dist: Option<DistArg>,
    alpha: Option<f64>,
    nu: Option<f64>,
    tau: Option<f64>,
    delta: Option<f64>,
    beta: Option<f64>,
    q: Option<f64>,
    t: Option<f64>,
    x: Option<f64>,
    psi_mode: PsiMode,
}

fn need(value: Option<f64>, flag: &str, function: &str) -> Result<f64, Failure> {
    value.ok_or_else(|| Failure::usage(format!("eval --fn {function} requires --{flag}")))
}

fn cmd_eval(args: EvalArgs) -> Result<(), Failure> {
    use mlefit::distributions as dist_fns;
    let f = args.function.as_str();
    match f {
        "mlf" => {
            let alpha = need(args.alpha, "alpha", f)?;
            let nu = need(args.nu, "nu", f)?;
            let tau = need(args.tau, "tau", f)?;
            let v = mlefit::special::mittag_leffler(alpha, nu, tau).map_err(Failure::from_core)?;
            println!("{}", fmt::sig(v, 15));
        }
        "ml-pdf" => {
            let params = MLParams::new(need(args.alpha, "alpha", f)?, need(args.delta, "delta", f)?)
                .map_err(Failure::from_core)?;
            let v = dist_fns::ml_pdf(params, need(args.t, "t", f)?).map_err(Failure::from_core)?;
            println!("{}", fmt::sig(v, 15));
        }
        "gml-cdf" => {
            let params = GMLParams::new(need(args.alpha, "alpha", f)?, need(args.beta, "beta", f)?)
                .map_err(Failure::from_core)?;
            let v = dist_fns::gml_cdf(params, need(args.x, "x", f)?).map_err(Failure::from_core)?;
            println!("{}", fmt::sig(v, 15));
        }
        "ml-moment" => {
            let params = MLParams::new(need(args.alpha, "alpha", f)?, need(args.delta, "delta", f)?)
                .map_err(Failure::from_core)?;
            let v = dist_fns::ml_fractional_moment(params, need(args.q, "q", f)?)
                .map_err(Failure::from_core)?;
            println!("{}", fmt::sig(v, 15));
        }
        "gml-moment" => {
            let params = GMLParams::new(need(args.alpha, "alpha", f)?, need(args.beta, "beta", f)?)
                .map_err(Failure::from_core)?;
            let v = dist_fns::gml_fractional_moment(params, need(args.q, "q", f)?)
                .map_err(Failure::from_core)?;
            println!("{}", fmt::sig(v, 15));
        }
        "log-moments" => {
            let dist = args
                .dist
                .ok_or_else(|| Failure::usage("eval --fn log-moments requires --dist"))?;
            match dist {
                DistArg::Ml => {
                    let params =
                        MLParams::new(need(args.alpha, "alpha", f)?, need(args.delta, "delta", f)?)
                            .map_err(Failure::from_core)?;
                    let m = dist_fns::ml_log_moments(params);
                    println!("{}", output::ml_log_moments_json(&m));
                }
                DistArg::Gml => {
                    let params =
                        GMLParams::new(need(args.alpha, "alpha", f)?, need(args.beta, "beta", f)?)
                            .map_err(Failure::from_core)?;
                    let _ = args.psi_mode;
                    let mean = dist_fns::gml_log_cumulants(params, 1).map_err(Failure::from_core)?;
                    let var = dist_fns::gml_log_cumulants(params, 2).map_err(Failure::from_core)?;
                    let third = dist_fns::gml_log_third_moment(params);
                    println!("{}", output::gml_log_moments_json(mean, var, third));
                }
            }
        }
        other => {
            return Err(Failure::usage(format!(
                "unknown --fn {other:?}; expected mlf, ml-pdf, gml-cdf, ml-moment, gml-moment, \
                 or log-moments"
            )));
        }
    }
    Ok(())
}

fn write_output(path: Option<&std::path::Path>, content: &str) -> Result<(), Failure> {
    match path {
        Some(p) => {
            let mut f = std::fs::File::create(p)?;
            f.write_all(content.as_bytes())?;
        }
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(content.as_bytes())?;
        }
    }
    Ok(())
}
