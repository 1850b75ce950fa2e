//! The `eikmeans` command-line driver.
//!
//! Exit codes are a stable contract: 0 success / no drift, 3 drift detected,
//! 1 runtime error, 2 usage error.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use ei_kmeans_core::partition::DEFAULT_BETA;
use ei_kmeans_core::{Detector, DriftReport};
use crate::bench::{run_partition_diagnostic, run_trial, TrialConfig};
use crate::csvio;
use crate::datagen::{gen_dataset, DiagnosticVariant, Family, GeneratorSpec};
use crate::model_file::ModelFile;
use crate::seeds;

pub const EXIT_OK: u8 = 0;
pub const EXIT_ERROR: u8 = 1;
pub const EXIT_DRIFT: u8 = 3;

#[derive(Parser)]
#[command(
    name = "eikmeans",
    version,
    about = "Equal-intensity k-means histograms and chi-square drift detection"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a synthetic dataset from a named distribution family
    Gen(GenArgs),
    /// Fit an equal-intensity histogram on a training CSV
    Fit(FitArgs),
    /// Test a CSV window against a fitted model for drift
    Detect(DetectArgs),
    /// Estimate Type-I/Type-II error rates by Monte-Carlo simulation
    Bench(BenchArgs),
    /// Compare partition-intensity spread against random-init k-means
    Diag(DiagArgs),
}

#[derive(Args)]
struct GenArgs {
    /// Family name: 2d-U-mean, 2d-1G-mean, 2d-1G-var, 2d-1G-cov, 2d-2G-mean, 2d-4G-mean
    #[arg(long)]
    family: String,
    /// Number of rows to generate
    #[arg(long)]
    n: usize,
    /// Apply the family's drift to the generated data
    #[arg(long)]
    drift: bool,
    /// Drift margin (defaults to the family's reference margin)
    #[arg(long)]
    delta: Option<f64>,
    /// Extra standard-normal padding columns
    #[arg(long, default_value_t = 0)]
    extra_dims: usize,
    #[arg(long)]
    seed: u64,
    /// Output CSV path
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct FitArgs {
    /// Training CSV path
    #[arg(long)]
    train: PathBuf,
    /// Minimum samples per bin
    #[arg(long, default_value_t = DEFAULT_BETA)]
    beta: usize,
    /// Largest amplify exponent in the search grid
    #[arg(long, default_value_t = 1.5)]
    theta_max: f64,
    /// Amplify exponent grid step
    #[arg(long, default_value_t = 0.05)]
    theta_step: f64,
    /// Fit on a random subsample of at most this many rows
    #[arg(long)]
    max_samples: Option<usize>,
    #[arg(long)]
    seed: u64,
    /// Output model path (JSON)
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct DetectArgs {
    /// Fitted model path
    #[arg(long)]
    model: PathBuf,
    /// Test CSV path
    #[arg(long)]
    test: PathBuf,
    /// Significance level
    #[arg(long, default_value_t = 0.05)]
    alpha: f64,
    /// Print the report as a single JSON line
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct BenchArgs {
    /// Family name (see `gen`)
    #[arg(long)]
    family: String,
    #[arg(long, default_value_t = 2000)]
    n_train: usize,
    #[arg(long, default_value_t = 200)]
    n_test: usize,
    /// Number of stationary and of drifted test sets per repetition
    #[arg(long, default_value_t = 250)]
    sets: usize,
    #[arg(long, default_value_t = 10)]
    reps: usize,
    #[arg(long, default_value_t = 0.05)]
    alpha: f64,
    #[arg(long)]
    seed: u64,
    /// Output CSV path for the per-repetition result table
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct DiagArgs {
    /// Dataset variant: 1G, 3G-111, or 3G-135
    #[arg(long)]
    variant: String,
    /// Forced cluster count
    #[arg(long, default_value_t = 9)]
    k: usize,
    #[arg(long)]
    seed: u64,
}

/// Parses argv and runs the selected subcommand. Usage errors exit the
/// process directly (code 2) via clap.
pub fn run() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Gen(args) => cmd_gen(args),
        Command::Fit(args) => cmd_fit(args),
        Command::Detect(args) => cmd_detect(args),
        Command::Bench(args) => cmd_bench(args),
        Command::Diag(args) => cmd_diag(args),
    };
    match result {
        Ok(code) => code,
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::from(EXIT_ERROR)
        }
    }
}

type CmdResult = Result<ExitCode, String>;

fn cmd_gen(args: GenArgs) -> CmdResult {
    let family = Family::parse(&args.family).map_err(|e| e.to_string())?;
    let mut spec = GeneratorSpec::new(family, args.n, args.seed)
        .drifted(args.drift)
        .with_extra_dims(args.extra_dims);
    if let Some(delta) = args.delta {
        spec = spec.with_delta(delta);
    }
    let data = gen_dataset(&spec).map_err(|e| e.to_string())?;
    csvio::write_csv(&data, &args.out).map_err(|e| e.to_string())?;
    println!("wrote {} rows x {} cols to {}", data.n(), data.d(), args.out.display());
    Ok(ExitCode::from(EXIT_OK))
}

fn theta_grid(theta_max: f64, theta_step: f64) -> Result<Vec<f64>, String> {
    if !(theta_step > 0.0) || !(theta_max >= 0.0) {
        return Err("theta-step must be > 0 and theta-max >= 0".into());
    }
    let steps = (theta_max / theta_step).round() as usize;
    Ok((0..=steps).map(|i| i as f64 * theta_step).collect())
}

fn cmd_fit(args: FitArgs) -> CmdResult {
    let train = csvio::parse_csv(&args.train).map_err(|e| e.to_string())?;
    let grid = theta_grid(args.theta_max, args.theta_step)?;
    let detector = Detector::fit_capped(&train, args.beta, &grid, args.seed, args.max_samples)
        .map_err(|e| e.to_string())?;
    let model = detector.model();
    ModelFile::from_model(model, args.seed)
        .save(&args.out)
        .map_err(|e| e.to_string())?;
    println!(
        "fit: K={} theta={} fallback={}",
        model.k(),
        model.theta,
        model.fallback
    );
    Ok(ExitCode::from(EXIT_OK))
}

fn report_json(report: &DriftReport, alpha: f64) -> String {
    let warnings: Vec<String> = report.warnings.iter().map(|w| format!("{w:?}")).collect();
    serde_json::json!({
        "drift": report.drift,
        "p_value": report.p_value,
        "statistic": report.statistic,
        "df": report.df,
        "alpha": alpha,
        "train_counts": report.train_counts,
        "test_counts": report.test_counts,
        "warnings": warnings,
    })
    .to_string()
}

fn cmd_detect(args: DetectArgs) -> CmdResult {
    let model = ModelFile::load(&args.model)
        .map_err(|e| e.to_string())?
        .into_model()
        .map_err(|e| e.to_string())?;
    let test = csvio::parse_csv(&args.test).map_err(|e| e.to_string())?;
    let report = Detector::from_model(model)
        .detect(&test, args.alpha)
        .map_err(|e| e.to_string())?;
    if args.json {
        println!("{}", report_json(&report, args.alpha));
    } else {
        println!("drift: {}", if report.drift { "yes" } else { "no" });
        println!("p-value: {}", report.p_value);
        println!("statistic: {}", report.statistic);
        println!("df: {}", report.df);
        for w in &report.warnings {
            println!("warning: {w:?}");
        }
    }
    Ok(ExitCode::from(if report.drift { EXIT_DRIFT } else { EXIT_OK }))
}

fn cmd_bench(args: BenchArgs) -> CmdResult {
    let family = Family::parse(&args.family).map_err(|e| e.to_string())?;
    let mut cfg = TrialConfig::reference(family, args.seed);
    cfg.n_train = args.n_train;
    cfg.n_test = args.n_test;
    cfg.n_stationary_sets = args.sets;
    cfg.n_drift_sets = args.sets;
    cfg.repetitions = args.reps;
    cfg.alpha = args.alpha;
    let result = run_trial(&cfg).map_err(|e| e.to_string())?;
    csvio::write_trial_result(cfg.family.name(), &result, &args.out)
        .map_err(|e| e.to_string())?;
    println!(
        "{}: type1 {:.2} +/- {:.2} %, type2 {:.2} +/- {:.2} % ({} reps, {:.1}s)",
        cfg.family.name(),
        result.type1_mean,
        result.type1_std,
        result.type2_mean,
        result.type2_std,
        cfg.repetitions,
        result.wall_time.as_secs_f64()
    );
    Ok(ExitCode::from(EXIT_OK))
}

fn cmd_diag(args: DiagArgs) -> CmdResult {
    let variant = DiagnosticVariant::parse(&args.variant).map_err(|e| e.to_string())?;
    let seed_list: Vec<u64> = (0..20).map(|i| seeds::derive(args.seed, i)).collect();
    let (ei, plain) =
        run_partition_diagnostic(variant, args.k, &seed_list).map_err(|e| e.to_string())?;
    println!("intensity std-dev over {} seeds (k={}):", seed_list.len(), args.k);
    println!("  equal-intensity k-means: {ei:.6}");
    println!("  random-init k-means:     {plain:.6}");
    Ok(ExitCode::from(EXIT_OK))
}
