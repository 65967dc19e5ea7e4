//! Command-line surface.
//!
//! Exit codes: 0 success, 1 usage error, 2 runtime error, 3 a theory check
//! failed.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::error::{Error, Result};
use crate::harness::{
    run_experiment, summarize, summarize_params, sweep, Algorithm, ExperimentConfig, SweepAxis,
    SweepResult,
};
use crate::optim::Sizing;
use crate::table::{export_raw, format_summary_table};
use crate::theory::verify_theory;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_RUNTIME: i32 = 2;
pub const EXIT_THEORY: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "noisyevo",
    version,
    about = "Noisy OneMax optimizers and runtime experiments"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run one configuration and print its summary row.
    Run(ExperimentArgs),
    /// Sweep the noise variance at fixed n.
    SweepVariance(SweepArgs),
    /// Sweep n with variance sqrt(n).
    SweepN(SweepArgs),
    /// Check the analytic bounds against exact and Monte Carlo oracles.
    VerifyTheory {
        #[arg(long, env = "NOISYEVO_SEED", default_value_t = 0)]
        seed: u64,
    },
    /// Run one configuration and write every run as CSV.
    ExportRaw(ExperimentArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum AlgoArg {
    Cga,
    Ea,
    Rerls,
    NoCga,
    NoRerls,
}

#[derive(Debug, Clone, Args)]
pub struct ExperimentArgs {
    #[arg(long, default_value_t = 100)]
    pub n: usize,
    #[arg(long, default_value_t = 0.0)]
    pub sigma2: f64,
    #[arg(long, value_enum, default_value_t = AlgoArg::Cga)]
    pub algo: AlgoArg,
    #[arg(long, default_value_t = 100)]
    pub runs: usize,
    #[arg(long, default_value_t = 100_000_000)]
    pub budget: u64,
    /// Master seed; falls back to NOISYEVO_SEED.
    #[arg(long, env = "NOISYEVO_SEED", default_value_t = 0)]
    pub seed: u64,
    /// cGA population size (default: sized from the variance).
    #[arg(long = "K")]
    pub k: Option<u64>,
    /// (mu+1) EA population size.
    #[arg(long)]
    pub mu: Option<usize>,
    /// reRLS evaluations per point (default: sized from the variance).
    #[arg(long)]
    pub resamples: Option<u64>,
    #[arg(long)]
    pub ck: Option<f64>,
    #[arg(long)]
    pub cm: Option<f64>,
    #[arg(long)]
    pub ct: Option<f64>,
    /// Clamp cGA frequencies to [1/n, 1 - 1/n].
    #[arg(long)]
    pub margin: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub experiment: ExperimentArgs,
    /// Comma-separated grid of variances (sweep-variance) or sizes (sweep-n).
    #[arg(long, value_delimiter = ',', required = true)]
    pub grid: Vec<f64>,
}

/// Default (μ+1) EA population size when `--mu` is absent.
pub const DEFAULT_MU: usize = 1;

impl ExperimentArgs {
    /// Builds a validated config; manual sizes that contradict the chosen
    /// algorithm or its automatic sizing are usage errors.
    pub fn to_config(&self) -> std::result::Result<ExperimentConfig, String> {
        let algo = self.algo;
        let reject = |flag: &str, why: &str| Err(format!("{flag} {why}"));
        if self.k.is_some() && algo != AlgoArg::Cga {
            return reject("--K", "only applies to --algo cga");
        }
        if self.resamples.is_some() && algo != AlgoArg::Rerls {
            return reject("--resamples", "only applies to --algo rerls");
        }
        if self.mu.is_some() && algo != AlgoArg::Ea {
            return reject("--mu", "only applies to --algo ea");
        }
        if self.k.is_some() && self.ck.is_some() {
            return reject("--K", "conflicts with --ck (manual and automatic sizing)");
        }
        if self.resamples.is_some() && self.cm.is_some() {
            return reject(
                "--resamples",
                "conflicts with --cm (manual and automatic sizing)",
            );
        }
        if self.margin && !matches!(algo, AlgoArg::Cga | AlgoArg::NoCga) {
            return reject("--margin", "only applies to cGA variants");
        }
        let defaults = Sizing::default();
        let sizing = Sizing::new(
            self.ck.unwrap_or(defaults.c_k),
            self.cm.unwrap_or(defaults.c_m),
            self.ct.unwrap_or(defaults.c_t),
        )
        .map_err(|e| e.to_string())?;
        let algorithm = match algo {
            AlgoArg::Cga => Algorithm::Cga { k: self.k },
            AlgoArg::Ea => Algorithm::Ea {
                mu: self.mu.unwrap_or(DEFAULT_MU),
            },
            AlgoArg::Rerls => Algorithm::Rerls { m: self.resamples },
            AlgoArg::NoCga => Algorithm::NoCga,
            AlgoArg::NoRerls => Algorithm::NoRerls,
        };
        Ok(ExperimentConfig {
            algorithm,
            n: self.n,
            sigma2: self.sigma2,
            runs: self.runs,
            budget: self.budget,
            master_seed: self.seed,
            sizing,
            margin: self.margin,
        })
    }
}

/// Parses `argv` (including the program name).
pub fn parse_cli<I, T>(argv: I) -> std::result::Result<Cli, clap::Error>
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    Cli::try_parse_from(argv)
}

fn io_err(path: &Path) -> impl Fn(std::io::Error) -> Error + '_ {
    move |source| Error::Io {
        path: path.to_path_buf(),
        source,
    }
}

fn with_suffix(path: &Path, suffix: &str) -> PathBuf {
    let mut s = path.as_os_str().to_owned();
    s.push(suffix);
    PathBuf::from(s)
}

/// Free-text description of how a sweep was produced.
pub fn sweep_metadata(result: &SweepResult, template: &ExperimentConfig) -> String {
    let mut out = String::new();
    let axis = match result.axis {
        SweepAxis::Variance => "variance",
        SweepAxis::Dimension => "dimension (sigma2 = sqrt(n))",
    };
    let _ = writeln!(out, "algorithm {}", result.algorithm);
    let _ = writeln!(out, "axis {axis}");
    let _ = writeln!(out, "runs {}", template.runs);
    let _ = writeln!(out, "master_seed {}", template.master_seed);
    let _ = writeln!(
        out,
        "sizing c_k={} c_m={} c_t={}",
        template.sizing.c_k, template.sizing.c_m, template.sizing.c_t
    );
    let _ = writeln!(
        out,
        "misses budgeted runs that never hit are excluded from the quartiles; hits are listed per point"
    );
    for (p, row) in result.points.iter().zip(&result.rows) {
        let _ = write!(
            out,
            "point x={} n={} sigma2={} budget={} hits={}/{}",
            p.x, p.n, p.sigma2, p.budget, row.hits, row.runs
        );
        if let Some(e) = &p.error {
            let _ = write!(out, " error={e}");
        }
        out.push('\n');
    }
    out
}

fn run_sweep(axis: SweepAxis, args: &SweepArgs, config: ExperimentConfig) -> Result<()> {
    let result = sweep(axis, &args.grid, &config)?;
    let table = format_summary_table(&result.rows);
    match &args.experiment.out {
        Some(path) => {
            fs::write(path, &table).map_err(io_err(path))?;
            let params = with_suffix(path, ".param");
            fs::write(&params, format_summary_table(&result.param_rows))
                .map_err(io_err(&params))?;
            let meta = with_suffix(path, ".meta");
            fs::write(&meta, sweep_metadata(&result, &config)).map_err(io_err(&meta))?;
        }
        None => print!("{table}"),
    }
    Ok(())
}

fn execute(cli: Cli) -> std::result::Result<i32, (i32, String)> {
    let usage = |msg: String| (EXIT_USAGE, msg);
    let runtime = |e: Error| (EXIT_RUNTIME, e.to_string());
    match cli.command {
        Command::Run(args) => {
            let config = args.to_config().map_err(usage)?;
            config.validate().map_err(|e| usage(e.to_string()))?;
            let records = run_experiment(&config).map_err(runtime)?;
            let row = summarize(&records, config.sigma2).map_err(runtime)?;
            let params = summarize_params(&records, config.sigma2).map_err(runtime)?;
            let table = format_summary_table(std::slice::from_ref(&row));
            match &args.out {
                Some(path) => fs::write(path, &table).map_err(|e| runtime(io_err(path)(e)))?,
                None => print!("{table}"),
            }
            eprintln!(
                "# {} n={} sigma2={} hits={}/{} param_median={}",
                config.algorithm.name(),
                config.n,
                config.sigma2,
                row.hits,
                row.runs,
                params.quartiles.map_or(f64::NAN, |q| q.med)
            );
        }
        Command::ExportRaw(args) => {
            let config = args.to_config().map_err(usage)?;
            config.validate().map_err(|e| usage(e.to_string()))?;
            let path = args
                .out
                .clone()
                .ok_or_else(|| usage("export-raw needs --out <path>".into()))?;
            let records = run_experiment(&config).map_err(runtime)?;
            export_raw(&records, &path).map_err(runtime)?;
        }
        Command::SweepVariance(args) => {
            let config = args.experiment.to_config().map_err(usage)?;
            run_sweep(SweepAxis::Variance, &args, config).map_err(runtime)?;
        }
        Command::SweepN(args) => {
            let config = args.experiment.to_config().map_err(usage)?;
            run_sweep(SweepAxis::Dimension, &args, config).map_err(runtime)?;
        }
        Command::VerifyTheory { seed } => {
            let report = verify_theory(seed).map_err(runtime)?;
            print!("{report}");
            if !report.all_passed() {
                return Ok(EXIT_THEORY);
            }
        }
    }
    Ok(EXIT_OK)
}

/// Parses and runs; returns the process exit code.
pub fn main_with_args<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match parse_cli(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    match execute(cli) {
        Ok(code) => code,
        Err((code, msg)) => {
            eprintln!("error: {msg}");
            code
        }
    }
}
