//! Command-line front end: sampling the built-in models, reconstruction,
//! convergence sweeps, PCT-error tables and chain-forest dumps.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use svf::bench::{self, Method};
use svf::chains::{build_chain_forest, dump_forest};
use svf::model::{BuiltinModel, Partition, SampleSet, SampleSetFile};
use svf::reconstruct::{
    reconstruct_c4, reconstruct_holder, reconstruct_metric_poly, Approximant,
};
use svf::{chebyshev_partition, uniform_partition};

#[derive(Parser)]
#[command(name = "svf", about = "Reconstruction of interval-union valued functions from samples", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum NodeKind {
    Chebyshev,
    Uniform,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MethodArg {
    MetricPoly,
    C4,
    Holder,
}

#[derive(Args)]
struct MethodOpts {
    #[arg(long, value_enum)]
    method: MethodArg,
    /// Stencil width for the PCT estimate of the regularized method.
    #[arg(long, default_value_t = 3)]
    k: usize,
    /// Square-root expansion degree of the regularized method.
    #[arg(long, default_value_t = 4)]
    r: usize,
}

impl MethodOpts {
    fn bench_method(&self) -> Method {
        match self.method {
            MethodArg::MetricPoly => Method::MetricPoly,
            MethodArg::C4 => Method::C4,
            MethodArg::Holder => Method::Holder { k: self.k, r: self.r },
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Sample a built-in model on a partition and write the samples as JSON.
    Sample {
        #[arg(long)]
        model: BuiltinModel,
        #[arg(long, value_enum, default_value_t = NodeKind::Chebyshev)]
        nodes: NodeKind,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Reconstruct an approximant from a sample file and export it as JSON.
    Reconstruct {
        #[arg(long = "in")]
        input: PathBuf,
        #[command(flatten)]
        method: MethodOpts,
        #[arg(long)]
        out: PathBuf,
    },
    /// Run a convergence sweep over a list of N and write a CSV report.
    Sweep {
        #[arg(long)]
        model: BuiltinModel,
        #[command(flatten)]
        method: MethodOpts,
        #[arg(long = "n-list", value_delimiter = ',')]
        n_list: Vec<usize>,
        /// Error-grid size; 0 selects the method default (2N or 400).
        #[arg(long, default_value_t = 400)]
        grid: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Tabulate PCT approximation errors per N as CSV on stdout.
    PctError {
        #[arg(long)]
        model: BuiltinModel,
        #[command(flatten)]
        method: MethodOpts,
        #[arg(long = "n-list", value_delimiter = ',')]
        n_list: Vec<usize>,
    },
    /// Print the augmented chain forest of a sample file.
    DumpChains {
        #[arg(long = "in")]
        input: PathBuf,
    },
}

/// Writes via a temporary file in the target directory and renames, so a
/// crash never leaves a half-written artifact.
fn write_atomic(path: &Path, contents: &str) -> Result<()> {
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty());
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".tmp");
    let tmp = PathBuf::from(tmp);
    if let Some(dir) = dir {
        fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    }
    fs::write(&tmp, contents).with_context(|| format!("writing {}", tmp.display()))?;
    fs::rename(&tmp, path).with_context(|| format!("renaming into {}", path.display()))?;
    Ok(())
}

fn read_samples(path: &Path) -> Result<SampleSet> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let file: SampleSetFile =
        serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
    SampleSet::try_from(file).with_context(|| format!("validating {}", path.display()))
}

fn partition(kind: NodeKind, n: usize, a: f64, b: f64) -> Partition {
    match kind {
        NodeKind::Chebyshev => chebyshev_partition(n, a, b),
        NodeKind::Uniform => uniform_partition(n, a, b),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Validation(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
        Err(Failure::Reconstruction(e)) => {
            eprintln!("reconstruction error: {e:#}");
            ExitCode::from(2)
        }
    }
}

enum Failure {
    Validation(anyhow::Error),
    Reconstruction(anyhow::Error),
}

fn dispatch(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Sample { model, nodes, n, out } => {
            if n == 0 {
                return Err(Failure::Validation(anyhow::anyhow!("--n must be positive")));
            }
            let m = svf::builtin(model);
            let p = partition(nodes, n, m.a, m.b);
            let samples = m.sample(&p).map_err(err1)?;
            let file = SampleSetFile::from(&samples);
            let json = serde_json::to_string_pretty(&file).map_err(err1)?;
            write_atomic(&out, &json).map_err(Failure::Validation)
        }
        Command::Reconstruct { input, method, out } => {
            let samples = read_samples(&input).map_err(Failure::Validation)?;
            let approx = reconstruct(&samples, &method)?;
            let json = serde_json::to_string_pretty(&approx).map_err(err1)?;
            write_atomic(&out, &json).map_err(Failure::Validation)
        }
        Command::Sweep { model, method, n_list, grid, out } => {
            if n_list.is_empty() {
                return Err(Failure::Validation(anyhow::anyhow!("--n-list must not be empty")));
            }
            let m = svf::builtin(model);
            let grid = (grid > 0).then_some(grid);
            let report = bench::sweep(&m, method.bench_method(), &n_list, grid);
            for (n, reason) in &report.failures {
                log::warn!("N = {n}: {reason}");
            }
            write_atomic(&out, &bench::to_csv(&report)).map_err(Failure::Validation)
        }
        Command::PctError { model, method, n_list } => {
            if n_list.is_empty() {
                return Err(Failure::Validation(anyhow::anyhow!("--n-list must not be empty")));
            }
            let m = svf::builtin(model);
            let report = bench::sweep(&m, method.bench_method(), &n_list, Some(2));
            println!("method,model,N,delta,pct_error_left,pct_error_right");
            for r in &report.records {
                let opt = |v: Option<f64>| v.map(|x| x.to_string()).unwrap_or_default();
                println!(
                    "{},{},{},{},{},{}",
                    report.method,
                    report.model,
                    r.n,
                    r.delta,
                    opt(r.pct_error_left),
                    opt(r.pct_error_right)
                );
            }
            for (n, reason) in &report.failures {
                log::warn!("N = {n}: {reason}");
            }
            Ok(())
        }
        Command::DumpChains { input } => {
            let samples = read_samples(&input).map_err(Failure::Validation)?;
            let forest = build_chain_forest(&samples)
                .map_err(|e| Failure::Reconstruction(e.into()))?;
            print!("{}", dump_forest(&forest, &samples));
            Ok(())
        }
    }
}

fn reconstruct(samples: &SampleSet, method: &MethodOpts) -> Result<Approximant, Failure> {
    let result = match method.method {
        MethodArg::MetricPoly => reconstruct_metric_poly(samples),
        MethodArg::C4 => reconstruct_c4(samples),
        MethodArg::Holder => reconstruct_holder(samples, method.k, method.r),
    };
    result.map_err(|e| Failure::Reconstruction(e.into()))
}

fn err1(e: impl Into<anyhow::Error>) -> Failure {
    Failure::Validation(e.into())
}
