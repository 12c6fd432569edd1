//! `growthopt`: run experiments, bench matrices, plot traces and estimate
//! growth constants.
//!
//! Exit codes: 0 success, 1 configuration error, 2 budget exhausted without
//! reaching the target accuracy.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};

use growthopt::experiment::{run_bench, run_experiment, write_bench_csv, BenchMatrix, ExperimentConfig};
use growthopt::growth::{estimate_growth_constant, Sampler};
use growthopt::plot::{render_svg, Series};
use growthopt::problem::ProblemDoc;
use growthopt::trace::read_csv;
use growthopt::{Execution, Termination};

#[derive(Parser)]
#[command(name = "growthopt", version, about = "Restart-based first-order methods using a strict lower bound")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one experiment; writes a trace CSV and a bound report JSON.
    Run { config: PathBuf },
    /// Run a (problem × start × algorithm × ε′) matrix; writes a summary CSV.
    Bench {
        matrix: PathBuf,
        /// Run cells one after another instead of in parallel.
        #[arg(long)]
        sequential: bool,
    },
    /// Plot relative-gap curves of one or more traces as SVG.
    Plot {
        #[arg(required = true)]
        traces: Vec<PathBuf>,
        #[arg(short, long)]
        output: PathBuf,
        /// Problem whose f* and f_slb define the relative gap.
        #[arg(long, conflicts_with_all = ["f_star", "f_slb"])]
        problem: Option<PathBuf>,
        #[arg(long, requires = "f_slb")]
        f_star: Option<f64>,
        #[arg(long, requires = "f_star")]
        f_slb: Option<f64>,
    },
    /// Lower-estimate the growth constant by sampling.
    EstimateG {
        problem: PathBuf,
        #[arg(long)]
        samples: usize,
        #[arg(long)]
        range: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

/// Failure that maps to a specific exit code.
struct Exhausted;

fn out_dir() -> Result<PathBuf> {
    let dir = std::env::var_os("GROWTHOPT_OUT")
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from("growthopt-out"));
    fs::create_dir_all(&dir).with_context(|| format!("cannot create output directory {}", dir.display()))?;
    Ok(dir)
}

fn stem(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "out".into())
}

fn parent(path: &Path) -> &Path {
    path.parent().unwrap_or(Path::new("."))
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

fn cmd_run(config: &Path) -> Result<Option<Exhausted>> {
    let cfg = ExperimentConfig::from_json(&read(config)?).with_context(|| format!("invalid config {}", config.display()))?;
    let (_, out) = run_experiment(&cfg, parent(config))?;
    let dir = out_dir()?;
    let name = cfg.name.clone().unwrap_or_else(|| stem(config));
    let trace_path = dir.join(format!("{name}.trace.csv"));
    let mut buf = Vec::new();
    out.run.write_csv(&mut buf)?;
    fs::write(&trace_path, buf)?;
    println!("{}", trace_path.display());
    match &out.report {
        Some(report) => {
            let path = dir.join(format!("{name}.report.json"));
            fs::write(&path, report.to_json()? + "\n")?;
            println!("{}", path.display());
        }
        None => {
            if let Some(note) = &out.report_note {
                eprintln!("no bound report: {note}");
            }
        }
    }
    let failed = match out.run.termination {
        Termination::BudgetExhausted => true,
        Termination::ToleranceMet | Termination::ZeroSubgradient => false,
    };
    Ok(failed.then_some(Exhausted))
}

fn cmd_bench(matrix: &Path, sequential: bool) -> Result<()> {
    let m = BenchMatrix::from_json(&read(matrix)?).with_context(|| format!("invalid matrix {}", matrix.display()))?;
    let exec = if sequential { Execution::Sequential } else { Execution::Parallel };
    let rows = run_bench(&m, parent(matrix), exec)?;
    let mut buf = Vec::new();
    write_bench_csv(&rows, &mut buf)?;
    let path = out_dir()?.join(format!("{}.bench.csv", stem(matrix)));
    fs::write(&path, &buf)?;
    print!("{}", String::from_utf8_lossy(&buf));
    println!("{}", path.display());
    Ok(())
}

fn cmd_plot(traces: &[PathBuf], output: &Path, problem: Option<&Path>, f_star: Option<f64>, f_slb: Option<f64>) -> Result<()> {
    let (f_star, f_slb) = match (problem, f_star, f_slb) {
        (Some(p), _, _) => {
            let inst = ProblemDoc::from_json(&read(p)?)?.build()?;
            (inst.f_star(), inst.f_slb())
        }
        (None, Some(fs), Some(fl)) => (Some(fs), fl),
        _ => bail!("plot needs --problem or both --f-star and --f-slb"),
    };
    let loaded = traces
        .iter()
        .map(|t| {
            let text = read(t)?;
            let recs = read_csv(text.as_bytes()).with_context(|| format!("invalid trace {}", t.display()))?;
            let label = t.file_name().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
            Ok((label, recs))
        })
        .collect::<Result<Vec<_>>>()?;
    let series: Vec<Series<'_>> = loaded
        .iter()
        .map(|(label, trace)| Series { label, trace })
        .collect();
    let svg = render_svg(&series, f_star, f_slb)?;
    let path = if output.is_relative() && std::env::var_os("GROWTHOPT_OUT").is_some() {
        out_dir()?.join(output)
    } else {
        output.to_path_buf()
    };
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir)?;
    }
    fs::write(&path, svg)?;
    println!("{}", path.display());
    Ok(())
}

fn cmd_estimate_g(problem: &Path, samples: usize, range: f64, seed: u64) -> Result<()> {
    let inst = ProblemDoc::from_json(&read(problem)?)?.build()?;
    let sampler = Sampler::for_problem(&inst, samples, range, seed);
    let cert = estimate_growth_constant(&inst, &sampler, Execution::Parallel)?;
    let json = serde_json::to_string_pretty(&cert)? + "\n";
    let path = out_dir()?.join(format!("{}.growth.json", stem(problem)));
    fs::write(&path, &json)?;
    print!("{json}");
    println!("{}", path.display());
    Ok(())
}

fn main() -> ExitCode {
    // Usage errors exit with 1, keeping 2 for budget exhaustion.
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    let result = match &cli.command {
        Command::Run { config } => cmd_run(config),
        Command::Bench { matrix, sequential } => cmd_bench(matrix, *sequential).map(|_| None),
        Command::Plot {
            traces,
            output,
            problem,
            f_star,
            f_slb,
        } => cmd_plot(traces, output, problem.as_deref(), *f_star, *f_slb).map(|_| None),
        Command::EstimateG {
            problem,
            samples,
            range,
            seed,
        } => cmd_estimate_g(problem, *samples, *range, *seed).map(|_| None),
    };
    match result {
        Ok(None) => ExitCode::SUCCESS,
        Ok(Some(Exhausted)) => {
            eprintln!("budget exhausted before reaching the requested accuracy");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
