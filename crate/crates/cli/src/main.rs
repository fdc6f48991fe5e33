use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use rmtlab_cli::{list_experiments, run, CliError, ExperimentConfig, DEFAULT_SEED};

/// Run a named, seeded experiment and print a JSON report.
///
/// Exit status: 0 when the experiment passes, 1 when it fails its threshold,
/// 2 on usage errors.
#[derive(Debug, Parser)]
#[command(name = "rmtlab", version)]
struct Args {
    /// Experiment name, or `list` to print the catalog.
    experiment: String,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    m: Option<usize>,
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    q: Option<f64>,
    #[arg(long)]
    steps: Option<usize>,
    #[arg(long)]
    samples: Option<usize>,
    #[arg(long, env = "RMTLAB_SEED", default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Worker threads; results do not depend on this.
    #[arg(long, default_value_t = default_workers())]
    workers: usize,
    /// Write raw samples as CSV (`series,index,value`).
    #[arg(long, value_name = "PATH")]
    emit_samples: Option<PathBuf>,
    /// Override the experiment's pass threshold.
    #[arg(long, value_name = "X")]
    threshold: Option<f64>,
    /// Write the report here instead of standard output.
    #[arg(long, value_name = "PATH")]
    output: Option<PathBuf>,
}

fn default_workers() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}

fn main() -> ExitCode {
    let args = Args::parse();
    if args.experiment == "list" {
        let catalog: Vec<_> = list_experiments().iter().map(|e| e.to_json()).collect();
        println!("{}", serde_json::to_string_pretty(&catalog).expect("catalog serialises"));
        return ExitCode::SUCCESS;
    }
    let config = ExperimentConfig {
        experiment: args.experiment,
        n: args.n,
        m: args.m,
        k: args.k,
        q: args.q,
        steps: args.steps,
        samples: args.samples,
        seed: args.seed,
        workers: args.workers,
        threshold: args.threshold,
        emit_samples: args.emit_samples,
    };
    let result = run(&config).and_then(|report| {
        let json = report.to_json();
        match &args.output {
            Some(path) => std::fs::write(path, json + "\n")?,
            None => println!("{json}"),
        }
        Ok::<_, CliError>(report.exit_code())
    });
    match result {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("rmtlab: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
