//! Seeded, reproducible experiment runner.
//!
//! Every experiment draws its Monte Carlo replicates from
//! `RngStream(seed, replicate).with_lane(lane)`, where each independent
//! sample set in the experiment gets its own lane. Replicates are computed on
//! a rayon pool and collected in replicate order, so reports do not depend on
//! the number of workers.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

use serde::{Deserialize, Serialize};

mod experiments;
mod registry;

pub use registry::{list_experiments, lookup, ExperimentInfo, ParamDefaults};

/// Default master seed when neither the flag nor the environment sets one.
pub const DEFAULT_SEED: u64 = 20_050_301;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error(transparent)]
    Compute(#[from] rmtlab::Error),
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    /// Process exit status for this error.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            _ => 1,
        }
    }
}

pub(crate) fn usage<T>(msg: impl Into<String>) -> Result<T, CliError> {
    Err(CliError::Usage(msg.into()))
}

/// Requested run; unset parameters take the registry defaults.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub experiment: String,
    pub n: Option<usize>,
    pub m: Option<usize>,
    pub k: Option<usize>,
    pub q: Option<f64>,
    pub steps: Option<usize>,
    pub samples: Option<usize>,
    pub seed: u64,
    pub workers: usize,
    pub threshold: Option<f64>,
    /// CSV dump of the raw samples.
    pub emit_samples: Option<PathBuf>,
}

impl ExperimentConfig {
    pub fn new(experiment: impl Into<String>) -> Self {
        Self {
            experiment: experiment.into(),
            n: None,
            m: None,
            k: None,
            q: None,
            steps: None,
            samples: None,
            seed: DEFAULT_SEED,
            workers: 1,
            threshold: None,
            emit_samples: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MomentsReport {
    pub mean: f64,
    pub variance: f64,
    pub standard_error: f64,
}

impl From<rmtlab::Moments> for MomentsReport {
    fn from(m: rmtlab::Moments) -> Self {
        Self { mean: m.mean, variance: m.variance, standard_error: m.standard_error }
    }
}

/// One JSON object per run. `comparisons[i]` labels `ks_statistics[i]` and
/// `p_values[i]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub experiment: String,
    pub parameters: BTreeMap<String, serde_json::Value>,
    pub thresholds: BTreeMap<String, f64>,
    pub comparisons: Vec<String>,
    pub ks_statistics: Vec<f64>,
    pub p_values: Vec<f64>,
    pub moments: BTreeMap<String, MomentsReport>,
    pub diagnostics: BTreeMap<String, f64>,
    pub pass: bool,
    pub elapsed_ms: u64,
    pub seed: u64,
}

impl ExperimentReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("report serialises")
    }

    /// Exit status under the 0 pass / 1 fail contract.
    pub fn exit_code(&self) -> i32 {
        if self.pass {
            0
        } else {
            1
        }
    }
}

/// Fully resolved parameters handed to an experiment body.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct Params {
    pub n: usize,
    pub m: usize,
    pub k: Option<usize>,
    pub q: f64,
    pub steps: usize,
    pub samples: usize,
    pub seed: u64,
    pub threshold: f64,
}

/// What an experiment body returns before timing and bookkeeping.
#[derive(Debug, Default)]
pub(crate) struct Outcome {
    pub comparisons: Vec<String>,
    pub ks_statistics: Vec<f64>,
    pub p_values: Vec<f64>,
    pub moments: BTreeMap<String, MomentsReport>,
    pub diagnostics: BTreeMap<String, f64>,
    pub pass: bool,
    /// Raw series for `--emit-samples`.
    pub series: Vec<(String, Vec<f64>)>,
}

/// Runs the named experiment.
pub fn run(config: &ExperimentConfig) -> Result<ExperimentReport, CliError> {
    let info = match lookup(&config.experiment) {
        Some(info) => info,
        None => return usage(format!("unknown experiment '{}' (try `list`)", config.experiment)),
    };
    if config.workers == 0 {
        return usage("--workers must be at least 1");
    }
    let params = info.resolve(config)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.workers)
        .build()
        .map_err(|e| CliError::Usage(format!("cannot build worker pool: {e}")))?;
    let start = Instant::now();
    let outcome = pool.install(|| (info.body)(&params))?;
    let elapsed_ms = start.elapsed().as_millis() as u64;
    if let Some(path) = &config.emit_samples {
        write_samples(path, &outcome.series)?;
    }
    Ok(ExperimentReport {
        experiment: info.name.to_string(),
        parameters: info.echo(&params),
        thresholds: BTreeMap::from([(info.threshold_name.to_string(), params.threshold)]),
        comparisons: outcome.comparisons,
        ks_statistics: outcome.ks_statistics,
        p_values: outcome.p_values,
        moments: outcome.moments,
        diagnostics: outcome.diagnostics,
        pass: outcome.pass,
        elapsed_ms,
        seed: params.seed,
    })
}

fn write_samples(path: &PathBuf, series: &[(String, Vec<f64>)]) -> Result<(), CliError> {
    let mut out = std::io::BufWriter::new(std::fs::File::create(path)?);
    writeln!(out, "series,index,value")?;
    for (name, values) in series {
        for (i, v) in values.iter().enumerate() {
            writeln!(out, "{name},{i},{v}")?;
        }
    }
    out.flush()?;
    Ok(())
}
