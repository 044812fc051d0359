//! Parameter sweeps over quantized Grover runs, persisted as JSON lines.

use std::path::{Path, PathBuf};
use std::time::Instant;

use qgrain::grover::{default_iterations, run_from, success_first_step, FULL_RUN_PASS_PROBABILITY};
use qgrain::seed::derive_seed;
use qgrain::uncertainty::Criterion;
use qgrain::{GridSpec, QuantizedState, Rounding};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{HarnessError, Result};

pub const SCHEMA_VERSION: u32 = 1;
pub const RESULTS_FORMAT: &str = "qgrain-results";

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RoundingKind {
    #[default]
    Nearest,
    Stochastic,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub n: Vec<u32>,
    #[serde(rename = "log2Q")]
    pub log2_q: Vec<u32>,
    pub criteria: Vec<Criterion>,
    /// Master seeds; each expands into per-trial seeds.
    pub seeds: Vec<u64>,
    pub runs_per_n: u32,
    pub output: PathBuf,
    /// Worker threads; absent means one per core.
    #[serde(default)]
    pub parallelism: Option<usize>,
    #[serde(default)]
    pub rounding: RoundingKind,
    /// Adds elapsed time to every row, which makes the output nondeterministic.
    #[serde(default)]
    pub record_wall_time: bool,
}

impl SweepConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(HarnessError::ConfigInvalid(m));
        for (name, empty) in [
            ("n", self.n.is_empty()),
            ("log2Q", self.log2_q.is_empty()),
            ("criteria", self.criteria.is_empty()),
            ("seeds", self.seeds.is_empty()),
        ] {
            if empty {
                return bad(format!("axis {name} is empty"));
            }
        }
        if self.runs_per_n == 0 {
            return bad("runs_per_n must be at least 1".into());
        }
        if let Some(&n) = self.n.iter().find(|&&n| n == 0 || n > qgrain::MAX_QUBITS) {
            return bad(format!("n = {n} outside 1..={}", qgrain::MAX_QUBITS));
        }
        if let Some(&b) = self.log2_q.iter().find(|&&b| !(1..=62).contains(&b)) {
            return bad(format!("log2Q = {b} outside 1..=62"));
        }
        if self.parallelism == Some(0) {
            return bad("parallelism must be at least 1".into());
        }
        Ok(())
    }

    /// Number of rows the sweep writes.
    pub fn row_count(&self) -> usize {
        self.n.len() * self.log2_q.len() * self.criteria.len() * self.seeds.len() * self.runs_per_n as usize
    }
}

pub fn parse_config(text: &str) -> Result<SweepConfig> {
    let cfg: SweepConfig = serde_json::from_str(text).map_err(|e| HarnessError::ConfigInvalid(e.to_string()))?;
    cfg.validate()?;
    Ok(cfg)
}

/// First line of every results file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ResultsHeader {
    pub schema_version: u32,
    pub format: String,
}

impl Default for ResultsHeader {
    fn default() -> Self {
        ResultsHeader { schema_version: SCHEMA_VERSION, format: RESULTS_FORMAT.into() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ResultRow {
    pub schema_version: u32,
    pub experiment: String,
    pub n: u32,
    #[serde(rename = "log2Q")]
    pub log2_q: u32,
    pub criterion: Criterion,
    pub seed: u64,
    pub run: u32,
    /// Seed the target and rounding stream of this run derive from.
    pub trial_seed: u64,
    pub target: u64,
    pub iterations: u64,
    pub final_success_probability: f64,
    pub first_step_pass: bool,
    /// Whether the run passes `criterion`.
    pub passed: bool,
    pub vanished: bool,
    /// Largest `|‖ψ‖² − 1|` along the run.
    pub norm_drift: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub wall_time_s: Option<f64>,
}

impl ResultRow {
    fn sort_key(&self) -> (u32, u32, u64, Criterion, u32) {
        (self.n, self.log2_q, self.seed, self.criterion, self.run)
    }
}

/// One sweep point: a single run of the quantized search.
#[derive(Debug, Clone, Copy)]
struct Job {
    n: u32,
    log2_q: u32,
    criterion: Criterion,
    seed: u64,
    run: u32,
}

fn run_job(job: Job, rounding: RoundingKind, record_wall_time: bool) -> Result<ResultRow> {
    let started = Instant::now();
    let trial_seed = derive_seed(job.seed, &[job.n as u64, job.log2_q as u64, job.run as u64]);
    let target = trial_seed % (1u64 << job.n);
    let policy = match rounding {
        RoundingKind::Nearest => Rounding::NearestTiesEven,
        RoundingKind::Stochastic => Rounding::Stochastic { seed: derive_seed(trial_seed, &[1]) },
    };
    let grid = GridSpec::from_log2(job.log2_q, policy)?;
    let iterations = default_iterations(job.n);
    let mut row = ResultRow {
        schema_version: SCHEMA_VERSION,
        experiment: format!("grover-n{}-q{}-{}-s{}", job.n, job.log2_q, job.criterion.as_str(), job.seed),
        n: job.n,
        log2_q: job.log2_q,
        criterion: job.criterion,
        seed: job.seed,
        run: job.run,
        trial_seed,
        target,
        iterations,
        final_success_probability: 0.0,
        first_step_pass: false,
        passed: false,
        vanished: true,
        norm_drift: 0.0,
        wall_time_s: None,
    };
    match QuantizedState::uniform(job.n, grid) {
        Ok(start) => {
            let (traj, _) = run_from(start, target, iterations)?;
            row.vanished = false;
            row.final_success_probability = traj.final_success_probability();
            row.first_step_pass = success_first_step(&traj)?;
            row.norm_drift = traj.max_norm_drift();
            row.passed = match job.criterion {
                Criterion::FirstStep => row.first_step_pass,
                Criterion::FullRun => row.final_success_probability >= FULL_RUN_PASS_PROBABILITY,
            };
        }
        Err(qgrain::Error::StateVanished { .. }) => {}
        Err(e) => return Err(e.into()),
    }
    if record_wall_time {
        row.wall_time_s = Some(started.elapsed().as_secs_f64());
    }
    Ok(row)
}

/// Runs every point of the Cartesian product and returns the rows in
/// canonical order: by n, log2Q, seed, criterion, run.
pub fn sweep_rows(cfg: &SweepConfig) -> Result<Vec<ResultRow>> {
    cfg.validate()?;
    let mut jobs = Vec::with_capacity(cfg.row_count());
    for &n in &cfg.n {
        for &log2_q in &cfg.log2_q {
            for &criterion in &cfg.criteria {
                for &seed in &cfg.seeds {
                    for run in 0..cfg.runs_per_n {
                        jobs.push(Job { n, log2_q, criterion, seed, run });
                    }
                }
            }
        }
    }
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(threads) = cfg.parallelism {
        builder = builder.num_threads(threads);
    }
    let pool = builder.build().map_err(|e| HarnessError::ConfigInvalid(e.to_string()))?;
    let mut rows: Vec<ResultRow> = pool.install(|| {
        jobs.par_iter().map(|&job| run_job(job, cfg.rounding, cfg.record_wall_time)).collect::<Result<_>>()
    })?;
    rows.sort_by_key(ResultRow::sort_key);
    Ok(rows)
}

/// The results file text: a header line, then one JSON row per line.
pub fn render_results(rows: &[ResultRow]) -> Result<String> {
    let ser = |e: serde_json::Error| HarnessError::Serialize(e.to_string());
    let mut out = serde_json::to_string(&ResultsHeader::default()).map_err(ser)?;
    out.push('\n');
    for row in rows {
        out.push_str(&serde_json::to_string(row).map_err(ser)?);
        out.push('\n');
    }
    Ok(out)
}

/// Runs the sweep and writes the results file to `cfg.output`.
pub fn run_sweep(cfg: &SweepConfig) -> Result<Vec<ResultRow>> {
    let rows = sweep_rows(cfg)?;
    write_file(&cfg.output, &render_results(&rows)?)?;
    Ok(rows)
}

pub(crate) fn write_file(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|e| HarnessError::io(path, e))
}
