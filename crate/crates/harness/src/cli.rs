//! Command-line interface of the `qgrain` binary.

use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use qgrain::complexity::{
    abs_complexity_bound, abs_complexity_exact, complexity_c, default_tolerance, BasisPermutation, ABS_EXACT_MAX_QUBITS,
};
use qgrain::grover::{grover_run, GroverConfig, GroverTrajectory};
use qgrain::physest::{estimate_process, preset, EstimateReport, HbarMode, ProcessSpec};
use qgrain::uncertainty::{grover_threshold, Criterion, DEFAULT_RUNS_PER_N};
use qgrain::{GridSpec, Rounding};
use serde::Serialize;

use crate::error::{HarnessError, Result};
use crate::report::{emit_report, ReportFormat};
use crate::state_file::parse_state_file;
use crate::sweep::{parse_config, run_sweep, write_file};

#[derive(Debug, Parser)]
#[command(name = "qgrain", version, about = "Grover search and state complexity on a quantized amplitude grid")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Ideal,
    Quantized,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum RoundingArg {
    Nearest,
    Stochastic,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CriterionArg {
    FirstStep,
    FullRun,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum HbarArg {
    Paper,
    Codata,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PresetArg {
    Rb85,
    He6,
    He5Stage,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FormatArg {
    Json,
    Csv,
    Plot,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run one Grover search and print its trajectory as JSON.
    Grover {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        target: u64,
        #[arg(long, value_enum, default_value = "ideal")]
        mode: ModeArg,
        #[arg(long = "log2Q", default_value_t = 40)]
        log2_q: u32,
        #[arg(long, value_enum, default_value = "nearest")]
        rounding: RoundingArg,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Grover steps; defaults to [π√N/4].
        #[arg(long)]
        iterations: Option<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Estimate Q from the largest register the quantized search still solves.
    Threshold {
        #[arg(long = "log2Q")]
        log2_q: u32,
        #[arg(long, value_enum, default_value = "first-step")]
        criterion: CriterionArg,
        #[arg(long, default_value_t = 16)]
        n_max: u32,
        #[arg(long, default_value_t = DEFAULT_RUNS_PER_N)]
        runs: u32,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value = "nearest")]
        rounding: RoundingArg,
    },
    /// Complexity and kernels of a state read from a JSON state file.
    Complexity {
        #[arg(long)]
        state_file: PathBuf,
        /// Also search basis relabelings for a lower complexity.
        #[arg(long = "abs")]
        absolute: bool,
        #[arg(long, default_value_t = 10_000)]
        budget: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Rank-1 tolerance; defaults to 1e-10.
        #[arg(long)]
        tol: Option<f64>,
    },
    /// Qubit count a physical process would need under the energy-time bound.
    Estimate {
        #[arg(long, value_enum, conflicts_with_all = ["energy_erg", "time_s"], required_unless_present_all = ["energy_erg", "time_s"])]
        preset: Option<PresetArg>,
        #[arg(long, requires = "time_s")]
        energy_erg: Option<f64>,
        #[arg(long, requires = "energy_erg")]
        time_s: Option<f64>,
        #[arg(long, value_enum, default_value = "paper")]
        hbar: HbarArg,
    },
    /// Run a parameter sweep described by a JSON config.
    Sweep {
        #[arg(long)]
        config: PathBuf,
    },
    /// Summarize a results file.
    Report {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, value_enum, default_value = "json")]
        format: FormatArg,
    },
}

fn read_file(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| HarnessError::io(path, e))
}

fn to_json<T: Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value).map_err(|e| HarnessError::Serialize(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

fn rounding(arg: RoundingArg, seed: u64) -> Rounding {
    match arg {
        RoundingArg::Nearest => Rounding::NearestTiesEven,
        RoundingArg::Stochastic => Rounding::Stochastic { seed },
    }
}

#[derive(Serialize)]
struct GroverOutput<'a> {
    config: GroverConfig,
    trajectory: &'a GroverTrajectory,
}

#[derive(Serialize)]
struct KernelOutput {
    qubits: Vec<u32>,
    amplitudes: Vec<[f64; 2]>,
}

#[derive(Serialize)]
struct AbsExactOutput {
    complexity: u32,
    witness: BasisPermutation,
}

#[derive(Serialize)]
struct ComplexityOutput {
    n: u32,
    tolerance: f64,
    complexity: u32,
    kernels: Vec<KernelOutput>,
    #[serde(skip_serializing_if = "Option::is_none")]
    abs_bound: Option<qgrain::complexity::AbsComplexityBound>,
    #[serde(skip_serializing_if = "Option::is_none")]
    abs_exact: Option<AbsExactOutput>,
}

#[derive(Serialize)]
struct EstimateOutput {
    process: ProcessSpec,
    estimate: EstimateReport,
}

#[derive(Serialize)]
struct SweepOutput {
    output: PathBuf,
    rows: usize,
}

/// Executes a parsed command and returns what it prints on stdout.
pub fn execute(cli: Cli) -> Result<String> {
    match cli.command {
        Command::Grover { n, target, mode, log2_q, rounding: r, seed, iterations, out } => {
            let mut cfg = match mode {
                ModeArg::Ideal => GroverConfig::ideal(n, target),
                ModeArg::Quantized => {
                    GroverConfig::quantized(n, target, GridSpec::from_log2(log2_q, rounding(r, seed))?)
                }
            };
            if let Some(it) = iterations {
                cfg = cfg.with_iterations(it);
            }
            let traj = grover_run(&cfg)?;
            let text = to_json(&GroverOutput { config: cfg, trajectory: &traj })?;
            match out {
                Some(path) => {
                    write_file(&path, &text)?;
                    Ok(String::new())
                }
                None => Ok(text),
            }
        }
        Command::Threshold { log2_q, criterion, n_max, runs, seed, rounding: r } => {
            let grid = GridSpec::from_log2(log2_q, rounding(r, seed))?;
            let criterion = match criterion {
                CriterionArg::FirstStep => Criterion::FirstStep,
                CriterionArg::FullRun => Criterion::FullRun,
            };
            to_json(&grover_threshold(grid, criterion, n_max, runs, seed)?)
        }
        Command::Complexity { state_file, absolute, budget, seed, tol } => {
            let psi = parse_state_file(&read_file(&state_file)?)?;
            let tol = tol.unwrap_or_else(|| default_tolerance(None));
            let report = complexity_c(&psi, tol)?;
            let kernels = report
                .carriers
                .iter()
                .zip(&report.kernel_states)
                .map(|(c, k)| KernelOutput {
                    qubits: c.qubits(),
                    amplitudes: k.amplitudes().iter().map(|a| [a.re, a.im]).collect(),
                })
                .collect();
            let (abs_bound, abs_exact) = if absolute {
                let bound = abs_complexity_bound(&psi, budget, seed, tol)?;
                let exact = if psi.num_qubits() <= ABS_EXACT_MAX_QUBITS {
                    let (complexity, witness) = abs_complexity_exact(&psi, tol)?;
                    Some(AbsExactOutput { complexity, witness })
                } else {
                    None
                };
                (Some(bound), exact)
            } else {
                (None, None)
            };
            to_json(&ComplexityOutput {
                n: psi.num_qubits(),
                tolerance: tol,
                complexity: report.complexity,
                kernels,
                abs_bound,
                abs_exact,
            })
        }
        Command::Estimate { preset: p, energy_erg, time_s, hbar } => {
            let hbar = match hbar {
                HbarArg::Paper => HbarMode::Paper,
                HbarArg::Codata => HbarMode::Codata,
            };
            let process = match (p, energy_erg, time_s) {
                (Some(p), _, _) => {
                    let name = match p {
                        PresetArg::Rb85 => "rb85",
                        PresetArg::He6 => "he6",
                        PresetArg::He5Stage => "he5-stage",
                    };
                    preset(name).expect("every preset argument names a catalog entry").with_hbar(hbar)
                }
                (None, Some(e), Some(t)) => ProcessSpec::new("custom", e, t, hbar),
                _ => return Err(HarnessError::ConfigInvalid("give --preset or both --energy-erg and --time-s".into())),
            };
            process.validate().map_err(|e| HarnessError::ConfigInvalid(e.to_string()))?;
            let estimate = estimate_process(&process)?;
            to_json(&EstimateOutput { process, estimate })
        }
        Command::Sweep { config } => {
            let cfg = parse_config(&read_file(&config)?)?;
            let rows = run_sweep(&cfg)?;
            to_json(&SweepOutput { output: cfg.output, rows: rows.len() })
        }
        Command::Report { input, format } => {
            let format = match format {
                FormatArg::Json => ReportFormat::Json,
                FormatArg::Csv => ReportFormat::Csv,
                FormatArg::Plot => ReportFormat::Plot,
            };
            emit_report(&read_file(&input)?, format)
        }
    }
}
