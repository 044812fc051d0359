//! The complexity–accuracy relation `N·log2(1/ϵ) ≤ Q`, coarse-graining of
//! quantized states, and the Grover threshold experiment that bounds `Q`
//! from below.
//!
//! Two different small quantities appear here. `ε` is the amplitude quantum
//! of a [`GridSpec`]; `ϵ` (named `varepsilon` in code) is the accuracy with
//! which a traditional wave function is represented. They are never mixed.

use std::ops::Range;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grover::{run_from, success_first_step, FULL_RUN_PASS_PROBABILITY};
use crate::qstate::{GridSpec, QuantizedState, Rounding};
use crate::seed::derive_seed;
use crate::{grover, Complex64, MAX_QUBITS};

/// Slack values closer to zero than this are reported as exactly zero.
pub const SLACK_TOLERANCE: f64 = 1e-9;

/// Random targets drawn per register size unless the caller says otherwise.
pub const DEFAULT_RUNS_PER_N: u32 = 8;

/// Registers up to this size run their threshold trials in parallel.
const PARALLEL_TRIALS_MAX_QUBITS: u32 = 18;

/// `ε = 1/√Q`.
pub fn epsilon_from_q(q: u64) -> Result<f64> {
    if q < 2 {
        return Err(Error::BadQ(q));
    }
    Ok((q as f64).sqrt().recip())
}

/// `log2` of the finest accuracy the relation allows: `−Q/N`.
pub fn accuracy_bound_log2(n_kernel: u64, q: u64) -> Result<f64> {
    if n_kernel == 0 || q == 0 {
        return Err(Error::InvalidArgument(format!(
            "accuracy bound needs N ≥ 1 and Q ≥ 1, got N = {n_kernel}, Q = {q}"
        )));
    }
    Ok(-(q as f64) / n_kernel as f64)
}

/// The finest accuracy `ϵ = 2^{−Q/N}` a kernel of dimension `N` admits.
/// Underflows to zero once `Q/N` exceeds about 1074; use
/// [`accuracy_bound_log2`] there.
pub fn accuracy_bound(n_kernel: u64, q: u64) -> Result<f64> {
    Ok(accuracy_bound_log2(n_kernel, q)?.exp2())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RelationCheck {
    pub n_kernel: u64,
    pub varepsilon: f64,
    pub q: u64,
    pub holds: bool,
    /// `Q − N·log2(1/ϵ)`.
    pub slack: f64,
}

/// Evaluates `N·log2(1/ϵ) ≤ Q`.
pub fn check_relation(n_kernel: u64, varepsilon: f64, q: u64) -> Result<RelationCheck> {
    if !(varepsilon > 0.0 && varepsilon < 1.0) {
        return Err(Error::InvalidArgument(format!("accuracy must lie in (0, 1), got {varepsilon}")));
    }
    if n_kernel == 0 {
        return Err(Error::InvalidArgument("kernel dimension must be at least 1".into()));
    }
    let mut slack = q as f64 - n_kernel as f64 * (-varepsilon.log2());
    if slack.abs() <= SLACK_TOLERANCE {
        slack = 0.0;
    }
    Ok(RelationCheck { n_kernel, varepsilon, q, holds: slack >= 0.0, slack })
}

/// The relation for a state of absolute complexity `a`, i.e. `N = 2^a`.
pub fn check_relation_for_complexity(a: u32, varepsilon: f64, q: u64) -> Result<RelationCheck> {
    if a >= 64 {
        return Err(Error::InvalidArgument(format!("complexity {a} too large")));
    }
    check_relation(1u64 << a, varepsilon, q)
}

/// Per-segment sums of a quantized state's amplitudes, exact in grid units.
#[derive(Debug, Clone, PartialEq)]
pub struct CoarseGrained {
    pub epsilon: f64,
    /// `(Σ k_j, Σ l_j)` over each segment.
    pub sums: Vec<(i128, i128)>,
}

impl CoarseGrained {
    /// The traditional wave-function values `(Σk + iΣl)·ε`, unnormalized.
    pub fn values(&self) -> Vec<Complex64> {
        self.sums.iter().map(|&(k, l)| Complex64::new(k as f64, l as f64) * self.epsilon).collect()
    }
}

/// Contiguous segments of `size` indices covering `[0, dim)`.
pub fn uniform_bins(dim: usize, size: usize) -> Result<Vec<Range<usize>>> {
    if size == 0 || dim % size != 0 {
        return Err(Error::BadPartition(format!("segment size {size} does not divide {dim}")));
    }
    Ok((0..dim / size).map(|b| b * size..(b + 1) * size).collect())
}

/// Sums the amplitude quanta over each segment. `bins` must be nonempty,
/// contiguous, in order and cover every basis index exactly once.
pub fn coarse_grain(qs: &QuantizedState, bins: &[Range<usize>]) -> Result<CoarseGrained> {
    let mut expected_start = 0;
    for b in bins {
        if b.start != expected_start || b.end <= b.start {
            return Err(Error::BadPartition(format!(
                "segment {b:?} does not continue a partition at {expected_start}"
            )));
        }
        expected_start = b.end;
    }
    if expected_start != qs.dim() {
        return Err(Error::BadPartition(format!(
            "segments cover [0, {expected_start}) but the state has {} amplitudes",
            qs.dim()
        )));
    }
    let coords = qs.coords();
    let sums = bins
        .iter()
        .map(|b| coords[b.clone()].iter().fold((0i128, 0i128), |(k, l), a| (k + a.k as i128, l + a.l as i128)))
        .collect();
    Ok(CoarseGrained { epsilon: qs.grid().epsilon(), sums })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Criterion {
    /// One Grover step lifts the target strictly above every other amplitude.
    FirstStep,
    /// After `[π√N/4]` steps the success probability reaches the pass bar.
    FullRun,
}

impl Criterion {
    pub fn as_str(&self) -> &'static str {
        match self {
            Criterion::FirstStep => "first-step",
            Criterion::FullRun => "full-run",
        }
    }
}

impl std::str::FromStr for Criterion {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "first-step" => Ok(Criterion::FirstStep),
            "full-run" => Ok(Criterion::FullRun),
            other => Err(Error::InvalidArgument(format!("unknown criterion {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrialOutcome {
    pub target: u64,
    pub iterations: u64,
    /// Success probability after the executed steps (0 if the state vanished).
    pub success_probability: f64,
    pub vanished: bool,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ThresholdPoint {
    pub n: u32,
    pub trials: Vec<TrialOutcome>,
    pub mean_success_probability: f64,
    /// Every trial passed.
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ThresholdResult {
    pub q: u64,
    pub criterion: Criterion,
    pub points: Vec<ThresholdPoint>,
    /// Largest passing `n`.
    pub n_star: Option<u32>,
    /// `2^{n_star}`.
    pub q_estimate: Option<u64>,
    /// Register sizes below `n_star` that failed.
    pub non_monotone: Vec<u32>,
}

/// The grid used by one trial: stochastic rounding draws a fresh stream per
/// trial so repeated targets do not share rounding noise.
fn trial_grid(grid: GridSpec, trial_seed: u64) -> GridSpec {
    match grid.rounding() {
        Rounding::NearestTiesEven => grid,
        Rounding::Stochastic { seed } => grid.with_rounding(Rounding::Stochastic { seed: seed ^ trial_seed }),
    }
}

/// Target index for trial `run` at register size `n`.
pub fn trial_target(seed: u64, n: u32, run: u32) -> u64 {
    derive_seed(seed, &[n as u64, run as u64]) % (1u64 << n)
}

fn run_trial(grid: GridSpec, criterion: Criterion, n: u32, run: u32, seed: u64) -> TrialOutcome {
    let target = trial_target(seed, n, run);
    let iterations = match criterion {
        Criterion::FirstStep => 1,
        Criterion::FullRun => grover::default_iterations(n),
    };
    let grid = trial_grid(grid, derive_seed(seed, &[n as u64, run as u64, 1]));
    let start = match QuantizedState::uniform(n, grid) {
        Ok(s) => s,
        Err(_) => return TrialOutcome { target, iterations, success_probability: 0.0, vanished: true, passed: false },
    };
    let (traj, _) = run_from(start, target, iterations).expect("target drawn inside the register");
    let passed = match criterion {
        Criterion::FirstStep => success_first_step(&traj).unwrap_or(false),
        Criterion::FullRun => traj.final_success_probability() >= FULL_RUN_PASS_PROBABILITY,
    };
    TrialOutcome { target, iterations, success_probability: traj.final_success_probability(), vanished: false, passed }
}

/// For `n = 2..=n_max`, runs `runs_per_n` quantized Grover searches with
/// seeded random targets and reports the largest `n` at which every run
/// passes the criterion. A vanished initial state counts as a failure. The
/// first-step criterion executes one Grover step; the full-run criterion
/// executes `[π√N/4]`.
pub fn grover_threshold(
    grid: GridSpec,
    criterion: Criterion,
    n_max: u32,
    runs_per_n: u32,
    seed: u64,
) -> Result<ThresholdResult> {
    if !(2..=MAX_QUBITS).contains(&n_max) {
        return Err(Error::InvalidArgument(format!("n_max must lie in 2..={MAX_QUBITS}, got {n_max}")));
    }
    if runs_per_n == 0 {
        return Err(Error::InvalidArgument("runs_per_n must be at least 1".into()));
    }
    let points: Vec<ThresholdPoint> = (2..=n_max)
        .map(|n| {
            let trial = |run| run_trial(grid, criterion, n, run, seed);
            let trials: Vec<TrialOutcome> = if n <= PARALLEL_TRIALS_MAX_QUBITS {
                (0..runs_per_n).into_par_iter().map(trial).collect()
            } else {
                (0..runs_per_n).map(trial).collect()
            };
            let mean = trials.iter().map(|t| t.success_probability).sum::<f64>() / trials.len() as f64;
            let passed = trials.iter().all(|t| t.passed);
            ThresholdPoint { n, trials, mean_success_probability: mean, passed }
        })
        .collect();
    let n_star = points.iter().filter(|p| p.passed).map(|p| p.n).max();
    let non_monotone = match n_star {
        Some(s) => points.iter().filter(|p| p.n < s && !p.passed).map(|p| p.n).collect(),
        None => Vec::new(),
    };
    Ok(ThresholdResult { q: grid.q(), criterion, points, n_star, q_estimate: n_star.map(|s| 1u64 << s), non_monotone })
}

#[cfg(test)]
#[allow(clippy::single_range_in_vec_init)]
mod tests {
    use super::*;
    use crate::qstate::QuantizedAmplitude;

    fn grid16() -> GridSpec {
        GridSpec::new(16, Rounding::NearestTiesEven).unwrap()
    }

    #[test]
    fn epsilon_examples() {
        assert_eq!(epsilon_from_q(4).unwrap(), 0.5);
        assert_eq!(epsilon_from_q(1 << 20).unwrap(), 2f64.powi(-10));
        assert!((epsilon_from_q(2).unwrap() - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-12);
        assert!((epsilon_from_q(2).unwrap() - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-12);
        assert_eq!(epsilon_from_q(1), Err(Error::BadQ(1)));
    }

    #[test]
    fn accuracy_bound_examples() {
        assert_eq!(accuracy_bound(1 << 13, 1 << 13).unwrap(), 0.5);
        assert_eq!(accuracy_bound(1 << 10, 1 << 20).unwrap(), 2f64.powi(-1024));
        assert_eq!(accuracy_bound(1, 40).unwrap(), 2f64.powi(-40));
        assert_eq!(accuracy_bound_log2(1 << 10, 1 << 20).unwrap(), -1024.0);
        assert!(accuracy_bound(0, 4).is_err());
    }

    #[test]
    fn relation_examples() {
        let r = check_relation(1 << 13, 0.5, 1 << 13).unwrap();
        assert!(r.holds);
        assert_eq!(r.slack, 0.0);

        let r = check_relation(1 << 13, 0.25, 1 << 13).unwrap();
        assert!(!r.holds);
        assert_eq!(r.slack, -(8192.0));

        let r = check_relation(8, 2f64.powi(-8), 100).unwrap();
        assert!(r.holds);
        assert_eq!(r.slack, 36.0);

        assert!(check_relation(8, 1.0, 100).is_err());
        assert!(check_relation(8, 0.0, 100).is_err());
        assert!(check_relation_for_complexity(3, 2f64.powi(-8), 100).unwrap().holds);
    }

    #[test]
    fn coarse_grain_examples() {
        let s = QuantizedState::from_real_coords(2, grid16(), &[1, 1, 1, 1]).unwrap();
        let cg = coarse_grain(&s, &uniform_bins(4, 2).unwrap()).unwrap();
        assert_eq!(cg.values(), vec![Complex64::new(0.5, 0.0); 2]);

        let s = QuantizedState::from_real_coords(2, grid16(), &[1, -1, 1, -1]).unwrap();
        let cg = coarse_grain(&s, &uniform_bins(4, 2).unwrap()).unwrap();
        assert_eq!(cg.sums, vec![(0, 0), (0, 0)]);

        let s = QuantizedState::uniform(4, GridSpec::new(256, Rounding::NearestTiesEven).unwrap()).unwrap();
        let cg = coarse_grain(&s, &[0..16]).unwrap();
        let direct: Complex64 = (0..16).map(|j| s.amplitude(j).unwrap()).sum();
        assert_eq!(cg.values()[0], direct);
        assert_eq!(direct, Complex64::new(4.0, 0.0));
    }

    #[test]
    fn coarse_grain_rejects_bad_partitions() {
        let s = QuantizedState::from_coords(2, grid16(), vec![QuantizedAmplitude::new(2, 0); 4]).unwrap();
        assert!(coarse_grain(&s, &[0..2]).is_err());
        assert!(coarse_grain(&s, &[0..2, 3..4]).is_err());
        assert!(coarse_grain(&s, &[0..2, 2..2, 2..4]).is_err());
        assert!(coarse_grain(&s, &[1..4]).is_err());
        assert!(coarse_grain(&s, &[0..2, 2..5]).is_err());
        assert!(coarse_grain(&s, &[]).is_err());
        assert!(uniform_bins(8, 3).is_err());
    }

    #[test]
    fn criterion_parses() {
        assert_eq!("first-step".parse::<Criterion>().unwrap(), Criterion::FirstStep);
        assert_eq!("full-run".parse::<Criterion>().unwrap(), Criterion::FullRun);
        assert!("both".parse::<Criterion>().is_err());
    }

    #[test]
    fn threshold_rejects_bad_arguments() {
        assert!(grover_threshold(grid16(), Criterion::FirstStep, 1, 1, 0).is_err());
        assert!(grover_threshold(grid16(), Criterion::FirstStep, 25, 1, 0).is_err());
        assert!(grover_threshold(grid16(), Criterion::FirstStep, 4, 0, 0).is_err());
    }

    #[test]
    fn threshold_on_a_coarse_grid() {
        // Q = 16: uniform amplitudes vanish from n = 6 on (ties at n = 6).
        let r = grover_threshold(grid16(), Criterion::FirstStep, 8, 4, 3).unwrap();
        assert_eq!(r.n_star, Some(5));
        assert_eq!(r.q_estimate, Some(32));
        assert!(r.points.iter().filter(|p| p.n >= 6).all(|p| p.trials.iter().all(|t| t.vanished)));
    }
}
