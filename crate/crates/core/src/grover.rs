//! Grover search with a single marked element, in ideal and quantized modes.
//!
//! One Grover step is the oracle reflection (negate the target amplitude)
//! followed by inversion about the mean. Inversion about the mean is exactly
//! `−I_{~0}`, so no extra global sign is needed for the step to act as the
//! rotation by `2·arcsin(1/√N)` in the target/uniform plane.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qstate::{DenseState, GridSpec, QuantizedState};
use crate::{Complex64, MAX_QUBITS};

/// Largest register for [`oracle_ancilla_check`].
pub const ANCILLA_CHECK_MAX_QUBITS: u32 = 10;

/// Full-run pass bar on the final success probability.
pub const FULL_RUN_PASS_PROBABILITY: f64 = 0.5;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "mode")]
pub enum Mode {
    Ideal,
    Quantized { grid: GridSpec },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GroverConfig {
    pub n: u32,
    /// The unique marked basis index.
    pub target: u64,
    pub mode: Mode,
    /// Number of Grover steps; `None` means `[π√N/4]`.
    pub iterations: Option<u64>,
}

impl GroverConfig {
    pub fn ideal(n: u32, target: u64) -> Self {
        GroverConfig { n, target, mode: Mode::Ideal, iterations: None }
    }

    pub fn quantized(n: u32, target: u64, grid: GridSpec) -> Self {
        GroverConfig { n, target, mode: Mode::Quantized { grid }, iterations: None }
    }

    pub fn with_iterations(mut self, iterations: u64) -> Self {
        self.iterations = Some(iterations);
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 || self.n > MAX_QUBITS {
            return Err(Error::TooLarge { n: self.n, max: MAX_QUBITS });
        }
        if self.target >= 1u64 << self.n {
            return Err(Error::IndexOutOfRange { index: self.target, n: self.n });
        }
        Ok(())
    }

    pub fn resolved_iterations(&self) -> u64 {
        self.iterations.unwrap_or_else(|| default_iterations(self.n))
    }
}

/// `[π√N/4]`, integer part.
pub fn default_iterations(n: u32) -> u64 {
    (PI * 2f64.powf(n as f64 / 2.0) / 4.0).floor() as u64
}

/// Snapshot of the register after some number of Grover steps. Quantized
/// states are reported after renormalization so both modes compare directly.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StepRecord {
    pub target_amplitude: Complex64,
    pub max_other_magnitude: f64,
    /// Squared norm before renormalization (1 in ideal mode up to rounding).
    pub norm_sq: f64,
    pub success_probability: f64,
    /// `|target| > max |other|`, decided exactly for quantized states.
    pub target_leads: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroverTrajectory {
    pub n: u32,
    pub target: u64,
    pub iterations: u64,
    /// `iterations + 1` records; the first is the initial state.
    pub records: Vec<StepRecord>,
}

impl GroverTrajectory {
    pub fn final_record(&self) -> &StepRecord {
        self.records.last().expect("trajectory always holds the initial record")
    }

    pub fn final_success_probability(&self) -> f64 {
        self.final_record().success_probability
    }

    pub fn full_run_passes(&self) -> bool {
        self.final_success_probability() >= FULL_RUN_PASS_PROBABILITY
    }

    pub fn first_step_passes(&self) -> Result<bool> {
        success_first_step(self)
    }

    /// Largest deviation of the logged squared norm from 1.
    pub fn max_norm_drift(&self) -> f64 {
        self.records.iter().map(|r| (r.norm_sq - 1.0).abs()).fold(0.0, f64::max)
    }
}

/// A register Grover search can run on.
pub trait GroverRegister: Clone {
    fn num_qubits(&self) -> u32;
    fn negate_amplitude(&mut self, index: u64) -> Result<()>;
    fn invert_about_mean(&mut self);
    fn negate_all(&mut self);
    fn record(&self, target: u64) -> StepRecord;
}

impl GroverRegister for DenseState {
    fn num_qubits(&self) -> u32 {
        DenseState::num_qubits(self)
    }

    fn negate_amplitude(&mut self, index: u64) -> Result<()> {
        DenseState::negate_amplitude(self, index)
    }

    fn invert_about_mean(&mut self) {
        DenseState::invert_about_mean(self)
    }

    fn negate_all(&mut self) {
        DenseState::negate_all(self)
    }

    fn record(&self, target: u64) -> StepRecord {
        let amps = self.amplitudes();
        let t = amps[target as usize];
        let max_other =
            amps.iter().enumerate().filter(|&(j, _)| j as u64 != target).map(|(_, a)| a.norm()).fold(0.0, f64::max);
        StepRecord {
            target_amplitude: t,
            max_other_magnitude: max_other,
            norm_sq: self.norm_sq(),
            success_probability: t.norm_sqr(),
            target_leads: t.norm() > max_other,
        }
    }
}

impl GroverRegister for QuantizedState {
    fn num_qubits(&self) -> u32 {
        QuantizedState::num_qubits(self)
    }

    fn negate_amplitude(&mut self, index: u64) -> Result<()> {
        QuantizedState::negate_amplitude(self, index)
    }

    fn invert_about_mean(&mut self) {
        QuantizedState::invert_about_mean(self)
    }

    fn negate_all(&mut self) {
        QuantizedState::negate_all(self)
    }

    fn record(&self, target: u64) -> StepRecord {
        let coords = self.coords();
        let t = coords[target as usize];
        let t_units = t.norm_units();
        let max_other_units = coords
            .iter()
            .enumerate()
            .filter(|&(j, _)| j as u64 != target)
            .map(|(_, a)| a.norm_units())
            .max()
            .unwrap_or(0);
        let total = self.norm_units();
        let (target_amplitude, max_other_magnitude, success_probability) = if total == 0 {
            (Complex64::new(0.0, 0.0), 0.0, 0.0)
        } else {
            let scale = (total as f64).sqrt().recip();
            (
                Complex64::new(t.k as f64, t.l as f64) * scale,
                (max_other_units as f64).sqrt() * scale,
                t_units as f64 / total as f64,
            )
        };
        StepRecord {
            target_amplitude,
            max_other_magnitude,
            norm_sq: self.norm_sq(),
            success_probability,
            target_leads: t_units > max_other_units,
        }
    }
}

/// `I_{x_t}`: negate the amplitude of the marked state. Exact in both modes.
pub fn oracle_phase<R: GroverRegister>(state: &mut R, target: u64) -> Result<()> {
    state.negate_amplitude(target)
}

/// `G = −I_{~0}·I_{x_t}`.
pub fn grover_step<R: GroverRegister>(state: &mut R, target: u64) -> Result<()> {
    oracle_phase(state, target)?;
    state.invert_about_mean();
    Ok(())
}

/// Runs `iterations` Grover steps from `state`, recording every step.
pub fn run_from<R: GroverRegister>(mut state: R, target: u64, iterations: u64) -> Result<(GroverTrajectory, R)> {
    let n = state.num_qubits();
    if target >= 1u64 << n {
        return Err(Error::IndexOutOfRange { index: target, n });
    }
    let mut records = Vec::with_capacity(iterations as usize + 1);
    records.push(state.record(target));
    for _ in 0..iterations {
        grover_step(&mut state, target)?;
        records.push(state.record(target));
    }
    Ok((GroverTrajectory { n, target, iterations, records }, state))
}

/// Prepares the uniform superposition (quantized if requested) and runs the
/// configured number of Grover steps.
pub fn grover_run(cfg: &GroverConfig) -> Result<GroverTrajectory> {
    cfg.validate()?;
    let iterations = cfg.resolved_iterations();
    let traj = match cfg.mode {
        Mode::Ideal => run_from(DenseState::uniform(cfg.n)?, cfg.target, iterations)?.0,
        Mode::Quantized { grid } => run_from(QuantizedState::uniform(cfg.n, grid)?, cfg.target, iterations)?.0,
    };
    Ok(traj)
}

/// `sin²((2s+1)·arcsin(2^{-n/2}))`: exact success probability after `s`
/// ideal steps.
pub fn ideal_success_probability(n: u32, steps: u64) -> f64 {
    let theta = 2f64.powf(-(n as f64) / 2.0).asin();
    ((2 * steps + 1) as f64 * theta).sin().powi(2)
}

/// `sin²(2s/√N)`, the large-`N` approximation of the same rotation.
pub fn approx_success_probability(n: u32, steps: u64) -> f64 {
    (2.0 * steps as f64 * 2f64.powf(-(n as f64) / 2.0)).sin().powi(2)
}

/// Whether the first Grover step already lifts the target amplitude strictly
/// above every other amplitude. A trajectory with no steps has not shown the
/// excess and yields `false`.
pub fn success_first_step(traj: &GroverTrajectory) -> Result<bool> {
    match traj.records.as_slice() {
        [] => Err(Error::TooShort { len: 0 }),
        [_] => Ok(false),
        [_, first, ..] => Ok(first.target_leads),
    }
}

/// Verifies that the `(n+1)`-qubit oracle `|x, y⟩ → |x, y ⊕ f(x)⟩`, applied to
/// `|x⟩ ⊗ (|0⟩ − |1⟩)/√2`, acts on the first `n` qubits exactly as
/// [`oracle_phase`], for every basis input `|x⟩`.
pub fn oracle_ancilla_check(n: u32, target: u64) -> Result<bool> {
    if n > ANCILLA_CHECK_MAX_QUBITS {
        return Err(Error::TooLarge { n, max: ANCILLA_CHECK_MAX_QUBITS });
    }
    let dim = 1usize << n;
    if target >= dim as u64 {
        return Err(Error::IndexOutOfRange { index: target, n });
    }
    const TOL: f64 = 1e-12;
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let ancilla_bit = dim;
    let f = |x: usize| x as u64 == target;
    // The ancilla is the highest qubit.
    let oracle = |j: usize| if f(j & (dim - 1)) { j ^ ancilla_bit } else { j };

    for x in 0..dim {
        let mut input = vec![Complex64::new(0.0, 0.0); 2 * dim];
        input[x] = Complex64::new(h, 0.0);
        input[x | ancilla_bit] = Complex64::new(-h, 0.0);
        let joint = DenseState::new(n + 1, input)?;
        let out = joint.relabeled(oracle);
        let out = out.amplitudes();

        // Project the ancilla back onto (|0⟩ − |1⟩)/√2.
        let reduced: Vec<Complex64> = (0..dim).map(|i| (out[i] - out[i | ancilla_bit]) * h).collect();
        let residual: f64 = (0..dim)
            .map(|i| (out[i] - reduced[i] * h).norm_sqr() + (out[i | ancilla_bit] + reduced[i] * h).norm_sqr())
            .sum();
        if residual.sqrt() > TOL {
            return Ok(false);
        }

        let mut expected = DenseState::basis(n, x as u64)?;
        oracle_phase(&mut expected, target)?;
        let diff: f64 = reduced.iter().zip(expected.amplitudes()).map(|(a, b)| (a - b).norm_sqr()).sum();
        if diff.sqrt() > TOL {
            return Ok(false);
        }
    }
    Ok(true)
}
