//! The JSON state file: `{"n": int, "amplitudes": [[re, im], ...]}`.

use qgrain::{Complex64, DenseState};
use serde::{Deserialize, Serialize};

use crate::error::{HarnessError, Result};

/// Largest deviation of the squared norm from 1 a state file may carry.
pub const STATE_NORM_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateFile {
    pub n: u32,
    pub amplitudes: Vec<[f64; 2]>,
}

impl StateFile {
    pub fn from_state(psi: &DenseState) -> Self {
        StateFile { n: psi.num_qubits(), amplitudes: psi.amplitudes().iter().map(|a| [a.re, a.im]).collect() }
    }

    /// Validates the shape and norm, then renormalizes away the residual.
    pub fn to_state(&self) -> Result<DenseState> {
        if self.n == 0 || self.n > qgrain::MAX_QUBITS {
            return Err(HarnessError::StateFile(format!("n must lie in 1..={}, got {}", qgrain::MAX_QUBITS, self.n)));
        }
        let dim = 1usize << self.n;
        if self.amplitudes.len() != dim {
            return Err(HarnessError::StateFile(format!(
                "expected {dim} amplitudes for n = {}, got {}",
                self.n,
                self.amplitudes.len()
            )));
        }
        if self.amplitudes.iter().flatten().any(|x| !x.is_finite()) {
            return Err(HarnessError::StateFile("amplitudes must be finite".into()));
        }
        let amps: Vec<Complex64> = self.amplitudes.iter().map(|&[re, im]| Complex64::new(re, im)).collect();
        let norm_sq: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
        if (norm_sq - 1.0).abs() > STATE_NORM_TOLERANCE {
            return Err(HarnessError::StateFile(format!("squared norm {norm_sq} is not 1 within 1e-9")));
        }
        Ok(DenseState::normalized(self.n, amps)?)
    }
}

pub fn parse_state_file(text: &str) -> Result<DenseState> {
    let file: StateFile = serde_json::from_str(text).map_err(|e| HarnessError::StateFile(e.to_string()))?;
    file.to_state()
}
