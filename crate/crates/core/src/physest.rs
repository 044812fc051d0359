//! Order-of-magnitude bookkeeping: the time step `dt = ħ/E` of a faithful
//! step-by-step description of a process, the number of basis states
//! `N = t/dt` it needs, and the register size `⌊log2 N⌋` at which Grover
//! search would have to work for the description to hold.
//!
//! Units are CGS: energies in erg, times in seconds, lengths in centimetres.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// ħ rounded to one significant figure, erg·s.
pub const HBAR_ROUNDED: f64 = 1e-27;
/// CODATA 2018 ħ, erg·s.
pub const HBAR_CODATA: f64 = 1.054_571_817e-27;
/// Speed of light, cm/s.
pub const SPEED_OF_LIGHT: f64 = 2.997_924_58e10;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum HbarMode {
    /// `ħ = 1e-27 erg·s`, reproduces the published order-of-magnitude digits.
    #[default]
    Paper,
    Codata,
}

impl HbarMode {
    pub fn value(&self) -> f64 {
        match self {
            HbarMode::Paper => HBAR_ROUNDED,
            HbarMode::Codata => HBAR_CODATA,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProcessSpec {
    pub name: String,
    /// Characteristic energy `E`, erg.
    pub energy_erg: f64,
    /// Total duration `t`, s.
    pub duration_s: f64,
    #[serde(default)]
    pub hbar: HbarMode,
}

impl ProcessSpec {
    pub fn new(name: impl Into<String>, energy_erg: f64, duration_s: f64, hbar: HbarMode) -> Self {
        ProcessSpec { name: name.into(), energy_erg, duration_s, hbar }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.energy_erg.is_finite() && self.energy_erg > 0.0) {
            return Err(Error::BadSpec(format!("energy must be positive, got {}", self.energy_erg)));
        }
        if !(self.duration_s.is_finite() && self.duration_s > 0.0) {
            return Err(Error::BadSpec(format!("duration must be positive, got {}", self.duration_s)));
        }
        Ok(())
    }

    pub fn with_hbar(mut self, hbar: HbarMode) -> Self {
        self.hbar = hbar;
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EstimateReport {
    pub dt_s: f64,
    /// `N = t/dt`.
    pub n_states: f64,
    pub log2_n: f64,
    /// `⌊log2 N⌋`, zero when `N < 2`.
    pub qubits: u32,
}

pub fn estimate_process(p: &ProcessSpec) -> Result<EstimateReport> {
    p.validate()?;
    let dt_s = p.hbar.value() / p.energy_erg;
    let n_states = p.duration_s / dt_s;
    let log2_n = n_states.log2();
    let qubits = if log2_n >= 0.0 { log2_n.floor() as u32 } else { 0 };
    Ok(EstimateReport { dt_s, n_states, log2_n, qubits })
}

/// Rabi oscillation of Rb-85, nuclear decay of He-6 to He-4, and the final
/// neutron emission He-5 → He-4.
pub fn preset_catalog() -> Vec<ProcessSpec> {
    vec![
        ProcessSpec::new("rb85", 1e-17, 1e-6, HbarMode::Paper),
        ProcessSpec::new("he6", 1e-5, 1.6, HbarMode::Paper),
        ProcessSpec::new("he5-stage", 1e-5, 1e-11, HbarMode::Paper),
    ]
}

pub fn preset(name: &str) -> Option<ProcessSpec> {
    preset_catalog().into_iter().find(|p| p.name == name)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FrequencyConvention {
    /// `ω = 2πc/λ`.
    Angular,
    /// `ω = c/λ`, dropping the 2π.
    Plain,
}

/// Photon energy `E = ħω` for a wavelength in centimetres.
pub fn photon_energy(wavelength_cm: f64, hbar: HbarMode, convention: FrequencyConvention) -> Result<f64> {
    if !(wavelength_cm.is_finite() && wavelength_cm > 0.0) {
        return Err(Error::BadSpec(format!("wavelength must be positive, got {wavelength_cm}")));
    }
    let omega = match convention {
        FrequencyConvention::Angular => 2.0 * std::f64::consts::PI * SPEED_OF_LIGHT / wavelength_cm,
        FrequencyConvention::Plain => SPEED_OF_LIGHT / wavelength_cm,
    };
    Ok(hbar.value() * omega)
}
