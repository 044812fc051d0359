use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::dense::{check_qubits, DenseState};
use super::grid::{round_ratio_ties_even, GridSpec, Rounding};
use crate::error::{Error, Result};
use crate::Complex64;

/// Quantized squared norm below which a state counts as unrepresentable.
pub const VANISH_THRESHOLD: f64 = 0.5;

/// Registers at least this large are inverted about the mean in parallel
/// when rounding is deterministic.
const PARALLEL_MIN_LEN: usize = 1 << 14;

/// One amplitude `(k + i·l)·ε` in units of the owning grid's quantum.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct QuantizedAmplitude {
    pub k: i64,
    pub l: i64,
}

impl QuantizedAmplitude {
    pub const ZERO: QuantizedAmplitude = QuantizedAmplitude { k: 0, l: 0 };

    pub fn new(k: i64, l: i64) -> Self {
        QuantizedAmplitude { k, l }
    }

    /// `k² + l²`.
    pub fn norm_units(&self) -> u128 {
        let k = self.k as i128;
        let l = self.l as i128;
        (k * k + l * l) as u128
    }

    pub fn is_zero(&self) -> bool {
        self.k == 0 && self.l == 0
    }

    pub fn value(&self, grid: &GridSpec) -> Complex64 {
        Complex64::new(self.k as f64, self.l as f64) * grid.epsilon()
    }

    /// Whether the amplitude has magnitude at most one (`k² + l² ≤ Q`).
    pub fn within_unit(&self, grid: &GridSpec) -> bool {
        self.norm_units() <= grid.q() as u128
    }
}

impl std::ops::Neg for QuantizedAmplitude {
    type Output = Self;

    fn neg(self) -> Self {
        QuantizedAmplitude { k: -self.k, l: -self.l }
    }
}

/// A state whose amplitudes all sit on one grid.
///
/// Rounding is never followed by renormalization: the squared norm after each
/// rounding operation is appended to the drift log instead.
#[derive(Debug, Clone, PartialEq)]
pub struct QuantizedState {
    n: u32,
    grid: GridSpec,
    amps: Vec<QuantizedAmplitude>,
    norm_log: Vec<f64>,
}

impl QuantizedState {
    /// Maps every real and imaginary part of `psi` to the nearest multiple of
    /// `ε` under the grid's rounding policy.
    pub fn quantize(psi: &DenseState, grid: GridSpec) -> Result<Self> {
        Self::quantize_iter(psi.num_qubits(), grid, psi.amplitudes().iter().copied())
    }

    /// The quantized uniform superposition, built without materializing the
    /// dense vector. Under nearest rounding the coordinate `round(√(Q/N))`
    /// is computed exactly, so ties such as `√(72/32) = 1.5` resolve to even
    /// where a floating-point product could land on either side.
    pub fn uniform(n: u32, grid: GridSpec) -> Result<Self> {
        let dim = check_qubits(n)?;
        if grid.rounding() != Rounding::NearestTiesEven {
            let a = Complex64::new((dim as f64).sqrt().recip(), 0.0);
            return Self::quantize_iter(n, grid, std::iter::repeat_n(a, dim));
        }
        let k = nearest_sqrt_ratio(grid.q(), n);
        let state = Self::from_coords(n, grid, vec![QuantizedAmplitude { k, l: 0 }; dim])?;
        let norm_sq = state.norm_sq();
        if norm_sq < VANISH_THRESHOLD {
            return Err(Error::StateVanished { norm_sq, threshold: VANISH_THRESHOLD });
        }
        Ok(state)
    }

    fn quantize_iter(n: u32, grid: GridSpec, amps: impl Iterator<Item = Complex64>) -> Result<Self> {
        let mut rounder = grid.rounder(0);
        let scale = grid.sqrt_q();
        let amps: Vec<_> = amps
            .map(|a| QuantizedAmplitude { k: rounder.round_real(a.re * scale), l: rounder.round_real(a.im * scale) })
            .collect();
        let state = Self::from_coords(n, grid, amps)?;
        let norm_sq = state.norm_sq();
        if norm_sq < VANISH_THRESHOLD {
            return Err(Error::StateVanished { norm_sq, threshold: VANISH_THRESHOLD });
        }
        Ok(state)
    }

    /// Builds a state from raw grid coordinates. The initial squared norm is
    /// logged; no vanishing check is applied.
    pub fn from_coords(n: u32, grid: GridSpec, amps: Vec<QuantizedAmplitude>) -> Result<Self> {
        let dim = check_qubits(n)?;
        if amps.len() != dim {
            return Err(Error::DimensionMismatch { expected: dim, actual: amps.len() });
        }
        let mut state = QuantizedState { n, grid, amps, norm_log: Vec::new() };
        state.log_norm();
        Ok(state)
    }

    /// Real coordinates `k_j` with all `l_j = 0`.
    pub fn from_real_coords(n: u32, grid: GridSpec, ks: &[i64]) -> Result<Self> {
        Self::from_coords(n, grid, ks.iter().map(|&k| QuantizedAmplitude::new(k, 0)).collect())
    }

    pub fn num_qubits(&self) -> u32 {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    pub fn coords(&self) -> &[QuantizedAmplitude] {
        &self.amps
    }

    pub fn coord(&self, index: u64) -> Result<QuantizedAmplitude> {
        self.amps.get(index as usize).copied().ok_or(Error::IndexOutOfRange { index, n: self.n })
    }

    /// Raw (unnormalized) amplitude value `(k + i·l)·ε`.
    pub fn amplitude(&self, index: u64) -> Result<Complex64> {
        Ok(self.coord(index)?.value(&self.grid))
    }

    /// `Σ_j (k_j² + l_j²)`, exact.
    pub fn norm_units(&self) -> u128 {
        self.amps.iter().map(QuantizedAmplitude::norm_units).sum()
    }

    /// `Σ_j |λ_j|² = ε²·Σ_j (k_j² + l_j²)`.
    pub fn norm_sq(&self) -> f64 {
        self.norm_units() as f64 / self.grid.q() as f64
    }

    /// Squared norm after construction and after every rounding operation.
    pub fn norm_log(&self) -> &[f64] {
        &self.norm_log
    }

    pub fn nonzero_count(&self) -> usize {
        self.amps.iter().filter(|a| !a.is_zero()).count()
    }

    /// `(Σ_j k_j, Σ_j l_j)`, exact.
    pub fn coord_sums(&self) -> (i128, i128) {
        self.amps.iter().fold((0, 0), |(sk, sl), a| (sk + a.k as i128, sl + a.l as i128))
    }

    fn log_norm(&mut self) {
        let norm_sq = self.norm_sq();
        self.norm_log.push(norm_sq);
    }

    /// Integer negation of one amplitude; exact.
    pub fn negate_amplitude(&mut self, index: u64) -> Result<()> {
        let n = self.n;
        let a = self.amps.get_mut(index as usize).ok_or(Error::IndexOutOfRange { index, n })?;
        *a = -*a;
        Ok(())
    }

    pub fn negate_all(&mut self) {
        self.amps.iter_mut().for_each(|a| *a = -*a);
    }

    /// `λ_j → 2m − λ_j`. The mean is kept as the exact rational
    /// `Σλ / 2^n`; each result is rounded to the grid once.
    pub fn invert_about_mean(&mut self) {
        let (sum_k, sum_l) = self.coord_sums();
        let den = self.amps.len() as i128;
        let mut rounder = self.grid.rounder(self.norm_log.len() as u64);
        if rounder.is_deterministic() && self.amps.len() >= PARALLEL_MIN_LEN {
            let nearest = |num: i128| round_ratio_ties_even(num.div_euclid(den), num.rem_euclid(den), den) as i64;
            self.amps.par_iter_mut().for_each(|a| {
                a.k = nearest(2 * sum_k - den * a.k as i128);
                a.l = nearest(2 * sum_l - den * a.l as i128);
            });
        } else {
            for a in &mut self.amps {
                a.k = rounder.round_ratio(2 * sum_k - den * a.k as i128, den) as i64;
                a.l = rounder.round_ratio(2 * sum_l - den * a.l as i128, den) as i64;
            }
        }
        self.log_norm();
    }

    pub fn inverted_about_mean(&self) -> Self {
        let mut out = self.clone();
        out.invert_about_mean();
        out
    }

    /// The renormalized dense state together with the raw squared norm
    /// `Σ|λ_j|²` before renormalization.
    pub fn dequantize(&self) -> Result<(DenseState, f64)> {
        let units = self.norm_units();
        if units == 0 {
            return Err(Error::StateVanished { norm_sq: 0.0, threshold: VANISH_THRESHOLD });
        }
        let raw_norm_sq = units as f64 / self.grid.q() as f64;
        let scale = (units as f64).sqrt().recip();
        let amps = self.amps.iter().map(|a| Complex64::new(a.k as f64 * scale, a.l as f64 * scale)).collect();
        Ok((DenseState::from_parts_unchecked(self.n, amps), raw_norm_sq))
    }
}

/// `√(q / 2^n)` rounded to the nearest integer, ties to even.
fn nearest_sqrt_ratio(q: u64, n: u32) -> i64 {
    let ratio = q >> n;
    let mut m = (ratio as f64).sqrt() as u64;
    while m * m > ratio {
        m -= 1;
    }
    while (m + 1) * (m + 1) <= ratio {
        m += 1;
    }
    // Compare (m + 1/2)² · 2^n against q.
    let mid = (2 * m as u128 + 1).pow(2) << n;
    let four_q = 4 * q as u128;
    let up = mid < four_q || (mid == four_q && m % 2 == 1);
    (m + u64::from(up)) as i64
}

/// Free-function form of [`QuantizedState::quantize`].
pub fn quantize(psi: &DenseState, grid: GridSpec) -> Result<QuantizedState> {
    QuantizedState::quantize(psi, grid)
}

/// Free-function form of [`QuantizedState::dequantize`].
pub fn dequantize(qs: &QuantizedState) -> Result<(DenseState, f64)> {
    qs.dequantize()
}
