//! Entanglement complexity of pure states.
//!
//! A state is a product across a cut `M1 | M−M1` exactly when the amplitude
//! vector, reshaped into a `2^|M1| × 2^|M−M1|` matrix, has rank one. The
//! finest factorization of a pure state into entangled blocks is unique, so
//! the complexity `C(Ψ)` is the size of its largest block and the kernel
//! carriers are the blocks of that size.

mod permutation;
mod search;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qstate::{DenseState, GridSpec};
use crate::Complex64;

pub use permutation::{apply_basis_permutation, BasisPermutation, ReversibleGate};
pub use search::{abs_complexity_bound, abs_complexity_exact, AbsComplexityBound, ABS_EXACT_MAX_QUBITS};

/// Largest register for exhaustive subset enumeration.
pub const COMPLEXITY_MAX_QUBITS: u32 = 14;

/// Rank-one tolerance for states with no grid of origin.
pub const DEFAULT_TOLERANCE: f64 = 1e-10;

/// `max(1e-10, ε/2)` for states coming from `grid`, else `1e-10`.
pub fn default_tolerance(grid: Option<&GridSpec>) -> f64 {
    grid.map_or(DEFAULT_TOLERANCE, |g| DEFAULT_TOLERANCE.max(g.epsilon() / 2.0))
}

/// A set of qubits, as a bitmask (bit `q` set ⇔ qubit `q` in the set).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(into = "Vec<u32>", try_from = "Vec<u32>")]
pub struct QubitSubset(u32);

impl QubitSubset {
    pub fn from_mask(mask: u32) -> Self {
        QubitSubset(mask)
    }

    pub fn from_qubits(qubits: &[u32]) -> Result<Self> {
        let mut mask = 0u32;
        for &q in qubits {
            if q >= 32 {
                return Err(Error::BadPartition(format!("qubit {q} out of range")));
            }
            mask |= 1 << q;
        }
        Ok(QubitSubset(mask))
    }

    /// All `n` qubits.
    pub fn full(n: u32) -> Self {
        QubitSubset(if n >= 32 { u32::MAX } else { (1u32 << n) - 1 })
    }

    pub fn mask(&self) -> u32 {
        self.0
    }

    pub fn len(&self) -> u32 {
        self.0.count_ones()
    }

    pub fn is_empty(&self) -> bool {
        self.0 == 0
    }

    pub fn contains(&self, qubit: u32) -> bool {
        qubit < 32 && self.0 & (1 << qubit) != 0
    }

    pub fn qubits(&self) -> Vec<u32> {
        (0..32).filter(|&q| self.contains(q)).collect()
    }

    pub fn complement(&self, n: u32) -> Self {
        QubitSubset(!self.0 & QubitSubset::full(n).0)
    }

    /// Nonempty, proper and within the `n`-qubit register.
    pub fn is_proper_cut(&self, n: u32) -> bool {
        let full = QubitSubset::full(n).0;
        self.0 != 0 && self.0 & !full == 0 && self.0 != full
    }
}

impl From<QubitSubset> for Vec<u32> {
    fn from(s: QubitSubset) -> Self {
        s.qubits()
    }
}

impl TryFrom<Vec<u32>> for QubitSubset {
    type Error = Error;

    fn try_from(v: Vec<u32>) -> Result<Self> {
        QubitSubset::from_qubits(&v)
    }
}

/// `C(Ψ)` with its kernels.
#[derive(Debug, Clone, PartialEq)]
pub struct KernelReport {
    pub complexity: u32,
    /// Every maximal-size entangled block, ordered by bitmask value.
    pub carriers: Vec<QubitSubset>,
    /// The entangled factor living on each carrier (qubits in increasing
    /// order), up to a global phase.
    pub kernel_states: Vec<DenseState>,
}

/// Extracts the bits of `j` selected by `mask`, packed into the low bits.
fn gather_bits(j: usize, mask: u32) -> usize {
    let mut out = 0;
    let mut bit = 0;
    let mut m = mask;
    while m != 0 {
        let q = m.trailing_zeros();
        out |= ((j >> q) & 1) << bit;
        bit += 1;
        m &= m - 1;
    }
    out
}

/// The amplitude vector as a matrix: rows indexed by the qubits in `rows`,
/// columns by the rest.
fn cut_matrix(amps: &[Complex64], n: u32, rows: u32) -> DMatrix<Complex64> {
    let cols = QubitSubset::full(n).0 & !rows;
    let r = 1usize << rows.count_ones();
    let c = 1usize << cols.count_ones();
    let mut m = DMatrix::<Complex64>::zeros(r, c);
    for (j, a) in amps.iter().enumerate() {
        m[(gather_bits(j, rows), gather_bits(j, cols))] = *a;
    }
    m
}

/// Singular values across the cut, in decreasing order.
pub fn schmidt_coefficients(psi: &DenseState, m1: QubitSubset) -> Result<Vec<f64>> {
    let n = psi.num_qubits();
    if !m1.is_proper_cut(n) {
        return Err(Error::BadPartition(format!("{:?} is not a nonempty proper subset of {n} qubits", m1.qubits())));
    }
    let mut sv: Vec<f64> = cut_matrix(psi.amplitudes(), n, m1.0).singular_values().iter().copied().collect();
    sv.sort_by(|a, b| b.total_cmp(a));
    Ok(sv)
}

/// Whether `psi = Ψ1 ⊗ Ψ2` across `m1 | complement`: the second singular
/// value of the reshaped amplitudes is at most `tol`.
pub fn is_product(psi: &DenseState, m1: QubitSubset, tol: f64) -> Result<bool> {
    let sv = schmidt_coefficients(psi, m1)?;
    Ok(sv.get(1).copied().unwrap_or(0.0) <= tol)
}

fn check_size(psi: &DenseState) -> Result<()> {
    let n = psi.num_qubits();
    if n > COMPLEXITY_MAX_QUBITS {
        return Err(Error::TooLarge { n, max: COMPLEXITY_MAX_QUBITS });
    }
    if n == 0 {
        return Err(Error::InvalidArgument("complexity needs at least one qubit".into()));
    }
    Ok(())
}

/// Iterates over the subsets of `set` that contain `required`, by size.
fn subsets_containing(set: u32, required: u32) -> impl Iterator<Item = u32> {
    let rest = set & !required;
    let rest_bits: Vec<u32> = (0..32).filter(|q| rest & (1 << q) != 0).collect();
    let mut all: Vec<u32> = (0u32..1 << rest_bits.len())
        .map(|sel| {
            rest_bits.iter().enumerate().filter(|&(i, _)| sel & (1 << i) != 0).fold(required, |m, (_, &q)| m | (1 << q))
        })
        .collect();
    all.sort_by_key(|m| (m.count_ones(), *m));
    all.into_iter()
}

/// The finest partition of the qubits into blocks the state factorizes over.
pub(crate) fn finest_blocks(psi: &DenseState, tol: f64) -> Vec<u32> {
    let n = psi.num_qubits();
    let full = QubitSubset::full(n).0;
    let mut remaining = full;
    let mut blocks = Vec::new();
    while remaining != 0 {
        let seed = remaining & remaining.wrapping_neg();
        let block = subsets_containing(remaining, seed)
            .find(|&s| s == remaining || product_across(psi, s, tol))
            .expect("the remaining set itself always qualifies");
        blocks.push(block);
        remaining &= !block;
    }
    blocks.sort_unstable();
    blocks
}

fn product_across(psi: &DenseState, mask: u32, tol: f64) -> bool {
    let m = cut_matrix(psi.amplitudes(), psi.num_qubits(), mask);
    let sv = m.singular_values();
    second_largest(sv.as_slice()) <= tol
}

fn second_largest(values: &[f64]) -> f64 {
    let mut first = f64::NEG_INFINITY;
    let mut second = 0.0f64;
    for &v in values {
        if v > first {
            second = first.max(0.0);
            first = v;
        } else if v > second {
            second = v;
        }
    }
    second
}

/// Entanglement score used to rank candidates during search: the complexity
/// first, then the sum of squared block sizes.
pub(crate) fn block_score(blocks: &[u32]) -> (u32, u32) {
    let c = blocks.iter().map(|b| b.count_ones()).max().unwrap_or(0);
    let spread = blocks.iter().map(|b| b.count_ones().pow(2)).sum();
    (c, spread)
}

/// The complexity value only.
pub fn complexity_value(psi: &DenseState, tol: f64) -> Result<u32> {
    check_size(psi)?;
    Ok(block_score(&finest_blocks(psi, tol)).0)
}

/// `C(Ψ)`: the size of the largest entangled tensor factor, with every
/// carrier of that size and its factor state. Fully separable states have
/// complexity 1 with every single qubit as a carrier.
pub fn complexity_c(psi: &DenseState, tol: f64) -> Result<KernelReport> {
    check_size(psi)?;
    let n = psi.num_qubits();
    let blocks = finest_blocks(psi, tol);
    let complexity = block_score(&blocks).0;
    let carriers: Vec<QubitSubset> =
        blocks.into_iter().filter(|b| b.count_ones() == complexity).map(QubitSubset).collect();
    let kernel_states = carriers.iter().map(|c| kernel_factor(psi, *c, n)).collect::<Result<_>>()?;
    Ok(KernelReport { complexity, carriers, kernel_states })
}

/// The factor of `psi` on `carrier`: the leading left singular vector of the
/// reshaped amplitudes.
fn kernel_factor(psi: &DenseState, carrier: QubitSubset, n: u32) -> Result<DenseState> {
    if carrier == QubitSubset::full(n) {
        return Ok(psi.clone());
    }
    let m = cut_matrix(psi.amplitudes(), n, carrier.0);
    let svd = m.svd(true, false);
    let u = svd.u.expect("left singular vectors requested");
    let lead = svd.singular_values.iter().enumerate().max_by(|a, b| a.1.total_cmp(b.1)).map(|(i, _)| i).unwrap_or(0);
    let mut col: Vec<Complex64> = u.column(lead).iter().copied().collect();
    // Fix the global phase: make the largest component real and positive.
    if let Some(big) = col.iter().copied().max_by(|a, b| a.norm().total_cmp(&b.norm())) {
        if big.norm() > 0.0 {
            let phase = big.conj() / big.norm();
            col.iter_mut().for_each(|a| *a *= phase);
        }
    }
    DenseState::normalized(carrier.len(), col)
}
