use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qstate::DenseState;

/// A classical reversible gate acting on basis labels.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", tag = "gate")]
pub enum ReversibleGate {
    X { target: u32 },
    Cnot { control: u32, target: u32 },
    Toffoli { controls: [u32; 2], target: u32 },
}

impl ReversibleGate {
    pub fn apply(&self, j: usize) -> usize {
        let bit = |q: u32| (j >> q) & 1 == 1;
        match *self {
            ReversibleGate::X { target } => j ^ (1 << target),
            ReversibleGate::Cnot { control, target } => {
                if bit(control) {
                    j ^ (1 << target)
                } else {
                    j
                }
            }
            ReversibleGate::Toffoli { controls: [a, b], target } => {
                if bit(a) && bit(b) {
                    j ^ (1 << target)
                } else {
                    j
                }
            }
        }
    }

    fn qubits(&self) -> Vec<u32> {
        match *self {
            ReversibleGate::X { target } => vec![target],
            ReversibleGate::Cnot { control, target } => vec![control, target],
            ReversibleGate::Toffoli { controls: [a, b], target } => vec![a, b, target],
        }
    }

    fn validate(&self, n: u32) -> Result<()> {
        let qs = self.qubits();
        if qs.iter().any(|&q| q >= n) {
            return Err(Error::InvalidPermutation(format!("{self:?} touches a qubit outside 0..{n}")));
        }
        for (i, a) in qs.iter().enumerate() {
            if qs[i + 1..].contains(a) {
                return Err(Error::InvalidPermutation(format!("{self:?} repeats qubit {a}")));
            }
        }
        Ok(())
    }

    /// Every X, CNOT and Toffoli on `n` qubits (Toffoli controls unordered).
    pub fn all(n: u32) -> Vec<ReversibleGate> {
        let mut gates: Vec<_> = (0..n).map(|target| ReversibleGate::X { target }).collect();
        for control in 0..n {
            for target in (0..n).filter(|&t| t != control) {
                gates.push(ReversibleGate::Cnot { control, target });
            }
        }
        for a in 0..n {
            for b in a + 1..n {
                for target in (0..n).filter(|&t| t != a && t != b) {
                    gates.push(ReversibleGate::Toffoli { controls: [a, b], target });
                }
            }
        }
        gates
    }
}

/// A permutation `τ` of the `2^n` basis labels.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", tag = "kind")]
pub enum BasisPermutation {
    /// `map[j] = τ(j)`.
    Table { n: u32, map: Vec<u32> },
    /// Gates applied left to right.
    Circuit { n: u32, gates: Vec<ReversibleGate> },
}

impl BasisPermutation {
    pub fn identity(n: u32) -> Self {
        BasisPermutation::Circuit { n, gates: Vec::new() }
    }

    pub fn from_table(n: u32, map: Vec<u32>) -> Result<Self> {
        let p = BasisPermutation::Table { n, map };
        p.validate()?;
        Ok(p)
    }

    pub fn from_gates(n: u32, gates: Vec<ReversibleGate>) -> Result<Self> {
        let p = BasisPermutation::Circuit { n, gates };
        p.validate()?;
        Ok(p)
    }

    pub fn num_qubits(&self) -> u32 {
        match self {
            BasisPermutation::Table { n, .. } | BasisPermutation::Circuit { n, .. } => *n,
        }
    }

    /// Checks bijectivity on `[0, 2^n)`.
    pub fn validate(&self) -> Result<()> {
        match self {
            BasisPermutation::Table { n, map } => {
                if *n > 31 {
                    return Err(Error::InvalidPermutation(format!("{n} qubits is too many for a table")));
                }
                let dim = 1usize << n;
                if map.len() != dim {
                    return Err(Error::InvalidPermutation(format!("table has {} entries, expected {dim}", map.len())));
                }
                let mut seen = vec![false; dim];
                for &t in map {
                    let slot = seen
                        .get_mut(t as usize)
                        .ok_or_else(|| Error::InvalidPermutation(format!("image {t} out of range")))?;
                    if std::mem::replace(slot, true) {
                        return Err(Error::InvalidPermutation(format!("image {t} repeated")));
                    }
                }
                Ok(())
            }
            BasisPermutation::Circuit { n, gates } => gates.iter().try_for_each(|g| g.validate(*n)),
        }
    }

    /// `τ(j)`.
    pub fn apply_index(&self, j: usize) -> usize {
        match self {
            BasisPermutation::Table { map, .. } => map[j] as usize,
            BasisPermutation::Circuit { gates, .. } => gates.iter().fold(j, |acc, g| g.apply(acc)),
        }
    }

    pub fn to_table(&self) -> Vec<u32> {
        let dim = 1usize << self.num_qubits();
        (0..dim).map(|j| self.apply_index(j) as u32).collect()
    }

    pub fn is_identity(&self) -> bool {
        self.to_table().iter().enumerate().all(|(j, &t)| j as u32 == t)
    }
}

/// `τ|ψ⟩`: the amplitude of `|τ(j)⟩` in the output is the amplitude of `|j⟩`
/// in the input.
pub fn apply_basis_permutation(psi: &DenseState, tau: &BasisPermutation) -> Result<DenseState> {
    if psi.num_qubits() != tau.num_qubits() {
        return Err(Error::DimensionMismatch { expected: psi.dim(), actual: 1usize << tau.num_qubits().min(31) });
    }
    tau.validate()?;
    let table = tau.to_table();
    Ok(psi.relabeled(|j| table[j] as usize))
}
