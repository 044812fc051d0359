use rand::seq::{IndexedRandom, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::permutation::{BasisPermutation, ReversibleGate};
use super::{block_score, check_size, finest_blocks};
use crate::error::{Error, Result};
use crate::qstate::DenseState;
use crate::Complex64;

/// Largest register for the exhaustive minimum over all permutations.
pub const ABS_EXACT_MAX_QUBITS: u32 = 3;

/// `A(Ψ) = min_τ C(τΨ)` over every basis permutation, with a witness.
///
/// Only where the nonzero amplitudes land matters, so the search enumerates
/// injections of the support into the basis instead of all `(2^n)!`
/// permutations. It stops early once complexity 1 is reached.
pub fn abs_complexity_exact(psi: &DenseState, tol: f64) -> Result<(u32, BasisPermutation)> {
    let n = psi.num_qubits();
    if n > ABS_EXACT_MAX_QUBITS {
        return Err(Error::TooLarge { n, max: ABS_EXACT_MAX_QUBITS });
    }
    check_size(psi)?;
    let dim = psi.dim();
    let support: Vec<usize> = (0..dim).filter(|&j| psi.amplitudes()[j] != Complex64::default()).collect();

    struct Search<'a> {
        psi: &'a DenseState,
        support: &'a [usize],
        tol: f64,
        assigned: Vec<usize>,
        used: Vec<bool>,
        best: Option<(u32, Vec<usize>)>,
    }

    impl Search<'_> {
        fn visit(&mut self) {
            if matches!(self.best, Some((1, _))) {
                return;
            }
            if self.assigned.len() == self.support.len() {
                let mut amps = vec![Complex64::default(); self.used.len()];
                for (&src, &dst) in self.support.iter().zip(&self.assigned) {
                    amps[dst] = self.psi.amplitudes()[src];
                }
                let candidate = DenseState::from_parts_unchecked(self.psi.num_qubits(), amps);
                let c = block_score(&finest_blocks(&candidate, self.tol)).0;
                if self.best.as_ref().is_none_or(|(b, _)| c < *b) {
                    self.best = Some((c, self.assigned.clone()));
                }
                return;
            }
            for dst in 0..self.used.len() {
                if !self.used[dst] {
                    self.used[dst] = true;
                    self.assigned.push(dst);
                    self.visit();
                    self.assigned.pop();
                    self.used[dst] = false;
                }
            }
        }
    }

    let mut search = Search {
        psi,
        support: &support,
        tol,
        assigned: Vec::with_capacity(support.len()),
        used: vec![false; dim],
        best: None,
    };
    search.visit();
    let (c, assigned) = search.best.expect("a normalized state has nonempty support");

    // Complete the injection into a full permutation table.
    let mut map = vec![u32::MAX; dim];
    let mut taken = vec![false; dim];
    for (&src, &dst) in support.iter().zip(&assigned) {
        map[src] = dst as u32;
        taken[dst] = true;
    }
    let mut free = (0..dim).filter(|&d| !taken[d]);
    for slot in map.iter_mut().filter(|m| **m == u32::MAX) {
        *slot = free.next().expect("as many free images as unassigned sources") as u32;
    }
    Ok((c, BasisPermutation::from_table(n, map)?))
}

/// Result of the heuristic search. `complexity` is an upper bound on the
/// absolute complexity, never a claim of equality.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AbsComplexityBound {
    pub complexity: u32,
    pub witness: BasisPermutation,
    /// Complexity evaluations spent beyond the starting state.
    pub evaluations: u64,
    pub is_upper_bound: bool,
}

/// Searches basis relabelings generated by X, CNOT and Toffoli gates for a
/// representation of lower complexity. Greedy best-improvement descent with
/// seeded random restarts, spending at most `budget` complexity evaluations.
/// The starting state is always a candidate, so the result never exceeds
/// `C(Ψ)`.
pub fn abs_complexity_bound(psi: &DenseState, budget: u64, seed: u64, tol: f64) -> Result<AbsComplexityBound> {
    check_size(psi)?;
    let n = psi.num_qubits();
    let gates = ReversibleGate::all(n);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    let start_score = block_score(&finest_blocks(psi, tol));
    let mut best = (start_score, Vec::<ReversibleGate>::new());
    let mut evaluations = 0u64;
    let mut first_descent = true;

    while best.0 .0 > 1 && evaluations < budget {
        let mut circuit: Vec<ReversibleGate> = Vec::new();
        let mut state = psi.clone();
        let mut score = start_score;
        if !first_descent {
            let len = rng.random_range(1..=2 * n as usize);
            for _ in 0..len {
                let g = *gates.choose(&mut rng).expect("at least one gate");
                state = state.relabeled(|j| g.apply(j));
                circuit.push(g);
            }
            score = block_score(&finest_blocks(&state, tol));
            evaluations += 1;
            if score < best.0 {
                best = (score, circuit.clone());
            }
        }
        first_descent = false;

        let mut order = gates.clone();
        loop {
            order.shuffle(&mut rng);
            let mut step: Option<((u32, u32), ReversibleGate, DenseState)> = None;
            for &g in &order {
                if evaluations >= budget {
                    break;
                }
                let next = state.relabeled(|j| g.apply(j));
                if next == state {
                    continue;
                }
                let s = block_score(&finest_blocks(&next, tol));
                evaluations += 1;
                if step.as_ref().is_none_or(|(bs, _, _)| s < *bs) {
                    step = Some((s, g, next));
                }
            }
            match step {
                Some((s, g, next)) if s < score => {
                    score = s;
                    state = next;
                    circuit.push(g);
                    if score < best.0 {
                        best = (score, circuit.clone());
                    }
                    if score.0 == 1 {
                        break;
                    }
                }
                _ => break,
            }
        }
    }

    Ok(AbsComplexityBound {
        complexity: best.0 .0,
        witness: BasisPermutation::from_gates(n, best.1)?,
        evaluations,
        is_upper_bound: true,
    })
}
