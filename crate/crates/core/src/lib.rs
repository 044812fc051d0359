//! Finite-precision quantum state-vector simulation.
//!
//! Amplitudes live on a square grid `(k + i·l)·ε` with `ε = 1/√Q` for an
//! integer constant `Q`. The crate provides:
//!
//! - [`qstate`]: exact ([`DenseState`]) and grid-quantized ([`QuantizedState`])
//!   state vectors, the quantizer and inversion about the mean.
//! - [`grover`]: Grover search in ideal and quantized modes, with trajectories
//!   and closed-form references.
//! - [`complexity`]: product tests across qubit cuts, state complexity and
//!   quantum kernels, basis permutations and absolute complexity search.
//! - [`uncertainty`]: the complexity–accuracy relation, coarse-graining of
//!   quantized states and the Grover threshold experiment that estimates `Q`.
//! - [`physest`]: order-of-magnitude estimates of the qubit count a physical
//!   process would need.
//!
//! Basis index `j` encodes qubit `q` in bit `q` of `j` (qubit 0 is the least
//! significant bit).

pub mod complexity;
pub mod error;
pub mod grover;
pub mod physest;
pub mod qstate;
pub mod seed;
pub mod uncertainty;

pub use error::{Error, Result};
pub use qstate::{DenseState, GridSpec, QuantizedAmplitude, QuantizedState, Rounding};

/// Largest register the simulator accepts (desk-scale memory bound).
pub const MAX_QUBITS: u32 = 24;

pub type Complex64 = num_complex::Complex<f64>;
