//! State vectors: exact ([`DenseState`]) and grid-quantized
//! ([`QuantizedState`]), plus the primitives every other module builds on.

mod dense;
mod grid;
mod quantized;

pub use dense::{overlap, DenseState, NORM_TOLERANCE};
pub use grid::{GridSpec, Rounding, MAX_Q};
pub use quantized::{dequantize, quantize, QuantizedAmplitude, QuantizedState, VANISH_THRESHOLD};
