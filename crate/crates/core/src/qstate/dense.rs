use crate::error::{Error, Result};
use crate::{Complex64, MAX_QUBITS};

/// Tolerance on the L2 norm of a [`DenseState`].
pub const NORM_TOLERANCE: f64 = 1e-12;

/// Reference state vector at machine precision.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseState {
    n: u32,
    amps: Vec<Complex64>,
}

pub(crate) fn check_qubits(n: u32) -> Result<usize> {
    if n > MAX_QUBITS {
        return Err(Error::TooLarge { n, max: MAX_QUBITS });
    }
    Ok(1usize << n)
}

impl DenseState {
    /// Wraps `amps` as an `n`-qubit state. The vector must already have unit
    /// norm within [`NORM_TOLERANCE`].
    pub fn new(n: u32, amps: Vec<Complex64>) -> Result<Self> {
        let dim = check_qubits(n)?;
        if amps.len() != dim {
            return Err(Error::DimensionMismatch { expected: dim, actual: amps.len() });
        }
        let norm_sq = norm_sq(&amps);
        if norm_sq.is_nan() || (norm_sq.sqrt() - 1.0).abs() > NORM_TOLERANCE {
            return Err(Error::NotNormalized { norm_sq });
        }
        Ok(DenseState { n, amps })
    }

    /// Rescales `amps` to unit norm.
    pub fn normalized(n: u32, mut amps: Vec<Complex64>) -> Result<Self> {
        let dim = check_qubits(n)?;
        if amps.len() != dim {
            return Err(Error::DimensionMismatch { expected: dim, actual: amps.len() });
        }
        let norm_sq = norm_sq(&amps);
        if !(norm_sq > 0.0 && norm_sq.is_finite()) {
            return Err(Error::NotNormalized { norm_sq });
        }
        let scale = norm_sq.sqrt().recip();
        amps.iter_mut().for_each(|a| *a *= scale);
        Ok(DenseState { n, amps })
    }

    /// Real amplitudes, rescaled to unit norm.
    pub fn from_real(n: u32, amps: &[f64]) -> Result<Self> {
        Self::normalized(n, amps.iter().map(|&a| Complex64::new(a, 0.0)).collect())
    }

    pub(crate) fn from_parts_unchecked(n: u32, amps: Vec<Complex64>) -> Self {
        debug_assert_eq!(amps.len(), 1 << n);
        DenseState { n, amps }
    }

    /// Computational basis state `|index⟩`.
    pub fn basis(n: u32, index: u64) -> Result<Self> {
        let dim = check_qubits(n)?;
        if index >= dim as u64 {
            return Err(Error::IndexOutOfRange { index, n });
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); dim];
        amps[index as usize] = Complex64::new(1.0, 0.0);
        Ok(DenseState { n, amps })
    }

    /// The uniform superposition over all `2^n` basis states.
    pub fn uniform(n: u32) -> Result<Self> {
        let dim = check_qubits(n)?;
        let a = (dim as f64).sqrt().recip();
        Ok(DenseState { n, amps: vec![Complex64::new(a, 0.0); dim] })
    }

    /// `(|0…0⟩ + |1…1⟩)/√2` on `n ≥ 1` qubits.
    pub fn ghz(n: u32) -> Result<Self> {
        let dim = check_qubits(n)?;
        if n == 0 {
            return Err(Error::InvalidArgument("GHZ state needs at least one qubit".into()));
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); dim];
        amps[0] = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        amps[dim - 1] = amps[0];
        Ok(DenseState { n, amps })
    }

    /// `self ⊗ high`: `self` occupies the low qubits, `high` the qubits above.
    pub fn tensor(&self, high: &DenseState) -> Result<Self> {
        let n = self.n + high.n;
        check_qubits(n)?;
        let amps = high.amps.iter().flat_map(|h| self.amps.iter().map(move |l| l * h)).collect();
        Ok(DenseState { n, amps })
    }

    pub fn num_qubits(&self) -> u32 {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn amplitude(&self, index: u64) -> Result<Complex64> {
        self.amps.get(index as usize).copied().ok_or(Error::IndexOutOfRange { index, n: self.n })
    }

    pub fn norm_sq(&self) -> f64 {
        norm_sq(&self.amps)
    }

    /// Flips the sign of one amplitude.
    pub fn negate_amplitude(&mut self, index: u64) -> Result<()> {
        let n = self.n;
        let a = self.amps.get_mut(index as usize).ok_or(Error::IndexOutOfRange { index, n })?;
        *a = -*a;
        Ok(())
    }

    /// Multiplies every amplitude by `-1`.
    pub fn negate_all(&mut self) {
        self.amps.iter_mut().for_each(|a| *a = -*a);
    }

    /// `λ_j → 2m − λ_j` with `m` the mean amplitude.
    pub fn invert_about_mean(&mut self) {
        let twice_mean = self.amps.iter().sum::<Complex64>() * (2.0 / self.amps.len() as f64);
        self.amps.iter_mut().for_each(|a| *a = twice_mean - *a);
    }

    pub fn inverted_about_mean(&self) -> Self {
        let mut out = self.clone();
        out.invert_about_mean();
        out
    }

    /// Applies the basis relabeling `j → map(j)`; `map` must be a bijection
    /// on `[0, 2^n)`.
    pub(crate) fn relabeled(&self, map: impl Fn(usize) -> usize) -> Self {
        let mut amps = vec![Complex64::new(0.0, 0.0); self.amps.len()];
        for (j, a) in self.amps.iter().enumerate() {
            amps[map(j)] = *a;
        }
        DenseState { n: self.n, amps }
    }
}

fn norm_sq(amps: &[Complex64]) -> f64 {
    amps.iter().map(|a| a.norm_sqr()).sum()
}

/// `⟨a|b⟩`.
pub fn overlap(a: &DenseState, b: &DenseState) -> Result<Complex64> {
    if a.amps.len() != b.amps.len() {
        return Err(Error::DimensionMismatch { expected: a.amps.len(), actual: b.amps.len() });
    }
    Ok(a.amps.iter().zip(&b.amps).map(|(x, y)| x.conj() * y).sum())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn constructors_check_shape_and_norm() {
        assert!(matches!(
            DenseState::new(2, vec![c(1.0); 3]),
            Err(Error::DimensionMismatch { expected: 4, actual: 3 })
        ));
        assert!(matches!(DenseState::new(1, vec![c(1.0), c(1.0)]), Err(Error::NotNormalized { .. })));
        assert!(DenseState::normalized(1, vec![c(0.0), c(0.0)]).is_err());
        assert!(DenseState::uniform(25).is_err());
        assert!(DenseState::basis(2, 4).is_err());
        let s = DenseState::from_real(1, &[3.0, 4.0]).unwrap();
        assert!((s.amplitudes()[0].re - 0.6).abs() < 1e-15);
    }

    #[test]
    fn dense_inversion_example() {
        let mut s = DenseState::basis(2, 0).unwrap();
        s.invert_about_mean();
        let got: Vec<f64> = s.amplitudes().iter().map(|a| a.re).collect();
        assert_eq!(got, vec![-0.5, 0.5, 0.5, 0.5]);
    }

    #[test]
    fn overlap_examples() {
        let u = DenseState::uniform(2).unwrap();
        let t = DenseState::basis(2, 3).unwrap();
        assert!((overlap(&t, &u).unwrap() - c(0.5)).norm() < 1e-15);
        assert!((overlap(&u, &u).unwrap() - c(1.0)).norm() < 1e-15);
        let other = DenseState::uniform(3).unwrap();
        assert_eq!(overlap(&u, &other), Err(Error::DimensionMismatch { expected: 4, actual: 8 }));
    }

    #[test]
    fn tensor_puts_first_factor_on_low_qubits() {
        let one = DenseState::basis(1, 1).unwrap();
        let zero = DenseState::basis(1, 0).unwrap();
        // qubit 0 = 1, qubit 1 = 0 → index 1
        let s = one.tensor(&zero).unwrap();
        assert_eq!(s.amplitude(1).unwrap(), c(1.0));
    }

    #[test]
    fn negation_is_an_involution() {
        let mut s = DenseState::uniform(3).unwrap();
        let orig = s.clone();
        s.negate_amplitude(5).unwrap();
        assert!(s.amplitude(5).unwrap().re < 0.0);
        s.negate_amplitude(5).unwrap();
        assert_eq!(s, orig);
        assert!(s.negate_amplitude(8).is_err());
    }
}
