use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest admissible `Q`: keeps grid coordinates `|k|, |l| ≤ √Q` inside `i64`.
pub const MAX_Q: u64 = 1 << 62;

/// How off-grid values land on the grid.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "policy")]
pub enum Rounding {
    /// Round to the nearest grid point, ties to the even coordinate.
    #[default]
    NearestTiesEven,
    /// Round up with probability equal to the fractional part. The seed,
    /// together with the index of the rounding operation, fixes every draw.
    Stochastic { seed: u64 },
}

/// The amplitude grid: the constant `Q`, the quantum `ε = 1/√Q` and the
/// rounding policy.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "GridRepr", into = "GridRepr")]
pub struct GridSpec {
    q: u64,
    sqrt_q: f64,
    epsilon: f64,
    rounding: Rounding,
}

#[derive(Serialize, Deserialize)]
struct GridRepr {
    q: u64,
    #[serde(default)]
    rounding: Rounding,
}

impl TryFrom<GridRepr> for GridSpec {
    type Error = Error;

    fn try_from(r: GridRepr) -> Result<Self> {
        GridSpec::new(r.q, r.rounding)
    }
}

impl From<GridSpec> for GridRepr {
    fn from(g: GridSpec) -> Self {
        GridRepr { q: g.q, rounding: g.rounding }
    }
}

impl GridSpec {
    pub fn new(q: u64, rounding: Rounding) -> Result<Self> {
        if q < 2 {
            return Err(Error::BadQ(q));
        }
        if q > MAX_Q {
            return Err(Error::InvalidGrid(format!("Q = {q} exceeds 2^62")));
        }
        let sqrt_q = (q as f64).sqrt();
        Ok(GridSpec { q, sqrt_q, epsilon: 1.0 / sqrt_q, rounding })
    }

    /// Grid with `Q = 2^log2_q`.
    pub fn from_log2(log2_q: u32, rounding: Rounding) -> Result<Self> {
        if !(1..=62).contains(&log2_q) {
            return Err(Error::InvalidGrid(format!("log2 Q = {log2_q} outside 1..=62")));
        }
        GridSpec::new(1u64 << log2_q, rounding)
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    /// `√Q`, the number of grid steps per unit amplitude.
    pub fn sqrt_q(&self) -> f64 {
        self.sqrt_q
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn rounding(&self) -> Rounding {
        self.rounding
    }

    pub fn with_rounding(mut self, rounding: Rounding) -> Self {
        self.rounding = rounding;
        self
    }

    pub(crate) fn rounder(&self, op_index: u64) -> Rounder {
        Rounder::new(self.rounding, op_index)
    }
}

/// Applies a grid's rounding policy. Stochastic draws come from a ChaCha
/// stream selected by the index of the rounding operation within a state's
/// history, so every operation is a pure function of (seed, history).
pub(crate) struct Rounder {
    rng: Option<ChaCha8Rng>,
}

impl Rounder {
    fn new(rounding: Rounding, op_index: u64) -> Self {
        let rng = match rounding {
            Rounding::NearestTiesEven => None,
            Rounding::Stochastic { seed } => {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                rng.set_stream(op_index);
                Some(rng)
            }
        };
        Rounder { rng }
    }

    pub(crate) fn is_deterministic(&self) -> bool {
        self.rng.is_none()
    }

    /// Round a real number of grid units.
    pub(crate) fn round_real(&mut self, units: f64) -> i64 {
        match &mut self.rng {
            None => units.round_ties_even() as i64,
            Some(rng) => {
                let floor = units.floor();
                let frac = units - floor;
                let up = frac > 0.0 && rng.random::<f64>() < frac;
                floor as i64 + i64::from(up)
            }
        }
    }

    /// Round the rational `num / den` (den > 0) without passing through
    /// floating point.
    pub(crate) fn round_ratio(&mut self, num: i128, den: i128) -> i128 {
        debug_assert!(den > 0);
        let floor = num.div_euclid(den);
        let rem = num.rem_euclid(den);
        match &mut self.rng {
            None => round_ratio_ties_even(floor, rem, den),
            Some(rng) => {
                if rem == 0 {
                    floor
                } else {
                    let draw = rng.random_range(0..den as u128) as i128;
                    floor + i128::from(draw < rem)
                }
            }
        }
    }
}

pub(crate) fn round_ratio_ties_even(floor: i128, rem: i128, den: i128) -> i128 {
    match (2 * rem).cmp(&den) {
        std::cmp::Ordering::Less => floor,
        std::cmp::Ordering::Greater => floor + 1,
        std::cmp::Ordering::Equal => {
            if floor % 2 == 0 {
                floor
            } else {
                floor + 1
            }
        }
    }
}
