//! Counter-based seed derivation.
//!
//! A derived seed is obtained by folding each coordinate into the master seed
//! with one SplitMix64 round: `s ← splitmix64(s ⊕ coord)`, starting from
//! `s = splitmix64(master)`. Any point of an experiment grid can therefore be
//! re-run on its own from the master seed and its coordinates.

const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

pub fn splitmix64(x: u64) -> u64 {
    let mut z = x.wrapping_add(GOLDEN_GAMMA);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

pub fn derive_seed(master: u64, coords: &[u64]) -> u64 {
    coords.iter().fold(splitmix64(master), |s, &c| splitmix64(s ^ c))
}
