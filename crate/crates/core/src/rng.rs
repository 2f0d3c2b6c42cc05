//! Reproducible random numbers for instance generation.
//!
//! Streams come from xoshiro256++ seeded through SplitMix64. Uniform `[0, 1)`
//! doubles take the top 53 bits of each output: `(x >> 11) * 2^-53`. Per-trial
//! seeds are derived from the master seed by chaining the SplitMix64
//! finalizer over the cell and trial indices, so an instance depends only on
//! its coordinates and never on scheduling.

use rand_core::{RngCore, SeedableRng};
use rand_xoshiro::Xoshiro256PlusPlus;

const GOLDEN_GAMMA: u64 = 0x9e37_79b9_7f4a_7c15;

/// SplitMix64 output function.
pub fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// `seed_t = f(master, size_index, h_index, trial_index)`.
pub fn derive_seed(master: u64, size_index: u64, h_index: u64, trial_index: u64) -> u64 {
    [size_index, h_index, trial_index]
        .iter()
        .fold(mix64(master), |acc, &k| {
            mix64(acc ^ k.wrapping_add(1).wrapping_mul(GOLDEN_GAMMA))
        })
}

pub struct Rng(Xoshiro256PlusPlus);

impl Rng {
    pub fn new(seed: u64) -> Self {
        Self(Xoshiro256PlusPlus::seed_from_u64(seed))
    }

    /// Uniform in `[0, 1)`.
    pub fn next_f64(&mut self) -> f64 {
        (self.0.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform in `[lo, hi)`.
    pub fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.next_f64()
    }
}
