//! Deterministic pseudo-random numbers.
//!
//! Everything stochastic in this crate (station placement, bootstrap
//! resampling, scenario synthesis) draws from [`Rng64`], a SplitMix64
//! generator. The sequence is fixed by the seed alone, independent of
//! platform or crate versions, which is what makes same-seed runs produce
//! byte-identical artifacts.

use crate::math;

/// SplitMix64 generator. Small state, full 2^64 period, passes BigCrush.
#[derive(Clone, Debug)]
pub struct Rng64 {
    state: u64,
}

impl Rng64 {
    pub fn new(seed: u64) -> Self {
        Rng64 { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    /// Uniform in `[0, 1)` with 53 bits of precision.
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform in `[lo, hi)`.
    pub fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        lo + self.next_f64() * (hi - lo)
    }

    /// Uniform index in `0..n`. `n` must be positive.
    pub fn index(&mut self, n: usize) -> usize {
        debug_assert!(n > 0);
        (self.next_u64() % n as u64) as usize
    }

    /// Poisson draw via Knuth's product method, chunked so that large rates
    /// do not underflow `exp`.
    pub fn poisson(&mut self, lambda: f64) -> u64 {
        if !(lambda > 0.0) {
            return 0;
        }
        let mut remaining = lambda;
        let mut total = 0u64;
        while remaining > 0.0 {
            let step = if remaining > 100.0 { 100.0 } else { remaining };
            remaining -= step;
            let limit = math::exp(-step);
            let mut p = 1.0;
            let mut k = 0u64;
            loop {
                p *= self.next_f64();
                if p <= limit {
                    break;
                }
                k += 1;
            }
            total += k;
        }
        total
    }

    /// Sample an index with probability proportional to `weights`.
    /// Falls back to the last index on accumulated rounding; returns 0 when
    /// all weights vanish.
    pub fn categorical(&mut self, weights: &[f64]) -> usize {
        debug_assert!(!weights.is_empty());
        let total: f64 = weights.iter().sum();
        if !(total > 0.0) {
            return 0;
        }
        let mut target = self.next_f64() * total;
        for (i, w) in weights.iter().enumerate() {
            target -= w;
            if target < 0.0 {
                return i;
            }
        }
        weights.len() - 1
    }
}

/// Derive an independent stream seed from a root seed, a component label,
/// and an index. Used so that every component of a run (stations, scenario,
/// per-slot bootstrap, ...) gets its own reproducible stream.
pub fn derive_seed(root: u64, label: &str, index: u64) -> u64 {
    // FNV-1a over the label, then a SplitMix64 scramble of the combination.
    let mut h = 0xcbf2_9ce4_8422_2325u64;
    for b in label.bytes() {
        h ^= b as u64;
        h = h.wrapping_mul(0x100_0000_01b3);
    }
    let mut mixed = root ^ h.wrapping_mul(0x9E37_79B9_7F4A_7C15) ^ index.rotate_left(17);
    mixed = (mixed ^ (mixed >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    mixed = (mixed ^ (mixed >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    mixed ^ (mixed >> 31)
}
