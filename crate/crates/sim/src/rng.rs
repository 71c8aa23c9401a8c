//! Per-process random streams.
//!
//! Every process that draws random numbers owns a xoshiro256** generator
//! whose 256-bit state is filled by SplitMix64 from
//! `root_seed ^ fnv1a64(process_name)`. Streams therefore do not depend on
//! the order in which processes run.
//!
//! Variates:
//! - uniform: `(next_u64 >> 11) * 2^-53`, in `[0, 1)`;
//! - exponential: `-ln(1 - u) / rate` (inverse CDF).

use rand_core::{RngCore, SeedableRng};
use rand_xoshiro::Xoshiro256StarStar;

const FNV_OFFSET: u64 = 0xcbf2_9ce4_8422_2325;
const FNV_PRIME: u64 = 0x0000_0100_0000_01b3;

/// 64-bit FNV-1a over the UTF-8 bytes of `s`.
pub fn fnv1a64(s: &str) -> u64 {
    s.bytes()
        .fold(FNV_OFFSET, |h, b| (h ^ b as u64).wrapping_mul(FNV_PRIME))
}

#[derive(Clone, Debug)]
pub struct ProcessRng(Xoshiro256StarStar);

impl ProcessRng {
    pub fn new(seed: u64, process: &str) -> Self {
        ProcessRng(Xoshiro256StarStar::seed_from_u64(seed ^ fnv1a64(process)))
    }

    pub fn next_u64(&mut self) -> u64 {
        self.0.next_u64()
    }

    pub fn uniform(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    pub fn exponential(&mut self, rate: f64) -> f64 {
        -(1.0 - self.uniform()).ln() / rate
    }
}
