//! Deterministic seedable random numbers.
//!
//! Every randomized operation in the crate draws from [`Stream`], a
//! counter-based construction on top of SplitMix64: stream `(seed, index)`
//! is an independent generator, so sample `i` of a Monte-Carlo run depends
//! only on `(seed, i)` and never on how the run is sharded across workers.

use num_complex::Complex64;

const GOLDEN: u64 = 0x9e37_79b9_7f4a_7c15;

#[derive(Clone, Debug)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        SplitMix64 { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(GOLDEN);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
        z ^ (z >> 31)
    }

    /// Uniform in the half-open interval [0, 1).
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform in (0, 1]; safe as a log argument.
    pub fn next_f64_open(&mut self) -> f64 {
        ((self.next_u64() >> 11) + 1) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    pub fn next_range(&mut self, n: u64) -> u64 {
        // Desk-scale n; modulo bias is irrelevant at n << 2^64.
        self.next_u64() % n
    }

    /// Standard normal via Box-Muller.
    pub fn next_normal(&mut self) -> f64 {
        let u = self.next_f64_open();
        let v = self.next_f64();
        (-2.0 * u.ln()).sqrt() * (std::f64::consts::TAU * v).cos()
    }

    /// Standard complex normal (real and imaginary parts independent N(0, 1/2)-ish;
    /// the common scale cancels under projective normalization).
    pub fn next_complex_normal(&mut self) -> Complex64 {
        Complex64::new(self.next_normal(), self.next_normal())
    }

    pub fn next_i64_range(&mut self, lo: i64, hi: i64) -> i64 {
        lo + self.next_range((hi - lo + 1) as u64) as i64
    }
}

fn mix(a: u64, b: u64) -> u64 {
    let mut z = a ^ b.wrapping_mul(GOLDEN).rotate_left(23);
    z = (z ^ (z >> 31)).wrapping_mul(0x7fb5_d329_728e_a185);
    z ^ (z >> 29)
}

/// Counter-based stream factory: `Stream::new(seed).item(i)` is the
/// generator for the `i`-th independent draw.
#[derive(Clone, Copy, Debug)]
pub struct Stream {
    seed: u64,
}

impl Stream {
    pub fn new(seed: u64) -> Self {
        Stream { seed }
    }

    /// Derive a sub-stream, e.g. per target or per iterate level.
    pub fn substream(&self, tag: u64) -> Stream {
        Stream { seed: mix(self.seed, tag ^ 0xa076_1d64_78bd_642f) }
    }

    pub fn item(&self, index: u64) -> SplitMix64 {
        SplitMix64::new(mix(self.seed, index))
    }
}
