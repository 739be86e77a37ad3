//! Seeded random streams.
//!
//! Replications draw from ChaCha8 with the replication index as the stream
//! number (2^64 independent streams per seed). Limit-process labels need
//! random access by tree address instead, so they come from a keyed
//! SplitMix64-style hash of `(key, address, slot)`.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Name of the generator, written into output metadata.
pub const GENERATOR: &str = "ChaCha8 (seed, stream = replication); labels: splitmix64 hash of (seed, env, address)";

const GOLDEN: u64 = 0x9e37_79b9_7f4a_7c15;

/// `(seed, stream)` pair identifying one reproducible random stream.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct RngStream {
    pub seed: u64,
    pub stream: u64,
}

impl RngStream {
    pub fn new(seed: u64, stream: u64) -> Self {
        RngStream { seed, stream }
    }

    pub fn rng(&self) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(self.stream);
        rng
    }

    /// A 64-bit key for counter-based use, distinct for distinct pairs with
    /// overwhelming probability.
    pub fn key(&self) -> u64 {
        mix64(mix64(self.seed ^ GOLDEN).wrapping_add(mix64(self.stream.wrapping_add(GOLDEN))))
    }
}

#[inline]
pub(crate) fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Uniform value in the open interval (0, 1) determined by `(key, counter, slot)`.
#[inline]
pub(crate) fn hashed_uniform(key: u64, counter: u64, slot: u64) -> f64 {
    let base = mix64(key ^ mix64(counter));
    let bits = mix64(base.wrapping_add((slot + 1).wrapping_mul(GOLDEN)));
    ((bits >> 11) as f64 + 0.5) * (1.0 / (1u64 << 53) as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    #[test]
    fn streams_are_reproducible_and_distinct() {
        let a: Vec<u64> = RngStream::new(1, 5).rng().random_iter().take(8).collect();
        let b: Vec<u64> = RngStream::new(1, 5).rng().random_iter().take(8).collect();
        let c: Vec<u64> = RngStream::new(1, 6).rng().random_iter().take(8).collect();
        let d: Vec<u64> = RngStream::new(2, 5).rng().random_iter().take(8).collect();
        assert_eq!(a, b);
        assert_ne!(a, c);
        assert_ne!(a, d);
    }

    #[test]
    fn hashed_uniforms_in_open_interval() {
        let mut sum = 0.0;
        let n = 200_000;
        for i in 0..n {
            let u = hashed_uniform(42, i, i % 3);
            assert!(u > 0.0 && u < 1.0);
            sum += u;
        }
        let mean = sum / n as f64;
        assert!((mean - 0.5).abs() < 3.0 * (1.0 / 12f64).sqrt() / (n as f64).sqrt());
    }

    #[test]
    fn hashed_slots_uncorrelated() {
        let n = 100_000;
        let (mut sxy, mut sx, mut sy) = (0.0, 0.0, 0.0);
        for i in 0..n {
            let x = hashed_uniform(9, i, 0);
            let y = hashed_uniform(9, i, 1);
            sxy += x * y;
            sx += x;
            sy += y;
        }
        let nf = n as f64;
        let cov = sxy / nf - (sx / nf) * (sy / nf);
        // corr = 12 cov; SE of the sample correlation is ~1/sqrt(n)
        assert!((12.0 * cov).abs() < 4.0 / nf.sqrt());
    }
}
