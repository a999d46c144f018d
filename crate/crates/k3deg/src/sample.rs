//! Seeded random class sampling and the node-count histogram experiment.
//!
//! Draws are counter-based: draw `i` uses a ChaCha8 stream derived from
//! `(seed, i)`, so any batch can be split, parallelized, and merged by
//! bucket addition without changing the result.

use crate::hodge::{l1_size, RationalClass, NODE_BOUND};
use crate::rat::{rat_i, Rat};
use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Identifier of the PRNG scheme, embedded in reports.
pub const RNG_ALGORITHM: &str = "chacha8-stream-per-draw";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SamplerConfig {
    /// Coefficients are drawn from `[-coeff_bound, coeff_bound]`.
    pub coeff_bound: u32,
    /// At most this many transcendental coefficients are nonzero.
    pub max_nonzero: usize,
    /// Number of classes to draw.
    pub count: usize,
    pub seed: u64,
    /// Working-basis size the classes live in.
    pub s: usize,
}

impl Default for SamplerConfig {
    fn default() -> Self {
        SamplerConfig {
            coeff_bound: 8,
            max_nonzero: 2,
            count: 1000,
            seed: 0,
            s: crate::hodge::DEFAULT_S,
        }
    }
}

/// Draws the `index`-th class of the stream defined by `cfg.seed`:
/// `a_0` uniform in `[-B, B]`, then a uniformly chosen number `t` of
/// nonzero slots (`0..=max_nonzero`), distinct indices by partial shuffle,
/// and nonzero coefficients with uniform magnitude `1..=B` and sign.
pub fn sample_class(cfg: &SamplerConfig, index: u64) -> RationalClass {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    rng.set_stream(index);
    let b = i64::from(cfg.coeff_bound);
    let a0 = rat_i(rng.gen_range(-b..=b));
    let mut a = vec![Rat::zero(); cfg.s];
    let t = rng.gen_range(0..=cfg.max_nonzero.min(cfg.s));
    // Partial Fisher-Yates over the index pool.
    let mut pool: Vec<usize> = (0..cfg.s).collect();
    for slot in 0..t {
        let pick = rng.gen_range(slot..pool.len());
        pool.swap(slot, pick);
        let magnitude = rng.gen_range(1..=b);
        let sign = if rng.gen_range(0..2) == 0 { 1 } else { -1 };
        a[pool[slot]] = rat_i(sign * magnitude);
    }
    RationalClass::new(a0, a)
}

/// Node-count histogram: buckets `k = 0..=10`, an overflow bucket for
/// `k > 10`, and the exact mean over the in-range buckets
/// (`sum k * count(k) / total`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KHistogram {
    pub buckets: [u64; NODE_BOUND + 1],
    pub overflow: u64,
    pub total: u64,
    pub mean_k: Rat,
}

impl KHistogram {
    fn from_buckets(buckets: [u64; NODE_BOUND + 1], overflow: u64) -> Self {
        let total: u64 = buckets.iter().sum::<u64>() + overflow;
        let weighted: u64 = buckets
            .iter()
            .enumerate()
            .map(|(k, &c)| k as u64 * c)
            .sum();
        let mean_k = if total == 0 {
            Rat::zero()
        } else {
            Rat::new(BigInt::from(weighted), BigInt::from(total))
        };
        KHistogram {
            buckets,
            overflow,
            total,
            mean_k,
        }
    }

    /// Merges two histograms by bucket addition; order-independent.
    pub fn merge(&self, other: &KHistogram) -> KHistogram {
        let mut buckets = [0u64; NODE_BOUND + 1];
        for (slot, (a, b)) in buckets
            .iter_mut()
            .zip(self.buckets.iter().zip(&other.buckets))
        {
            *slot = a + b;
        }
        Self::from_buckets(buckets, self.overflow + other.overflow)
    }

    /// Percentage of total in bucket `k`, with one decimal digit.
    pub fn percent_string(&self, count: u64) -> String {
        if self.total == 0 {
            return "0.0".to_string();
        }
        let tenths = (1000 * count + self.total / 2) / self.total;
        format!("{}.{}", tenths / 10, tenths % 10)
    }
}

/// Tallies `cfg.count` sampled classes into the histogram.
pub fn histogram(cfg: &SamplerConfig) -> KHistogram {
    histogram_range(cfg, 0, cfg.count as u64)
}

/// Tallies the draws `start..end` of the stream; `histogram` is the full
/// range, and disjoint ranges merge to the same result.
pub fn histogram_range(cfg: &SamplerConfig, start: u64, end: u64) -> KHistogram {
    let mut buckets = [0u64; NODE_BOUND + 1];
    let mut overflow = 0u64;
    for i in start..end {
        let class = sample_class(cfg, i);
        // Sampled coefficients are integers, so the l1 size is the node count.
        let k = l1_size(&class).to_integer().abs();
        if k > BigInt::from(NODE_BOUND) {
            overflow += 1;
        } else {
            let k = usize::try_from(k).expect("bounded k fits usize");
            buckets[k] += 1;
        }
    }
    KHistogram::from_buckets(buckets, overflow)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hodge::node_count;

    #[test]
    fn conservation() {
        let cfg = SamplerConfig {
            count: 500,
            seed: 42,
            ..SamplerConfig::default()
        };
        let h = histogram(&cfg);
        assert_eq!(
            h.buckets.iter().sum::<u64>() + h.overflow,
            cfg.count as u64
        );
        assert_eq!(h.total, cfg.count as u64);
    }

    #[test]
    fn zero_max_nonzero_gives_pure_h() {
        let cfg = SamplerConfig {
            max_nonzero: 0,
            count: 50,
            seed: 7,
            ..SamplerConfig::default()
        };
        for i in 0..50 {
            let c = sample_class(&cfg, i);
            assert!(c.a().iter().all(Rat::is_zero));
            assert_eq!(node_count(&c), Ok(0));
        }
        let h = histogram(&cfg);
        assert_eq!(h.buckets[0], 50);
        assert_eq!(h.overflow, 0);
    }

    #[test]
    fn bounded_sampler_never_overflows() {
        // max_nonzero * bound <= 10 keeps every draw in range.
        let cfg = SamplerConfig {
            coeff_bound: 5,
            max_nonzero: 2,
            count: 400,
            seed: 3,
            ..SamplerConfig::default()
        };
        let h = histogram(&cfg);
        assert_eq!(h.overflow, 0);
    }

    #[test]
    fn determinism_and_stream_independence() {
        let cfg = SamplerConfig {
            count: 300,
            seed: 11,
            ..SamplerConfig::default()
        };
        assert_eq!(histogram(&cfg), histogram(&cfg));
        for i in [0u64, 17, 299] {
            assert_eq!(sample_class(&cfg, i), sample_class(&cfg, i));
        }
    }

    #[test]
    fn merge_matches_full_tally() {
        let cfg = SamplerConfig {
            count: 200,
            seed: 5,
            ..SamplerConfig::default()
        };
        let whole = histogram(&cfg);
        let left = histogram_range(&cfg, 0, 80);
        let right = histogram_range(&cfg, 80, 200);
        assert_eq!(left.merge(&right), whole);
        assert_eq!(right.merge(&left), whole);
    }

    #[test]
    fn mean_recomputable_from_buckets() {
        let cfg = SamplerConfig {
            count: 250,
            seed: 9,
            max_nonzero: 3,
            ..SamplerConfig::default()
        };
        let h = histogram(&cfg);
        let weighted: u64 = h
            .buckets
            .iter()
            .enumerate()
            .map(|(k, &c)| k as u64 * c)
            .sum();
        assert_eq!(
            h.mean_k,
            Rat::new(BigInt::from(weighted), BigInt::from(h.total))
        );
    }

    #[test]
    fn percent_strings_have_one_decimal() {
        let cfg = SamplerConfig {
            count: 64,
            seed: 1,
            ..SamplerConfig::default()
        };
        let h = histogram(&cfg);
        for &c in &h.buckets {
            let p = h.percent_string(c);
            assert!(p.contains('.'));
            assert_eq!(p.split('.').nth(1).unwrap().len(), 1);
        }
    }
}
