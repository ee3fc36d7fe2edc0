use std::fmt::Debug;

use serde::{Deserialize, Serialize};

use super::distribution::{Distribution, UNIFORM_LEVELS};
use crate::error::{domain, Result};

/// Read access to the weights of a complete graph.
///
/// Builders compare edges through `Key`, an order-preserving surrogate of the
/// weight that is cheaper to produce than the weight itself. `key(u, v) <
/// key(x, y)` must imply `weight(u, v) <= weight(x, y)`, and equal keys must
/// mean equal weights.
pub trait EdgeWeights: Sync {
    type Key: Copy + PartialOrd + Send + Sync + Debug;

    fn vertex_count(&self) -> usize;

    fn key(&self, u: usize, v: usize) -> Self::Key;

    fn key_weight(&self, key: Self::Key) -> f64;

    /// A key strictly above every edge key.
    fn unbounded(&self) -> Self::Key;

    /// `Some(key(u, v))` if it is strictly below `bound`. Implementations may
    /// override this with a cheaper rejection test.
    #[inline]
    fn key_if_below(&self, u: usize, v: usize, bound: &Self::Key) -> Option<Self::Key> {
        let k = self.key(u, v);
        (k < *bound).then_some(k)
    }

    #[inline]
    fn weight(&self, u: usize, v: usize) -> f64 {
        self.key_weight(self.key(u, v))
    }
}

impl<W: EdgeWeights + ?Sized> EdgeWeights for &W {
    type Key = W::Key;

    fn vertex_count(&self) -> usize {
        (**self).vertex_count()
    }
    #[inline]
    fn key(&self, u: usize, v: usize) -> Self::Key {
        (**self).key(u, v)
    }
    #[inline]
    fn key_weight(&self, key: Self::Key) -> f64 {
        (**self).key_weight(key)
    }
    fn unbounded(&self) -> Self::Key {
        (**self).unbounded()
    }
    #[inline]
    fn key_if_below(&self, u: usize, v: usize, bound: &Self::Key) -> Option<Self::Key> {
        (**self).key_if_below(u, v, bound)
    }
}

/// Tag separating independent weight streams drawn from one seed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct StreamId(pub u32);

impl StreamId {
    pub const BASE: StreamId = StreamId(0);
    pub const LIGHT: StreamId = StreamId(1);
    pub const HEAVY: StreamId = StreamId(2);
}

const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;

#[inline(always)]
pub(crate) fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Deterministic i.i.d. edge weights for `K_n`.
///
/// `weight(u, v)` is a pure function of `(seed, stream, dist, {u, v})`.
#[derive(Clone, Debug, PartialEq)]
pub struct EdgeOracle {
    n: usize,
    seed: u64,
    stream: StreamId,
    dist: Distribution,
    stream_key: u64,
    clamp: u64,
}

impl EdgeOracle {
    pub fn new(n: usize, seed: u64, stream: StreamId, dist: Distribution) -> Result<Self> {
        if n < 2 {
            return domain(format!("edge oracle needs at least 2 vertices, got {n}"));
        }
        if n > u32::MAX as usize {
            return domain(format!("vertex count {n} exceeds 32-bit ids"));
        }
        dist.validate()?;
        let stream_key = mix64(
            mix64(seed ^ GOLDEN)
                ^ (stream.0 as u64)
                    .wrapping_mul(GOLDEN)
                    .wrapping_add(0x632B_E59B_D9B4_E019),
        );
        Ok(EdgeOracle {
            n,
            seed,
            stream,
            dist,
            stream_key,
            clamp: dist.clamp_level().unwrap_or(UNIFORM_LEVELS),
        })
    }

    /// `Exp(1)` oracle on the base stream.
    pub fn exp1(n: usize, seed: u64) -> Result<Self> {
        Self::new(n, seed, StreamId::BASE, Distribution::EXP1)
    }

    /// Same seed and stream, different law: variants share every underlying
    /// uniform variate.
    pub fn with_dist(&self, dist: Distribution) -> Result<Self> {
        Self::new(self.n, self.seed, self.stream, dist)
    }

    pub fn n(&self) -> usize {
        self.n
    }
    pub fn seed(&self) -> u64 {
        self.seed
    }
    pub fn stream(&self) -> StreamId {
        self.stream
    }
    pub fn dist(&self) -> Distribution {
        self.dist
    }

    /// The 53-bit uniform level of `{u, v}`; symmetric in its arguments.
    #[inline(always)]
    pub fn bits(&self, u: usize, v: usize) -> u64 {
        let (lo, hi) = if u < v { (u, v) } else { (v, u) };
        let ctr = ((hi as u64) << 32) | lo as u64;
        mix64(ctr.wrapping_mul(GOLDEN) ^ self.stream_key) >> 11
    }

    /// The uniform variate in `[0, 1)` behind `{u, v}`.
    pub fn uniform(&self, u: usize, v: usize) -> f64 {
        self.bits(u, v) as f64 / UNIFORM_LEVELS as f64
    }

    fn check_pair(&self, u: usize, v: usize) -> Result<()> {
        if u == v {
            return domain(format!("no self-loop weight (vertex {u})"));
        }
        if u >= self.n || v >= self.n {
            return domain(format!("pair ({u}, {v}) out of range for n = {}", self.n));
        }
        Ok(())
    }

    pub fn edge_weight(&self, u: usize, v: usize) -> Result<f64> {
        self.check_pair(u, v)?;
        Ok(self.dist.weight_from_bits(self.bits(u, v)))
    }

    /// Weight without range checks.
    #[inline]
    pub fn weight_unchecked(&self, u: usize, v: usize) -> f64 {
        self.dist.weight_from_bits(self.bits(u, v))
    }

    /// Level threshold `t` with `weight < w` iff `bits < t`.
    #[inline]
    pub(crate) fn bits_threshold(&self, w: f64) -> u64 {
        self.dist.bits_threshold(w)
    }
}

impl EdgeWeights for EdgeOracle {
    type Key = u64;

    fn vertex_count(&self) -> usize {
        self.n
    }

    #[inline(always)]
    fn key(&self, u: usize, v: usize) -> u64 {
        self.bits(u, v).min(self.clamp)
    }

    #[inline]
    fn key_weight(&self, key: u64) -> f64 {
        self.dist.weight_from_bits(key)
    }

    fn unbounded(&self) -> u64 {
        u64::MAX
    }
}
