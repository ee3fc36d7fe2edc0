use std::cmp::Ordering;

use super::distribution::{Distribution, UNIFORM_LEVELS};
use super::oracle::{EdgeOracle, EdgeWeights, StreamId};
use crate::error::{domain, Result};

/// Two independent exponential streams whose pointwise minimum is `Exp(1)`:
/// `light ~ Exp(1 - eps)`, `heavy ~ Exp(eps)`.
#[derive(Clone, Debug)]
pub struct SplitOracle {
    pub light: EdgeOracle,
    pub heavy: EdgeOracle,
    pub eps: f64,
}

/// Splits the `Exp(1)` weights of seed `seed` into a light and a heavy stream.
pub fn split_weights(seed: u64, n: usize, eps: f64) -> Result<SplitOracle> {
    if !(eps > 0.0 && eps <= 0.5) {
        return domain(format!("split parameter eps must lie in (0, 1/2], got {eps}"));
    }
    let light = EdgeOracle::new(n, seed, StreamId::LIGHT, Distribution::exponential(1.0 - eps)?)?;
    let heavy = EdgeOracle::new(n, seed, StreamId::HEAVY, Distribution::exponential(eps)?)?;
    Ok(SplitOracle { light, heavy, eps })
}

impl SplitOracle {
    pub fn n(&self) -> usize {
        self.light.n()
    }

    pub fn combined_weight(&self, u: usize, v: usize) -> Result<f64> {
        let a = self.light.edge_weight(u, v)?;
        let b = self.heavy.edge_weight(u, v)?;
        Ok(a.min(b))
    }
}

/// Combined-weight key. Ordered by `weight`; the two level thresholds let
/// scans reject an edge from its raw hash levels without evaluating any
/// logarithm.
#[derive(Clone, Copy, Debug)]
pub struct SplitKey {
    pub weight: f64,
    light_below: u64,
    heavy_below: u64,
}

impl PartialEq for SplitKey {
    fn eq(&self, other: &Self) -> bool {
        self.weight == other.weight
    }
}

impl PartialOrd for SplitKey {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        self.weight.partial_cmp(&other.weight)
    }
}

impl SplitOracle {
    fn make_key(&self, weight: f64) -> SplitKey {
        SplitKey {
            weight,
            light_below: self.light.bits_threshold(weight),
            heavy_below: self.heavy.bits_threshold(weight),
        }
    }
}

impl EdgeWeights for SplitOracle {
    type Key = SplitKey;

    fn vertex_count(&self) -> usize {
        self.light.n()
    }

    fn key(&self, u: usize, v: usize) -> SplitKey {
        let w = self
            .light
            .weight_unchecked(u, v)
            .min(self.heavy.weight_unchecked(u, v));
        self.make_key(w)
    }

    fn key_weight(&self, key: SplitKey) -> f64 {
        key.weight
    }

    fn unbounded(&self) -> SplitKey {
        SplitKey {
            weight: f64::INFINITY,
            light_below: UNIFORM_LEVELS,
            heavy_below: UNIFORM_LEVELS,
        }
    }

    #[inline]
    fn key_if_below(&self, u: usize, v: usize, bound: &SplitKey) -> Option<SplitKey> {
        let lb = self.light.bits(u, v);
        let hb = self.heavy.bits(u, v);
        if lb >= bound.light_below && hb >= bound.heavy_below {
            return None;
        }
        let w = self
            .light
            .dist()
            .weight_from_bits(lb)
            .min(self.heavy.dist().weight_from_bits(hb));
        (w < bound.weight).then(|| self.make_key(w))
    }
}
