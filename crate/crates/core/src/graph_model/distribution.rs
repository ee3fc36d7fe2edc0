use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};

/// Number of distinct uniform levels produced by the edge hash.
pub(crate) const UNIFORM_LEVELS: u64 = 1 << 53;
const UNIFORM_SCALE: f64 = 1.0 / UNIFORM_LEVELS as f64;

/// Edge-weight law. Every variant is an inverse-CDF image of one uniform
/// variate, so variants built from the same variate are pathwise coupled.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Distribution {
    Exponential { rate: f64 },
    Uniform01,
    /// `min(W, eps)` with `W ~ Exp(1)`.
    TruncatedLow { eps: f64 },
    /// `W` if `W <= eps`, else `+inf`, with `W ~ Exp(1)`.
    TruncatedHigh { eps: f64 },
}

impl Default for Distribution {
    fn default() -> Self {
        Self::EXP1
    }
}

impl Distribution {
    pub const EXP1: Distribution = Distribution::Exponential { rate: 1.0 };

    pub fn exponential(rate: f64) -> Result<Self> {
        let d = Distribution::Exponential { rate };
        d.validate()?;
        Ok(d)
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            Distribution::Exponential { rate } if !(rate > 0.0 && rate.is_finite()) => {
                domain(format!("exponential rate must be positive and finite, got {rate}"))
            }
            Distribution::TruncatedLow { eps } | Distribution::TruncatedHigh { eps }
                if !(eps > 0.0 && eps.is_finite()) =>
            {
                domain(format!("truncation level must be positive and finite, got {eps}"))
            }
            _ => Ok(()),
        }
    }

    /// Maps a uniform variate in `[0, 1)` to a weight.
    pub fn inverse_cdf(&self, u: f64) -> f64 {
        match *self {
            Distribution::Exponential { rate } => -(-u).ln_1p() / rate,
            Distribution::Uniform01 => u,
            Distribution::TruncatedLow { eps } => (-(-u).ln_1p()).min(eps),
            Distribution::TruncatedHigh { eps } => {
                let w = -(-u).ln_1p();
                if w <= eps {
                    w
                } else {
                    f64::INFINITY
                }
            }
        }
    }

    pub fn cdf(&self, t: f64) -> f64 {
        if t < 0.0 {
            return 0.0;
        }
        match *self {
            Distribution::Exponential { rate } => -(-rate * t).exp_m1(),
            Distribution::Uniform01 => t.min(1.0),
            Distribution::TruncatedLow { eps } => {
                if t >= eps {
                    1.0
                } else {
                    -(-t).exp_m1()
                }
            }
            Distribution::TruncatedHigh { eps } => -(-t.min(eps)).exp_m1(),
        }
    }

    /// Weight of the 53-bit uniform level `bits`.
    #[inline]
    pub(crate) fn weight_from_bits(&self, bits: u64) -> f64 {
        self.inverse_cdf(bits as f64 * UNIFORM_SCALE)
    }

    /// Smallest level whose weight is `>= w`; so `weight(bits) < w` holds
    /// exactly when `bits < threshold`. Returns `UNIFORM_LEVELS` when every
    /// level is lighter than `w`.
    pub(crate) fn bits_threshold(&self, w: f64) -> u64 {
        if w.is_nan() || w <= self.weight_from_bits(0) {
            return 0;
        }
        let guess = (self.cdf(w) * UNIFORM_LEVELS as f64).ceil();
        let mut t = if guess.is_finite() {
            (guess as u64).min(UNIFORM_LEVELS)
        } else {
            UNIFORM_LEVELS
        };
        // The guess is off by at most a few levels; walk to the exact boundary.
        while t > 0 && self.weight_from_bits(t - 1) >= w {
            t -= 1;
        }
        while t < UNIFORM_LEVELS && self.weight_from_bits(t) < w {
            t += 1;
        }
        t
    }

    /// Level at which truncated laws saturate, if any.
    pub(crate) fn clamp_level(&self) -> Option<u64> {
        match *self {
            Distribution::TruncatedLow { eps } => Some(Distribution::EXP1.bits_threshold(eps)),
            Distribution::TruncatedHigh { eps } => {
                // first level with Exp(1) weight > eps
                let t = Distribution::EXP1.bits_threshold(eps);
                let mut t = t;
                while t < UNIFORM_LEVELS && Distribution::EXP1.weight_from_bits(t) <= eps {
                    t += 1;
                }
                Some(t)
            }
            _ => None,
        }
    }

    pub fn mean(&self) -> f64 {
        match *self {
            Distribution::Exponential { rate } => 1.0 / rate,
            Distribution::Uniform01 => 0.5,
            Distribution::TruncatedLow { eps } => -(-eps).exp_m1(),
            Distribution::TruncatedHigh { .. } => f64::INFINITY,
        }
    }
}

impl std::fmt::Display for Distribution {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Distribution::Exponential { rate } if *rate == 1.0 => write!(f, "exp"),
            Distribution::Exponential { rate } => write!(f, "exp({rate})"),
            Distribution::Uniform01 => write!(f, "uniform"),
            Distribution::TruncatedLow { eps } => write!(f, "trunc-low({eps})"),
            Distribution::TruncatedHigh { eps } => write!(f, "trunc-high({eps})"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_parameters() {
        assert!(Distribution::exponential(0.0).is_err());
        assert!(Distribution::exponential(-1.0).is_err());
        assert!(Distribution::TruncatedLow { eps: 0.0 }.validate().is_err());
        assert!(Distribution::TruncatedHigh { eps: f64::NAN }.validate().is_err());
        assert!(Distribution::Uniform01.validate().is_ok());
    }

    #[test]
    fn uniform_has_unit_density_at_zero() {
        let d = Distribution::Uniform01;
        for t in [0.0, 0.1, 0.5, 0.99] {
            assert_eq!(d.cdf(t), t);
        }
    }

    #[test]
    fn threshold_is_exact_boundary() {
        for d in [
            Distribution::EXP1,
            Distribution::Exponential { rate: 0.3 },
            Distribution::Uniform01,
            Distribution::TruncatedLow { eps: 0.5 },
        ] {
            for w in [1e-9, 1e-4, 0.01, 0.25, 0.49, 0.7, 3.0] {
                let t = d.bits_threshold(w);
                if t > 0 {
                    assert!(d.weight_from_bits(t - 1) < w, "{d:?} {w}");
                }
                if t < UNIFORM_LEVELS {
                    assert!(d.weight_from_bits(t) >= w, "{d:?} {w}");
                }
            }
        }
    }

    #[test]
    fn truncated_variants_sandwich_exponential() {
        let lo = Distribution::TruncatedLow { eps: 0.3 };
        let hi = Distribution::TruncatedHigh { eps: 0.3 };
        for i in 0..1000 {
            let u = i as f64 / 1000.0;
            let w = Distribution::EXP1.inverse_cdf(u);
            assert!(lo.inverse_cdf(u) <= w);
            assert!(w <= hi.inverse_cdf(u));
            assert!(lo.inverse_cdf(u) <= 0.3);
        }
    }
}
