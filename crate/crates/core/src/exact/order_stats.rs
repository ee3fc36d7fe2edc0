use num_traits::{FromPrimitive, Num};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::Exp1;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};

/// `W_{b,p}`: the sum of the `b` smallest of `p` i.i.d. `Exp(1)` variables.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrderStatSpec {
    b: usize,
    p: usize,
}

impl OrderStatSpec {
    pub fn new(b: usize, p: usize) -> Result<Self> {
        if b == 0 || b > p {
            return domain(format!("need 1 <= b <= p, got b = {b}, p = {p}"));
        }
        Ok(OrderStatSpec { b, p })
    }

    pub fn b(&self) -> usize {
        self.b
    }

    pub fn p(&self) -> usize {
        self.p
    }

    /// Coefficients `(b - i)/(p - i)` of the telescoped sum.
    pub fn coefficients(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.b).map(|i| (self.b - i) as f64 / (self.p - i) as f64)
    }
}

/// `E[W_{b,p}] = sum_{i<b} (b - i)/(p - i)`, in any exact or float type.
pub fn exact_expected_w<T: Num + FromPrimitive + Clone>(s: OrderStatSpec) -> T {
    let mut total = T::zero();
    for i in 0..s.b {
        let num = T::from_usize(s.b - i).expect("representable");
        let den = T::from_usize(s.p - i).expect("representable");
        total = total + num / den;
    }
    total
}

/// `b + (p - b) ln(1 - b/p)`, equal to `b` when `b = p`.
pub fn approx_expected_w(s: OrderStatSpec) -> f64 {
    if s.b == s.p {
        return s.b as f64;
    }
    let (b, p) = (s.b as f64, s.p as f64);
    b + (p - b) * (-b / p).ln_1p()
}

/// `Var[W_{b,p}] = sum_{i<b} ((b - i)/(p - i))^2`.
pub fn variance_w(s: OrderStatSpec) -> f64 {
    s.coefficients().map(|c| c * c).sum()
}

/// `W_{b,p}` from `b` given `Exp(1)` variates.
pub fn sample_w_from(s: OrderStatSpec, xs: &[f64]) -> f64 {
    assert!(xs.len() >= s.b, "need b = {} variates, got {}", s.b, xs.len());
    s.coefficients().zip(xs).map(|(c, x)| c * x).sum()
}

/// One exact draw of `W_{b,p}` using `b` exponential variates.
pub fn sample_w<R: Rng + ?Sized>(s: OrderStatSpec, rng: &mut R) -> f64 {
    s.coefficients().map(|c| c * rng.sample::<f64, _>(Exp1)).sum()
}

/// `exp(-delta^2 b / 8)`, the bounded-differences bound on
/// `P[W < (1 - delta) E[W]]`.
pub fn tail_bound(b: usize, delta: f64) -> Result<f64> {
    if !(delta > 0.0) {
        return domain(format!("delta must be positive, got {delta}"));
    }
    Ok((-delta * delta * b as f64 / 8.0).exp())
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TailEstimate {
    pub hits: u64,
    pub trials: u64,
    pub fraction: f64,
    /// Binomial standard error at the bound, `sqrt(q (1 - q) / trials)`.
    pub std_error: f64,
    pub bound: f64,
}

impl TailEstimate {
    /// `fraction <= bound + 3 * std_error`.
    pub fn within_bound(&self) -> bool {
        self.fraction <= self.bound + 3.0 * self.std_error
    }
}

pub const MIN_TAIL_TRIALS: u64 = 10_000;

/// Fraction of `trials` draws below `(1 - delta) E[W]`.
pub fn empirical_tail(s: OrderStatSpec, delta: f64, trials: u64, seed: u64) -> Result<TailEstimate> {
    if trials < MIN_TAIL_TRIALS {
        return domain(format!("need at least {MIN_TAIL_TRIALS} trials, got {trials}"));
    }
    let bound = tail_bound(s.b, delta)?;
    let cut = (1.0 - delta) * exact_expected_w::<f64>(s);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let hits = (0..trials).filter(|_| sample_w(s, &mut rng) < cut).count() as u64;
    Ok(TailEstimate {
        hits,
        trials,
        fraction: hits as f64 / trials as f64,
        std_error: (bound * (1.0 - bound) / trials as f64).sqrt(),
        bound,
    })
}

/// Sample mean and unbiased sample variance of `draws` independent samples.
pub fn sample_moments(s: OrderStatSpec, draws: u64, seed: u64) -> (f64, f64) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut mean, mut m2) = (0.0, 0.0);
    for i in 0..draws {
        let x = sample_w(s, &mut rng);
        let d = x - mean;
        mean += d / (i + 1) as f64;
        m2 += d * (x - mean);
    }
    (mean, if draws > 1 { m2 / (draws - 1) as f64 } else { 0.0 })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use num_rational::Rational64;

    fn spec(b: usize, p: usize) -> OrderStatSpec {
        OrderStatSpec::new(b, p).unwrap()
    }

    #[test]
    fn exact_values() {
        assert_eq!(exact_expected_w::<Rational64>(spec(1, 10)), Rational64::new(1, 10));
        assert_eq!(exact_expected_w::<Rational64>(spec(5, 5)), Rational64::from_integer(5));
        assert_eq!(exact_expected_w::<Rational64>(spec(2, 3)), Rational64::new(7, 6));
        assert_relative_eq!(exact_expected_w::<f64>(spec(2, 3)), 7.0 / 6.0);
        assert!(OrderStatSpec::new(0, 3).is_err());
        assert!(OrderStatSpec::new(4, 3).is_err());
    }

    #[test]
    fn approximation() {
        assert_eq!(approx_expected_w(spec(7, 7)), 7.0);
        assert_relative_eq!(approx_expected_w(spec(100, 1_000_000)), 0.005, max_relative = 0.01);
        let s = spec(50, 200);
        let a = approx_expected_w(s);
        let e = exact_expected_w::<f64>(s);
        assert!(a <= e && e <= 50.0 / 200.0 + a);
    }

    #[test]
    fn tail_values() {
        assert_relative_eq!(tail_bound(100, 0.5).unwrap(), 0.04393693362340742, max_relative = 1e-14);
        assert_relative_eq!(tail_bound(100, 1e-9).unwrap(), 1.0, max_relative = 1e-12);
        let one = tail_bound(40, 0.3).unwrap();
        assert_relative_eq!(tail_bound(80, 0.3).unwrap(), one * one, max_relative = 1e-12);
        assert!(tail_bound(10, 0.0).is_err());
    }

    #[test]
    fn sampling_basics() {
        let xs = [0.7, 1.3, 0.2];
        assert_eq!(sample_w_from(spec(1, 1), &xs), 0.7);
        let mut last = 0.0;
        for b in 1..=3 {
            let w = sample_w_from(spec(b, 3), &xs);
            assert!(w >= last);
            last = w;
        }
    }

    #[test]
    fn tail_is_zero_for_full_delta() {
        let t = empirical_tail(spec(5, 20), 1.0, 10_000, 1).unwrap();
        assert_eq!(t.hits, 0);
        assert!(empirical_tail(spec(5, 20), 0.5, 100, 1).is_err());
    }

    #[test]
    fn moments_small_run() {
        let s = spec(10, 100);
        let (mean, var) = sample_moments(s, 200_000, 3);
        let exact = exact_expected_w::<f64>(s);
        let sd = (variance_w(s) / 200_000.0).sqrt();
        assert!((mean - exact).abs() < 4.0 * sd);
        assert_relative_eq!(var, variance_w(s), max_relative = 0.03);
    }
}
