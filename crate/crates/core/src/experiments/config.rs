use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::MAX_ENUM_N;
use crate::graph_model::Distribution;
use crate::levels::MAX_DEPTH;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    GreedyDepth,
    GreedyDiamEven,
    GreedyDiamOdd,
    Mst,
    SliceSplice,
    ExactSmall,
    WbpTail,
    LowerboundDp,
}

impl Mode {
    pub const ALL: [Mode; 8] = [
        Mode::GreedyDepth,
        Mode::GreedyDiamEven,
        Mode::GreedyDiamOdd,
        Mode::Mst,
        Mode::SliceSplice,
        Mode::ExactSmall,
        Mode::WbpTail,
        Mode::LowerboundDp,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Mode::GreedyDepth => "greedy-depth",
            Mode::GreedyDiamEven => "greedy-diam-even",
            Mode::GreedyDiamOdd => "greedy-diam-odd",
            Mode::Mst => "mst",
            Mode::SliceSplice => "slice-splice",
            Mode::ExactSmall => "exact-small",
            Mode::WbpTail => "wbp-tail",
            Mode::LowerboundDp => "lowerbound-dp",
        }
    }

    /// Diameter bound implied by depth `k`, where the mode has one.
    pub fn diameter_bound(&self, k: usize) -> Option<usize> {
        match self {
            Mode::GreedyDepth | Mode::GreedyDiamEven => Some(2 * k),
            Mode::GreedyDiamOdd => Some(2 * k + 1),
            _ => None,
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Mode::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| Error::Parse(format!("unknown mode `{s}`")))
    }
}

/// Everything that determines the records of a run.
///
/// Field use by mode: greedy modes read `n, m, k, dist`; `mst` reads `n,
/// dist`; `slice-splice` reads `n, m, k, slice_delta, epsilon`;
/// `exact-small` reads `n, m, k`; `wbp-tail` draws `W_{m,n}` and reads
/// `delta`; `lowerbound-dp` reads `n, m, k, delta, grid`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub mode: Mode,
    pub n: usize,
    pub m: usize,
    pub k: usize,
    /// Piece diameter for slicing.
    pub slice_delta: usize,
    /// Fixed split parameter; `None` picks it from the base tree.
    pub epsilon: Option<f64>,
    /// Concentration slack.
    pub delta: f64,
    pub dist: Distribution,
    pub trials: usize,
    pub base_seed: u64,
    /// Grid points per decade for `lowerbound-dp`.
    pub grid: usize,
    /// Record wall-clock time per trial. Off by default so that repeated
    /// runs give identical bytes.
    pub timing: bool,
}

impl ExperimentConfig {
    pub fn new(mode: Mode, n: usize, k: usize) -> Self {
        ExperimentConfig {
            mode,
            n,
            m: n,
            k,
            slice_delta: 4,
            epsilon: None,
            delta: 0.1,
            dist: Distribution::EXP1,
            trials: 1,
            base_seed: 0,
            grid: 40,
            timing: false,
        }
    }

    /// Seed of trial `i`.
    pub fn seed(&self, i: usize) -> u64 {
        self.base_seed.wrapping_add(i as u64)
    }

    /// All violated constraints, or `Ok` if there are none.
    pub fn validate(&self) -> Result<()> {
        let mut bad = Vec::new();
        if self.trials == 0 {
            bad.push("trials must be at least 1".to_string());
        }
        if self.m > self.n {
            bad.push(format!("m = {} exceeds n = {}", self.m, self.n));
        }
        if self.m == 0 {
            bad.push("m must be at least 1".to_string());
        }
        if let Err(e) = self.dist.validate() {
            bad.push(e.to_string());
        }
        let needs_k = !matches!(self.mode, Mode::Mst | Mode::WbpTail);
        if needs_k && (self.k == 0 || self.k > MAX_DEPTH) {
            bad.push(format!("k must lie in 1..={MAX_DEPTH}, got {}", self.k));
        }
        match self.mode {
            Mode::GreedyDepth | Mode::GreedyDiamEven | Mode::GreedyDiamOdd | Mode::Mst => {
                if self.n < 2 {
                    bad.push(format!("n must be at least 2, got {}", self.n));
                }
            }
            Mode::SliceSplice => {
                if self.n < 2 {
                    bad.push(format!("n must be at least 2, got {}", self.n));
                }
                if self.slice_delta < 2 {
                    bad.push(format!("slice delta must be at least 2, got {}", self.slice_delta));
                }
                if let Some(e) = self.epsilon {
                    if !(e > 0.0 && e <= 0.5) {
                        bad.push(format!("epsilon must lie in (0, 1/2], got {e}"));
                    }
                }
            }
            Mode::ExactSmall => {
                if self.n < 2 || self.n > MAX_ENUM_N {
                    bad.push(format!("exact-small needs 2 <= n <= {MAX_ENUM_N}, got {}", self.n));
                }
            }
            Mode::WbpTail | Mode::LowerboundDp => {
                if !(self.delta > 0.0 && self.delta <= 1.0) {
                    bad.push(format!("delta must lie in (0, 1], got {}", self.delta));
                }
                if self.mode == Mode::LowerboundDp {
                    if self.k > 6 {
                        bad.push(format!("lowerbound-dp supports k <= 6, got {}", self.k));
                    }
                    if self.grid < 20 {
                        bad.push(format!("grid needs at least 20 points per decade, got {}", self.grid));
                    }
                }
            }
        }
        if bad.is_empty() {
            Ok(())
        } else {
            Err(Error::Config(bad))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mode_names_round_trip() {
        for m in Mode::ALL {
            assert_eq!(m.name().parse::<Mode>().unwrap(), m);
            assert_eq!(serde_json::to_string(&m).unwrap(), format!("\"{}\"", m.name()));
        }
        assert!("greedy".parse::<Mode>().is_err());
    }

    #[test]
    fn collects_every_violation() {
        let mut c = ExperimentConfig::new(Mode::SliceSplice, 10, 0);
        c.m = 11;
        c.trials = 0;
        c.slice_delta = 1;
        c.epsilon = Some(0.7);
        let Err(Error::Config(v)) = c.validate() else { panic!() };
        assert_eq!(v.len(), 5);
    }

    #[test]
    fn seeds_wrap() {
        let mut c = ExperimentConfig::new(Mode::Mst, 10, 1);
        c.base_seed = u64::MAX;
        assert_eq!(c.seed(0), u64::MAX);
        assert_eq!(c.seed(2), 1);
    }
}
