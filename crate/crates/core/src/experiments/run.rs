use std::collections::BTreeMap;
use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::config::{ExperimentConfig, Mode};
use crate::error::{domain, Error, Result};
use crate::exact::{
    exact_expected_w, sample_w, tree_lower_bound, Census, DenseInstance, OrderStatSpec,
};
use crate::graph_model::{mix64, split_weights, EdgeOracle, StreamId};
use crate::levels::{
    f_cost, integerize, minimize_truncated_cost, optimal_level_sequence, predicted_weight_depth,
    predicted_weight_diam_odd, CostParams, IntegerLevelSequence,
};
use crate::trees::{greedy_tree, prim_mst, sliced_and_spliced, EpsChoice, RootSpec, RootedTree};

/// `zeta(3)`, the limiting MST weight.
pub const ZETA3: f64 = 1.202_056_903_159_594_3;

/// Threshold for the heavy-edge column.
pub const HEAVY_EPS: f64 = 0.1;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub trial: usize,
    pub seed: u64,
    pub mode: Mode,
    pub n: usize,
    pub m: usize,
    pub k: usize,
    pub weight: f64,
    pub predicted: Option<f64>,
    pub depth: usize,
    pub diameter: usize,
    pub heavy_edges: usize,
    pub elapsed_s: Option<f64>,
    /// Mode-specific values; JSON output only.
    #[serde(default)]
    pub extras: BTreeMap<String, f64>,
}

impl TrialRecord {
    pub fn ratio(&self) -> Option<f64> {
        self.predicted.map(|p| self.weight / p)
    }
}

/// Integer level sizes used by the greedy modes.
pub fn greedy_levels(mode: Mode, n: usize, m: usize, k: usize) -> Result<IntegerLevelSequence> {
    let p = CostParams::steiner(n as f64, m as f64)?;
    let l0 = if mode == Mode::GreedyDiamOdd { 2 } else { 1 };
    let seq = optimal_level_sequence(&p, k, l0, m.max(l0) as f64)?;
    integerize(&seq, n, m)
}

/// Leading-order prediction for a mode, where one exists.
pub fn prediction(cfg: &ExperimentConfig) -> Option<f64> {
    let (n, m) = (cfg.n as f64, cfg.m as f64);
    match cfg.mode {
        Mode::GreedyDepth | Mode::GreedyDiamEven => Some(predicted_weight_depth(n, m, cfg.k)),
        Mode::GreedyDiamOdd => Some(predicted_weight_diam_odd(n, m, cfg.k)),
        Mode::Mst => Some(ZETA3),
        Mode::SliceSplice => (cfg.m == cfg.n).then_some(ZETA3),
        Mode::WbpTail => OrderStatSpec::new(cfg.m, cfg.n).ok().map(exact_expected_w::<f64>),
        Mode::ExactSmall | Mode::LowerboundDp => None,
    }
}

fn tree_record(cfg: &ExperimentConfig, i: usize, tree: &RootedTree) -> TrialRecord {
    TrialRecord {
        trial: i,
        seed: cfg.seed(i),
        mode: cfg.mode,
        n: cfg.n,
        m: cfg.m,
        k: cfg.k,
        weight: tree.weight(),
        predicted: prediction(cfg),
        depth: tree.depth(),
        diameter: tree.diameter(),
        heavy_edges: tree.heavy_edge_count(HEAVY_EPS),
        elapsed_s: None,
        extras: BTreeMap::new(),
    }
}

/// Runs trial `i` of `cfg`.
pub fn run_trial(cfg: &ExperimentConfig, i: usize) -> Result<TrialRecord> {
    let seed = cfg.seed(i);
    let terminals: Vec<usize> = (0..cfg.m).collect();
    let mut rec = match cfg.mode {
        Mode::GreedyDepth | Mode::GreedyDiamEven | Mode::GreedyDiamOdd => {
            let o = EdgeOracle::new(cfg.n, seed, StreamId::BASE, cfg.dist)?;
            let levels = greedy_levels(cfg.mode, cfg.n, cfg.m, cfg.k)?;
            let root = match cfg.mode {
                Mode::GreedyDepth => RootSpec::Vertex(0),
                Mode::GreedyDiamEven => RootSpec::Vertex((mix64(seed) % cfg.m as u64) as usize),
                _ => RootSpec::LightestEdgeAt(0),
            };
            let t = greedy_tree(&o, &terminals, &levels, root)?;
            let mut rec = tree_record(cfg, i, &t);
            rec.extras.insert("clipped".into(), f64::from(u8::from(levels.clipped())));
            rec
        }
        Mode::Mst => {
            let o = EdgeOracle::new(cfg.n, seed, StreamId::BASE, cfg.dist)?;
            tree_record(cfg, i, &prim_mst(&o))
        }
        Mode::SliceSplice => {
            let eps = cfg.epsilon.map_or(EpsChoice::Auto, EpsChoice::Fixed);
            let out = sliced_and_spliced(seed, cfg.n, &terminals, cfg.k, cfg.slice_delta, eps)?;
            let mut rec = tree_record(cfg, i, &out.tree);
            let split = split_weights(seed, cfg.n, out.eps)?;
            let x = &mut rec.extras;
            x.insert("eps".into(), out.eps);
            x.insert("base_weight".into(), out.base_weight);
            x.insert("base_exact".into(), f64::from(u8::from(out.base_exact)));
            x.insert("sliced_off".into(), out.sliced_off);
            x.insert("splice_weight".into(), out.splice_weight);
            x.insert("pieces".into(), out.pieces as f64);
            x.insert("meta_depth".into(), out.meta_depth as f64);
            x.insert("combined_mst".into(), prim_mst(&split).weight());
            rec
        }
        Mode::ExactSmall => {
            let inst = DenseInstance::random_exp1(cfg.n, seed, terminals.clone())?;
            let census = Census::new(&inst)?;
            let exact = census.depth_optimum(cfg.k, 0)?;
            let mut rec = tree_record(cfg, i, &exact);
            let levels = greedy_levels(Mode::GreedyDepth, cfg.n, cfg.m, cfg.k)?;
            let greedy = greedy_tree(&inst, &terminals, &levels, RootSpec::Vertex(0))?;
            rec.extras.insert("greedy_weight".into(), greedy.weight());
            rec.extras.insert("lower_bound".into(), tree_lower_bound(&exact, &inst, false)?);
            rec.extras.insert("diameter_optimum".into(), census.diameter_optimum(2 * cfg.k)?.weight());
            rec
        }
        Mode::WbpTail => {
            let spec = OrderStatSpec::new(cfg.m, cfg.n)?;
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let w = sample_w(spec, &mut rng);
            let mean = exact_expected_w::<f64>(spec);
            let mut rec = TrialRecord {
                trial: i,
                seed,
                mode: cfg.mode,
                n: cfg.n,
                m: cfg.m,
                k: cfg.k,
                weight: w,
                predicted: Some(mean),
                depth: 0,
                diameter: 0,
                heavy_edges: 0,
                elapsed_s: None,
                extras: BTreeMap::new(),
            };
            let below = w < (1.0 - cfg.delta) * mean;
            rec.extras.insert("below_threshold".into(), f64::from(u8::from(below)));
            rec
        }
        Mode::LowerboundDp => {
            let p = CostParams::steiner(cfg.n as f64, cfg.m as f64)?.with_delta(cfg.delta)?;
            let (seq, cost) = minimize_truncated_cost(&p, cfg.k, cfg.grid)?;
            let closed = f_cost(&p, &optimal_level_sequence(&p, cfg.k, 1, cfg.m as f64)?);
            let mut rec = TrialRecord {
                trial: i,
                seed,
                mode: cfg.mode,
                n: cfg.n,
                m: cfg.m,
                k: cfg.k,
                weight: cost,
                predicted: Some(closed),
                depth: cfg.k,
                diameter: 0,
                heavy_edges: 0,
                elapsed_s: None,
                extras: BTreeMap::new(),
            };
            for (j, l) in seq.sizes().iter().enumerate() {
                rec.extras.insert(format!("l{j}"), *l);
            }
            rec
        }
    };
    rec.trial = i;
    Ok(rec)
}

/// Runs every trial of `cfg`, in parallel, returning records in trial order.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<Vec<TrialRecord>> {
    cfg.validate()?;
    let results: Vec<Result<TrialRecord>> = (0..cfg.trials)
        .into_par_iter()
        .map(|i| {
            let start = Instant::now();
            let mut rec = run_trial(cfg, i).map_err(|e| Error::Trial {
                trial: i,
                seed: cfg.seed(i),
                source: Box::new(e),
            })?;
            if cfg.timing {
                rec.elapsed_s = Some(start.elapsed().as_secs_f64());
            }
            Ok(rec)
        })
        .collect();
    results.into_iter().collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub count: usize,
    pub mean: f64,
    /// Sample standard deviation (`n - 1` denominator; zero for one record).
    pub std: f64,
    pub min: f64,
    pub max: f64,
    pub mean_ratio: Option<f64>,
    pub heavy_edges: usize,
}

pub fn summarize(records: &[TrialRecord]) -> Result<Summary> {
    if records.is_empty() {
        return domain("cannot summarize an empty record list");
    }
    let count = records.len();
    let mean = records.iter().map(|r| r.weight).sum::<f64>() / count as f64;
    let ss: f64 = records.iter().map(|r| (r.weight - mean).powi(2)).sum();
    let std = if count > 1 { (ss / (count - 1) as f64).sqrt() } else { 0.0 };
    let ratios: Vec<f64> = records.iter().filter_map(TrialRecord::ratio).collect();
    let mean_ratio = (!ratios.is_empty()).then(|| ratios.iter().sum::<f64>() / ratios.len() as f64);
    Ok(Summary {
        count,
        mean,
        std,
        min: records.iter().map(|r| r.weight).fold(f64::INFINITY, f64::min),
        max: records.iter().map(|r| r.weight).fold(f64::NEG_INFINITY, f64::max),
        mean_ratio,
        heavy_edges: records.iter().map(|r| r.heavy_edges).sum(),
    })
}
