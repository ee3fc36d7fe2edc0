use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use hoptree::exact::{
    approx_expected_w, empirical_tail, exact_bounded_depth_tree, exact_bounded_diameter_tree,
    exact_expected_w, tail_bound, tree_lower_bound, analytic_lower_bound, DenseInstance, OrderStatSpec,
};
use hoptree::experiments::acceptance::run_criteria;
use hoptree::experiments::{emit, greedy_levels, run_experiment, summarize, ExperimentConfig, Format, Mode};
use hoptree::levels::{
    f_cost, integerize, minimize_truncated_cost, optimal_cost_closed_form, optimal_level_sequence,
    predicted_weight_depth, predicted_weight_diam_odd, CostParams,
};
use hoptree::trees::{greedy_tree, meta_depth_for, prim_mst, sliced_and_spliced, EpsChoice, RootSpec};
use hoptree::{Distribution, EdgeOracle, Error, RootedTree, StreamId};

#[derive(Parser)]
#[command(name = "hoptree", version, about = "Bounded-depth and bounded-diameter trees on random complete graphs")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Optimal level sequence, its cost, and weight predictions.
    Predict(PredictArgs),
    /// Build one greedy bounded-depth or bounded-diameter tree.
    Greedy(GreedyArgs),
    /// Build the minimum spanning tree.
    Mst(MstArgs),
    /// Build one slice-and-splice tree.
    Splice(SpliceArgs),
    /// Exact optimum on an explicit instance file.
    Exact(ExactArgs),
    /// Moments and tail of W_{b,p}.
    Wbp(WbpArgs),
    /// Truncated-cost optimizer, or a certified bound for a tree file.
    Lowerbound(LowerboundArgs),
    /// Run a batch of seeded trials and write CSV or JSON.
    Experiment(ExperimentArgs),
    /// Run the acceptance suite.
    Accept(AcceptArgs),
}

#[derive(Args, Clone)]
struct GraphArgs {
    /// Number of vertices.
    #[arg(long)]
    n: usize,
    /// Number of terminals (vertices 0..m); defaults to n.
    #[arg(long)]
    m: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Edge-weight law: exp or uniform.
    #[arg(long, default_value = "exp")]
    dist: String,
}

#[derive(Args, Clone)]
struct ShapeArgs {
    /// Depth bound k.
    #[arg(long, visible_alias = "depth", conflicts_with = "diam")]
    k: Option<usize>,
    /// Diameter bound D.
    #[arg(long)]
    diam: Option<usize>,
}

impl ShapeArgs {
    /// (k, odd diameter?)
    fn resolve(&self) -> Result<(usize, bool), Error> {
        match (self.k, self.diam) {
            (Some(k), None) => Ok((k, false)),
            (None, Some(d)) => Ok((d / 2, d % 2 == 1)),
            _ => Err(Error::Config(vec!["give exactly one of --k/--depth or --diam".into()])),
        }
    }
}

#[derive(Args)]
struct PredictArgs {
    #[arg(long)]
    n: f64,
    #[arg(long)]
    m: Option<f64>,
    #[command(flatten)]
    shape: ShapeArgs,
}

#[derive(Args)]
struct GreedyArgs {
    #[command(flatten)]
    graph: GraphArgs,
    #[command(flatten)]
    shape: ShapeArgs,
    /// Write the tree in parent-array text form here.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct MstArgs {
    #[command(flatten)]
    graph: GraphArgs,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SpliceArgs {
    #[command(flatten)]
    graph: GraphArgs,
    /// Depth budget; defaults to floor(log2 ln n) + delta.
    #[arg(long, visible_alias = "depth")]
    k: Option<usize>,
    /// Piece diameter Delta.
    #[arg(long = "delta-levels", default_value_t = 4)]
    delta_levels: usize,
    /// Split parameter, or `auto`.
    #[arg(long, default_value = "auto")]
    epsilon: String,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ExactArgs {
    /// Instance file: `n m`, the terminals, then the upper triangle.
    #[arg(long)]
    instance: PathBuf,
    #[command(flatten)]
    shape: ShapeArgs,
    /// Root vertex for a depth bound.
    #[arg(long, default_value_t = 0)]
    root: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct WbpArgs {
    #[arg(long)]
    b: usize,
    #[arg(long)]
    p: usize,
    #[arg(long, default_value_t = 0.5)]
    delta: f64,
    /// Draws for the empirical tail; 0 skips sampling.
    #[arg(long, default_value_t = 0)]
    trials: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct LowerboundArgs {
    #[arg(long)]
    n: Option<f64>,
    #[arg(long)]
    m: Option<f64>,
    #[arg(long, visible_alias = "depth")]
    k: Option<usize>,
    #[arg(long, default_value_t = 0.1)]
    delta: f64,
    /// Grid points per decade.
    #[arg(long, default_value_t = 40)]
    grid: usize,
    /// Certified mode: explicit instance file ...
    #[arg(long, requires = "tree")]
    instance: Option<PathBuf>,
    /// ... and a tree file over it.
    #[arg(long, requires = "instance")]
    tree: Option<PathBuf>,
    /// Count only terminals at the deepest level.
    #[arg(long)]
    restrict: bool,
}

#[derive(Args)]
struct ExperimentArgs {
    #[arg(long)]
    mode: String,
    #[arg(long)]
    n: usize,
    #[arg(long)]
    m: Option<usize>,
    #[command(flatten)]
    shape: ShapeArgs,
    #[arg(long = "delta-levels", default_value_t = 4)]
    delta_levels: usize,
    #[arg(long, default_value = "auto")]
    epsilon: String,
    #[arg(long, default_value_t = 0.1)]
    delta: f64,
    #[arg(long, default_value = "exp")]
    dist: String,
    #[arg(long, default_value_t = 1)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 40)]
    grid: usize,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, default_value = "csv")]
    format: String,
    /// Record per-trial wall-clock time (breaks byte-identical reruns).
    #[arg(long)]
    timing: bool,
}

#[derive(Args)]
struct AcceptArgs {
    /// Criterion ids to run; all when omitted.
    ids: Vec<u32>,
}

enum Failure {
    Config(Error),
    Check(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Config(e)
    }
}

type Outcome = Result<(), Failure>;

fn parse_dist(s: &str) -> Result<Distribution, Error> {
    match s {
        "exp" => Ok(Distribution::EXP1),
        "uniform" => Ok(Distribution::Uniform01),
        _ => Err(Error::Config(vec![format!("unknown --dist `{s}`, expected exp or uniform")])),
    }
}

fn parse_eps(s: &str) -> Result<Option<f64>, Error> {
    if s == "auto" {
        return Ok(None);
    }
    s.parse()
        .map(Some)
        .map_err(|_| Error::Config(vec![format!("--epsilon must be a number or auto, got `{s}`")]))
}

fn write_or_print(out: &Option<PathBuf>, text: &str) -> Result<(), Error> {
    match out {
        Some(p) => fs::write(p, text).map_err(|source| Error::Io { path: p.clone(), source }),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn read(path: &Path) -> Result<String, Error> {
    fs::read_to_string(path).map_err(|source| Error::Io { path: path.to_path_buf(), source })
}

fn tree_summary(t: &RootedTree) -> serde_json::Value {
    json!({
        "weight": t.weight(),
        "vertices": t.len(),
        "depth": t.depth(),
        "diameter": t.diameter(),
        "level_sizes": t.level_sizes(),
        "heavy_edges": t.heavy_edge_count(0.1),
    })
}

fn print_json(v: &serde_json::Value) {
    println!("{}", serde_json::to_string_pretty(v).expect("serializable"));
}

fn predict(a: PredictArgs) -> Outcome {
    let (k, odd) = a.shape.resolve()?;
    let m = a.m.unwrap_or(a.n);
    let p = CostParams::steiner(a.n, m)?;
    let l0 = if odd { 2 } else { 1 };
    let seq = optimal_level_sequence(&p, k, l0, m)?;
    let int = integerize(&seq, a.n as usize, m as usize)?;
    print_json(&json!({
        "n": a.n, "m": m, "k": k, "c": p.c,
        "levels": seq.sizes(),
        "integer_levels": int.sizes(),
        "clipped": int.clipped(),
        "f_cost": f_cost(&p, &seq),
        "closed_form_cost": optimal_cost_closed_form(&p, k, m),
        "predicted_depth": predicted_weight_depth(a.n, m, k),
        "predicted_diam_odd": predicted_weight_diam_odd(a.n, m, k),
    }));
    Ok(())
}

fn greedy(a: GreedyArgs) -> Outcome {
    let (k, odd) = a.shape.resolve()?;
    let g = &a.graph;
    let m = g.m.unwrap_or(g.n);
    let o = EdgeOracle::new(g.n, g.seed, StreamId::BASE, parse_dist(&g.dist)?)?;
    let mode = if odd { Mode::GreedyDiamOdd } else { Mode::GreedyDepth };
    let levels = greedy_levels(mode, g.n, m, k)?;
    let root = if odd { RootSpec::LightestEdgeAt(0) } else { RootSpec::Vertex(0) };
    let terminals: Vec<usize> = (0..m).collect();
    let t = greedy_tree(&o, &terminals, &levels, root)?;
    if let Some(p) = &a.out {
        write_or_print(&Some(p.clone()), &t.to_text())?;
    }
    let mut s = tree_summary(&t);
    s["predicted"] = json!(if odd { predicted_weight_diam_odd(g.n as f64, m as f64, k) } else { predicted_weight_depth(g.n as f64, m as f64, k) });
    print_json(&s);
    Ok(())
}

fn mst(a: MstArgs) -> Outcome {
    let g = &a.graph;
    let o = EdgeOracle::new(g.n, g.seed, StreamId::BASE, parse_dist(&g.dist)?)?;
    let t = prim_mst(&o);
    if let Some(p) = &a.out {
        write_or_print(&Some(p.clone()), &t.to_text())?;
    }
    print_json(&tree_summary(&t));
    Ok(())
}

fn splice_cmd(a: SpliceArgs) -> Outcome {
    let g = &a.graph;
    let m = g.m.unwrap_or(g.n);
    let k = a.k.unwrap_or(meta_depth_for(g.n) + a.delta_levels);
    let eps = parse_eps(&a.epsilon)?.map_or(EpsChoice::Auto, EpsChoice::Fixed);
    let terminals: Vec<usize> = (0..m).collect();
    let out = sliced_and_spliced(g.seed, g.n, &terminals, k, a.delta_levels, eps)?;
    if !out.depth_budget_ok {
        eprintln!("warning: k = {k} is below floor(log2 ln n) + delta = {}", out.meta_depth + a.delta_levels);
    }
    if let Some(p) = &a.out {
        write_or_print(&Some(p.clone()), &out.tree.to_text())?;
    }
    let mut s = tree_summary(&out.tree);
    s["eps"] = json!(out.eps);
    s["meta_depth"] = json!(out.meta_depth);
    s["base_weight"] = json!(out.base_weight);
    s["base_exact"] = json!(out.base_exact);
    s["sliced_off"] = json!(out.sliced_off);
    s["splice_weight"] = json!(out.splice_weight);
    s["pieces"] = json!(out.pieces);
    print_json(&s);
    Ok(())
}

fn exact(a: ExactArgs) -> Outcome {
    let inst = DenseInstance::from_text(&read(&a.instance)?)?;
    let t = match (a.shape.k, a.shape.diam) {
        (Some(k), None) => exact_bounded_depth_tree(&inst, k, a.root)?,
        (None, Some(d)) => exact_bounded_diameter_tree(&inst, d)?,
        _ => return Err(Error::Config(vec!["give exactly one of --k/--depth or --diam".into()]).into()),
    };
    if let Some(p) = &a.out {
        write_or_print(&Some(p.clone()), &t.to_text())?;
    }
    print_json(&tree_summary(&t));
    Ok(())
}

fn wbp(a: WbpArgs) -> Outcome {
    let s = OrderStatSpec::new(a.b, a.p)?;
    let mut v = json!({
        "b": a.b, "p": a.p, "delta": a.delta,
        "exact_mean": exact_expected_w::<f64>(s),
        "approx_mean": approx_expected_w(s),
        "tail_bound": tail_bound(a.b, a.delta)?,
    });
    if a.trials > 0 {
        let t = empirical_tail(s, a.delta, a.trials, a.seed)?;
        v["empirical_tail"] = json!(t.fraction);
        v["std_error"] = json!(t.std_error);
        v["within_bound"] = json!(t.within_bound());
        print_json(&v);
        if !t.within_bound() {
            return Err(Failure::Check("empirical tail exceeds the bound".into()));
        }
        return Ok(());
    }
    print_json(&v);
    Ok(())
}

fn lowerbound(a: LowerboundArgs) -> Outcome {
    if let (Some(ip), Some(tp)) = (&a.instance, &a.tree) {
        let inst = DenseInstance::from_text(&read(ip)?)?;
        let tree = RootedTree::from_text(&read(tp)?)?;
        let lb = tree_lower_bound(&tree, &inst, a.restrict)?;
        print_json(&json!({ "bound": lb, "tree_weight": tree.weight(), "level_sizes": tree.level_sizes() }));
        return Ok(());
    }
    let (Some(n), Some(k)) = (a.n, a.k) else {
        return Err(Error::Config(vec!["need --n and --k, or --instance with --tree".into()]).into());
    };
    let m = a.m.unwrap_or(n);
    let p = CostParams::steiner(n, m)?.with_delta(a.delta)?;
    let (seq, min) = minimize_truncated_cost(&p, k, a.grid)?;
    let closed = optimal_level_sequence(&p, k, 1, m)?;
    print_json(&json!({
        "n": n, "m": m, "k": k, "delta": a.delta, "grid": a.grid,
        "minimum": min,
        "argmin": seq.sizes(),
        "closed_form_cost": f_cost(&p, &closed),
        "analytic_bound_at_closed_form": analytic_lower_bound(closed.sizes(), n, m, a.delta)?,
    }));
    Ok(())
}

fn experiment(a: ExperimentArgs) -> Outcome {
    let mode: Mode = a.mode.parse()?;
    let format: Format = a.format.parse()?;
    let (k, odd) = match (a.shape.k, a.shape.diam) {
        (None, None) => (1, false),
        _ => a.shape.resolve()?,
    };
    if a.shape.diam.is_some() {
        let want_odd = mode == Mode::GreedyDiamOdd;
        if odd != want_odd {
            return Err(Error::Config(vec![format!("--diam parity does not match mode {mode}")]).into());
        }
    }
    let mut cfg = ExperimentConfig::new(mode, a.n, k);
    cfg.m = a.m.unwrap_or(a.n);
    cfg.slice_delta = a.delta_levels;
    cfg.epsilon = parse_eps(&a.epsilon)?;
    cfg.delta = a.delta;
    cfg.dist = parse_dist(&a.dist)?;
    cfg.trials = a.trials;
    cfg.base_seed = a.seed;
    cfg.grid = a.grid;
    cfg.timing = a.timing;
    let records = run_experiment(&cfg)?;
    let summary = summarize(&records)?;
    match &a.out {
        Some(p) => emit(&cfg, &records, &summary, format, p)?,
        None => {
            let text = match format {
                Format::Csv => hoptree::experiments::to_csv(&records)?,
                Format::Json => hoptree::experiments::to_json(&cfg, &records, &summary)?,
            };
            print!("{text}");
        }
    }
    eprintln!(
        "{} trials: mean {:.6}, std {:.6}, min {:.6}, max {:.6}{}",
        summary.count,
        summary.mean,
        summary.std,
        summary.min,
        summary.max,
        summary.mean_ratio.map(|r| format!(", mean ratio {r:.4}")).unwrap_or_default()
    );
    Ok(())
}

fn accept(a: AcceptArgs) -> Outcome {
    let outcomes = run_criteria(&a.ids);
    for o in &outcomes {
        println!("{}", o.line());
    }
    let failed = outcomes.iter().filter(|o| !o.passed).count();
    if failed > 0 {
        return Err(Failure::Check(format!("{failed} acceptance criteria failed")));
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = match cli.cmd {
        Cmd::Predict(a) => predict(a),
        Cmd::Greedy(a) => greedy(a),
        Cmd::Mst(a) => mst(a),
        Cmd::Splice(a) => splice_cmd(a),
        Cmd::Exact(a) => exact(a),
        Cmd::Wbp(a) => wbp(a),
        Cmd::Lowerbound(a) => lowerbound(a),
        Cmd::Experiment(a) => experiment(a),
        Cmd::Accept(a) => accept(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Config(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
        Err(Failure::Check(msg)) => {
            eprintln!("check failed: {msg}");
            ExitCode::from(2)
        }
    }
}
