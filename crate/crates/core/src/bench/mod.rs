//! Experiment orchestration: graph sets, multi-restart comparisons, depth
//! sweeps, the negativity correlation, and their CSV / JSON / SVG output.
//!
//! Every chart is rendered from the CSV file written just before it.

pub mod stats;
pub mod svg;

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::ansatz::{qaoa_state, variant_params_from_hqw, AnsatzKind, Circuit, HqwParams, Parity};
use crate::error::{HqwError, Result};
use crate::graphs::{random_connected_graph, Graph};
use crate::hamiltonian::{
    jordan_negativity, maxcut_hamiltonian, mixer_hamiltonian, sectional_curvature,
    DiagonalHamiltonian,
};
use crate::optimizer::{
    aggregate, aggregate_gaps, compare_gaps_with, derive_seed, relative_improvement, run_restarts,
    Aggregate, OptimizerConfig, Outcome, Problem, ProblemKind, RunRecord, TIE_TOL,
};
use crate::simulator::StateVector;
use stats::{mean, median, pearson_and_fit, LinearFit};

pub const RUNS_HEADER: [&str; 8] = [
    "graph_id",
    "algo",
    "restart",
    "seed",
    "final_energy",
    "one_minus_r",
    "n_steps",
    "n_params",
];
pub const AGGREGATE_HEADER: [&str; 6] = [
    "graph_id",
    "algo",
    "mean_gap",
    "best_gap",
    "std_gap",
    "n_restarts",
];
pub const COMPARISON_HEADER: [&str; 9] = [
    "graph_id",
    "n_edges",
    "is_complete",
    "qaoa_mean_gap",
    "hqw_mean_gap",
    "rel_improvement_pct",
    "outcome",
    "best_rel_improvement_pct",
    "best_outcome",
];
pub const CORRELATION_HEADER: [&str; 8] = [
    "graph_id",
    "n_edges",
    "n_min",
    "abs_n_min",
    "curvature",
    "qaoa_mean_gap",
    "hqw_mean_gap",
    "rel_improvement_pct",
];

/// Number of lowest objective levels tracked in depth sweeps.
pub const PROJECTION_LEVELS: usize = 4;

pub const MAX_DEPTH: usize = 10;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct BenchmarkConfig {
    /// Subdirectory of `out_dir` for this experiment.
    pub name: String,
    pub problem: ProblemKind,
    pub n_vertices: usize,
    pub m_min: usize,
    pub m_max: usize,
    pub count: usize,
    /// Edge-list files used instead of generated graphs when non-empty.
    pub graph_files: Vec<PathBuf>,
    /// Replace the last generated graph by `K_n` when the class admits it
    /// and no draw produced it.
    pub include_complete: bool,
    pub mis_lambda: f64,
    pub qaoa_depth: usize,
    /// Defaults to `2 · qaoa_depth`.
    pub hqw_steps: Option<usize>,
    pub depths: Vec<usize>,
    pub optimizer: OptimizerConfig,
    pub out_dir: Option<PathBuf>,
    pub emit_traces: bool,
    pub tie_tol: f64,
}

impl Default for BenchmarkConfig {
    fn default() -> Self {
        Self {
            name: "maxcut".into(),
            problem: ProblemKind::MaxCut,
            n_vertices: 8,
            m_min: 18,
            m_max: 23,
            count: 10,
            graph_files: Vec::new(),
            include_complete: true,
            mis_lambda: 1.0,
            qaoa_depth: 2,
            hqw_steps: None,
            depths: vec![1, 2, 3, 4],
            optimizer: OptimizerConfig {
                restarts: 20,
                ..OptimizerConfig::default()
            },
            out_dir: None,
            emit_traces: false,
            tie_tol: TIE_TOL,
        }
    }
}

impl BenchmarkConfig {
    /// Desk-scale Max-Cut comparison on 8-vertex graphs with `m_min..=m_max` edges.
    pub fn maxcut_class(m_min: usize, m_max: usize) -> Self {
        Self {
            name: format!("maxcut_{m_min}_{m_max}"),
            m_min,
            m_max,
            ..Self::default()
        }
    }

    /// Single fixed instance for depth sweeps: 8 vertices with 14 edges
    /// (Max-Cut) or 19 edges (MIS).
    pub fn components(problem: ProblemKind) -> Self {
        let (name, m) = match problem {
            ProblemKind::MaxCut => ("components_maxcut", 14),
            ProblemKind::Mis => ("components_mis", 19),
        };
        Self {
            name: name.into(),
            problem,
            m_min: m,
            m_max: m,
            count: 1,
            ..Self::default()
        }
    }

    /// Instances for the negativity correlation, 8 vertices from 18 to 28 edges.
    pub fn correlation(count: usize) -> Self {
        Self {
            name: "correlation".into(),
            m_min: 18,
            m_max: 28,
            count,
            ..Self::default()
        }
    }

    /// Larger instances: 12-vertex 30-edge Max-Cut or 10-vertex MIS.
    pub fn scalability(problem: ProblemKind) -> Self {
        let base = Self {
            count: 1,
            depths: vec![1, 2, 3],
            optimizer: OptimizerConfig {
                restarts: 20,
                steps: 150,
                ..OptimizerConfig::default()
            },
            problem,
            ..Self::default()
        };
        match problem {
            ProblemKind::MaxCut => Self {
                name: "scale_maxcut".into(),
                n_vertices: 12,
                m_min: 30,
                m_max: 30,
                ..base
            },
            ProblemKind::Mis => Self {
                name: "scale_mis".into(),
                n_vertices: 10,
                m_min: 18,
                m_max: 22,
                ..base
            },
        }
    }

    /// Restores the full protocol sizes: 50 graphs and 100 restarts, or
    /// 200 restarts of 150 steps for the scalability runs.
    pub fn full_scale(mut self) -> Self {
        if self.name.starts_with("scale") {
            self.optimizer.restarts = 200;
            self.optimizer.steps = 150;
            self.depths = (1..=MAX_DEPTH).collect();
        } else if self.name.starts_with("components") {
            self.optimizer.restarts = 100;
            self.depths = (1..=MAX_DEPTH).collect();
        } else if self.name == "correlation" {
            self.optimizer.restarts = 100;
        } else {
            self.count = 50;
            self.optimizer.restarts = 100;
        }
        self
    }

    pub fn hqw_steps(&self) -> usize {
        self.hqw_steps.unwrap_or(2 * self.qaoa_depth)
    }

    pub fn validate(&self) -> Result<()> {
        self.optimizer.validate()?;
        if self.qaoa_depth == 0 || self.hqw_steps() == 0 {
            return Err(HqwError::Parameter("depths must be at least 1".into()));
        }
        if self.graph_files.is_empty() && self.count == 0 {
            return Err(HqwError::Parameter("graph count must be at least 1".into()));
        }
        if !(self.tie_tol >= 0.0) {
            return Err(HqwError::Parameter(format!(
                "tie tolerance {} must be non-negative",
                self.tie_tol
            )));
        }
        if let Some(&d) = self.depths.iter().find(|&&d| d == 0 || d > MAX_DEPTH) {
            return Err(HqwError::Parameter(format!(
                "depth {d} outside 1..={MAX_DEPTH}"
            )));
        }
        if self.name.is_empty() || self.name.contains(['/', '\\']) {
            return Err(HqwError::Parameter(format!(
                "bad experiment name {:?}",
                self.name
            )));
        }
        Ok(())
    }

    /// `out_dir/name`, created on demand.
    pub fn experiment_dir(&self) -> Result<Option<PathBuf>> {
        match &self.out_dir {
            None => Ok(None),
            Some(root) => {
                let dir = root.join(&self.name);
                fs::create_dir_all(dir.join("graphs"))?;
                Ok(Some(dir))
            }
        }
    }

    fn problem_for(&self, g: Graph) -> Result<Problem> {
        match self.problem {
            ProblemKind::MaxCut => Problem::maxcut(g),
            ProblemKind::Mis => Problem::mis(g, self.mis_lambda),
        }
    }
}

fn graph_seed(cfg: &BenchmarkConfig, i: usize, tag: &str) -> u64 {
    derive_seed(
        cfg.optimizer.base_seed,
        i as u64,
        &format!("{tag}-{}-{}-{}", cfg.n_vertices, cfg.m_min, cfg.m_max),
        0,
    )
}

/// Loads `graph_files`, or draws `count` connected graphs from the class.
pub fn load_graphs(cfg: &BenchmarkConfig) -> Result<Vec<Graph>> {
    if !cfg.graph_files.is_empty() {
        return cfg.graph_files.iter().map(Graph::load).collect();
    }
    let mut graphs = (0..cfg.count)
        .map(|i| {
            random_connected_graph(
                cfg.n_vertices,
                cfg.m_min,
                cfg.m_max,
                graph_seed(cfg, i, "graph"),
            )
        })
        .collect::<Result<Vec<_>>>()?;
    let pairs = cfg.n_vertices * cfg.n_vertices.saturating_sub(1) / 2;
    if cfg.include_complete && cfg.m_max == pairs && !graphs.iter().any(Graph::is_complete) {
        if let Some(last) = graphs.last_mut() {
            *last = Graph::complete(cfg.n_vertices);
        }
    }
    Ok(graphs)
}

/// `count` graphs whose edge counts step evenly from `m_min` to `m_max`.
pub fn spread_graphs(cfg: &BenchmarkConfig) -> Result<Vec<Graph>> {
    if !cfg.graph_files.is_empty() {
        return load_graphs(cfg);
    }
    let span = cfg.m_max - cfg.m_min.min(cfg.m_max);
    (0..cfg.count)
        .map(|i| {
            let m = if cfg.count > 1 {
                cfg.m_min + (i * span + (cfg.count - 1) / 2) / (cfg.count - 1)
            } else {
                cfg.m_min
            };
            random_connected_graph(cfg.n_vertices, m, m, graph_seed(cfg, i, "spread"))
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchmarkRow {
    pub graph_id: usize,
    pub n_edges: usize,
    pub is_complete: bool,
    pub qaoa: Aggregate,
    pub hqw: Aggregate,
    /// Percent, from mean gaps.
    pub rel_improvement_pct: Option<f64>,
    pub outcome: Outcome,
    /// Percent, from best gaps.
    pub best_rel_improvement_pct: Option<f64>,
    pub best_outcome: Outcome,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BestSummary {
    pub avg_best_gap_qaoa: f64,
    pub avg_best_gap_hqw: f64,
    pub wins_qaoa: usize,
    pub wins_hqw: usize,
    pub ties: usize,
    pub win_rate_hqw: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub avg_gap_qaoa: f64,
    pub avg_gap_hqw: f64,
    pub wins_qaoa: usize,
    pub wins_hqw: usize,
    pub ties: usize,
    pub win_rate_hqw: f64,
    pub mean_rel_improvement_pct: Option<f64>,
    pub median_rel_improvement_pct: Option<f64>,
    pub n_graphs: usize,
    /// Graphs whose improvement is undefined (QAOA gap of zero).
    pub excluded_from_improvement: usize,
    pub best: BestSummary,
}

fn count_outcomes(outcomes: impl Iterator<Item = Outcome>) -> (usize, usize, usize) {
    outcomes.fold((0, 0, 0), |(q, h, t), o| match o {
        Outcome::Qaoa => (q + 1, h, t),
        Outcome::Hqw => (q, h + 1, t),
        Outcome::Tie => (q, h, t + 1),
    })
}

impl Summary {
    pub fn from_rows(rows: &[BenchmarkRow]) -> Result<Self> {
        if rows.is_empty() {
            return Err(HqwError::Parameter("no rows to summarize".into()));
        }
        let n = rows.len();
        let col = |f: &dyn Fn(&BenchmarkRow) -> f64| mean(&rows.iter().map(f).collect::<Vec<_>>());
        let (wins_qaoa, wins_hqw, ties) = count_outcomes(rows.iter().map(|r| r.outcome));
        let (bq, bh, bt) = count_outcomes(rows.iter().map(|r| r.best_outcome));
        let imps: Vec<f64> = rows.iter().filter_map(|r| r.rel_improvement_pct).collect();
        Ok(Self {
            avg_gap_qaoa: col(&|r| r.qaoa.mean),
            avg_gap_hqw: col(&|r| r.hqw.mean),
            wins_qaoa,
            wins_hqw,
            ties,
            win_rate_hqw: wins_hqw as f64 / n as f64,
            mean_rel_improvement_pct: (!imps.is_empty()).then(|| mean(&imps)),
            median_rel_improvement_pct: median(&imps),
            n_graphs: n,
            excluded_from_improvement: n - imps.len(),
            best: BestSummary {
                avg_best_gap_qaoa: col(&|r| r.qaoa.best),
                avg_best_gap_hqw: col(&|r| r.hqw.best),
                wins_qaoa: bq,
                wins_hqw: bh,
                ties: bt,
                win_rate_hqw: bh as f64 / n as f64,
            },
        })
    }
}

#[derive(Debug, Clone)]
pub struct BenchmarkTable {
    pub graphs: Vec<Graph>,
    pub rows: Vec<BenchmarkRow>,
    pub summary: Summary,
    pub records: Vec<RunRecord>,
}

impl BenchmarkTable {
    /// Row with the largest mean-gap improvement.
    pub fn best_improvement(&self) -> Option<&BenchmarkRow> {
        self.rows
            .iter()
            .filter(|r| r.rel_improvement_pct.is_some())
            .max_by(|a, b| {
                a.rel_improvement_pct
                    .partial_cmp(&b.rel_improvement_pct)
                    .unwrap()
            })
    }
}

fn compare_row(
    graph_id: usize,
    g: &Graph,
    q: &[RunRecord],
    h: &[RunRecord],
    tie_tol: f64,
) -> Result<BenchmarkRow> {
    let qaoa = aggregate_gaps(q)?;
    let hqw = aggregate_gaps(h)?;
    Ok(BenchmarkRow {
        graph_id,
        n_edges: g.n_edges(),
        is_complete: g.is_complete(),
        qaoa,
        hqw,
        rel_improvement_pct: relative_improvement(qaoa.mean, hqw.mean),
        outcome: compare_gaps_with(qaoa.mean, hqw.mean, tie_tol),
        best_rel_improvement_pct: relative_improvement(qaoa.best, hqw.best),
        best_outcome: compare_gaps_with(qaoa.best, hqw.best, tie_tol),
    })
}

/// QAOA(p) against HQW(2p) on every graph of the class.
pub fn run_maxcut_benchmark(cfg: &BenchmarkConfig) -> Result<BenchmarkTable> {
    cfg.validate()?;
    if cfg.problem != ProblemKind::MaxCut {
        return Err(HqwError::Parameter(
            "gap comparison needs a Max-Cut configuration".into(),
        ));
    }
    let graphs = load_graphs(cfg)?;
    let mut rows = Vec::with_capacity(graphs.len());
    let mut records = Vec::new();
    for (id, g) in graphs.iter().enumerate() {
        let problem = cfg.problem_for(g.clone())?;
        let q = run_restarts(
            AnsatzKind::Qaoa { p: cfg.qaoa_depth },
            &problem,
            &cfg.optimizer,
            id,
        )?;
        let h = run_restarts(
            AnsatzKind::Hqw {
                steps: cfg.hqw_steps(),
            },
            &problem,
            &cfg.optimizer,
            id,
        )?;
        rows.push(compare_row(id, g, &q, &h, cfg.tie_tol)?);
        records.extend(q);
        records.extend(h);
    }
    let summary = Summary::from_rows(&rows)?;
    let table = BenchmarkTable {
        graphs,
        rows,
        summary,
        records,
    };
    if let Some(dir) = cfg.experiment_dir()? {
        write_benchmark(&dir, cfg, &table)?;
    }
    Ok(table)
}

fn num(x: f64) -> String {
    format!("{x}")
}

fn opt(x: Option<f64>) -> String {
    x.map(num).unwrap_or_default()
}

fn outcome_tag(o: Outcome) -> &'static str {
    match o {
        Outcome::Qaoa => "qaoa",
        Outcome::Hqw => "hqw",
        Outcome::Tie => "tie",
    }
}

fn write_csv<R: IntoIterator<Item = Vec<String>>>(
    path: &Path,
    header: &[&str],
    rows: R,
) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(header)?;
    for r in rows {
        w.write_record(&r)?;
    }
    w.flush()?;
    Ok(())
}

/// Columns of a CSV file by header name, as strings.
pub fn read_columns(path: &Path, names: &[&str]) -> Result<Vec<Vec<String>>> {
    let mut rdr = csv::Reader::from_path(path)?;
    let headers = rdr.headers()?.clone();
    let idx = names
        .iter()
        .map(|n| {
            headers
                .iter()
                .position(|h| h == *n)
                .ok_or_else(|| HqwError::Parse(format!("{} has no column {n}", path.display())))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut out = Vec::new();
    for rec in rdr.records() {
        let rec = rec?;
        out.push(
            idx.iter()
                .map(|&i| rec.get(i).unwrap_or("").to_string())
                .collect(),
        );
    }
    Ok(out)
}

fn parse_f64(s: &str) -> Result<f64> {
    s.parse()
        .map_err(|_| HqwError::Parse(format!("bad number {s:?}")))
}

fn parse_opt(s: &str) -> Result<Option<f64>> {
    if s.is_empty() {
        Ok(None)
    } else {
        parse_f64(s).map(Some)
    }
}

pub fn write_runs_csv(path: &Path, records: &[RunRecord]) -> Result<()> {
    write_csv(
        path,
        &RUNS_HEADER,
        records.iter().map(|r| {
            vec![
                r.graph_id.to_string(),
                r.algo.clone(),
                r.restart.to_string(),
                r.seed.to_string(),
                num(r.final_energy),
                opt(r.one_minus_r),
                r.n_steps.to_string(),
                r.n_params.to_string(),
            ]
        }),
    )
}

fn write_traces_csv(path: &Path, records: &[RunRecord], stride: usize) -> Result<()> {
    let rows = records.iter().flat_map(|r| {
        r.energy_trace.iter().enumerate().map(move |(i, e)| {
            vec![
                r.graph_id.to_string(),
                r.algo.clone(),
                r.restart.to_string(),
                (i * stride).min(r.n_steps).to_string(),
                num(*e),
            ]
        })
    });
    write_csv(
        path,
        &["graph_id", "algo", "restart", "step", "energy"],
        rows,
    )
}

fn write_benchmark(dir: &Path, cfg: &BenchmarkConfig, t: &BenchmarkTable) -> Result<()> {
    for (id, g) in t.graphs.iter().enumerate() {
        g.save(dir.join("graphs").join(format!("g{id:03}.edgelist")))?;
    }
    write_runs_csv(&dir.join("runs.csv"), &t.records)?;
    if cfg.emit_traces {
        write_traces_csv(
            &dir.join("traces.csv"),
            &t.records,
            cfg.optimizer.trace_stride,
        )?;
    }
    let agg_rows = t.rows.iter().flat_map(|r| {
        [("qaoa", r.qaoa), ("hqw", r.hqw)].map(|(algo, a)| {
            vec![
                r.graph_id.to_string(),
                algo.to_string(),
                num(a.mean),
                num(a.best),
                num(a.std),
                a.n.to_string(),
            ]
        })
    });
    write_csv(&dir.join("aggregate.csv"), &AGGREGATE_HEADER, agg_rows)?;
    write_csv(
        &dir.join("comparison.csv"),
        &COMPARISON_HEADER,
        t.rows.iter().map(|r| {
            vec![
                r.graph_id.to_string(),
                r.n_edges.to_string(),
                r.is_complete.to_string(),
                num(r.qaoa.mean),
                num(r.hqw.mean),
                opt(r.rel_improvement_pct),
                outcome_tag(r.outcome).into(),
                opt(r.best_rel_improvement_pct),
                outcome_tag(r.best_outcome).into(),
            ]
        }),
    )?;
    fs::write(
        dir.join("summary.json"),
        serde_json::to_string_pretty(&t.summary)? + "\n",
    )?;
    fs::write(
        dir.join("config.json"),
        serde_json::to_string_pretty(cfg)? + "\n",
    )?;
    plot_benchmark(dir)
}

/// Renders `scatter.svg` and `improvement_hist.svg` from `aggregate.csv`.
pub fn plot_benchmark(dir: &Path) -> Result<()> {
    let cols = read_columns(
        &dir.join("aggregate.csv"),
        &["graph_id", "algo", "mean_gap"],
    )?;
    let mut q = std::collections::BTreeMap::new();
    let mut h = std::collections::BTreeMap::new();
    for c in &cols {
        let id: usize = c[0]
            .parse()
            .map_err(|_| HqwError::Parse(format!("bad graph id {:?}", c[0])))?;
        let v = parse_f64(&c[2])?;
        match c[1].as_str() {
            "qaoa" => q.insert(id, v),
            "hqw" => h.insert(id, v),
            other => return Err(HqwError::Parse(format!("unknown algo {other:?}"))),
        };
    }
    let pts: Vec<(f64, f64)> = q
        .iter()
        .filter_map(|(id, &a)| h.get(id).map(|&b| (a, b)))
        .collect();
    fs::write(
        dir.join("scatter.svg"),
        svg::scatter_loglog(
            &pts,
            "QAOA mean 1 - r",
            "HQW mean 1 - r",
            "Mean approximation gap per graph",
        ),
    )?;
    let imps: Vec<f64> = pts
        .iter()
        .filter_map(|&(a, b)| relative_improvement(a, b))
        .collect();
    fs::write(
        dir.join("improvement_hist.svg"),
        svg::histogram(&imps, 10, "relative improvement (%)", "HQW over QAOA"),
    )?;
    Ok(())
}

/// One algorithm at one depth in a sweep.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DepthPoint {
    /// QAOA layers `p`; HQW runs use the matching step count.
    pub depth: usize,
    pub algo: String,
    pub mean_energy: f64,
    pub std_energy: f64,
    pub n: usize,
    /// Mean probability in each of the lowest objective levels.
    pub projections: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DepthSweep {
    pub graph: String,
    pub ground_energy: f64,
    pub levels: Vec<f64>,
    pub points: Vec<DepthPoint>,
}

impl DepthSweep {
    pub fn point(&self, depth: usize, algo: &str) -> Option<&DepthPoint> {
        self.points
            .iter()
            .find(|p| p.depth == depth && p.algo == algo)
    }
}

/// Energy and level projections of one evaluated parameter set.
#[derive(Debug, Clone, PartialEq)]
struct Sample {
    depth: usize,
    algo: &'static str,
    restart: usize,
    energy: f64,
    projections: Vec<f64>,
}

fn sample(
    depth: usize,
    algo: &'static str,
    restart: usize,
    s: &StateVector,
    obj: &DiagonalHamiltonian,
    k: usize,
) -> Result<Sample> {
    let projections = s
        .eigenspace_projections(obj, k)?
        .into_iter()
        .map(|(_, p)| p)
        .collect();
    Ok(Sample {
        depth,
        algo,
        restart,
        energy: s.expectation_diagonal(obj)?,
        projections,
    })
}

fn summarize(depth: usize, algo: &str, samples: &[&Sample]) -> Result<DepthPoint> {
    let a = aggregate(&samples.iter().map(|s| s.energy).collect::<Vec<_>>())?;
    let k = samples[0].projections.len();
    let projections = (0..k)
        .map(|j| mean(&samples.iter().map(|s| s.projections[j]).collect::<Vec<_>>()))
        .collect();
    Ok(DepthPoint {
        depth,
        algo: algo.into(),
        mean_energy: a.mean,
        std_energy: a.std,
        n: a.n,
        projections,
    })
}

/// The single instance a depth sweep runs on.
pub fn sweep_instance(cfg: &BenchmarkConfig) -> Result<Problem> {
    let g = match cfg.graph_files.first() {
        Some(path) => Graph::load(path)?,
        None => random_connected_graph(
            cfg.n_vertices,
            cfg.m_min,
            cfg.m_max,
            graph_seed(cfg, 0, "instance"),
        )?,
    };
    cfg.problem_for(g)
}

const ALGOS_FULL: [&str; 4] = ["qaoa", "hqw", "variant1", "variant2"];
const ALGOS_PAIR: [&str; 2] = ["qaoa", "hqw"];

fn run_sweep(
    cfg: &BenchmarkConfig,
    with_variants: bool,
) -> Result<(Problem, DepthSweep, Vec<Sample>, Vec<RunRecord>)> {
    cfg.validate()?;
    let problem = sweep_instance(cfg)?;
    let n = problem.n_qubits();
    let obj = &problem.objective;
    let levels = obj.distinct_levels(1e-9);
    let k = PROJECTION_LEVELS.min(levels.len());
    let mut samples = Vec::new();
    let mut records = Vec::new();
    let mut depths = cfg.depths.clone();
    depths.sort_unstable();
    depths.dedup();
    for &p in &depths {
        let q = run_restarts(AnsatzKind::Qaoa { p }, &problem, &cfg.optimizer, p)?;
        let hk = AnsatzKind::Hqw { steps: 2 * p };
        let h = run_restarts(hk, &problem, &cfg.optimizer, p)?;
        let qc = Circuit::new(AnsatzKind::Qaoa { p }, n)?;
        let hc = Circuit::new(hk, n)?;
        for r in &q {
            samples.push(sample(
                p,
                "qaoa",
                r.restart,
                &qc.run(&r.final_params, obj)?,
                obj,
                k,
            )?);
        }
        for r in &h {
            samples.push(sample(
                p,
                "hqw",
                r.restart,
                &hc.run(&r.final_params, obj)?,
                obj,
                k,
            )?);
            if with_variants {
                let hp = HqwParams::from_flat(&r.final_params)?;
                for (algo, parity) in [("variant1", Parity::Odd), ("variant2", Parity::Even)] {
                    let vp = variant_params_from_hqw(&hp, parity)?;
                    samples.push(sample(
                        p,
                        algo,
                        r.restart,
                        &qaoa_state(&vp, obj, n)?,
                        obj,
                        k,
                    )?);
                }
            }
        }
        records.extend(q);
        records.extend(h);
    }
    let algos: &[&str] = if with_variants {
        &ALGOS_FULL
    } else {
        &ALGOS_PAIR
    };
    let mut points = Vec::new();
    for &p in &depths {
        for &algo in algos {
            let group: Vec<&Sample> = samples
                .iter()
                .filter(|s| s.depth == p && s.algo == algo)
                .collect();
            points.push(summarize(p, algo, &group)?);
        }
    }
    let sweep = DepthSweep {
        graph: problem.graph.to_edgelist(),
        ground_energy: obj.min(),
        levels: levels[..k].to_vec(),
        points,
    };
    Ok((problem, sweep, samples, records))
}

fn write_sweep(
    dir: &Path,
    cfg: &BenchmarkConfig,
    problem: &Problem,
    sweep: &DepthSweep,
    samples: &[Sample],
    records: &[RunRecord],
) -> Result<()> {
    problem
        .graph
        .save(dir.join("graphs").join("g000.edgelist"))?;
    write_runs_csv(&dir.join("runs.csv"), records)?;
    let k = sweep.levels.len();
    let proj_cols: Vec<String> = (1..=k).map(|j| format!("proj_{j}")).collect();
    let mut header = vec!["depth", "algo", "restart", "energy"];
    header.extend(proj_cols.iter().map(String::as_str));
    write_csv(
        &dir.join("depth_runs.csv"),
        &header,
        samples.iter().map(|s| {
            let mut row = vec![
                s.depth.to_string(),
                s.algo.into(),
                s.restart.to_string(),
                num(s.energy),
            ];
            row.extend(s.projections.iter().map(|&p| num(p)));
            row
        }),
    )?;
    let mut header = vec!["depth", "algo", "mean_energy", "std_energy", "n"];
    header.extend(proj_cols.iter().map(String::as_str));
    write_csv(
        &dir.join("depth_sweep.csv"),
        &header,
        sweep.points.iter().map(|p| {
            let mut row = vec![
                p.depth.to_string(),
                p.algo.clone(),
                num(p.mean_energy),
                num(p.std_energy),
                p.n.to_string(),
            ];
            row.extend(p.projections.iter().map(|&x| num(x)));
            row
        }),
    )?;
    if cfg.emit_traces {
        write_traces_csv(&dir.join("traces.csv"), records, cfg.optimizer.trace_stride)?;
    }
    fs::write(
        dir.join("summary.json"),
        serde_json::to_string_pretty(sweep)? + "\n",
    )?;
    fs::write(
        dir.join("config.json"),
        serde_json::to_string_pretty(cfg)? + "\n",
    )?;
    plot_sweep(dir, sweep.ground_energy, &sweep.levels)
}

/// Renders `energy.svg` and `projections.svg` from `depth_sweep.csv`.
pub fn plot_sweep(dir: &Path, ground_energy: f64, levels: &[f64]) -> Result<()> {
    let k = levels.len();
    let mut names = vec![
        "depth".to_string(),
        "algo".into(),
        "mean_energy".into(),
        "std_energy".into(),
    ];
    names.extend((1..=k).map(|j| format!("proj_{j}")));
    let refs: Vec<&str> = names.iter().map(String::as_str).collect();
    let cols = read_columns(&dir.join("depth_sweep.csv"), &refs)?;
    let mut algos: Vec<String> = Vec::new();
    for c in &cols {
        if !algos.contains(&c[1]) {
            algos.push(c[1].clone());
        }
    }
    let mut series = Vec::new();
    let mut panels = Vec::new();
    for algo in &algos {
        let rows: Vec<&Vec<String>> = cols.iter().filter(|c| &c[1] == algo).collect();
        let xs = rows
            .iter()
            .map(|c| parse_f64(&c[0]))
            .collect::<Result<Vec<_>>>()?;
        let mean = rows
            .iter()
            .map(|c| parse_f64(&c[2]))
            .collect::<Result<Vec<_>>>()?;
        let std = rows
            .iter()
            .map(|c| parse_f64(&c[3]))
            .collect::<Result<Vec<_>>>()?;
        let bars = rows
            .iter()
            .zip(&xs)
            .map(|(c, &x)| {
                Ok((
                    x,
                    c[4..]
                        .iter()
                        .map(|s| parse_f64(s))
                        .collect::<Result<Vec<_>>>()?,
                ))
            })
            .collect::<Result<Vec<_>>>()?;
        series.push(svg::Series {
            name: algo,
            xs,
            mean,
            std,
        });
        panels.push((algo.as_str(), bars));
    }
    fs::write(
        dir.join("energy.svg"),
        svg::line_with_band(
            &series,
            Some(ground_energy),
            "depth p",
            "objective energy",
            "Mean energy by depth",
        ),
    )?;
    let labels: Vec<String> = levels
        .iter()
        .enumerate()
        .map(|(j, l)| format!("E{} = {}", j + 1, num(*l)))
        .collect();
    fs::write(
        dir.join("projections.svg"),
        svg::stacked_bars(
            &panels,
            &labels,
            "depth p",
            "Probability in the lowest levels",
        ),
    )?;
    Ok(())
}

/// QAOA(p), HQW(2p) and the two interleaved QAOA variants read off each
/// optimized HQW run, for every `p` in `cfg.depths`.
pub fn run_component_analysis(cfg: &BenchmarkConfig) -> Result<DepthSweep> {
    let (problem, sweep, samples, records) = run_sweep(cfg, true)?;
    if let Some(dir) = cfg.experiment_dir()? {
        write_sweep(&dir, cfg, &problem, &sweep, &samples, &records)?;
    }
    Ok(sweep)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScalabilityReport {
    pub sweep: DepthSweep,
    /// `(depth, algo, step, mean objective over restarts)`.
    pub convergence: Vec<(usize, String, usize, f64)>,
}

/// QAOA against HQW on a larger instance, with mean convergence traces.
pub fn run_scalability(cfg: &BenchmarkConfig) -> Result<ScalabilityReport> {
    if cfg.optimizer.trace_stride == 0 {
        return Err(HqwError::Parameter(
            "scalability needs trace_stride > 0".into(),
        ));
    }
    let (problem, sweep, samples, records) = run_sweep(cfg, false)?;
    let stride = cfg.optimizer.trace_stride;
    let mut convergence = Vec::new();
    for p in sweep
        .points
        .iter()
        .filter(|p| p.algo == "qaoa")
        .map(|p| p.depth)
    {
        for algo in ALGOS_PAIR {
            let runs: Vec<&RunRecord> = records
                .iter()
                .filter(|r| r.graph_id == p && r.algo == algo)
                .collect();
            let len = runs.iter().map(|r| r.energy_trace.len()).min().unwrap_or(0);
            for i in 0..len {
                let m = mean(&runs.iter().map(|r| r.energy_trace[i]).collect::<Vec<_>>());
                convergence.push((
                    p,
                    algo.to_string(),
                    (i * stride).min(cfg.optimizer.steps),
                    m,
                ));
            }
        }
    }
    let report = ScalabilityReport { sweep, convergence };
    if let Some(dir) = cfg.experiment_dir()? {
        write_sweep(&dir, cfg, &problem, &report.sweep, &samples, &records)?;
        write_csv(
            &dir.join("convergence.csv"),
            &["depth", "algo", "step", "mean_energy"],
            report
                .convergence
                .iter()
                .map(|(d, a, s, e)| vec![d.to_string(), a.clone(), s.to_string(), num(*e)]),
        )?;
        plot_convergence(&dir, report.sweep.ground_energy)?;
    }
    Ok(report)
}

/// Renders `convergence_p{depth}.svg` per depth from `convergence.csv`.
pub fn plot_convergence(dir: &Path, ground_energy: f64) -> Result<()> {
    let cols = read_columns(
        &dir.join("convergence.csv"),
        &["depth", "algo", "step", "mean_energy"],
    )?;
    let mut depths: Vec<&str> = cols.iter().map(|c| c[0].as_str()).collect();
    depths.dedup();
    for d in depths {
        let series = ALGOS_PAIR
            .iter()
            .map(|&algo| {
                let rows: Vec<&Vec<String>> =
                    cols.iter().filter(|c| c[0] == d && c[1] == algo).collect();
                Ok(svg::Series {
                    name: algo,
                    xs: rows
                        .iter()
                        .map(|c| parse_f64(&c[2]))
                        .collect::<Result<_>>()?,
                    mean: rows
                        .iter()
                        .map(|c| parse_f64(&c[3]))
                        .collect::<Result<_>>()?,
                    std: vec![0.0; rows.len()],
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let title = format!("Convergence at depth {d} (dashed: ground energy)");
        fs::write(
            dir.join(format!("convergence_p{d}.svg")),
            svg::line_with_band(
                &series,
                Some(ground_energy),
                "optimizer step",
                "mean objective",
                &title,
            ),
        )?;
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorrelationRow {
    pub graph_id: usize,
    pub n_edges: usize,
    pub n_min: f64,
    pub curvature: Option<f64>,
    pub qaoa_mean_gap: f64,
    pub hqw_mean_gap: f64,
    /// Percent, from mean gaps; `None` when undefined.
    pub rel_improvement_pct: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorrelationResult {
    pub rows: Vec<CorrelationRow>,
    /// Fit of the improvement (as a fraction) against `|N_min|`.
    pub fit: Option<LinearFit>,
    /// Graph ids left out of the fit because the improvement is undefined.
    pub excluded: Vec<usize>,
    /// Why the fit is missing, if it is.
    pub degenerate: Option<String>,
}

/// Pearson fit of `|N_min|` against the relative improvement (fraction);
/// undefined improvements are excluded.
pub fn correlation_fit(rows: &[CorrelationRow]) -> (Option<LinearFit>, Vec<usize>, Option<String>) {
    let excluded: Vec<usize> = rows
        .iter()
        .filter(|r| r.rel_improvement_pct.is_none())
        .map(|r| r.graph_id)
        .collect();
    let (xs, ys): (Vec<f64>, Vec<f64>) = rows
        .iter()
        .filter_map(|r| r.rel_improvement_pct.map(|i| (r.n_min.abs(), i / 100.0)))
        .unzip();
    match pearson_and_fit(&xs, &ys) {
        Ok(f) => (Some(f), excluded, None),
        Err(e) => (None, excluded, Some(e.to_string())),
    }
}

/// Negativity `N_min` of each instance against the mean-gap improvement of
/// HQW over QAOA, with a Pearson / least-squares fit.
pub fn run_negativity_correlation(cfg: &BenchmarkConfig) -> Result<CorrelationResult> {
    cfg.validate()?;
    if cfg.problem != ProblemKind::MaxCut {
        return Err(HqwError::Parameter(
            "the correlation study uses Max-Cut instances".into(),
        ));
    }
    if cfg.graph_files.is_empty() && cfg.count < 10 {
        return Err(HqwError::Parameter(format!(
            "need at least 10 instances, got {}",
            cfg.count
        )));
    }
    let graphs = spread_graphs(cfg)?;
    let hb = mixer_hamiltonian(cfg.n_vertices)?;
    let mut rows = Vec::new();
    let mut records = Vec::new();
    for (id, g) in graphs.iter().enumerate() {
        let (_, hc) = maxcut_hamiltonian(g)?;
        let n_min = jordan_negativity(&hc, &hb)?;
        let curvature = sectional_curvature(&hc, &hb).ok();
        let problem = cfg.problem_for(g.clone())?;
        let q = run_restarts(
            AnsatzKind::Qaoa { p: cfg.qaoa_depth },
            &problem,
            &cfg.optimizer,
            id,
        )?;
        let h = run_restarts(
            AnsatzKind::Hqw {
                steps: cfg.hqw_steps(),
            },
            &problem,
            &cfg.optimizer,
            id,
        )?;
        let (qa, ha) = (aggregate_gaps(&q)?, aggregate_gaps(&h)?);
        let defined = qa.mean > cfg.tie_tol;
        rows.push(CorrelationRow {
            graph_id: id,
            n_edges: g.n_edges(),
            n_min,
            curvature,
            qaoa_mean_gap: qa.mean,
            hqw_mean_gap: ha.mean,
            rel_improvement_pct: relative_improvement(qa.mean, ha.mean).filter(|_| defined),
        });
        records.extend(q);
        records.extend(h);
    }
    let (fit, excluded, degenerate) = correlation_fit(&rows);
    let result = CorrelationResult {
        rows,
        fit,
        excluded,
        degenerate,
    };
    if let Some(dir) = cfg.experiment_dir()? {
        for (id, g) in graphs.iter().enumerate() {
            g.save(dir.join("graphs").join(format!("g{id:03}.edgelist")))?;
        }
        write_runs_csv(&dir.join("runs.csv"), &records)?;
        write_csv(
            &dir.join("correlation.csv"),
            &CORRELATION_HEADER,
            result.rows.iter().map(|r| {
                vec![
                    r.graph_id.to_string(),
                    r.n_edges.to_string(),
                    num(r.n_min),
                    num(r.n_min.abs()),
                    opt(r.curvature),
                    num(r.qaoa_mean_gap),
                    num(r.hqw_mean_gap),
                    opt(r.rel_improvement_pct),
                ]
            }),
        )?;
        #[derive(Serialize)]
        struct FitFile<'a> {
            fit: &'a Option<LinearFit>,
            excluded: &'a [usize],
            degenerate: &'a Option<String>,
            p_value_test: &'static str,
        }
        let ff = FitFile {
            fit: &result.fit,
            excluded: &result.excluded,
            degenerate: &result.degenerate,
            p_value_test: "two-sided Student t on r, n - 2 dof",
        };
        fs::write(
            dir.join("fit.json"),
            serde_json::to_string_pretty(&ff)? + "\n",
        )?;
        fs::write(
            dir.join("config.json"),
            serde_json::to_string_pretty(cfg)? + "\n",
        )?;
        plot_correlation(&dir)?;
    }
    Ok(result)
}

/// Renders `correlation.svg` from `correlation.csv`, refitting from the file.
pub fn plot_correlation(dir: &Path) -> Result<()> {
    let cols = read_columns(
        &dir.join("correlation.csv"),
        &["abs_n_min", "rel_improvement_pct"],
    )?;
    let mut pts = Vec::new();
    for c in &cols {
        if let Some(i) = parse_opt(&c[1])? {
            pts.push((parse_f64(&c[0])?, i / 100.0));
        }
    }
    let (xs, ys): (Vec<f64>, Vec<f64>) = pts.iter().copied().unzip();
    let (slope, intercept, title) = match pearson_and_fit(&xs, &ys) {
        Ok(f) => (
            f.slope,
            f.intercept,
            format!("Negativity vs improvement (r = {:.4})", f.r),
        ),
        Err(_) => (
            0.0,
            mean(&ys),
            "Negativity vs improvement (degenerate)".to_string(),
        ),
    };
    fs::write(
        dir.join("correlation.svg"),
        svg::scatter_with_fit(
            &pts,
            slope,
            intercept,
            "|N_min|",
            "relative improvement",
            &title,
        ),
    )?;
    Ok(())
}
