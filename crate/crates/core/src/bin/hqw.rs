use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use hqw::algebra::algebra_report;
use hqw::bench::{
    run_component_analysis, run_maxcut_benchmark, run_negativity_correlation, run_scalability,
    BenchmarkConfig, DepthSweep,
};
use hqw::control::{pmp_sweep, ControlInterval, ControlSchedule};
use hqw::graphs::{random_connected_graph, Graph};
use hqw::hamiltonian::{
    jordan_negativity, maxcut_hamiltonian, mixer_hamiltonian, sectional_curvature,
    taylor_bch_residuals,
};
use hqw::optimizer::ProblemKind;
use hqw::simulator::init_plus_state;

#[derive(Parser)]
#[command(
    name = "hqw",
    version,
    about = "Hybrid quantum walk ansatz experiments"
)]
struct Cli {
    /// Base seed for graphs and restarts.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Output root; each experiment writes to <out>/<name>/.
    #[arg(long, global = true, default_value = "out")]
    out: PathBuf,
    /// Full protocol sizes instead of desk-scale defaults.
    #[arg(long, global = true, alias = "paper-scale")]
    full_scale: bool,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// JSON benchmark configuration replacing the command defaults.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Benchmarks and depth sweeps.
    #[command(subcommand)]
    Bench(Bench),
    /// Lie and Jordan-Lie closures for a small Max-Cut instance.
    Algebra {
        #[command(flatten)]
        graph: GraphArgs,
        #[arg(long)]
        json: bool,
    },
    /// Jordan product negativity, curvature and second-order residuals.
    Negativity {
        #[command(flatten)]
        graph: GraphArgs,
        #[arg(long, default_value_t = 0.05)]
        gamma: f64,
        #[arg(long, default_value_t = 0.05)]
        beta: f64,
    },
    /// Optimal-coin sweep along a piecewise-constant schedule.
    Pmp {
        #[command(flatten)]
        graph: GraphArgs,
        /// JSON list of {duration, u, axis?}.
        #[arg(long)]
        schedule: Option<PathBuf>,
        #[arg(long, default_value_t = 0.01)]
        dt: f64,
    },
}

#[derive(Subcommand)]
enum Bench {
    /// QAOA(p) against HQW(2p) on a class of random graphs.
    Maxcut {
        /// Edge range, e.g. 18-23.
        #[arg(long, default_value = "18-23")]
        edges: String,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Depth sweep on the 8-vertex MIS instance.
    Mis {
        #[command(flatten)]
        run: RunArgs,
    },
    /// Depth sweep with the two interleaved QAOA variants.
    Components {
        #[arg(long, value_enum, default_value = "maxcut")]
        problem: ProblemArg,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Negativity against relative improvement.
    Correlation {
        #[command(flatten)]
        run: RunArgs,
    },
    /// QAOA against HQW on 12-vertex Max-Cut or 10-vertex MIS.
    Scale {
        #[arg(long, value_enum, default_value = "maxcut")]
        problem: ProblemArg,
        #[command(flatten)]
        run: RunArgs,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum ProblemArg {
    Maxcut,
    Mis,
}

impl From<ProblemArg> for ProblemKind {
    fn from(p: ProblemArg) -> Self {
        match p {
            ProblemArg::Maxcut => ProblemKind::MaxCut,
            ProblemArg::Mis => ProblemKind::Mis,
        }
    }
}

#[derive(Args)]
struct RunArgs {
    #[arg(long)]
    count: Option<usize>,
    #[arg(long)]
    restarts: Option<usize>,
    #[arg(long)]
    steps: Option<usize>,
    /// QAOA depth p for comparisons.
    #[arg(long)]
    depth: Option<usize>,
    /// Comma-separated depths for sweeps, e.g. 1,2,3,4.
    #[arg(long, value_delimiter = ',')]
    depths: Option<Vec<usize>>,
    /// Edge-list files to use instead of generated graphs.
    #[arg(long = "graph", num_args = 1..)]
    graphs: Vec<PathBuf>,
    #[arg(long)]
    traces: bool,
}

#[derive(Args)]
struct GraphArgs {
    /// Edge-list file.
    #[arg(long)]
    graph: Option<PathBuf>,
    /// Inline edges, e.g. 0-1,1-2.
    #[arg(long, conflicts_with = "graph")]
    edges: Option<String>,
}

/// Failed self-checks; exit code 2.
#[derive(Debug)]
struct InvariantViolation(String);

impl std::fmt::Display for InvariantViolation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "invariant violated: {}", self.0)
    }
}

impl std::error::Error for InvariantViolation {}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            if e.downcast_ref::<InvariantViolation>().is_some() {
                ExitCode::from(2)
            } else {
                ExitCode::from(1)
            }
        }
    }
}

fn run(cli: Cli) -> Result<()> {
    if let Some(n) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .context("configuring thread pool")?;
    }
    match &cli.command {
        Command::Bench(b) => bench(&cli, b),
        Command::Algebra { graph, json } => {
            let g = graph.resolve(Graph::complete(3))?;
            let (_, hc) = maxcut_hamiltonian(&g)?;
            let report = algebra_report(&hc, &mixer_hamiltonian(g.n_vertices())?)?;
            if *json {
                println!("{}", serde_json::to_string_pretty(&report)?);
            } else {
                println!("{report}");
            }
            if !report.decomposition.holds() {
                bail!(InvariantViolation(
                    "dimension identity or membership check failed".into()
                ));
            }
            if report.dimensions.violated() {
                bail!(InvariantViolation("dim g_H > dim g_Q does not hold".into()));
            }
            Ok(())
        }
        Command::Negativity { graph, gamma, beta } => {
            let seed = cli.seed.unwrap_or(0);
            let g = graph
                .resolve_with(|| random_connected_graph(8, 18, 23, seed).map_err(Into::into))?;
            let (_, hc) = maxcut_hamiltonian(&g)?;
            let hb = mixer_hamiltonian(g.n_vertices())?;
            println!("vertices {} edges {}", g.n_vertices(), g.n_edges());
            println!("N_min      {:.12}", jordan_negativity(&hc, &hb)?);
            match sectional_curvature(&hc, &hb) {
                Ok(k) => println!("curvature  {k:.12e}"),
                Err(e) => println!("curvature  undefined ({e})"),
            }
            if g.n_vertices() <= 8 {
                let (t, b) = taylor_bch_residuals(&hc, &hb, *gamma, *beta)?;
                println!(
                    "taylor residual {t:.6e}  bch residual {b:.6e}  (gamma {gamma}, beta {beta})"
                );
            }
            Ok(())
        }
        Command::Pmp {
            graph,
            schedule,
            dt,
        } => {
            let g = graph.resolve(Graph::unweighted(2, &[(0, 1)])?)?;
            let schedule = match schedule {
                Some(p) => ControlSchedule::from_json(
                    &std::fs::read_to_string(p)
                        .with_context(|| format!("reading {}", p.display()))?,
                )?,
                None => ControlSchedule::new(vec![
                    ControlInterval {
                        duration: 0.4,
                        u: 0.0,
                        axis: Some([0.0, 1.0, 0.0]),
                    },
                    ControlInterval {
                        duration: 0.5,
                        u: 1.0,
                        axis: None,
                    },
                    ControlInterval {
                        duration: 0.3,
                        u: 0.5,
                        axis: None,
                    },
                ])?,
            };
            let (diag, _) = maxcut_hamiltonian(&g)?;
            let hb = mixer_hamiltonian(g.n_vertices())?.to_dense();
            let psi0 = init_plus_state(g.n_vertices(), true)?.to_cvector();
            let report = pmp_sweep(&psi0, &schedule, *dt, &diag.to_dense(), &hb)?;
            let dir = cli.out.join("pmp");
            std::fs::create_dir_all(&dir)?;
            let path = dir.join("trajectory.csv");
            report.save_csv(&path)?;
            let std = report.axis_std();
            println!("objective {:.12}", report.objective);
            println!("conservation drift {:.3e}", report.conservation_drift);
            println!(
                "grid points {} (degenerate {})",
                report.rows.len(),
                report.n_degenerate
            );
            println!(
                "axis std  x {:.4}  y {:.4}  z {:.4}",
                std[0], std[1], std[2]
            );
            println!("wrote {}", path.display());
            if report.conservation_drift > 1e-8 {
                bail!(InvariantViolation(format!(
                    "adjoint pairing drifted by {:.3e}",
                    report.conservation_drift
                )));
            }
            Ok(())
        }
    }
}

fn bench(cli: &Cli, b: &Bench) -> Result<()> {
    let (base, run) = match b {
        Bench::Maxcut { edges, run } => {
            let (lo, hi) = parse_range(edges)?;
            (BenchmarkConfig::maxcut_class(lo, hi), run)
        }
        Bench::Mis { run } => (BenchmarkConfig::components(ProblemKind::Mis), run),
        Bench::Components { problem, run } => (BenchmarkConfig::components((*problem).into()), run),
        Bench::Correlation { run } => (BenchmarkConfig::correlation(19), run),
        Bench::Scale { problem, run } => (BenchmarkConfig::scalability((*problem).into()), run),
    };
    let cfg = configure(cli, base, run)?;
    match b {
        Bench::Maxcut { .. } => {
            let t = run_maxcut_benchmark(&cfg)?;
            let s = &t.summary;
            println!(
                "graphs {}  restarts {}  p = {} vs {} steps",
                s.n_graphs,
                cfg.optimizer.restarts,
                cfg.qaoa_depth,
                cfg.hqw_steps()
            );
            println!("{:<28}{:>12}{:>12}", "", "QAOA", "HQW");
            println!(
                "{:<28}{:>12.6}{:>12.6}",
                "average 1 - r", s.avg_gap_qaoa, s.avg_gap_hqw
            );
            println!("{:<28}{:>12}{:>12}", "wins", s.wins_qaoa, s.wins_hqw);
            println!("{:<28}{:>12}", "ties", s.ties);
            println!("{:<28}{:>24.1}%", "HQW win rate", 100.0 * s.win_rate_hqw);
            println!(
                "{:<28}{:>24}",
                "mean relative improvement",
                pct(s.mean_rel_improvement_pct)
            );
            println!(
                "{:<28}{:>24}",
                "median relative improvement",
                pct(s.median_rel_improvement_pct)
            );
            println!(
                "{:<28}{:>12.6}{:>12.6}",
                "average best 1 - r", s.best.avg_best_gap_qaoa, s.best.avg_best_gap_hqw
            );
            let total = s.wins_qaoa + s.wins_hqw + s.ties;
            if total != s.n_graphs {
                bail!(InvariantViolation(format!(
                    "{total} outcomes for {} graphs",
                    s.n_graphs
                )));
            }
        }
        Bench::Mis { .. } | Bench::Components { .. } => print_sweep(&run_component_analysis(&cfg)?),
        Bench::Correlation { .. } => {
            let r = run_negativity_correlation(&cfg)?;
            println!(
                "{:>5} {:>5} {:>12} {:>10} {:>10} {:>9}",
                "graph", "edges", "N_min", "qaoa gap", "hqw gap", "impr %"
            );
            for row in &r.rows {
                println!(
                    "{:>5} {:>5} {:>12.6e} {:>10.6} {:>10.6} {:>9}",
                    row.graph_id,
                    row.n_edges,
                    row.n_min,
                    row.qaoa_mean_gap,
                    row.hqw_mean_gap,
                    pct(row.rel_improvement_pct)
                );
            }
            match (&r.fit, &r.degenerate) {
                (Some(f), _) => println!(
                    "r = {:.4}  fit y = {:.4} x + {:.4}  n = {}  p (t-test) = {}",
                    f.r,
                    f.slope,
                    f.intercept,
                    f.n,
                    f.p_value
                        .map(|p| format!("{p:.3e}"))
                        .unwrap_or_else(|| "n/a".into())
                ),
                (None, Some(why)) => println!("fit undefined: {why}"),
                (None, None) => println!("fit undefined"),
            }
            if !r.excluded.is_empty() {
                println!("excluded (undefined improvement): {:?}", r.excluded);
            }
        }
        Bench::Scale { .. } => {
            let r = run_scalability(&cfg)?;
            print_sweep(&r.sweep);
        }
    }
    if let Some(dir) = &cfg.out_dir {
        println!("wrote {}", dir.join(&cfg.name).display());
    }
    Ok(())
}

fn configure(cli: &Cli, base: BenchmarkConfig, run: &RunArgs) -> Result<BenchmarkConfig> {
    let mut cfg = match &cli.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .with_context(|| format!("reading {}", path.display()))?;
            serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?
        }
        None => base,
    };
    if cli.full_scale {
        cfg = cfg.full_scale();
    }
    if let Some(s) = cli.seed {
        cfg.optimizer.base_seed = s;
    }
    cfg.out_dir = Some(cli.out.clone());
    if let Some(c) = run.count {
        cfg.count = c;
    }
    if let Some(r) = run.restarts {
        cfg.optimizer.restarts = r;
    }
    if let Some(s) = run.steps {
        cfg.optimizer.steps = s;
    }
    if let Some(p) = run.depth {
        cfg.qaoa_depth = p;
    }
    if let Some(d) = &run.depths {
        cfg.depths = d.clone();
    }
    if !run.graphs.is_empty() {
        cfg.graph_files = run.graphs.clone();
    }
    cfg.emit_traces |= run.traces;
    cfg.validate()?;
    Ok(cfg)
}

fn print_sweep(s: &DepthSweep) {
    println!("ground energy {}  levels {:?}", s.ground_energy, s.levels);
    println!(
        "{:>5} {:>9} {:>12} {:>10}  projections",
        "depth", "algo", "mean", "std"
    );
    for p in &s.points {
        let proj: Vec<String> = p.projections.iter().map(|x| format!("{x:.3}")).collect();
        println!(
            "{:>5} {:>9} {:>12.6} {:>10.6}  {}",
            p.depth,
            p.algo,
            p.mean_energy,
            p.std_energy,
            proj.join(" ")
        );
    }
}

fn pct(v: Option<f64>) -> String {
    v.map(|x| format!("{x:.2}%"))
        .unwrap_or_else(|| "undefined".into())
}

fn parse_range(s: &str) -> Result<(usize, usize)> {
    let (a, b) = s
        .split_once('-')
        .ok_or_else(|| anyhow!("expected a range like 18-23, got {s:?}"))?;
    Ok((a.trim().parse()?, b.trim().parse()?))
}

impl GraphArgs {
    fn resolve(&self, default: Graph) -> Result<Graph> {
        self.resolve_with(|| Ok(default))
    }

    fn resolve_with(&self, default: impl FnOnce() -> Result<Graph>) -> Result<Graph> {
        if let Some(p) = &self.graph {
            return load(p);
        }
        let Some(list) = &self.edges else {
            return default();
        };
        let mut edges = Vec::new();
        for tok in list.split(',').filter(|t| !t.trim().is_empty()) {
            edges.push(parse_range(tok).with_context(|| format!("bad edge {tok:?}"))?);
        }
        let n = edges.iter().map(|&(a, b)| a.max(b) + 1).max().unwrap_or(0);
        Ok(Graph::unweighted(n, &edges)?)
    }
}

fn load(p: &Path) -> Result<Graph> {
    Graph::load(p).with_context(|| format!("loading {}", p.display()))
}
