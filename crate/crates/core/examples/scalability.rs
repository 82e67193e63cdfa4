//! QAOA against HQW on a 12-vertex, 30-edge Max-Cut instance (or a
//! 10-vertex MIS instance), with mean convergence traces.
//!
//! Usage: `cargo run --release --example scalability [maxcut|mis] [restarts] [out_dir]`

use anyhow::{bail, Result};
use hqw::bench::{run_scalability, BenchmarkConfig};
use hqw::optimizer::ProblemKind;

fn main() -> Result<()> {
    let mut args = std::env::args().skip(1);
    let problem = match args.next().as_deref() {
        None | Some("maxcut") => ProblemKind::MaxCut,
        Some("mis") => ProblemKind::Mis,
        Some(other) => bail!("unknown problem {other}"),
    };
    let mut cfg = BenchmarkConfig::scalability(problem);
    cfg.optimizer.restarts = args.next().map(|s| s.parse()).transpose()?.unwrap_or(4);
    cfg.depths = vec![1, 2];
    cfg.out_dir = args.next().map(Into::into);

    let r = run_scalability(&cfg)?;
    println!("ground energy {}", r.sweep.ground_energy);
    for p in &r.sweep.points {
        println!(
            "p = {}  {:>4}  mean {:.4}  std {:.4}",
            p.depth, p.algo, p.mean_energy, p.std_energy
        );
    }
    for (d, algo, step, e) in r.convergence.iter().filter(|c| c.2 % 50 == 0) {
        println!("p = {d}  {algo:>4}  step {step:>3}  mean objective {e:.4}");
    }
    Ok(())
}
