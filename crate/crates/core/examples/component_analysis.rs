//! Depth sweep of QAOA(p), HQW(2p) and the two interleaved QAOA variants
//! read off each optimized HQW run.
//!
//! Usage: `cargo run --release --example component_analysis [maxcut|mis] [out_dir]`

use anyhow::{bail, Result};
use hqw::bench::{run_component_analysis, BenchmarkConfig};
use hqw::optimizer::ProblemKind;

fn main() -> Result<()> {
    let mut args = std::env::args().skip(1);
    let problem = match args.next().as_deref() {
        None | Some("maxcut") => ProblemKind::MaxCut,
        Some("mis") => ProblemKind::Mis,
        Some(other) => bail!("unknown problem {other}"),
    };
    let cfg = BenchmarkConfig {
        out_dir: args.next().map(Into::into),
        ..BenchmarkConfig::components(problem)
    };
    let s = run_component_analysis(&cfg)?;
    println!(
        "ground energy {}  lowest levels {:?}",
        s.ground_energy, s.levels
    );
    println!(
        "{:>3} {:>9} {:>10} {:>8} {:>7}",
        "p", "algo", "mean", "std", "P(E1)"
    );
    for p in &s.points {
        println!(
            "{:>3} {:>9} {:>10.4} {:>8.4} {:>7.3}",
            p.depth, p.algo, p.mean_energy, p.std_energy, p.projections[0]
        );
    }
    Ok(())
}
