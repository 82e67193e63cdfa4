//! QAOA(p=2) against HQW(4 steps) on two classes of random 8-vertex graphs.
//!
//! Usage: `cargo run --release --example maxcut_benchmark [out_dir]`

use anyhow::Result;
use hqw::bench::{run_maxcut_benchmark, BenchmarkConfig};

fn main() -> Result<()> {
    let out = std::env::args().nth(1).map(Into::into);
    for (lo, hi) in [(18, 23), (24, 28)] {
        let cfg = BenchmarkConfig {
            out_dir: out.clone(),
            ..BenchmarkConfig::maxcut_class(lo, hi)
        };
        let t = run_maxcut_benchmark(&cfg)?;
        println!("class {lo}-{hi} edges");
        println!(
            "{:>5} {:>5} {:>10} {:>10} {:>10} {:>10} {:>8}",
            "graph", "edges", "qaoa mean", "hqw mean", "qaoa best", "hqw best", "impr %"
        );
        for r in &t.rows {
            println!(
                "{:>5} {:>5} {:>10.6} {:>10.6} {:>10.6} {:>10.6} {:>8.2}{}",
                r.graph_id,
                r.n_edges,
                r.qaoa.mean,
                r.hqw.mean,
                r.qaoa.best,
                r.hqw.best,
                r.rel_improvement_pct.unwrap_or(f64::NAN),
                if r.is_complete { "  (complete)" } else { "" }
            );
        }
        let s = &t.summary;
        println!(
            "avg gap qaoa {:.6}  hqw {:.6}  wins qaoa/hqw/tie {}/{}/{}  mean impr {:.2}%  median {:.2}%\n",
            s.avg_gap_qaoa,
            s.avg_gap_hqw,
            s.wins_qaoa,
            s.wins_hqw,
            s.ties,
            s.mean_rel_improvement_pct.unwrap_or(f64::NAN),
            s.median_rel_improvement_pct.unwrap_or(f64::NAN)
        );
    }
    Ok(())
}
