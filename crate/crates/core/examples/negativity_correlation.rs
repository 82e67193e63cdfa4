//! Jordan product negativity of (H_c, H_b) against the relative improvement
//! of HQW over QAOA on 8-vertex Max-Cut instances.
//!
//! Usage: `cargo run --release --example negativity_correlation [count] [out_dir]`

use anyhow::Result;
use hqw::bench::{run_negativity_correlation, BenchmarkConfig};

fn main() -> Result<()> {
    let mut args = std::env::args().skip(1);
    let count = args.next().map(|s| s.parse()).transpose()?.unwrap_or(12);
    let cfg = BenchmarkConfig {
        out_dir: args.next().map(Into::into),
        ..BenchmarkConfig::correlation(count)
    };
    let r = run_negativity_correlation(&cfg)?;
    for row in &r.rows {
        println!(
            "graph {:>2}  edges {:>2}  N_min {:+.6e}  improvement {}",
            row.graph_id,
            row.n_edges,
            row.n_min,
            row.rel_improvement_pct
                .map(|v| format!("{v:+.2}%"))
                .unwrap_or_else(|| "undefined".into())
        );
    }
    match r.fit {
        Some(f) => println!(
            "r = {:.4}, y = {:.4} x + {:.4} over {} points",
            f.r, f.slope, f.intercept, f.n
        ),
        None => println!("no fit: {}", r.degenerate.unwrap_or_default()),
    }
    Ok(())
}
