//! An HQW state as a coherent sum over coin paths, each path applying a
//! word of cost and mixer evolutions to |+>^n.

use anyhow::Result;
use hqw::ansatz::{hqw_path_expansion, hqw_state, HqwParams, HqwStep};
use hqw::graphs::Graph;
use hqw::hamiltonian::maxcut_hamiltonian;

fn main() -> Result<()> {
    let g = Graph::complete(3);
    let (diag, _) = maxcut_hamiltonian(&g)?;
    let params = HqwParams::new(vec![
        HqwStep {
            gamma: 0.4,
            beta: 0.9,
            theta: 1.1,
            phi: 0.3,
            delta: 2.0,
        },
        HqwStep {
            gamma: 1.3,
            beta: 0.2,
            theta: 2.2,
            phi: 1.5,
            delta: 0.1,
        },
        HqwStep {
            gamma: 0.7,
            beta: 0.6,
            theta: 0.8,
            phi: 2.6,
            delta: 1.2,
        },
    ])?;

    let (sum, terms) = hqw_path_expansion(&params, &diag, 3)?;
    for t in &terms {
        println!("{t}");
    }
    let direct = hqw_state(&params, &diag, 3)?;
    let diff = sum
        .amplitudes()
        .iter()
        .zip(direct.amplitudes())
        .map(|(a, b)| (a - b).norm())
        .fold(0.0, f64::max);
    let weight: f64 = terms.iter().map(|t| t.amplitude.norm_sqr()).sum();
    println!("paths {}  sum |alpha|^2 = {weight:.6}", terms.len());
    println!("max |path sum - circuit| = {diff:.3e}");
    Ok(())
}
