//! Depth-p QAOA is the all-X-coin HQW with 2p steps: odd steps carry γ,
//! even steps carry β, and the coin-0 block reproduces the QAOA state.

use std::f64::consts::TAU;

use anyhow::Result;
use hqw::ansatz::{hqw_state, qaoa_as_hqw, qaoa_reduction_check, qaoa_state, QaoaParams};
use hqw::graphs::random_connected_graph;
use hqw::hamiltonian::maxcut_hamiltonian;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn main() -> Result<()> {
    let g = random_connected_graph(4, 3, 6, 7)?;
    let (diag, _) = maxcut_hamiltonian(&g)?;
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let layers = (0..3)
        .map(|_| (rng.random_range(0.0..TAU), rng.random_range(0.0..TAU)))
        .collect();
    let q = QaoaParams::new(layers)?;
    let h = qaoa_as_hqw(&q);

    println!("graph: {} vertices, {} edges", g.n_vertices(), g.n_edges());
    println!("QAOA layers (gamma, beta): {:?}", q.layers());
    println!("HQW steps (gamma, beta, theta, phi, delta):");
    for s in h.steps() {
        println!(
            "  ({:.4}, {:.4}, {:.4}, {:.4}, {:.4})",
            s.gamma, s.beta, s.theta, s.phi, s.delta
        );
    }

    let qs = qaoa_state(&q, &diag, 4)?;
    let hs = hqw_state(&h, &diag, 4)?;
    let coin1: f64 = hs.block(true)?.iter().map(|a| a.norm_sqr()).sum();
    println!("<H_c> QAOA {:.12}", qs.expectation_diagonal(&diag)?);
    println!("<H_c> HQW  {:.12}", hs.expectation_diagonal(&diag)?);
    println!("coin-1 weight {coin1:.3e}");
    println!("block residual {:.3e}", qaoa_reduction_check(&q, &diag, 4)?);
    Ok(())
}
