//! The labeled hypercube walk graph of a small Max-Cut instance, and one
//! generic coined-walk step on it matching the structured HQW simulator.

use anyhow::Result;
use hqw::ansatz::{hqw_state, HqwParams, HqwStep};
use hqw::dense::{real_to_complex, CMatrix};
use hqw::graphs::{hypercube_walk_graph, Graph, WalkLabel};
use hqw::hamiltonian::maxcut_hamiltonian;
use hqw::simulator::{general_hqw_step, init_plus_state};
use hqw::Complex64;
use std::f64::consts::PI;

fn main() -> Result<()> {
    let g = Graph::cycle(3)?;
    let (diag, _) = maxcut_hamiltonian(&g)?;
    let walk = hypercube_walk_graph(&diag)?;
    println!(
        "hypercube on {} qubits: {} edges",
        walk.n_qubits(),
        walk.base().n_edges()
    );
    for (x, w) in walk.self_loops() {
        println!("  vertex {x:03b}: self-loop weight {w}");
    }
    println!("label of (000, 001): {:?}", walk.edge_label(0, 1));
    println!("label of (000, 011): {:?}", walk.edge_label(0, 3));

    let t = 0.37;
    let subgraphs = [
        real_to_complex(&walk.subgraph_matrix(WalkLabel::Hypercube)),
        real_to_complex(&walk.subgraph_matrix(WalkLabel::SelfLoop)),
    ];
    let one = Complex64::new(1.0, 0.0);
    let x_coin = CMatrix::from_row_slice(
        2,
        2,
        &[Complex64::new(0.0, 0.0), one, one, Complex64::new(0.0, 0.0)],
    );
    let psi0 = init_plus_state(3, true)?.to_cvector();
    let generic = general_hqw_step(&psi0, &x_coin, &subgraphs, t)?;

    let step = HqwParams::new(vec![HqwStep {
        gamma: t,
        beta: t,
        theta: PI,
        phi: 0.0,
        delta: PI,
    }])?;
    let structured = hqw_state(&step, &diag, 3)?.to_cvector();
    println!(
        "|generic - structured| = {:.3e}",
        (generic - structured).norm()
    );
    Ok(())
}
