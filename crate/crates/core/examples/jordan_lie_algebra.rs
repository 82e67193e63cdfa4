//! Lie closure of the QAOA generators against the Jordan-Lie closure that
//! the coin-controlled HQW generators span.

use anyhow::Result;
use hqw::algebra::{
    algebra_report, bracket_jordan, bracket_lie, decomposition_check, AlgebraElement,
};
use hqw::graphs::Graph;
use hqw::hamiltonian::{maxcut_hamiltonian, mixer_hamiltonian};
use hqw::pauli::PauliOperator;

fn main() -> Result<()> {
    let z = PauliOperator::from_labels(&[("Z", 1.0)])?;
    let x = PauliOperator::from_labels(&[("X", 1.0)])?;
    let (iz, ix) = (
        AlgebraElement::new(z.clone()),
        AlgebraElement::new(x.clone()),
    );
    println!("[iZ, iX] = {}", bracket_lie(&iz, &ix)?);
    println!("Jordan(iZ, iZ) = {}", bracket_jordan(&iz, &iz)?);

    let t = decomposition_check(&z, &x)?;
    println!(
        "single qubit (Z, X): dim L_Q {}, dim K_Q {}, dim g_H {} -> identity {}",
        t.dim_l_q, t.dim_k_q, t.dim_g_h, t.dimension_identity
    );

    for g in [Graph::unweighted(2, &[(0, 1)])?, Graph::cycle(3)?] {
        let (_, hc) = maxcut_hamiltonian(&g)?;
        println!(
            "\n{}",
            algebra_report(&hc, &mixer_hamiltonian(g.n_vertices())?)?
        );
    }
    Ok(())
}
