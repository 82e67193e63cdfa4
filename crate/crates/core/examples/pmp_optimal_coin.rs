//! Forward and adjoint sweeps on a single edge, then the coin axis that
//! maximizes the control Hamiltonian at each grid point.

use anyhow::Result;
use hqw::control::{
    control_hamiltonian, integrate_adjoint, integrate_schrodinger, optimal_coin_axis, pmp_sweep,
    ControlInterval, ControlSchedule,
};
use hqw::graphs::Graph;
use hqw::hamiltonian::{maxcut_hamiltonian, mixer_hamiltonian};
use hqw::simulator::init_plus_state;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn main() -> Result<()> {
    let (diag, _) = maxcut_hamiltonian(&Graph::unweighted(2, &[(0, 1)])?)?;
    let hc = diag.to_dense();
    let hb = mixer_hamiltonian(2)?.to_dense();
    let psi0 = init_plus_state(2, true)?.to_cvector();
    let schedule = ControlSchedule::new(vec![
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
    ])?;
    let dt = 0.01;

    let report = pmp_sweep(&psi0, &schedule, dt, &hc, &hb)?;
    println!(
        "J = {:.10}, adjoint drift {:.2e}",
        report.objective, report.conservation_drift
    );
    println!("{:>6} {:>8} {:>8} {:>8}  argmax u", "t", "nx", "ny", "nz");
    for r in report.rows.iter().step_by(10) {
        println!(
            "{:>6.2} {:>8.4} {:>8.4} {:>8.4}  {}{}",
            r.t,
            r.axis[0],
            r.axis[1],
            r.axis[2],
            r.argmax_u,
            if r.degenerate { "  (degenerate)" } else { "" }
        );
    }

    // optimal axis against random unit axes at every non-degenerate point
    let (_, psis) = integrate_schrodinger(&psi0, &schedule, dt, &hc, &hb)?;
    let ks = integrate_adjoint(psis.last().unwrap(), &schedule, dt, &hc, &hb)?;
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut worst = f64::INFINITY;
    for (psi, k) in psis.iter().zip(&ks) {
        let Ok(axis) = optimal_coin_axis(psi, k) else {
            continue;
        };
        let best = control_hamiltonian(psi, k, 0.0, axis, &hc, &hb)?;
        for _ in 0..200 {
            let v: [f64; 3] = std::array::from_fn(|_| rng.random_range(-1.0..1.0));
            let n = v.iter().map(|a| a * a).sum::<f64>().sqrt();
            let other = control_hamiltonian(psi, k, 0.0, v.map(|a| a / n), &hc, &hb)?;
            worst = worst.min(best - other);
        }
    }
    println!("min over grid of H(optimal) - H(random) = {worst:.3e}");
    Ok(())
}
