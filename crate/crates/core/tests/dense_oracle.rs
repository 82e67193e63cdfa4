//! Statevector kernels, circuits and Hamiltonians against dense matrices.

mod common;

use common::*;
use hqw::ansatz::{hqw_state, qaoa_state, HqwParams, HqwStep, QaoaParams};
use hqw::graphs::{hypercube_walk_graph, random_connected_graph, Graph};
use hqw::hamiltonian::{maxcut_hamiltonian, mis_hamiltonian, mis_pauli, mixer_hamiltonian};
use hqw::simulator::{init_plus_state, StateVector};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn small_graph(n: usize, seed: u64) -> Graph {
    let full = n * (n - 1) / 2;
    random_connected_graph(n, n - 1, full, seed).unwrap()
}

fn random_state(n: usize, coin: bool, rng: &mut impl Rng) -> StateVector {
    let dim = (1usize << n) << coin as usize;
    let mut v: Vec<_> = (0..dim)
        .map(|_| c(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5))
        .collect();
    let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    v.iter_mut().for_each(|z| *z /= norm);
    StateVector::from_amplitudes(v, n, coin).unwrap()
}

#[test]
fn pauli_labels_match_kronecker_products() {
    let op = hqw::pauli::PauliOperator::from_labels(&[("XIZ", 0.5), ("YYI", -1.25), ("IZX", 2.0)])
        .unwrap();
    let expect = dense_label("XIZ") * c(0.5, 0.0)
        + dense_label("YYI") * c(-1.25, 0.0)
        + dense_label("IZX") * c(2.0, 0.0);
    assert!(max_abs(&(op.to_dense() - expect)) < 1e-15);
}

#[test]
fn maxcut_pauli_matches_diagonal_on_benchmark_instances() {
    for (seed, (lo, hi)) in [(18, 23), (24, 28), (14, 14)].into_iter().enumerate() {
        let g = random_connected_graph(8, lo, hi, seed as u64).unwrap();
        let (diag, op) = maxcut_hamiltonian(&g).unwrap();
        assert!(max_abs(&(op.to_dense() - diag.to_dense())) < 1e-12);
    }
    let k8 = Graph::complete(8);
    let (diag, op) = maxcut_hamiltonian(&k8).unwrap();
    assert!(max_abs(&(op.to_dense() - diag.to_dense())) < 1e-12);
    assert!(max_abs(&(dense_maxcut(&k8) - diag.to_dense())) < 1e-12);
}

#[test]
fn mis_pauli_matches_diagonal() {
    let g = random_connected_graph(8, 19, 19, 3).unwrap();
    let diag = mis_hamiltonian(&g, 1.0).unwrap();
    let op = mis_pauli(&g, 1.0).unwrap();
    assert!(max_abs(&(op.to_dense() - diag.to_dense())) < 1e-12);
}

#[test]
fn walk_graph_adjacency_is_the_mixer() {
    for n in 1..=4 {
        let g = small_graph(n.max(2), n as u64);
        let g = if n == 1 {
            Graph::new(1, []).unwrap()
        } else {
            g
        };
        let (diag, _) = maxcut_hamiltonian(&g).unwrap();
        let walk = hypercube_walk_graph(&diag).unwrap();
        let hb = dense_mixer(n);
        let dim = 1 << n;
        for a in 0..dim {
            for b in 0..dim {
                let adjacent = a != b && walk.edge_label(a, b).is_some();
                assert_eq!(adjacent, hb[(a, b)].re == 1.0, "n={n} ({a},{b})");
            }
        }
    }
}

#[test]
fn mixer_pauli_matches_dense() {
    for n in 1..=4 {
        assert!(max_abs(&(mixer_hamiltonian(n).unwrap().to_dense() - dense_mixer(n))) < 1e-15);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn qaoa_circuit_matches_dense(n in 2usize..=4, seed in any::<u64>(), p in 1usize..=3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = small_graph(n, seed);
        let (diag, _) = maxcut_hamiltonian(&g).unwrap();
        let layers: Vec<(f64, f64)> = (0..p).map(|_| (rng.random_range(-3.0..3.0), rng.random_range(-3.0..3.0))).collect();
        let s = qaoa_state(&QaoaParams::new(layers.clone()).unwrap(), &diag, n).unwrap();
        let oracle = qaoa_dense(&dense_maxcut(&g), &layers);
        prop_assert!(max_abs_diff(s.amplitudes(), oracle.as_slice()) < 1e-11);
    }

    #[test]
    fn hqw_circuit_matches_dense(n in 1usize..=4, seed in any::<u64>(), steps in 1usize..=4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = if n == 1 { Graph::new(1, []).unwrap() } else { small_graph(n, seed) };
        let (diag, _) = maxcut_hamiltonian(&g).unwrap();
        let raw: Vec<[f64; 5]> = (0..steps).map(|_| std::array::from_fn(|_| rng.random_range(0.0..std::f64::consts::TAU))).collect();
        let params = HqwParams::new(raw.iter().map(|&[gamma, beta, theta, phi, delta]| HqwStep { gamma, beta, theta, phi, delta }).collect()).unwrap();
        let s = hqw_state(&params, &diag, n).unwrap();
        let oracle = hqw_dense(&dense_maxcut(&g), &raw);
        prop_assert!(max_abs_diff(s.amplitudes(), oracle.as_slice()) < 1e-11);
    }

    #[test]
    fn controlled_kernels_match_dense(n in 1usize..=4, seed in any::<u64>(), t in -4.0f64..4.0, cv in any::<bool>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = if n == 1 { Graph::new(1, []).unwrap() } else { small_graph(n, seed) };
        let (diag, _) = maxcut_hamiltonian(&g).unwrap();
        let s0 = random_state(n, true, &mut rng);
        let v0 = s0.to_cvector();
        let proj = projector(cv as u8);

        let mut s = s0.clone();
        s.apply_controlled_diagonal(&diag, t, cv).unwrap();
        let want = expm_i(&kron(&proj, &dense_maxcut(&g)), t) * &v0;
        prop_assert!(max_abs_diff(s.amplitudes(), want.as_slice()) < 1e-11);

        let mut s = s0.clone();
        s.apply_controlled_mixer(t, cv).unwrap();
        let want = expm_i(&kron(&proj, &dense_mixer(n)), t) * &v0;
        prop_assert!(max_abs_diff(s.amplitudes(), want.as_slice()) < 1e-11);

        let (th, ph, de) = (rng.random_range(0.0..6.3), rng.random_range(0.0..6.3), rng.random_range(0.0..6.3));
        let mut s = s0.clone();
        s.apply_coin_u3(th, ph, de).unwrap();
        let want = kron(&u3(th, ph, de), &identity(n)) * &v0;
        prop_assert!(max_abs_diff(s.amplitudes(), want.as_slice()) < 1e-12);
    }

    #[test]
    fn norm_is_preserved_over_random_sequences(n in 1usize..=5, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = if n == 1 { Graph::new(1, []).unwrap() } else { small_graph(n, seed) };
        let (diag, _) = maxcut_hamiltonian(&g).unwrap();
        let mut s = init_plus_state(n, true).unwrap();
        for _ in 0..100 {
            let t = rng.random_range(-3.0..3.0);
            match rng.random_range(0..6) {
                0 => s.apply_coin_u3(t, rng.random_range(0.0..6.3), rng.random_range(0.0..6.3)).unwrap(),
                1 => s.apply_controlled_diagonal(&diag, t, rng.random()).unwrap(),
                2 => s.apply_controlled_mixer(t, rng.random()).unwrap(),
                3 => s.apply_diagonal(&diag, t).unwrap(),
                _ => s.apply_mixer(t),
            }
            prop_assert!((s.norm() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn controlled_ops_leave_other_block_untouched(n in 1usize..=5, seed in any::<u64>(), t in -3.0f64..3.0, cv in any::<bool>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = if n == 1 { Graph::new(1, []).unwrap() } else { small_graph(n, seed) };
        let (diag, _) = maxcut_hamiltonian(&g).unwrap();
        let s0 = random_state(n, true, &mut rng);
        let mut a = s0.clone();
        a.apply_controlled_diagonal(&diag, t, cv).unwrap();
        let mut b = s0.clone();
        b.apply_controlled_mixer(t, cv).unwrap();
        let other = s0.block(!cv).unwrap();
        prop_assert_eq!(a.block(!cv).unwrap(), other);
        prop_assert_eq!(b.block(!cv).unwrap(), other);
    }

    #[test]
    fn expectation_ignores_coin_unitaries(n in 1usize..=5, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = if n == 1 { Graph::new(1, []).unwrap() } else { small_graph(n, seed) };
        let (diag, _) = maxcut_hamiltonian(&g).unwrap();
        let mut s = random_state(n, true, &mut rng);
        let before = s.expectation_diagonal(&diag).unwrap();
        s.apply_coin_u3(rng.random_range(0.0..6.3), rng.random_range(0.0..6.3), rng.random_range(0.0..6.3)).unwrap();
        prop_assert!((s.expectation_diagonal(&diag).unwrap() - before).abs() < 1e-12);
    }
}
