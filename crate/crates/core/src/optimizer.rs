//! Adjoint gradients, Adam, and the seeded multi-restart harness.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::ansatz::{AnsatzKind, Circuit, Gate};
use crate::error::{HqwError, Result};
use crate::graphs::{max_cut_value, mis_optimum, Graph};
use crate::hamiltonian::{maxcut_hamiltonian, mis_hamiltonian, DiagonalHamiltonian};
use crate::simulator::{coin_adjoint, u3_matrix, u3_partials, StateVector};

/// Gap differences below this count as equal performance.
pub const TIE_TOL: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct OptimizerConfig {
    pub learning_rate: f64,
    pub steps: usize,
    pub restarts: usize,
    pub init_low: f64,
    pub init_high: f64,
    pub adam_beta1: f64,
    pub adam_beta2: f64,
    pub adam_eps: f64,
    pub base_seed: u64,
    /// Record the energy every this many steps; 0 disables the trace.
    pub trace_stride: usize,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        Self {
            learning_rate: 0.1,
            steps: 300,
            restarts: 100,
            init_low: 0.0,
            init_high: std::f64::consts::TAU,
            adam_beta1: 0.9,
            adam_beta2: 0.999,
            adam_eps: 1e-8,
            base_seed: 0,
            trace_stride: 10,
        }
    }
}

impl OptimizerConfig {
    pub fn validate(&self) -> Result<()> {
        if self.steps == 0 || self.restarts == 0 {
            return Err(HqwError::Parameter(
                "steps and restarts must be at least 1".into(),
            ));
        }
        if !(self.init_low < self.init_high) {
            return Err(HqwError::Parameter(
                "init_low must be below init_high".into(),
            ));
        }
        if !(self.learning_rate > 0.0) {
            return Err(HqwError::Parameter("learning rate must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ProblemKind {
    MaxCut,
    Mis,
}

/// A problem instance with the diagonal the optimizer minimizes.
#[derive(Debug, Clone)]
pub struct Problem {
    pub kind: ProblemKind,
    pub graph: Graph,
    /// `H_c` itself.
    pub cost: DiagonalHamiltonian,
    /// `−H_c` for Max-Cut, `H_c` for MIS.
    pub objective: DiagonalHamiltonian,
    /// Max-Cut value, or the maximum independent set size.
    pub optimum: f64,
}

impl Problem {
    pub fn maxcut(graph: Graph) -> Result<Self> {
        let (cost, _) = maxcut_hamiltonian(&graph)?;
        let optimum = max_cut_value(&graph)?;
        Ok(Self {
            kind: ProblemKind::MaxCut,
            objective: cost.negated(),
            cost,
            optimum,
            graph,
        })
    }

    pub fn mis(graph: Graph, lambda: f64) -> Result<Self> {
        let cost = mis_hamiltonian(&graph, lambda)?;
        let optimum = mis_optimum(&graph)? as f64;
        Ok(Self {
            kind: ProblemKind::Mis,
            objective: cost.clone(),
            cost,
            optimum,
            graph,
        })
    }

    pub fn n_qubits(&self) -> usize {
        self.graph.n_vertices()
    }

    /// `1 − r` for an objective value; `None` for MIS.
    pub fn gap(&self, objective_value: f64) -> Result<Option<f64>> {
        match self.kind {
            ProblemKind::MaxCut => approximation_gap(-objective_value, self.optimum).map(Some),
            ProblemKind::Mis => Ok(None),
        }
    }
}

/// `1 − achieved / optimum`.
pub fn approximation_gap(achieved: f64, optimum: f64) -> Result<f64> {
    if optimum <= 0.0 {
        return Err(HqwError::Domain(format!(
            "approximation ratio undefined for optimum {optimum}"
        )));
    }
    Ok(1.0 - achieved / optimum)
}

/// `⟨ψ(θ)|D|ψ(θ)⟩`.
pub fn energy(circuit: &Circuit, diag: &DiagonalHamiltonian, params: &[f64]) -> Result<f64> {
    circuit.run(params, diag)?.expectation_diagonal(diag)
}

/// Energy and exact gradient by a reverse sweep that uncomputes the state
/// alongside the co-state.
pub fn energy_and_gradient(
    circuit: &Circuit,
    diag: &DiagonalHamiltonian,
    params: &[f64],
) -> Result<(f64, Vec<f64>)> {
    let mut psi = circuit.run(params, diag)?;
    let e = psi.expectation_diagonal(diag)?;
    let mut lambda = psi.diagonal_applied(diag, 1.0);
    let mut grad = vec![0.0; params.len()];
    for &gate in circuit.gates().iter().rev() {
        match gate {
            Gate::Diagonal { param, control } => {
                grad[param] +=
                    2.0 * StateVector::diagonal_overlap(&lambda, &psi, diag, control)?.im;
                circuit.apply_gate(&mut psi, gate, params, diag, -1.0)?;
                circuit.apply_gate(&mut lambda, gate, params, diag, -1.0)?;
            }
            Gate::Mixer { param, control } => {
                grad[param] += 2.0 * StateVector::mixer_overlap(&lambda, &psi, control)?.im;
                circuit.apply_gate(&mut psi, gate, params, diag, -1.0)?;
                circuit.apply_gate(&mut lambda, gate, params, diag, -1.0)?;
            }
            Gate::Coin { theta, phi, delta } => {
                let (t, p, d) = (params[theta], params[phi], params[delta]);
                let inv = coin_adjoint(&u3_matrix(t, p, d));
                psi.apply_coin_matrix(&inv)?;
                for (idx, m) in [theta, phi, delta].into_iter().zip(u3_partials(t, p, d)) {
                    grad[idx] += 2.0 * StateVector::coin_overlap(&lambda, &psi, &m)?.re;
                }
                lambda.apply_coin_matrix(&inv)?;
            }
        }
    }
    Ok((e, grad))
}

pub fn gradient(circuit: &Circuit, diag: &DiagonalHamiltonian, params: &[f64]) -> Result<Vec<f64>> {
    energy_and_gradient(circuit, diag, params).map(|(_, g)| g)
}

#[derive(Debug, Clone, PartialEq)]
pub struct AdamState {
    m: Vec<f64>,
    v: Vec<f64>,
    t: i32,
}

impl AdamState {
    pub fn new(n: usize) -> Self {
        Self {
            m: vec![0.0; n],
            v: vec![0.0; n],
            t: 0,
        }
    }

    pub fn step_count(&self) -> i32 {
        self.t
    }
}

/// One bias-corrected Adam update, descending along `grads`.
pub fn adam_step(params: &mut [f64], grads: &[f64], state: &mut AdamState, cfg: &OptimizerConfig) {
    state.t += 1;
    let (b1, b2) = (cfg.adam_beta1, cfg.adam_beta2);
    let c1 = 1.0 - b1.powi(state.t);
    let c2 = 1.0 - b2.powi(state.t);
    for i in 0..params.len() {
        let g = grads[i];
        state.m[i] = b1 * state.m[i] + (1.0 - b1) * g;
        state.v[i] = b2 * state.v[i] + (1.0 - b2) * g * g;
        let mh = state.m[i] / c1;
        let vh = state.v[i] / c2;
        params[i] -= cfg.learning_rate * mh / (vh.sqrt() + cfg.adam_eps);
    }
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

fn fnv1a(s: &str) -> u64 {
    s.bytes().fold(0xcbf2_9ce4_8422_2325, |h, b| {
        (h ^ b as u64).wrapping_mul(0x0000_0100_0000_01b3)
    })
}

/// Stream seed for one restart.
pub fn derive_seed(base_seed: u64, graph_id: u64, tag: &str, restart: u64) -> u64 {
    [graph_id, fnv1a(tag), restart]
        .into_iter()
        .fold(splitmix64(base_seed), |h, x| splitmix64(h ^ splitmix64(x)))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub graph_id: usize,
    pub algo: String,
    pub restart: usize,
    pub seed: u64,
    /// Objective at the final iterate (`⟨−H_c⟩` for Max-Cut).
    pub final_energy: f64,
    pub one_minus_r: Option<f64>,
    /// Lowest objective seen along the run.
    pub best_energy: f64,
    pub n_steps: usize,
    pub n_params: usize,
    pub energy_trace: Vec<f64>,
    pub final_params: Vec<f64>,
}

/// Minimizes `problem.objective` from a seeded uniform start.
pub fn optimize_run(
    kind: AnsatzKind,
    problem: &Problem,
    cfg: &OptimizerConfig,
    graph_id: usize,
    restart: usize,
) -> Result<RunRecord> {
    cfg.validate()?;
    let circuit = Circuit::new(kind, problem.n_qubits())?;
    let seed = derive_seed(cfg.base_seed, graph_id as u64, kind.tag(), restart as u64);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut params: Vec<f64> = (0..circuit.n_params())
        .map(|_| rng.random_range(cfg.init_low..cfg.init_high))
        .collect();
    let mut adam = AdamState::new(params.len());
    let mut trace = Vec::new();
    let mut best = f64::INFINITY;
    for step in 0..cfg.steps {
        let (e, g) = energy_and_gradient(&circuit, &problem.objective, &params)?;
        best = best.min(e);
        if cfg.trace_stride > 0 && step % cfg.trace_stride == 0 {
            trace.push(e);
        }
        adam_step(&mut params, &g, &mut adam, cfg);
    }
    let final_energy = energy(&circuit, &problem.objective, &params)?;
    best = best.min(final_energy);
    if cfg.trace_stride > 0 {
        trace.push(final_energy);
    }
    Ok(RunRecord {
        graph_id,
        algo: kind.tag().to_string(),
        restart,
        seed,
        final_energy,
        one_minus_r: problem.gap(final_energy)?,
        best_energy: best,
        n_steps: cfg.steps,
        n_params: circuit.n_params(),
        energy_trace: trace,
        final_params: params,
    })
}

/// All restarts for one graph and ansatz, in restart order.
pub fn run_restarts(
    kind: AnsatzKind,
    problem: &Problem,
    cfg: &OptimizerConfig,
    graph_id: usize,
) -> Result<Vec<RunRecord>> {
    (0..cfg.restarts)
        .into_par_iter()
        .map(|r| optimize_run(kind, problem, cfg, graph_id, r))
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Aggregate {
    pub mean: f64,
    pub best: f64,
    /// Sample standard deviation; 0 for a single value.
    pub std: f64,
    pub n: usize,
}

pub fn aggregate(values: &[f64]) -> Result<Aggregate> {
    if values.is_empty() {
        return Err(HqwError::Parameter("nothing to aggregate".into()));
    }
    let n = values.len();
    let mean = values.iter().sum::<f64>() / n as f64;
    let best = values.iter().copied().fold(f64::INFINITY, f64::min);
    let std = if n > 1 {
        (values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1) as f64).sqrt()
    } else {
        0.0
    };
    Ok(Aggregate {
        mean: mean.clamp(
            best,
            values.iter().copied().fold(f64::NEG_INFINITY, f64::max),
        ),
        best,
        std,
        n,
    })
}

/// Aggregates `1 − r` over records (Max-Cut only).
pub fn aggregate_gaps(records: &[RunRecord]) -> Result<Aggregate> {
    let gaps = records
        .iter()
        .map(|r| {
            r.one_minus_r
                .ok_or_else(|| HqwError::Parameter("record has no 1 − r".into()))
        })
        .collect::<Result<Vec<_>>>()?;
    aggregate(&gaps)
}

/// `((1−r)_QAOA − (1−r)_HQW) / (1−r)_QAOA × 100`; `None` when undefined.
pub fn relative_improvement(qaoa_gap: f64, hqw_gap: f64) -> Option<f64> {
    if qaoa_gap <= 1e-12 {
        return None;
    }
    Some((qaoa_gap - hqw_gap) / qaoa_gap * 100.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Outcome {
    Qaoa,
    Hqw,
    Tie,
}

/// Winner by smaller gap, with differences under [`TIE_TOL`] tied.
pub fn compare_gaps(qaoa_gap: f64, hqw_gap: f64) -> Outcome {
    compare_gaps_with(qaoa_gap, hqw_gap, TIE_TOL)
}

pub fn compare_gaps_with(qaoa_gap: f64, hqw_gap: f64, tie_tol: f64) -> Outcome {
    let d = qaoa_gap - hqw_gap;
    if d.abs() < tie_tol || relative_improvement(qaoa_gap, hqw_gap).is_none() {
        Outcome::Tie
    } else if d > 0.0 {
        Outcome::Hqw
    } else {
        Outcome::Qaoa
    }
}
