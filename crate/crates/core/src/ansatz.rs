//! QAOA and HQW circuits, the coin-path expansion and the QAOA reduction.

use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::dense::c;
use crate::error::{HqwError, Result};
use crate::hamiltonian::DiagonalHamiltonian;
use crate::simulator::{init_plus_state, u3_matrix, StateVector};

pub const MAX_PATH_STEPS: usize = 12;

fn check_finite(values: impl IntoIterator<Item = f64>) -> Result<()> {
    if values.into_iter().any(|v| !v.is_finite()) {
        return Err(HqwError::Parameter("non-finite angle".into()));
    }
    Ok(())
}

/// Layers `(γ_k, β_k)`, applied `U_c` first then `U_b`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QaoaParams {
    layers: Vec<(f64, f64)>,
}

impl QaoaParams {
    pub fn new(layers: Vec<(f64, f64)>) -> Result<Self> {
        if layers.is_empty() {
            return Err(HqwError::Parameter("QAOA needs p ≥ 1".into()));
        }
        check_finite(layers.iter().flat_map(|&(g, b)| [g, b]))?;
        Ok(Self { layers })
    }

    /// From `(γ₁, β₁, …, γ_p, β_p)`.
    pub fn from_flat(v: &[f64]) -> Result<Self> {
        if !v.len().is_multiple_of(2) {
            return Err(HqwError::Parameter(format!(
                "odd QAOA parameter count {}",
                v.len()
            )));
        }
        Self::new(v.chunks_exact(2).map(|w| (w[0], w[1])).collect())
    }

    pub fn to_flat(&self) -> Vec<f64> {
        self.layers.iter().flat_map(|&(g, b)| [g, b]).collect()
    }

    pub fn layers(&self) -> &[(f64, f64)] {
        &self.layers
    }

    pub fn depth(&self) -> usize {
        self.layers.len()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HqwStep {
    pub gamma: f64,
    pub beta: f64,
    pub theta: f64,
    pub phi: f64,
    pub delta: f64,
}

impl HqwStep {
    /// A step whose coin is exactly Pauli X.
    pub fn x_coin(gamma: f64, beta: f64) -> Self {
        Self {
            gamma,
            beta,
            theta: std::f64::consts::PI,
            phi: 0.0,
            delta: std::f64::consts::PI,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HqwParams {
    steps: Vec<HqwStep>,
}

impl HqwParams {
    pub fn new(steps: Vec<HqwStep>) -> Result<Self> {
        if steps.is_empty() {
            return Err(HqwError::Parameter("HQW needs at least one step".into()));
        }
        check_finite(
            steps
                .iter()
                .flat_map(|s| [s.gamma, s.beta, s.theta, s.phi, s.delta]),
        )?;
        Ok(Self { steps })
    }

    /// From `(γ₁, β₁, θ₁, φ₁, δ₁, …)`.
    pub fn from_flat(v: &[f64]) -> Result<Self> {
        if !v.len().is_multiple_of(5) {
            return Err(HqwError::Parameter(format!(
                "HQW parameter count {} not a multiple of 5",
                v.len()
            )));
        }
        Self::new(
            v.chunks_exact(5)
                .map(|w| HqwStep {
                    gamma: w[0],
                    beta: w[1],
                    theta: w[2],
                    phi: w[3],
                    delta: w[4],
                })
                .collect(),
        )
    }

    pub fn to_flat(&self) -> Vec<f64> {
        self.steps
            .iter()
            .flat_map(|s| [s.gamma, s.beta, s.theta, s.phi, s.delta])
            .collect()
    }

    pub fn steps(&self) -> &[HqwStep] {
        &self.steps
    }
}

/// One parameterized operation; fields index into a flat parameter vector.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Gate {
    /// `exp(−iθN)` on the given coin block, or on everything.
    Diagonal { param: usize, control: Option<bool> },
    /// `exp(−iθ ΣX)` on the given coin block, or on everything.
    Mixer { param: usize, control: Option<bool> },
    /// `U₃(θ, φ, δ)` on the coin.
    Coin {
        theta: usize,
        phi: usize,
        delta: usize,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum AnsatzKind {
    Qaoa { p: usize },
    Hqw { steps: usize },
}

impl AnsatzKind {
    pub fn n_params(&self) -> usize {
        match *self {
            AnsatzKind::Qaoa { p } => 2 * p,
            AnsatzKind::Hqw { steps } => 5 * steps,
        }
    }

    pub fn has_coin(&self) -> bool {
        matches!(self, AnsatzKind::Hqw { .. })
    }

    pub fn tag(&self) -> &'static str {
        match self {
            AnsatzKind::Qaoa { .. } => "qaoa",
            AnsatzKind::Hqw { .. } => "hqw",
        }
    }
}

/// Gate list for an ansatz on `n` position qubits.
#[derive(Debug, Clone)]
pub struct Circuit {
    kind: AnsatzKind,
    n_qubits: usize,
    gates: Vec<Gate>,
}

impl Circuit {
    pub fn new(kind: AnsatzKind, n_qubits: usize) -> Result<Self> {
        let gates = match kind {
            AnsatzKind::Qaoa { p } => {
                if p == 0 {
                    return Err(HqwError::Parameter("QAOA needs p ≥ 1".into()));
                }
                (0..p)
                    .flat_map(|k| {
                        [
                            Gate::Diagonal {
                                param: 2 * k,
                                control: None,
                            },
                            Gate::Mixer {
                                param: 2 * k + 1,
                                control: None,
                            },
                        ]
                    })
                    .collect()
            }
            AnsatzKind::Hqw { steps } => {
                if steps == 0 {
                    return Err(HqwError::Parameter("HQW needs at least one step".into()));
                }
                (0..steps)
                    .flat_map(|s| {
                        let o = 5 * s;
                        [
                            Gate::Coin {
                                theta: o + 2,
                                phi: o + 3,
                                delta: o + 4,
                            },
                            Gate::Diagonal {
                                param: o,
                                control: Some(true),
                            },
                            Gate::Mixer {
                                param: o + 1,
                                control: Some(false),
                            },
                        ]
                    })
                    .collect()
            }
        };
        Ok(Self {
            kind,
            n_qubits,
            gates,
        })
    }

    pub fn kind(&self) -> AnsatzKind {
        self.kind
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn n_params(&self) -> usize {
        self.kind.n_params()
    }

    pub fn initial_state(&self) -> Result<StateVector> {
        init_plus_state(self.n_qubits, self.kind.has_coin())
    }

    pub fn apply_gate(
        &self,
        s: &mut StateVector,
        gate: Gate,
        params: &[f64],
        diag: &DiagonalHamiltonian,
        sign: f64,
    ) -> Result<()> {
        match gate {
            Gate::Diagonal {
                param,
                control: None,
            } => s.apply_diagonal(diag, sign * params[param]),
            Gate::Diagonal {
                param,
                control: Some(cv),
            } => s.apply_controlled_diagonal(diag, sign * params[param], cv),
            Gate::Mixer {
                param,
                control: None,
            } => {
                s.apply_mixer(sign * params[param]);
                Ok(())
            }
            Gate::Mixer {
                param,
                control: Some(cv),
            } => s.apply_controlled_mixer(sign * params[param], cv),
            Gate::Coin { theta, phi, delta } => {
                let m = u3_matrix(params[theta], params[phi], params[delta]);
                if sign > 0.0 {
                    s.apply_coin_matrix(&m)
                } else {
                    s.apply_coin_matrix(&crate::simulator::coin_adjoint(&m))
                }
            }
        }
    }

    pub fn run(&self, params: &[f64], diag: &DiagonalHamiltonian) -> Result<StateVector> {
        if params.len() != self.n_params() {
            return Err(HqwError::DimensionMismatch {
                expected: self.n_params(),
                got: params.len(),
            });
        }
        if diag.n_qubits() != self.n_qubits {
            return Err(HqwError::DimensionMismatch {
                expected: self.n_qubits,
                got: diag.n_qubits(),
            });
        }
        let mut s = self.initial_state()?;
        for &g in &self.gates {
            self.apply_gate(&mut s, g, params, diag, 1.0)?;
        }
        Ok(s)
    }
}

/// `U_b(β_p)U_c(γ_p)⋯U_b(β_1)U_c(γ_1)|+⟩^n`.
pub fn qaoa_state(
    params: &QaoaParams,
    diag: &DiagonalHamiltonian,
    n: usize,
) -> Result<StateVector> {
    Circuit::new(AnsatzKind::Qaoa { p: params.depth() }, n)?.run(&params.to_flat(), diag)
}

/// HQW steps applied to `|0⟩ ⊗ |+⟩^n`.
pub fn hqw_state(params: &HqwParams, diag: &DiagonalHamiltonian, n: usize) -> Result<StateVector> {
    Circuit::new(
        AnsatzKind::Hqw {
            steps: params.steps().len(),
        },
        n,
    )?
    .run(&params.to_flat(), diag)
}

/// Which position evolution acts at one step of a coin path.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Branch {
    Mixer,
    Cost,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PathTerm {
    /// `v_1 … v_p`; `true` is coin value 1.
    pub path: Vec<bool>,
    pub amplitude: Complex64,
    pub word: Vec<Branch>,
}

impl fmt::Display for PathTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let bits: String = self
            .path
            .iter()
            .map(|&b| if b { '1' } else { '0' })
            .collect();
        write!(
            f,
            "{bits} ({:+.6}{:+.6}i):",
            self.amplitude.re, self.amplitude.im
        )?;
        for (k, b) in self.word.iter().enumerate().rev() {
            match b {
                Branch::Mixer => write!(f, " Ub(b{})", k + 1)?,
                Branch::Cost => write!(f, " Uc(g{})", k + 1)?,
            }
        }
        Ok(())
    }
}

/// Sums `α_v |v_p⟩ ⊗ Π_k U_{v_k}|+⟩^n` over all `2^p` coin paths.
pub fn hqw_path_expansion(
    params: &HqwParams,
    diag: &DiagonalHamiltonian,
    n: usize,
) -> Result<(StateVector, Vec<PathTerm>)> {
    let p = params.steps().len();
    if p > MAX_PATH_STEPS {
        return Err(HqwError::Capacity {
            what: "path-expansion steps",
            got: p,
            limit: MAX_PATH_STEPS,
        });
    }
    let start = init_plus_state(n, false)?;
    if diag.dim() != start.position_dim() {
        return Err(HqwError::DimensionMismatch {
            expected: start.position_dim(),
            got: diag.dim(),
        });
    }
    let coins: Vec<_> = params
        .steps()
        .iter()
        .map(|s| u3_matrix(s.theta, s.phi, s.delta))
        .collect();
    let dim = start.position_dim();
    let mut sum = vec![c(0.0, 0.0); 2 * dim];
    let mut terms = Vec::with_capacity(1 << p);
    for bits in 0..1usize << p {
        let path: Vec<bool> = (0..p).map(|k| bits >> k & 1 == 1).collect();
        let mut alpha = c(1.0, 0.0);
        let mut prev = 0usize;
        for (k, &v) in path.iter().enumerate() {
            alpha *= coins[k][v as usize][prev];
            prev = v as usize;
        }
        let word = path
            .iter()
            .map(|&v| if v { Branch::Cost } else { Branch::Mixer })
            .collect();
        if alpha != c(0.0, 0.0) {
            let mut s = start.clone();
            for (k, &v) in path.iter().enumerate() {
                let step = params.steps()[k];
                if v {
                    s.apply_diagonal(diag, step.gamma)?;
                } else {
                    s.apply_mixer(step.beta);
                }
            }
            let off = prev * dim;
            for (dst, a) in sum[off..off + dim].iter_mut().zip(s.amplitudes()) {
                *dst += alpha * a;
            }
        }
        terms.push(PathTerm {
            path,
            amplitude: alpha,
            word,
        });
    }
    Ok((StateVector::from_amplitudes(sum, n, true)?, terms))
}

/// The `2p`-step all-X-coin HQW that reproduces depth-`p` QAOA on the
/// coin-0 block.
pub fn qaoa_as_hqw(qparams: &QaoaParams) -> HqwParams {
    let steps = qparams
        .layers()
        .iter()
        .flat_map(|&(g, b)| [HqwStep::x_coin(g, 0.0), HqwStep::x_coin(0.0, b)])
        .collect();
    HqwParams { steps }
}

/// `‖(coin-0 block of the reduced HQW state) − qaoa_state‖₂`.
pub fn qaoa_reduction_check(
    qparams: &QaoaParams,
    diag: &DiagonalHamiltonian,
    n: usize,
) -> Result<f64> {
    let h = hqw_state(&qaoa_as_hqw(qparams), diag, n)?;
    let q = qaoa_state(qparams, diag, n)?;
    let block = h.block(false)?;
    Ok(block
        .iter()
        .zip(q.amplitudes())
        .map(|(a, b)| (a - b).norm_sqr())
        .sum::<f64>()
        .sqrt())
}

/// Step parity, 1-indexed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Parity {
    Odd,
    Even,
}

/// Interleaves HQW angles into a QAOA schedule: `Odd` takes γ from odd
/// steps and β from even steps, `Even` the reverse.
pub fn variant_params_from_hqw(hparams: &HqwParams, parity: Parity) -> Result<QaoaParams> {
    let steps = hparams.steps();
    if !steps.len().is_multiple_of(2) {
        return Err(HqwError::Parameter(format!(
            "variant needs an even step count, got {}",
            steps.len()
        )));
    }
    let layers = steps
        .chunks_exact(2)
        .map(|pair| match parity {
            Parity::Odd => (pair[0].gamma, pair[1].beta),
            Parity::Even => (pair[1].gamma, pair[0].beta),
        })
        .collect();
    QaoaParams::new(layers)
}
