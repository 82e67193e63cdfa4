//! Statevector engine for coin-controlled diagonal and mixer evolutions.
//!
//! Index layout: with a coin the basis index is `coin << n | x`, and position
//! qubit `k` is bit `k` of `x`.

use std::fmt::Write as _;
use std::ops::Range;

use num_complex::Complex64;

use crate::dense::{self, c, CMatrix, CVector, HermitianEigen};
use crate::error::{HqwError, Result};
use crate::hamiltonian::DiagonalHamiltonian;

pub const MAX_POSITION_QUBITS: usize = 14;
pub const GENERAL_WALK_MAX_DIM: usize = 4096;

pub type CoinMatrix = [[Complex64; 2]; 2];

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// `U₃(θ, φ, δ)`.
pub fn u3_matrix(theta: f64, phi: f64, delta: f64) -> CoinMatrix {
    let (s, co) = (theta / 2.0).sin_cos();
    let e = |a: f64| Complex64::from_polar(1.0, a);
    [
        [c(co, 0.0), -e(delta) * s],
        [e(phi) * s, e(phi + delta) * co],
    ]
}

/// Partial derivatives of [`u3_matrix`] with respect to `(θ, φ, δ)`.
pub fn u3_partials(theta: f64, phi: f64, delta: f64) -> [CoinMatrix; 3] {
    let (s, co) = (theta / 2.0).sin_cos();
    let e = |a: f64| Complex64::from_polar(1.0, a);
    let i = c(0.0, 1.0);
    let d_theta = [
        [c(-s / 2.0, 0.0), -e(delta) * (co / 2.0)],
        [e(phi) * (co / 2.0), -e(phi + delta) * (s / 2.0)],
    ];
    let d_phi = [[ZERO, ZERO], [i * e(phi) * s, i * e(phi + delta) * co]];
    let d_delta = [[ZERO, -i * e(delta) * s], [ZERO, i * e(phi + delta) * co]];
    [d_theta, d_phi, d_delta]
}

pub fn coin_adjoint(m: &CoinMatrix) -> CoinMatrix {
    [
        [m[0][0].conj(), m[1][0].conj()],
        [m[0][1].conj(), m[1][1].conj()],
    ]
}

#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    amps: Vec<Complex64>,
    n_position: usize,
    coin: bool,
}

fn check_n(n: usize) -> Result<()> {
    if n == 0 || n > MAX_POSITION_QUBITS {
        return Err(HqwError::Capacity {
            what: "position qubits",
            got: n,
            limit: MAX_POSITION_QUBITS,
        });
    }
    Ok(())
}

/// `|+⟩^n`, optionally preceded by a coin in `|0⟩`.
pub fn init_plus_state(n: usize, with_coin: bool) -> Result<StateVector> {
    check_n(n)?;
    let dim = 1usize << n;
    let a = c((dim as f64).recip().sqrt(), 0.0);
    let mut amps = vec![a; dim];
    if with_coin {
        amps.resize(2 * dim, ZERO);
    }
    Ok(StateVector {
        amps,
        n_position: n,
        coin: with_coin,
    })
}

impl StateVector {
    /// Wraps raw amplitudes; the vector must have unit norm.
    pub fn from_amplitudes(amps: Vec<Complex64>, n_position: usize, coin: bool) -> Result<Self> {
        check_n(n_position)?;
        let expected = (1usize << n_position) << coin as usize;
        if amps.len() != expected {
            return Err(HqwError::DimensionMismatch {
                expected,
                got: amps.len(),
            });
        }
        let s = Self {
            amps,
            n_position,
            coin,
        };
        if (s.norm() - 1.0).abs() > 1e-10 {
            return Err(HqwError::Parameter(format!(
                "state norm {} is not 1",
                s.norm()
            )));
        }
        Ok(s)
    }

    pub fn basis(n_position: usize, coin: bool, index: usize) -> Result<Self> {
        check_n(n_position)?;
        let dim = (1usize << n_position) << coin as usize;
        if index >= dim {
            return Err(HqwError::Parameter(format!(
                "basis index {index} out of range"
            )));
        }
        let mut amps = vec![ZERO; dim];
        amps[index] = c(1.0, 0.0);
        Ok(Self {
            amps,
            n_position,
            coin,
        })
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn n_position(&self) -> usize {
        self.n_position
    }

    pub fn has_coin(&self) -> bool {
        self.coin
    }

    pub fn position_dim(&self) -> usize {
        1 << self.n_position
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Amplitudes of one coin block.
    pub fn block(&self, coin_value: bool) -> Result<&[Complex64]> {
        let r = self.block_range(Some(coin_value))?;
        Ok(&self.amps[r])
    }

    pub fn to_cvector(&self) -> CVector {
        CVector::from_column_slice(&self.amps)
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &Self) -> Complex64 {
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    fn require_coin(&self) -> Result<()> {
        if !self.coin {
            return Err(HqwError::Structure("operation needs a coin qubit".into()));
        }
        Ok(())
    }

    fn block_range(&self, control: Option<bool>) -> Result<Range<usize>> {
        let n = self.position_dim();
        match control {
            None => Ok(0..self.amps.len()),
            Some(v) => {
                self.require_coin()?;
                let off = if v { n } else { 0 };
                Ok(off..off + n)
            }
        }
    }

    fn check_diag(&self, diag: &DiagonalHamiltonian) -> Result<()> {
        if diag.dim() != self.position_dim() {
            return Err(HqwError::DimensionMismatch {
                expected: self.position_dim(),
                got: diag.dim(),
            });
        }
        Ok(())
    }

    /// Applies a 2×2 matrix to the coin qubit; the matrix need not be unitary.
    pub fn apply_coin_matrix(&mut self, m: &CoinMatrix) -> Result<()> {
        self.require_coin()?;
        let n = self.position_dim();
        let (lo, hi) = self.amps.split_at_mut(n);
        for (a0, a1) in lo.iter_mut().zip(hi.iter_mut()) {
            let (x0, x1) = (*a0, *a1);
            *a0 = m[0][0] * x0 + m[0][1] * x1;
            *a1 = m[1][0] * x0 + m[1][1] * x1;
        }
        Ok(())
    }

    pub fn apply_coin_u3(&mut self, theta: f64, phi: f64, delta: f64) -> Result<()> {
        self.apply_coin_matrix(&u3_matrix(theta, phi, delta))
    }

    fn diagonal_on(&mut self, range: Range<usize>, diag: &DiagonalHamiltonian, gamma: f64) {
        let n = self.position_dim();
        let e = diag.energies();
        for (i, a) in self.amps[range].iter_mut().enumerate() {
            *a *= Complex64::from_polar(1.0, -gamma * e[i % n]);
        }
    }

    fn mixer_on(&mut self, range: Range<usize>, beta: f64) {
        let (s, co) = beta.sin_cos();
        let n = self.position_dim();
        let ms = c(0.0, -s);
        for block in self.amps[range].chunks_exact_mut(n) {
            for k in 0..self.n_position {
                let bit = 1usize << k;
                for base in (0..n).filter(|b| b & bit == 0) {
                    let (a, b) = (block[base], block[base | bit]);
                    block[base] = a * co + b * ms;
                    block[base | bit] = a * ms + b * co;
                }
            }
        }
    }

    /// `exp(−iγN)` on the positions of the `control_value` coin block.
    pub fn apply_controlled_diagonal(
        &mut self,
        diag: &DiagonalHamiltonian,
        gamma: f64,
        control_value: bool,
    ) -> Result<()> {
        self.check_diag(diag)?;
        let r = self.block_range(Some(control_value))?;
        self.diagonal_on(r, diag, gamma);
        Ok(())
    }

    /// `Π_k exp(−iβX_k)` on the positions of the `control_value` coin block.
    pub fn apply_controlled_mixer(&mut self, beta: f64, control_value: bool) -> Result<()> {
        let r = self.block_range(Some(control_value))?;
        self.mixer_on(r, beta);
        Ok(())
    }

    /// Uncontrolled `exp(−iγN)`; with a coin it acts on both blocks.
    pub fn apply_diagonal(&mut self, diag: &DiagonalHamiltonian, gamma: f64) -> Result<()> {
        self.check_diag(diag)?;
        let r = self.block_range(None)?;
        self.diagonal_on(r, diag, gamma);
        Ok(())
    }

    pub fn apply_mixer(&mut self, beta: f64) {
        let r = 0..self.amps.len();
        self.mixer_on(r, beta);
    }

    /// `⟨I ⊗ N⟩`, tracing out the coin when present.
    pub fn expectation_diagonal(&self, diag: &DiagonalHamiltonian) -> Result<f64> {
        self.check_diag(diag)?;
        let n = self.position_dim();
        let e = diag.energies();
        Ok(self
            .amps
            .iter()
            .enumerate()
            .map(|(i, a)| a.norm_sqr() * e[i % n])
            .sum())
    }

    /// Position-marginal probabilities with the coin traced out.
    pub fn position_probabilities(&self) -> Vec<f64> {
        let n = self.position_dim();
        let mut p = vec![0.0; n];
        for (i, a) in self.amps.iter().enumerate() {
            p[i % n] += a.norm_sqr();
        }
        p
    }

    /// Probability mass in the `k` lowest distinct levels of `diag`.
    pub fn eigenspace_projections(
        &self,
        diag: &DiagonalHamiltonian,
        k: usize,
    ) -> Result<Vec<(f64, f64)>> {
        self.check_diag(diag)?;
        let tol = 1e-9;
        let levels = diag.distinct_levels(tol);
        if k > levels.len() {
            return Err(HqwError::Parameter(format!(
                "asked for {k} eigenspaces, only {} exist",
                levels.len()
            )));
        }
        let probs = self.position_probabilities();
        let mut out: Vec<(f64, f64)> = levels[..k].iter().map(|&l| (l, 0.0)).collect();
        for (x, p) in probs.iter().enumerate() {
            let e = diag.energies()[x];
            if let Some(slot) = out.iter_mut().find(|(l, _)| (e - l).abs() <= tol) {
                slot.1 += p;
            }
        }
        Ok(out)
    }

    /// `⟨λ|G|ψ⟩` for `G = N` restricted to a coin block (or everywhere).
    pub fn diagonal_overlap(
        lambda: &Self,
        psi: &Self,
        diag: &DiagonalHamiltonian,
        control: Option<bool>,
    ) -> Result<Complex64> {
        let r = psi.block_range(control)?;
        let n = psi.position_dim();
        let e = diag.energies();
        Ok(r.map(|i| lambda.amps[i].conj() * psi.amps[i] * e[i % n])
            .sum())
    }

    /// `⟨λ|Σ_k X_k|ψ⟩` restricted to a coin block (or everywhere).
    pub fn mixer_overlap(lambda: &Self, psi: &Self, control: Option<bool>) -> Result<Complex64> {
        let r = psi.block_range(control)?;
        let n = psi.position_dim();
        let mut acc = ZERO;
        for i in r {
            let l = lambda.amps[i].conj();
            let x = i % n;
            let off = i - x;
            for k in 0..psi.n_position {
                acc += l * psi.amps[off + (x ^ (1 << k))];
            }
        }
        Ok(acc)
    }

    /// `⟨λ|(M ⊗ I)|ψ⟩`.
    pub fn coin_overlap(lambda: &Self, psi: &Self, m: &CoinMatrix) -> Result<Complex64> {
        psi.require_coin()?;
        let n = psi.position_dim();
        let mut acc = ZERO;
        for x in 0..n {
            let (p0, p1) = (psi.amps[x], psi.amps[n + x]);
            acc += lambda.amps[x].conj() * (m[0][0] * p0 + m[0][1] * p1);
            acc += lambda.amps[n + x].conj() * (m[1][0] * p0 + m[1][1] * p1);
        }
        Ok(acc)
    }

    /// Multiplies amplitudes elementwise by `N(x)`, leaving an unnormalized
    /// vector (used to seed adjoint sweeps).
    pub(crate) fn diagonal_applied(&self, diag: &DiagonalHamiltonian, scale: f64) -> Self {
        let n = self.position_dim();
        let e = diag.energies();
        let amps = self
            .amps
            .iter()
            .enumerate()
            .map(|(i, a)| a * (scale * e[i % n]))
            .collect();
        Self {
            amps,
            n_position: self.n_position,
            coin: self.coin,
        }
    }

    /// One line per amplitude: index, real part, imaginary part.
    pub fn dump(&self) -> String {
        let mut s = String::new();
        for (i, a) in self.amps.iter().enumerate() {
            let _ = writeln!(s, "{i} {:.16e} {:.16e}", a.re, a.im);
        }
        s
    }
}

/// `(e^{−iHt} (C ⊗ I)) ψ` with `H = Σ_j |j⟩⟨j| ⊗ S_j`.
pub fn general_hqw_step(
    psi: &CVector,
    coin: &CMatrix,
    subgraph_hams: &[CMatrix],
    t: f64,
) -> Result<CVector> {
    let d = coin.nrows();
    if !coin.is_square() || subgraph_hams.len() != d {
        return Err(HqwError::DimensionMismatch {
            expected: d,
            got: subgraph_hams.len(),
        });
    }
    if !dense::is_unitary(coin, 1e-10) {
        return Err(HqwError::Parameter("coin matrix is not unitary".into()));
    }
    let n = subgraph_hams.first().map(|s| s.nrows()).unwrap_or(0);
    if subgraph_hams
        .iter()
        .any(|s| s.nrows() != n || s.ncols() != n)
    {
        return Err(HqwError::DimensionMismatch {
            expected: n,
            got: 0,
        });
    }
    if psi.len() != d * n {
        return Err(HqwError::DimensionMismatch {
            expected: d * n,
            got: psi.len(),
        });
    }
    if d * n > GENERAL_WALK_MAX_DIM {
        return Err(HqwError::Capacity {
            what: "walk dimension",
            got: d * n,
            limit: GENERAL_WALK_MAX_DIM,
        });
    }
    let mut out = CVector::zeros(d * n);
    for (j, s) in subgraph_hams.iter().enumerate() {
        let mut block = CVector::zeros(n);
        for k in 0..d {
            let ck = coin[(j, k)];
            if ck != ZERO {
                block += psi.rows(k * n, n) * ck;
            }
        }
        let u = HermitianEigen::new(s).propagator(t);
        out.rows_mut(j * n, n).copy_from(&(u * block));
    }
    Ok(out)
}
