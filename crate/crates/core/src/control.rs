//! Pontryagin analysis of the coin: blended time-dependent Hamiltonian,
//! forward and adjoint evolution, sensitivities and the optimal coin axis.

use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::dense::{c, CMatrix, CVector, HermitianEigen};
use crate::error::{HqwError, Result};

pub const AXIS_EPS: f64 = 1e-10;
pub const CONTROL_MAX_QUBITS: usize = 8;

/// The admissible control values.
pub const U_VALUES: [f64; 3] = [0.0, 0.5, 1.0];

/// `(y₁, y₂, y₃) = (2u² − u, −4u² + 4u, 2u² − 3u + 1)`.
pub fn blend_coefficients(u: f64) -> Result<(f64, f64, f64)> {
    if !(0.0..=1.0).contains(&u) {
        return Err(HqwError::Parameter(format!(
            "control u = {u} outside [0, 1]"
        )));
    }
    let u2 = u * u;
    Ok((2.0 * u2 - u, -4.0 * u2 + 4.0 * u, 2.0 * u2 - 3.0 * u + 1.0))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ControlInterval {
    pub duration: f64,
    pub u: f64,
    /// Coin axis for `u = 0`; defaults to X.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub axis: Option<[f64; 3]>,
}

impl ControlInterval {
    pub fn axis_or_default(&self) -> [f64; 3] {
        self.axis.unwrap_or([1.0, 0.0, 0.0])
    }
}

/// Piecewise-constant control, serialized as a JSON list of intervals.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ControlSchedule {
    intervals: Vec<ControlInterval>,
}

impl ControlSchedule {
    pub fn new(intervals: Vec<ControlInterval>) -> Result<Self> {
        for iv in &intervals {
            if !(iv.duration > 0.0 && iv.duration.is_finite()) {
                return Err(HqwError::Parameter(format!(
                    "interval duration {} must be positive",
                    iv.duration
                )));
            }
            if !U_VALUES.iter().any(|&v| (v - iv.u).abs() < 1e-12) {
                return Err(HqwError::Parameter(format!(
                    "u = {} is not one of 0, 1/2, 1",
                    iv.u
                )));
            }
            if let Some(a) = iv.axis {
                let n = norm3(a);
                if iv.u == 0.0 && (n - 1.0).abs() > 1e-10 {
                    return Err(HqwError::Parameter(format!("axis norm {n} is not 1")));
                }
            }
        }
        Ok(Self { intervals })
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let intervals: Vec<ControlInterval> = serde_json::from_str(text)?;
        Self::new(intervals)
    }

    pub fn intervals(&self) -> &[ControlInterval] {
        &self.intervals
    }

    pub fn total_duration(&self) -> f64 {
        self.intervals.iter().map(|i| i.duration).sum()
    }
}

fn norm3(a: [f64; 3]) -> f64 {
    (a[0] * a[0] + a[1] * a[1] + a[2] * a[2]).sqrt()
}

fn check_pair(hc: &CMatrix, hb: &CMatrix) -> Result<usize> {
    let n = hc.nrows();
    if !hc.is_square() || hb.shape() != hc.shape() {
        return Err(HqwError::DimensionMismatch {
            expected: n,
            got: hb.nrows(),
        });
    }
    if n > 1 << CONTROL_MAX_QUBITS {
        return Err(HqwError::Capacity {
            what: "control dimension",
            got: n,
            limit: 1 << CONTROL_MAX_QUBITS,
        });
    }
    Ok(n)
}

/// `σ_axis ⊗ I` in coin-major block form.
pub fn coin_axis_operator(axis: [f64; 3], n: usize) -> CMatrix {
    let [nx, ny, nz] = axis;
    let mut m = CMatrix::zeros(2 * n, 2 * n);
    for x in 0..n {
        m[(x, x)] = c(nz, 0.0);
        m[(n + x, n + x)] = c(-nz, 0.0);
        m[(x, n + x)] = c(nx, -ny);
        m[(n + x, x)] = c(nx, ny);
    }
    m
}

/// `y₁|1⟩⟨1|⊗H_c + y₂|0⟩⟨0|⊗H_b + y₃(n·σ)⊗I`.
pub fn assemble_hamiltonian(u: f64, axis: [f64; 3], hc: &CMatrix, hb: &CMatrix) -> Result<CMatrix> {
    let n = check_pair(hc, hb)?;
    let (y1, y2, y3) = blend_coefficients(u)?;
    let mut h = CMatrix::zeros(2 * n, 2 * n);
    if y3 != 0.0 {
        let an = norm3(axis);
        if (an - 1.0).abs() > 1e-10 {
            return Err(HqwError::Parameter(format!("axis norm {an} is not 1")));
        }
        h += coin_axis_operator(axis, n) * c(y3, 0.0);
    }
    if y2 != 0.0 {
        h.view_mut((0, 0), (n, n))
            .zip_apply(hb, |a, b| *a += b * y2);
    }
    if y1 != 0.0 {
        h.view_mut((n, n), (n, n))
            .zip_apply(hc, |a, b| *a += b * y1);
    }
    Ok(h)
}

/// Per-interval step propagators and step counts.
fn interval_propagators(
    schedule: &ControlSchedule,
    dt: f64,
    hc: &CMatrix,
    hb: &CMatrix,
) -> Result<Vec<(CMatrix, usize, f64)>> {
    if !(dt > 0.0) {
        return Err(HqwError::Parameter(format!("dt = {dt} must be positive")));
    }
    schedule
        .intervals()
        .iter()
        .map(|iv| {
            let steps = ((iv.duration / dt).round() as usize).max(1);
            let h = iv.duration / steps as f64;
            let ham = assemble_hamiltonian(iv.u, iv.axis_or_default(), hc, hb)?;
            Ok((HermitianEigen::new(&ham).propagator(h), steps, h))
        })
        .collect()
}

/// Forward states on the sampling grid.
pub fn integrate_schrodinger(
    psi0: &CVector,
    schedule: &ControlSchedule,
    dt: f64,
    hc: &CMatrix,
    hb: &CMatrix,
) -> Result<(Vec<f64>, Vec<CVector>)> {
    let n = check_pair(hc, hb)?;
    if psi0.len() != 2 * n {
        return Err(HqwError::DimensionMismatch {
            expected: 2 * n,
            got: psi0.len(),
        });
    }
    let mut times = vec![0.0];
    let mut states = vec![psi0.clone()];
    let mut t = 0.0;
    for (u, steps, h) in interval_propagators(schedule, dt, hc, hb)? {
        for _ in 0..steps {
            let next = &u * states.last().expect("grid is non-empty");
            t += h;
            times.push(t);
            states.push(next);
        }
    }
    Ok((times, states))
}

/// Adjoint states on the same grid, from `k(t_f) = (I ⊗ H_c) ψ(t_f)`.
pub fn integrate_adjoint(
    psi_tf: &CVector,
    schedule: &ControlSchedule,
    dt: f64,
    hc: &CMatrix,
    hb: &CMatrix,
) -> Result<Vec<CVector>> {
    let n = check_pair(hc, hb)?;
    if psi_tf.len() != 2 * n {
        return Err(HqwError::DimensionMismatch {
            expected: 2 * n,
            got: psi_tf.len(),
        });
    }
    let mut k = psi_tf.clone();
    for coin in 0..2 {
        let block = hc * psi_tf.rows(coin * n, n);
        k.rows_mut(coin * n, n).copy_from(&block);
    }
    let mut out = vec![k];
    for (u, steps, _) in interval_propagators(schedule, dt, hc, hb)?
        .into_iter()
        .rev()
    {
        let back = u.adjoint();
        for _ in 0..steps {
            let prev = &back * out.last().expect("grid is non-empty");
            out.push(prev);
        }
    }
    out.reverse();
    Ok(out)
}

/// `Φ_A = i⟨k|A|ψ⟩ + c.c. = −2 Im⟨k|A|ψ⟩`.
pub fn sensitivity(psi: &CVector, k: &CVector, a: &CMatrix) -> Result<f64> {
    if a.nrows() != psi.len() || k.len() != psi.len() || !a.is_square() {
        return Err(HqwError::DimensionMismatch {
            expected: psi.len(),
            got: a.nrows(),
        });
    }
    Ok(-2.0 * k.dotc(&(a * psi)).im)
}

/// `(Φ_{X⊗I}, Φ_{Y⊗I}, Φ_{Z⊗I})`.
pub fn coin_sensitivities(psi: &CVector, k: &CVector) -> Result<[f64; 3]> {
    if !psi.len().is_multiple_of(2) || k.len() != psi.len() {
        return Err(HqwError::DimensionMismatch {
            expected: psi.len(),
            got: k.len(),
        });
    }
    let n = psi.len() / 2;
    // ⟨k|σ⊗I|ψ⟩ from the block overlaps ⟨k_a|ψ_b⟩
    let o = |a: usize, b: usize| k.rows(a * n, n).dotc(&psi.rows(b * n, n));
    let (o00, o01, o10, o11) = (o(0, 0), o(0, 1), o(1, 0), o(1, 1));
    let x = o01 + o10;
    let y = (o10 - o01) * c(0.0, 1.0);
    let z = o00 - o11;
    Ok([-2.0 * x.im, -2.0 * y.im, -2.0 * z.im])
}

/// Unit axis along the coin sensitivity vector.
pub fn optimal_coin_axis(psi: &CVector, k: &CVector) -> Result<[f64; 3]> {
    let phi = coin_sensitivities(psi, k)?;
    let n = norm3(phi);
    if n <= AXIS_EPS {
        return Err(HqwError::DegenerateAxis(n));
    }
    Ok([phi[0] / n, phi[1] / n, phi[2] / n])
}

/// `𝓗 = y₁Φ_{|1⟩⟨1|⊗H_c} + y₂Φ_{|0⟩⟨0|⊗H_b} + y₃Φ_{(n·σ)⊗I}`.
pub fn control_hamiltonian(
    psi: &CVector,
    k: &CVector,
    u: f64,
    axis: [f64; 3],
    hc: &CMatrix,
    hb: &CMatrix,
) -> Result<f64> {
    // Φ is linear in its operator, so 𝓗 is the sensitivity of H(u, axis).
    sensitivity(psi, k, &assemble_hamiltonian(u, axis, hc, hb)?)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PmpRow {
    pub t: f64,
    pub phi: [f64; 3],
    pub axis: [f64; 3],
    pub degenerate: bool,
    /// `𝓗` for `u = 0` (optimal axis), `1/2`, `1`.
    pub h: [f64; 3],
    pub argmax_u: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PmpReport {
    pub rows: Vec<PmpRow>,
    /// `J = ⟨ψ(t_f)|I⊗H_c|ψ(t_f)⟩`.
    pub objective: f64,
    /// `max_t |⟨k(t)|ψ(t)⟩ − ⟨k(0)|ψ(0)⟩|`.
    pub conservation_drift: f64,
    pub n_degenerate: usize,
}

pub const PMP_CSV_HEADER: [&str; 11] = [
    "t", "phi_x", "phi_y", "phi_z", "nx", "ny", "nz", "h_u0", "h_u05", "h_u1", "argmax_u",
];

impl PmpReport {
    /// Sample standard deviation of each axis component along the grid.
    pub fn axis_std(&self) -> [f64; 3] {
        let m = self.rows.len() as f64;
        let mut out = [0.0; 3];
        if self.rows.len() < 2 {
            return out;
        }
        for (i, o) in out.iter_mut().enumerate() {
            let mean = self.rows.iter().map(|r| r.axis[i]).sum::<f64>() / m;
            *o = (self
                .rows
                .iter()
                .map(|r| (r.axis[i] - mean).powi(2))
                .sum::<f64>()
                / (m - 1.0))
                .sqrt();
        }
        out
    }

    pub fn write_csv(&self, w: impl Write) -> Result<()> {
        let mut wr = csv::Writer::from_writer(w);
        wr.write_record(PMP_CSV_HEADER)?;
        for r in &self.rows {
            let vals = [
                r.t, r.phi[0], r.phi[1], r.phi[2], r.axis[0], r.axis[1], r.axis[2], r.h[0], r.h[1],
                r.h[2], r.argmax_u,
            ];
            wr.write_record(vals.iter().map(|v| format!("{v:.12e}")))?;
        }
        wr.flush()?;
        Ok(())
    }

    pub fn save_csv(&self, path: impl AsRef<Path>) -> Result<()> {
        self.write_csv(std::fs::File::create(path)?)
    }
}

/// Forward and adjoint sweeps along `schedule`, with the PMP quantities at
/// every grid point.
pub fn pmp_sweep(
    psi0: &CVector,
    schedule: &ControlSchedule,
    dt: f64,
    hc: &CMatrix,
    hb: &CMatrix,
) -> Result<PmpReport> {
    let n = check_pair(hc, hb)?;
    let (times, psis) = integrate_schrodinger(psi0, schedule, dt, hc, hb)?;
    let ks = integrate_adjoint(
        psis.last().expect("grid is non-empty"),
        schedule,
        dt,
        hc,
        hb,
    )?;
    let psi_f = psis.last().expect("grid is non-empty");
    let mut objective = 0.0;
    for coin in 0..2 {
        let b = psi_f.rows(coin * n, n);
        objective += b.dotc(&(hc * b)).re;
    }
    let c0 = ks[0].dotc(&psis[0]);
    let mut drift = 0.0f64;
    let mut prev_axis = schedule
        .intervals()
        .first()
        .map(|i| i.axis_or_default())
        .unwrap_or([1.0, 0.0, 0.0]);
    let mut rows = Vec::with_capacity(times.len());
    let mut n_degenerate = 0;
    for ((t, psi), k) in times.iter().zip(&psis).zip(&ks) {
        drift = drift.max((k.dotc(psi) - c0).norm());
        let phi = coin_sensitivities(psi, k)?;
        let (axis, degenerate) = match optimal_coin_axis(psi, k) {
            Ok(a) => (a, false),
            Err(HqwError::DegenerateAxis(_)) => (prev_axis, true),
            Err(e) => return Err(e),
        };
        n_degenerate += degenerate as usize;
        prev_axis = axis;
        let mut h = [0.0; 3];
        for (slot, &u) in h.iter_mut().zip(&U_VALUES) {
            *slot = control_hamiltonian(psi, k, u, axis, hc, hb)?;
        }
        let best = (0..3).fold(0, |b, i| if h[i] > h[b] { i } else { b });
        rows.push(PmpRow {
            t: *t,
            phi,
            axis,
            degenerate,
            h,
            argmax_u: U_VALUES[best],
        });
    }
    Ok(PmpReport {
        rows,
        objective,
        conservation_drift: drift,
        n_degenerate,
    })
}
