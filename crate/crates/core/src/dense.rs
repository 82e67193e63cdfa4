//! Small dense complex linear algebra used by the oracles and the control
//! module: Hermitian propagators, spectral norms, unitary logarithms.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{HqwError, Result};

pub type CMatrix = DMatrix<Complex64>;
pub type CVector = DVector<Complex64>;

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Eigendecomposition of a Hermitian matrix, reusable for many evolution
/// times.
#[derive(Debug, Clone)]
pub struct HermitianEigen {
    pub values: DVector<f64>,
    pub vectors: CMatrix,
}

impl HermitianEigen {
    pub fn new(h: &CMatrix) -> Self {
        let eig = SymmetricEigen::new(h.clone());
        Self {
            values: eig.eigenvalues,
            vectors: eig.eigenvectors,
        }
    }

    /// `exp(-i t H)`.
    pub fn propagator(&self, t: f64) -> CMatrix {
        let phases = self.values.map(|l| Complex64::from_polar(1.0, -l * t));
        let scaled = &self.vectors * CMatrix::from_diagonal(&phases);
        scaled * self.vectors.adjoint()
    }

    pub fn min(&self) -> (f64, CVector) {
        let (idx, val) = self
            .values
            .iter()
            .copied()
            .enumerate()
            .min_by(|a, b| a.1.total_cmp(&b.1))
            .expect("non-empty spectrum");
        (val, self.vectors.column(idx).into_owned())
    }
}

/// `exp(-i t H)` for Hermitian `H`.
pub fn expm_hermitian(h: &CMatrix, t: f64) -> CMatrix {
    HermitianEigen::new(h).propagator(t)
}

pub fn real_to_complex(m: &DMatrix<f64>) -> CMatrix {
    m.map(|x| c(x, 0.0))
}

pub fn is_hermitian(m: &CMatrix, tol: f64) -> bool {
    m.is_square() && (m - m.adjoint()).norm() <= tol
}

pub fn is_unitary(m: &CMatrix, tol: f64) -> bool {
    m.is_square() && (m.adjoint() * m - CMatrix::identity(m.nrows(), m.ncols())).norm() <= tol
}

/// Largest singular value.
pub fn spectral_norm(m: &CMatrix) -> f64 {
    m.clone()
        .singular_values()
        .iter()
        .copied()
        .fold(0.0, f64::max)
}

/// Real Hilbert–Schmidt inner product `Re Tr(A† B)`.
pub fn hs_inner(a: &CMatrix, b: &CMatrix) -> f64 {
    a.iter().zip(b.iter()).map(|(x, y)| (x.conj() * y).re).sum()
}

/// Principal logarithm of a unitary matrix via its Schur form.
///
/// Fails when an eigenphase sits within `branch_tol` of ±π, or when the Schur
/// factor is not diagonal (input not normal).
pub fn logm_unitary(u: &CMatrix, branch_tol: f64) -> Result<CMatrix> {
    let n = u.nrows();
    let (q, t) = nalgebra::Schur::new(u.clone()).unpack();
    let mut off = 0.0f64;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                off = off.max(t[(i, j)].norm());
            }
        }
    }
    if off > 1e-8 {
        return Err(HqwError::Domain(format!(
            "Schur factor not diagonal (off-diagonal {off:e})"
        )));
    }
    let mut logs = CVector::zeros(n);
    for i in 0..n {
        let z = t[(i, i)];
        let arg = z.arg();
        if std::f64::consts::PI - arg.abs() < branch_tol {
            return Err(HqwError::Domain(format!(
                "eigenphase {arg} on the branch cut"
            )));
        }
        logs[i] = c(z.norm().ln(), arg);
    }
    Ok(&q * CMatrix::from_diagonal(&logs) * q.adjoint())
}

/// `[A, B] = AB - BA`.
pub fn commutator(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a * b - b * a
}

/// `{A, B} = AB + BA`.
pub fn anticommutator(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a * b + b * a
}
