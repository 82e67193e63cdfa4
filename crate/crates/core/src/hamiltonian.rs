//! Problem and mixer Hamiltonians, the Jordan product and the quantities
//! derived from it (negativity, sectional curvature, Taylor/BCH residuals).

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::dense::{self, c, CMatrix, CVector, HermitianEigen};
use crate::error::{HqwError, Result};
use crate::graphs::{Graph, ORACLE_MAX_VERTICES};
use crate::pauli::{Pauli, PauliOperator, PauliString};
use num_complex::Complex64;

/// Densified operators are limited to this many qubits for direct
/// eigensolves.
pub const DENSE_MAX_QUBITS: usize = 10;

/// Matrix-free extremal eigenvalue routine ceiling.
pub const ITERATIVE_MAX_QUBITS: usize = 12;

/// Diagonal operator `H|x⟩ = N(x)|x⟩` over `2^n` computational basis states.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiagonalHamiltonian {
    energies: Vec<f64>,
}

impl DiagonalHamiltonian {
    pub fn new(energies: Vec<f64>) -> Result<Self> {
        if energies.is_empty() || !energies.len().is_power_of_two() {
            return Err(HqwError::Parameter(format!(
                "diagonal length {} is not a power of two",
                energies.len()
            )));
        }
        if energies.iter().any(|e| !e.is_finite()) {
            return Err(HqwError::Parameter("non-finite diagonal entry".into()));
        }
        Ok(Self { energies })
    }

    /// Unchecked constructor for exercising error paths.
    #[cfg(test)]
    pub(crate) fn from_raw(energies: Vec<f64>) -> Self {
        Self { energies }
    }

    pub fn energies(&self) -> &[f64] {
        &self.energies
    }

    pub fn dim(&self) -> usize {
        self.energies.len()
    }

    pub fn n_qubits(&self) -> usize {
        self.energies.len().trailing_zeros() as usize
    }

    pub fn negated(&self) -> Self {
        Self {
            energies: self.energies.iter().map(|e| 0.0 - e).collect(),
        }
    }

    pub fn min(&self) -> f64 {
        self.energies.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max(&self) -> f64 {
        self.energies
            .iter()
            .copied()
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// Sorted distinct values, merging entries closer than `tol`.
    pub fn distinct_levels(&self, tol: f64) -> Vec<f64> {
        let mut v = self.energies.clone();
        v.sort_by(f64::total_cmp);
        let mut out: Vec<f64> = Vec::new();
        for e in v {
            match out.last() {
                Some(&last) if (e - last).abs() <= tol => {}
                _ => out.push(e),
            }
        }
        out
    }

    pub fn to_dense(&self) -> CMatrix {
        CMatrix::from_diagonal(&CVector::from_iterator(
            self.dim(),
            self.energies.iter().map(|&e| c(e, 0.0)),
        ))
    }
}

/// `H_c = Σ_{(i,j)∈E} w (I − Z_i Z_j)/2`, as a diagonal and as Pauli terms.
pub fn maxcut_hamiltonian(g: &Graph) -> Result<(DiagonalHamiltonian, PauliOperator)> {
    let n = g.n_vertices();
    if n > ORACLE_MAX_VERTICES {
        return Err(HqwError::Capacity {
            what: "Max-Cut qubits",
            got: n,
            limit: ORACLE_MAX_VERTICES,
        });
    }
    let energies = (0..1u64 << n).map(|x| g.cut_value(x)).collect();
    let mut op = PauliOperator::zero(n);
    for e in g.edges() {
        op.add_term(PauliString::identity(n), e.w / 2.0);
        let mut zz = PauliString::identity(n);
        zz.set(e.u, Pauli::Z);
        zz.set(e.v, Pauli::Z);
        op.add_term(zz, -e.w / 2.0);
    }
    op.prune();
    Ok((DiagonalHamiltonian { energies }, op))
}

fn check_lambda(lambda: f64) -> Result<()> {
    if !(lambda > 0.0 && lambda.is_finite()) {
        return Err(HqwError::Parameter(format!(
            "penalty λ must be positive, got {lambda}"
        )));
    }
    Ok(())
}

/// `H_c = −Σ n_i + λ Σ_{(i,j)∈E} n_i n_j` with `n_i = (I − Z_i)/2`.
pub fn mis_hamiltonian(g: &Graph, lambda: f64) -> Result<DiagonalHamiltonian> {
    check_lambda(lambda)?;
    let n = g.n_vertices();
    if n > ORACLE_MAX_VERTICES {
        return Err(HqwError::Capacity {
            what: "MIS qubits",
            got: n,
            limit: ORACLE_MAX_VERTICES,
        });
    }
    let energies = (0..1u64 << n)
        .map(|x| {
            let both = g
                .edges()
                .iter()
                .filter(|e| (x >> e.u) & (x >> e.v) & 1 == 1)
                .count();
            -(x.count_ones() as f64) + lambda * both as f64
        })
        .collect();
    Ok(DiagonalHamiltonian { energies })
}

/// Pauli expansion of [`mis_hamiltonian`].
pub fn mis_pauli(g: &Graph, lambda: f64) -> Result<PauliOperator> {
    check_lambda(lambda)?;
    let n = g.n_vertices();
    let id = PauliString::identity(n);
    let mut op = PauliOperator::zero(n);
    for i in 0..n {
        // −n_i = −I/2 + Z_i/2
        op.add_term(id, -0.5);
        op.add_term(PauliString::single(n, i, Pauli::Z), 0.5);
    }
    for e in g.edges() {
        // n_u n_v = (I − Z_u − Z_v + Z_u Z_v)/4
        let q = lambda / 4.0;
        op.add_term(id, q);
        op.add_term(PauliString::single(n, e.u, Pauli::Z), -q);
        op.add_term(PauliString::single(n, e.v, Pauli::Z), -q);
        let mut zz = id;
        zz.set(e.u, Pauli::Z);
        zz.set(e.v, Pauli::Z);
        op.add_term(zz, q);
    }
    op.prune();
    Ok(op)
}

/// `H_b = Σ_i X_i`.
pub fn mixer_hamiltonian(n: usize) -> Result<PauliOperator> {
    if n == 0 {
        return Err(HqwError::Parameter("mixer needs at least one qubit".into()));
    }
    Ok(PauliOperator::from_terms(
        n,
        (0..n).map(|i| (PauliString::single(n, i, Pauli::X), 1.0)),
    ))
}

/// `A ∘ B = (AB + BA)/2`.
pub fn jordan_product(a: &PauliOperator, b: &PauliOperator) -> Result<PauliOperator> {
    Ok(a.anticommutator(b)?.scale(0.5))
}

fn normalized(op: &PauliOperator) -> Result<PauliOperator> {
    let f = op.frobenius_norm();
    if f == 0.0 {
        return Err(HqwError::UndefinedNormalization);
    }
    Ok(op.scale(1.0 / f))
}

/// Minimum eigenvalue and eigenvector of the Jordan product of the
/// Frobenius-normalized operators.
pub fn jordan_negativity_with_vector(
    hc: &PauliOperator,
    hb: &PauliOperator,
) -> Result<(f64, CVector)> {
    let prod = jordan_product(&normalized(hc)?, &normalized(hb)?)?;
    let n = prod.n_qubits();
    if n <= DENSE_MAX_QUBITS {
        if prod.is_zero() {
            let mut v = CVector::zeros(1 << n);
            v[0] = c(1.0, 0.0);
            return Ok((0.0, v));
        }
        Ok(HermitianEigen::new(&prod.to_dense()).min())
    } else if n <= ITERATIVE_MAX_QUBITS {
        min_eigen_power(&prod)
    } else {
        Err(HqwError::Capacity {
            what: "negativity qubits",
            got: n,
            limit: ITERATIVE_MAX_QUBITS,
        })
    }
}

/// `N_min = min λ(H̃_c ∘ H̃_b)`, reported without clamping.
pub fn jordan_negativity(hc: &PauliOperator, hb: &PauliOperator) -> Result<f64> {
    jordan_negativity_with_vector(hc, hb).map(|(v, _)| v)
}

/// Power iteration on `s·I − A` with `s = Σ|c|` bounding the spectrum.
fn min_eigen_power(op: &PauliOperator) -> Result<(f64, CVector)> {
    let dim = 1usize << op.n_qubits();
    let shift = op.l1_norm();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut v: Vec<Complex64> = (0..dim)
        .map(|_| c(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5))
        .collect();
    normalize(&mut v);
    let mut lambda = 0.0;
    for it in 0..200_000 {
        let av = op.apply(&v);
        lambda = v.iter().zip(&av).map(|(a, b)| (a.conj() * b).re).sum();
        if it % 20 == 0 {
            let resid: f64 = av
                .iter()
                .zip(&v)
                .map(|(a, b)| (a - b * lambda).norm_sqr())
                .sum::<f64>()
                .sqrt();
            if resid < 1e-11 {
                return Ok((lambda, CVector::from_vec(v)));
            }
        }
        v = v.iter().zip(&av).map(|(x, ax)| x * shift - ax).collect();
        normalize(&mut v);
    }
    Err(HqwError::Degenerate(format!(
        "power iteration did not converge (last estimate {lambda})"
    )))
}

fn normalize(v: &mut [Complex64]) {
    let n = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    v.iter_mut().for_each(|z| *z /= n);
}

fn densify(op: &PauliOperator) -> Result<CMatrix> {
    if op.n_qubits() > DENSE_MAX_QUBITS {
        return Err(HqwError::Capacity {
            what: "dense qubits",
            got: op.n_qubits(),
            limit: DENSE_MAX_QUBITS,
        });
    }
    Ok(op.to_dense())
}

/// `K = −⟨[iH_c, iH_b], i{H_c, H_b}⟩ / (‖iH_c‖²‖iH_b‖² − ⟨iH_c, iH_b⟩²)`
/// with real Hilbert–Schmidt inner products on the dense forms.
pub fn sectional_curvature(hc: &PauliOperator, hb: &PauliOperator) -> Result<f64> {
    if hc.n_qubits() != hb.n_qubits() {
        return Err(HqwError::DimensionMismatch {
            expected: hc.n_qubits(),
            got: hb.n_qubits(),
        });
    }
    let i = c(0.0, 1.0);
    let a = densify(hc)?.map(|z| z * i);
    let b = densify(hb)?.map(|z| z * i);
    let lie = dense::commutator(&a, &b);
    let jordan = dense::anticommutator(&densify(hc)?, &densify(hb)?).map(|z| z * i);
    let aa = dense::hs_inner(&a, &a);
    let bb = dense::hs_inner(&b, &b);
    let ab = dense::hs_inner(&a, &b);
    let den = aa * bb - ab * ab;
    if den <= 1e-12 * aa * bb {
        return Err(HqwError::DegeneratePlane);
    }
    // adding 0.0 turns a vanishing -0.0 into 0.0
    Ok(-dense::hs_inner(&lie, &jordan) / den + 0.0)
}

/// Spectral-norm residuals of the second-order truncations of one QAOA
/// layer: Taylor for `e^{−iβH_b}e^{−iγH_c}` and BCH for
/// `log(e^{iγH_c}e^{iβH_b})`.
pub fn taylor_bch_residuals(
    hc: &PauliOperator,
    hb: &PauliOperator,
    gamma: f64,
    beta: f64,
) -> Result<(f64, f64)> {
    if hc.n_qubits() != hb.n_qubits() {
        return Err(HqwError::DimensionMismatch {
            expected: hc.n_qubits(),
            got: hb.n_qubits(),
        });
    }
    let a = densify(hc)?;
    let b = densify(hb)?;
    let dim = a.nrows();
    let id = CMatrix::identity(dim, dim);
    let i = c(0.0, 1.0);
    let ea = HermitianEigen::new(&a);
    let eb = HermitianEigen::new(&b);

    let exact = eb.propagator(beta) * ea.propagator(gamma);
    let jordan = dense::anticommutator(&a, &b).map(|z| z * 0.5);
    let lie_ba = dense::commutator(&b, &a);
    // H_b H_c = H_c ∘ H_b + [H_b, H_c]/2
    let second = (&b * &b).map(|z| z * (beta * beta)) + (&a * &a).map(|z| z * (gamma * gamma));
    let cross = (jordan + lie_ba.map(|z| z * 0.5)).map(|z| z * (beta * gamma));
    let taylor = &id
        - (b.map(|z| z * beta) + a.map(|z| z * gamma)).map(|z| z * i)
        - second.map(|z| z * 0.5)
        - cross;
    let taylor_res = dense::spectral_norm(&(exact - taylor));

    let prod = ea.propagator(-gamma) * eb.propagator(-beta);
    let log = dense::logm_unitary(&prod, 1e-6)?;
    let first = (a.map(|z| z * gamma) + b.map(|z| z * beta)).map(|z| z * i);
    // ½[iγH_c, iβH_b] = −(γβ/2)[H_c, H_b]
    let bch = first - dense::commutator(&a, &b).map(|z| z * (gamma * beta / 2.0));
    let bch_res = dense::spectral_norm(&(log - bch));
    Ok((taylor_res, bch_res))
}
