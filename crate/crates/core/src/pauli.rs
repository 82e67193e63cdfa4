//! Pauli strings and real linear combinations of them.
//!
//! A string on `n` qubits is stored as X/Z bitmasks; qubit `k` is bit `k`,
//! and in text form qubit 0 is the leftmost character (`"ZZI"` is `Z₀Z₁`).
//! Products carry an exact phase `i^k`.

use std::collections::BTreeMap;
use std::fmt;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{HqwError, Result};

pub const MAX_PAULI_QUBITS: usize = 32;

/// Coefficients smaller than this are pruned after arithmetic.
pub const PRUNE_TOL: f64 = 1e-14;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    fn bits(self) -> (bool, bool) {
        match self {
            Pauli::I => (false, false),
            Pauli::X => (true, false),
            Pauli::Y => (true, true),
            Pauli::Z => (false, true),
        }
    }

    fn from_bits(x: bool, z: bool) -> Self {
        match (x, z) {
            (false, false) => Pauli::I,
            (true, false) => Pauli::X,
            (true, true) => Pauli::Y,
            (false, true) => Pauli::Z,
        }
    }

    pub fn to_char(self) -> char {
        match self {
            Pauli::I => 'I',
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        }
    }
}

/// Power of `i` (0..4).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Phase(u8);

impl Phase {
    pub const ONE: Phase = Phase(0);

    pub fn power(self) -> u8 {
        self.0
    }

    pub fn is_real(self) -> bool {
        self.0.is_multiple_of(2)
    }

    /// `±1` for a real phase.
    pub fn real_sign(self) -> f64 {
        debug_assert!(self.is_real());
        if self.0 == 0 {
            1.0
        } else {
            -1.0
        }
    }

    /// `c` with `self = i·c`, for an imaginary phase.
    pub fn imag_sign(self) -> f64 {
        debug_assert!(!self.is_real());
        if self.0 == 1 {
            1.0
        } else {
            -1.0
        }
    }

    pub fn to_complex(self) -> Complex64 {
        match self.0 {
            0 => Complex64::new(1.0, 0.0),
            1 => Complex64::new(0.0, 1.0),
            2 => Complex64::new(-1.0, 0.0),
            _ => Complex64::new(0.0, -1.0),
        }
    }
}

/// Tensor product of single-qubit Paulis, without phase.
///
/// Ordering sorts by qubit count, then by the character string.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PauliString {
    n: u8,
    x: u64,
    z: u64,
}

impl PartialOrd for PauliString {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for PauliString {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.n.cmp(&other.n).then_with(|| {
            for k in 0..self.n as usize {
                let c = self.get(k).cmp(&other.get(k));
                if c.is_ne() {
                    return c;
                }
            }
            std::cmp::Ordering::Equal
        })
    }
}

impl PauliString {
    pub fn identity(n: usize) -> Self {
        assert!(n <= MAX_PAULI_QUBITS);
        Self {
            n: n as u8,
            x: 0,
            z: 0,
        }
    }

    pub fn from_masks(n: usize, x: u64, z: u64) -> Self {
        assert!(n <= MAX_PAULI_QUBITS);
        let keep = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
        Self {
            n: n as u8,
            x: x & keep,
            z: z & keep,
        }
    }

    /// `P` on qubit `k`, identity elsewhere.
    pub fn single(n: usize, k: usize, p: Pauli) -> Self {
        let mut s = Self::identity(n);
        s.set(k, p);
        s
    }

    pub fn parse(text: &str) -> Result<Self> {
        let n = text.chars().count();
        if n > MAX_PAULI_QUBITS {
            return Err(HqwError::Capacity {
                what: "Pauli string length",
                got: n,
                limit: MAX_PAULI_QUBITS,
            });
        }
        let mut s = Self::identity(n);
        for (k, c) in text.chars().enumerate() {
            let p = match c {
                'I' => Pauli::I,
                'X' => Pauli::X,
                'Y' => Pauli::Y,
                'Z' => Pauli::Z,
                _ => return Err(HqwError::Parse(format!("bad Pauli character {c:?}"))),
            };
            s.set(k, p);
        }
        Ok(s)
    }

    pub fn n_qubits(&self) -> usize {
        self.n as usize
    }

    pub fn x_mask(&self) -> u64 {
        self.x
    }

    pub fn z_mask(&self) -> u64 {
        self.z
    }

    pub fn get(&self, k: usize) -> Pauli {
        Pauli::from_bits((self.x >> k) & 1 == 1, (self.z >> k) & 1 == 1)
    }

    pub fn set(&mut self, k: usize, p: Pauli) {
        assert!(k < self.n as usize, "qubit {k} out of range");
        let (x, z) = p.bits();
        self.x = (self.x & !(1 << k)) | ((x as u64) << k);
        self.z = (self.z & !(1 << k)) | ((z as u64) << k);
    }

    pub fn is_identity(&self) -> bool {
        self.x == 0 && self.z == 0
    }

    pub fn weight(&self) -> u32 {
        (self.x | self.z).count_ones()
    }

    pub fn commutes_with(&self, other: &Self) -> bool {
        ((self.x & other.z).count_ones() + (self.z & other.x).count_ones()).is_multiple_of(2)
    }

    /// `self · other = phase · result`.
    pub fn mul(&self, other: &Self) -> (Phase, PauliString) {
        debug_assert_eq!(self.n, other.n);
        let x = self.x ^ other.x;
        let z = self.z ^ other.z;
        // P = i^{|x&z|} X^x Z^z; moving Z^{z1} past X^{x2} costs (-1)^{|z1&x2|}.
        let k = (self.x & self.z).count_ones()
            + (other.x & other.z).count_ones()
            + 2 * (self.z & other.x).count_ones()
            + 3 * (x & z).count_ones();
        (Phase((k % 4) as u8), PauliString { n: self.n, x, z })
    }

    /// Appends one qubit (index `n`) carrying `p`.
    pub fn extend(&self, p: Pauli) -> Self {
        let mut s = Self {
            n: self.n + 1,
            ..*self
        };
        s.set(self.n as usize, p);
        s
    }

    /// Index into the `4^n` Pauli basis: `x | z << n`.
    pub fn basis_index(&self) -> usize {
        (self.x | (self.z << self.n)) as usize
    }

    /// `P|b⟩ = i^{|x&z|} (-1)^{|b&z|} |b ⊕ x⟩`.
    pub fn apply_to_basis(&self, b: usize) -> (Complex64, usize) {
        let b = b as u64;
        let sign = if (b & self.z).count_ones().is_multiple_of(2) {
            1.0
        } else {
            -1.0
        };
        let phase = Phase(((self.x & self.z).count_ones() % 4) as u8).to_complex() * sign;
        (phase, (b ^ self.x) as usize)
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for k in 0..self.n as usize {
            write!(f, "{}", self.get(k).to_char())?;
        }
        Ok(())
    }
}

/// Real linear combination of Pauli strings, i.e. a Hermitian operator.
#[derive(Debug, Clone, PartialEq)]
pub struct PauliOperator {
    n_qubits: usize,
    terms: BTreeMap<PauliString, f64>,
}

impl PauliOperator {
    pub fn zero(n_qubits: usize) -> Self {
        assert!(n_qubits <= MAX_PAULI_QUBITS);
        Self {
            n_qubits,
            terms: BTreeMap::new(),
        }
    }

    pub fn identity(n_qubits: usize) -> Self {
        Self::from_terms(n_qubits, [(PauliString::identity(n_qubits), 1.0)])
    }

    pub fn from_terms(
        n_qubits: usize,
        terms: impl IntoIterator<Item = (PauliString, f64)>,
    ) -> Self {
        let mut op = Self::zero(n_qubits);
        for (p, c) in terms {
            op.add_term(p, c);
        }
        op.prune();
        op
    }

    /// Parses `[("ZZI", -0.5), ...]`.
    pub fn from_labels(terms: &[(&str, f64)]) -> Result<Self> {
        let first = terms
            .first()
            .ok_or_else(|| HqwError::Parse("no terms".into()))?;
        let n = first.0.len();
        let mut parsed = Vec::with_capacity(terms.len());
        for (label, c) in terms {
            let p = PauliString::parse(label)?;
            if p.n_qubits() != n {
                return Err(HqwError::DimensionMismatch {
                    expected: n,
                    got: p.n_qubits(),
                });
            }
            parsed.push((p, *c));
        }
        Ok(Self::from_terms(n, parsed))
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn terms(&self) -> &BTreeMap<PauliString, f64> {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, p: &PauliString) -> f64 {
        self.terms.get(p).copied().unwrap_or(0.0)
    }

    pub fn add_term(&mut self, p: PauliString, c: f64) {
        assert_eq!(p.n_qubits(), self.n_qubits, "Pauli string width mismatch");
        *self.terms.entry(p).or_insert(0.0) += c;
    }

    /// Drops coefficients with magnitude ≤ [`PRUNE_TOL`].
    pub fn prune(&mut self) {
        self.prune_with(PRUNE_TOL);
    }

    pub fn prune_with(&mut self, tol: f64) {
        self.terms.retain(|_, c| c.abs() > tol);
    }

    pub fn scale(&self, s: f64) -> Self {
        let mut out = Self::from_terms(self.n_qubits, self.terms.iter().map(|(p, c)| (*p, c * s)));
        out.prune();
        out
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_width(other)?;
        let mut out = self.clone();
        for (p, c) in &other.terms {
            out.add_term(*p, *c);
        }
        out.prune();
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(-1.0))
    }

    /// `Σ_P a_P b_P`, the Pauli-coefficient inner product (`Tr(AB) / 2^n`).
    pub fn dot(&self, other: &Self) -> f64 {
        let (small, big) = if self.len() <= other.len() {
            (self, other)
        } else {
            (other, self)
        };
        small
            .terms
            .iter()
            .map(|(p, c)| c * big.coefficient(p))
            .sum()
    }

    pub fn coefficient_norm(&self) -> f64 {
        self.terms.values().map(|c| c * c).sum::<f64>().sqrt()
    }

    /// `‖A‖_F = sqrt(2^n Σ c²)`.
    pub fn frobenius_norm(&self) -> f64 {
        (2f64.powi(self.n_qubits as i32)).sqrt() * self.coefficient_norm()
    }

    /// Upper bound on the spectral norm: `Σ |c|`.
    pub fn l1_norm(&self) -> f64 {
        self.terms.values().map(|c| c.abs()).sum()
    }

    fn check_width(&self, other: &Self) -> Result<()> {
        if self.n_qubits != other.n_qubits {
            return Err(HqwError::DimensionMismatch {
                expected: self.n_qubits,
                got: other.n_qubits,
            });
        }
        Ok(())
    }

    /// `C` with `[A, B] = i·C` (C Hermitian). Only anticommuting term pairs
    /// contribute, each with an imaginary phase.
    pub fn commutator_coeffs(&self, other: &Self) -> Result<Self> {
        self.check_width(other)?;
        let mut out = Self::zero(self.n_qubits);
        for (pa, ca) in &self.terms {
            for (pb, cb) in &other.terms {
                if pa.commutes_with(pb) {
                    continue;
                }
                let (phase, p) = pa.mul(pb);
                if phase.is_real() {
                    return Err(HqwError::Structure(format!(
                        "anticommuting product {pa}·{pb} produced a real phase"
                    )));
                }
                out.add_term(p, 2.0 * ca * cb * phase.imag_sign());
            }
        }
        out.prune();
        Ok(out)
    }

    /// `{A, B}`. Only commuting term pairs contribute, each with a real phase.
    /// Contributions are summed in an order that does not depend on which
    /// operand comes first, so `{A, B}` and `{B, A}` agree bit for bit.
    pub fn anticommutator(&self, other: &Self) -> Result<Self> {
        self.check_width(other)?;
        let mut parts = Vec::new();
        for (pa, ca) in &self.terms {
            for (pb, cb) in &other.terms {
                if !pa.commutes_with(pb) {
                    continue;
                }
                let (phase, p) = pa.mul(pb);
                if !phase.is_real() {
                    return Err(HqwError::Structure(format!(
                        "commuting product {pa}·{pb} produced an imaginary phase"
                    )));
                }
                parts.push((p, pa.min(pb), pa.max(pb), 2.0 * ca * cb * phase.real_sign()));
            }
        }
        parts.sort_by(|a, b| {
            (a.0, a.1, a.2)
                .cmp(&(b.0, b.1, b.2))
                .then(a.3.total_cmp(&b.3))
        });
        let mut out = Self::zero(self.n_qubits);
        for (p, _, _, v) in parts {
            out.add_term(p, v);
        }
        out.prune();
        Ok(out)
    }

    /// `A ⊗ P_coin`, with the new qubit appended at index `n`.
    pub fn tensor_coin(&self, coin: Pauli) -> Self {
        Self::from_terms(
            self.n_qubits + 1,
            self.terms.iter().map(|(p, c)| (p.extend(coin), *c)),
        )
    }

    /// Dense `2^n × 2^n` matrix in the computational basis.
    pub fn to_dense(&self) -> DMatrix<Complex64> {
        let dim = 1usize << self.n_qubits;
        let mut m = DMatrix::zeros(dim, dim);
        for (p, c) in &self.terms {
            for b in 0..dim {
                let (ph, out) = p.apply_to_basis(b);
                m[(out, b)] += ph * *c;
            }
        }
        m
    }

    /// Matrix-free `A|v⟩`.
    pub fn apply(&self, v: &[Complex64]) -> Vec<Complex64> {
        let mut out = vec![Complex64::new(0.0, 0.0); v.len()];
        for (p, c) in &self.terms {
            for (b, amp) in v.iter().enumerate() {
                let (ph, o) = p.apply_to_basis(b);
                out[o] += ph * *amp * *c;
            }
        }
        out
    }

    /// One line per term: `PAULI_STRING coefficient`, 17 significant digits.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for (p, c) in &self.terms {
            s.push_str(&format!("{p} {c:.16e}\n"));
        }
        s
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut terms = Vec::new();
        for line in text.lines().filter(|l| !l.trim().is_empty()) {
            let mut it = line.split_whitespace();
            let label = it
                .next()
                .ok_or_else(|| HqwError::Parse("missing Pauli label".into()))?;
            let coeff: f64 = it
                .next()
                .ok_or_else(|| HqwError::Parse("missing coefficient".into()))?
                .parse()
                .map_err(|_| HqwError::Parse(format!("bad coefficient in {line:?}")))?;
            terms.push((label, coeff));
        }
        Self::from_labels(&terms)
    }
}

impl fmt::Display for PauliOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (p, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            write!(f, "{c}·{p}")?;
            first = false;
        }
        Ok(())
    }
}
