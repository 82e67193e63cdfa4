//! Lie and Jordan-Lie closures over Pauli strings.
//!
//! An [`AlgebraElement`] stores a Hermitian `A` and stands for `iA`. Brackets
//! stay in that form: `[iA, iB] = i·(−C)` where `[A, B] = iC`, and the Jordan
//! map is `iA ∘ iB = i{A, B}`.

use std::collections::VecDeque;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{HqwError, Result};
use crate::pauli::{Pauli, PauliOperator, PauliString};

pub const RANK_TOL: f64 = 1e-9;
pub const SPAN_TOL: f64 = 1e-9;

/// Closures densify coefficients over `4^q` strings; this bounds `q`.
pub const CLOSURE_MAX_QUBITS: usize = 6;

/// Largest position register accepted by the dimension reports.
pub const REPORT_MAX_QUBITS: usize = 3;

#[derive(Debug, Clone, PartialEq)]
pub struct AlgebraElement {
    hermitian: PauliOperator,
}

impl AlgebraElement {
    /// `iA` for Hermitian `A`.
    pub fn new(a: PauliOperator) -> Self {
        let mut hermitian = a;
        hermitian.prune();
        Self { hermitian }
    }

    pub fn hermitian(&self) -> &PauliOperator {
        &self.hermitian
    }

    pub fn n_qubits(&self) -> usize {
        self.hermitian.n_qubits()
    }

    pub fn is_zero(&self) -> bool {
        self.hermitian.is_zero()
    }

    pub fn norm(&self) -> f64 {
        self.hermitian.coefficient_norm()
    }

    pub fn scale(&self, s: f64) -> Self {
        Self::new(self.hermitian.scale(s))
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        Ok(Self::new(self.hermitian.add(&other.hermitian)?))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        Ok(Self::new(self.hermitian.sub(&other.hermitian)?))
    }

    /// `I_coin`-style lift with `p` on a new last qubit.
    pub fn tensor_coin(&self, p: Pauli) -> Self {
        Self::new(self.hermitian.tensor_coin(p))
    }

    fn dense_coeffs(&self) -> Vec<f64> {
        let mut v = vec![0.0; 1usize << (2 * self.n_qubits())];
        for (p, c) in self.hermitian.terms() {
            v[p.basis_index()] = *c;
        }
        v
    }
}

impl fmt::Display for AlgebraElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "i({})", self.hermitian)
    }
}

/// `[iA, iB]`.
pub fn bracket_lie(a: &AlgebraElement, b: &AlgebraElement) -> Result<AlgebraElement> {
    Ok(AlgebraElement::new(
        a.hermitian.commutator_coeffs(&b.hermitian)?.scale(-1.0),
    ))
}

/// `iA ∘ iB = i{A, B}`.
pub fn bracket_jordan(a: &AlgebraElement, b: &AlgebraElement) -> Result<AlgebraElement> {
    Ok(AlgebraElement::new(
        a.hermitian.anticommutator(&b.hermitian)?,
    ))
}

/// Linearly independent elements with an orthonormal shadow used for rank
/// and membership decisions.
#[derive(Debug, Clone)]
pub struct AlgebraBasis {
    n_qubits: usize,
    elements: Vec<AlgebraElement>,
    provenance: Vec<String>,
    truncated: bool,
    ortho: Vec<Vec<f64>>,
}

impl AlgebraBasis {
    pub fn empty(n_qubits: usize) -> Result<Self> {
        if n_qubits == 0 || n_qubits > CLOSURE_MAX_QUBITS {
            return Err(HqwError::Capacity {
                what: "closure qubits",
                got: n_qubits,
                limit: CLOSURE_MAX_QUBITS,
            });
        }
        Ok(Self {
            n_qubits,
            elements: Vec::new(),
            provenance: Vec::new(),
            truncated: false,
            ortho: Vec::new(),
        })
    }

    /// Basis of `span(elements)`, in order, dropping dependent ones.
    pub fn span_of<'a>(
        n_qubits: usize,
        elements: impl IntoIterator<Item = &'a AlgebraElement>,
    ) -> Result<Self> {
        let mut b = Self::empty(n_qubits)?;
        for (i, e) in elements.into_iter().enumerate() {
            b.try_add(e.clone(), format!("s{i}"))?;
        }
        Ok(b)
    }

    pub fn dim(&self) -> usize {
        self.elements.len()
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn elements(&self) -> &[AlgebraElement] {
        &self.elements
    }

    /// How each element arose: `g<k>` for generators, `[e<i>,e<j>]` or
    /// `{e<i>,e<j>}` for brackets of earlier elements.
    pub fn provenance(&self) -> &[String] {
        &self.provenance
    }

    pub fn truncated(&self) -> bool {
        self.truncated
    }

    fn check(&self, e: &AlgebraElement) -> Result<()> {
        if e.n_qubits() != self.n_qubits {
            return Err(HqwError::DimensionMismatch {
                expected: self.n_qubits,
                got: e.n_qubits(),
            });
        }
        Ok(())
    }

    fn project_out(&self, v: &mut [f64]) {
        // two passes of modified Gram-Schmidt
        for _ in 0..2 {
            for q in &self.ortho {
                let d: f64 = q.iter().zip(v.iter()).map(|(a, b)| a * b).sum();
                v.iter_mut().zip(q).for_each(|(x, qi)| *x -= d * qi);
            }
        }
    }

    /// `‖v − P v‖ / ‖v‖` (0 for the zero element).
    pub fn residual(&self, e: &AlgebraElement) -> Result<f64> {
        self.check(e)?;
        let mut v = e.dense_coeffs();
        let n0 = norm(&v);
        if n0 == 0.0 {
            return Ok(0.0);
        }
        self.project_out(&mut v);
        Ok(norm(&v) / n0)
    }

    pub fn contains(&self, e: &AlgebraElement) -> Result<bool> {
        Ok(self.residual(e)? < SPAN_TOL)
    }

    /// Adds `e` if it is independent of the current span.
    pub fn try_add(&mut self, e: AlgebraElement, provenance: String) -> Result<bool> {
        self.check(&e)?;
        let mut v = e.dense_coeffs();
        let n0 = norm(&v);
        if n0 == 0.0 {
            return Ok(false);
        }
        self.project_out(&mut v);
        let r = norm(&v);
        if r <= RANK_TOL * n0 {
            return Ok(false);
        }
        v.iter_mut().for_each(|x| *x /= r);
        self.ortho.push(v);
        self.elements.push(e.scale(1.0 / n0));
        self.provenance.push(provenance);
        Ok(true)
    }

    /// Largest residual of a pairwise bracket against the span.
    pub fn closure_defect(&self, jordan: bool) -> Result<f64> {
        let mut worst = 0.0f64;
        for i in 0..self.dim() {
            for j in i..self.dim() {
                worst =
                    worst.max(self.residual(&bracket_lie(&self.elements[i], &self.elements[j])?)?);
                if jordan {
                    worst = worst.max(
                        self.residual(&bracket_jordan(&self.elements[i], &self.elements[j])?)?,
                    );
                }
            }
        }
        Ok(worst)
    }
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

fn closure(
    generators: &[AlgebraElement],
    max_dim: Option<usize>,
    jordan: bool,
) -> Result<AlgebraBasis> {
    let first = generators
        .first()
        .ok_or_else(|| HqwError::Parameter("no generators".into()))?;
    let n = first.n_qubits();
    if generators.iter().any(|g| g.is_zero()) {
        return Err(HqwError::Parameter("zero generator".into()));
    }
    let ambient = 1usize << (2 * n.min(CLOSURE_MAX_QUBITS));
    let max_dim = max_dim.unwrap_or(ambient);
    let mut basis = AlgebraBasis::empty(n)?;
    let mut queue = VecDeque::new();
    for (k, g) in generators.iter().enumerate() {
        if basis.dim() >= max_dim {
            basis.truncated = max_dim < ambient;
            return Ok(basis);
        }
        if basis.try_add(g.clone(), format!("g{k}"))? {
            queue.push_back(basis.dim() - 1);
        }
    }
    while let Some(i) = queue.pop_front() {
        let mut j = 0;
        while j < basis.dim() {
            let mut candidates = vec![(
                bracket_lie(&basis.elements[i], &basis.elements[j])?,
                format!("[e{i},e{j}]"),
            )];
            if jordan {
                candidates.push((
                    bracket_jordan(&basis.elements[i], &basis.elements[j])?,
                    format!("{{e{i},e{j}}}"),
                ));
            }
            for (c, label) in candidates {
                if basis.dim() >= max_dim {
                    basis.truncated = max_dim < ambient;
                    return Ok(basis);
                }
                if basis.try_add(c, label)? {
                    queue.push_back(basis.dim() - 1);
                }
            }
            j += 1;
        }
    }
    Ok(basis)
}

/// Real Lie algebra generated by `generators`; `max_dim` defaults to `4^q`.
pub fn lie_closure(generators: &[AlgebraElement], max_dim: Option<usize>) -> Result<AlgebraBasis> {
    closure(generators, max_dim, false)
}

/// Closure under both the Lie and Jordan maps.
pub fn jordan_lie_closure(
    generators: &[AlgebraElement],
    max_dim: Option<usize>,
) -> Result<AlgebraBasis> {
    closure(generators, max_dim, true)
}

fn same_size(hc: &PauliOperator, hb: &PauliOperator) -> Result<usize> {
    if hc.n_qubits() != hb.n_qubits() {
        return Err(HqwError::DimensionMismatch {
            expected: hc.n_qubits(),
            got: hb.n_qubits(),
        });
    }
    Ok(hc.n_qubits())
}

/// `g_Q = ⟨iH_c, iH_b⟩_Lie`.
pub fn qaoa_dla(hc: &PauliOperator, hb: &PauliOperator) -> Result<AlgebraBasis> {
    same_size(hc, hb)?;
    lie_closure(
        &[
            AlgebraElement::new(hc.clone()),
            AlgebraElement::new(hb.clone()),
        ],
        None,
    )
}

/// `L_Q`: Jordan-Lie closure of `{iH_c, iH_b, iI}`.
pub fn l_q_basis(hc: &PauliOperator, hb: &PauliOperator) -> Result<AlgebraBasis> {
    let n = same_size(hc, hb)?;
    jordan_lie_closure(
        &[
            AlgebraElement::new(hc.clone()),
            AlgebraElement::new(hb.clone()),
            AlgebraElement::new(PauliOperator::identity(n)),
        ],
        None,
    )
}

/// `[L_Q, L_Q] ⊕ span{iH_c, iH_b}`.
pub fn k_q_basis(
    l_q: &AlgebraBasis,
    hc: &PauliOperator,
    hb: &PauliOperator,
) -> Result<AlgebraBasis> {
    let mut k = AlgebraBasis::empty(l_q.n_qubits())?;
    let els = l_q.elements();
    for i in 0..els.len() {
        for j in i + 1..els.len() {
            k.try_add(bracket_lie(&els[i], &els[j])?, format!("[l{i},l{j}]"))?;
        }
    }
    k.try_add(AlgebraElement::new(hc.clone()), "hc".into())?;
    k.try_add(AlgebraElement::new(hb.clone()), "hb".into())?;
    Ok(k)
}

/// Generators of the coined algebra on `n + 1` qubits; the coin is the last
/// qubit.
pub fn hqw_generators(hc: &PauliOperator, hb: &PauliOperator) -> Result<Vec<AlgebraElement>> {
    let n = same_size(hc, hb)?;
    let coin = |p| {
        AlgebraElement::new(PauliOperator::from_terms(
            n + 1,
            [(PauliString::single(n + 1, n, p), 1.0)],
        ))
    };
    // |1⟩⟨1| = (I − Z)/2, |0⟩⟨0| = (I + Z)/2
    let p1_hc = hc
        .tensor_coin(Pauli::I)
        .sub(&hc.tensor_coin(Pauli::Z))?
        .scale(0.5);
    let p0_hb = hb
        .tensor_coin(Pauli::I)
        .add(&hb.tensor_coin(Pauli::Z))?
        .scale(0.5);
    Ok(vec![
        coin(Pauli::Y),
        coin(Pauli::Z),
        AlgebraElement::new(p1_hc),
        AlgebraElement::new(p0_hb),
    ])
}

/// `g_H`; `max_dim` defaults to `4^(n+1)`.
pub fn hqw_dla(
    hc: &PauliOperator,
    hb: &PauliOperator,
    max_dim: Option<usize>,
) -> Result<AlgebraBasis> {
    lie_closure(&hqw_generators(hc, hb)?, max_dim)
}

fn check_report_size(n: usize) -> Result<()> {
    if n > REPORT_MAX_QUBITS {
        return Err(HqwError::Capacity {
            what: "algebra report qubits",
            got: n,
            limit: REPORT_MAX_QUBITS,
        });
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecompositionReport {
    pub dim_g_h: usize,
    pub dim_l_q: usize,
    pub dim_k_q: usize,
    /// `dim g_H == 3 dim L_Q + dim K_Q`.
    pub dimension_identity: bool,
    /// Largest residual of `P ⊗ b` (b in L_Q) and `I ⊗ b` (b in K_Q) in g_H.
    pub max_membership_residual: f64,
    pub membership: bool,
}

impl DecompositionReport {
    pub fn holds(&self) -> bool {
        self.dimension_identity && self.membership
    }
}

pub fn decomposition_check(hc: &PauliOperator, hb: &PauliOperator) -> Result<DecompositionReport> {
    check_report_size(same_size(hc, hb)?)?;
    let g_h = hqw_dla(hc, hb, None)?;
    let l_q = l_q_basis(hc, hb)?;
    let k_q = k_q_basis(&l_q, hc, hb)?;
    let mut worst = 0.0f64;
    for b in l_q.elements() {
        for p in [Pauli::X, Pauli::Y, Pauli::Z] {
            worst = worst.max(g_h.residual(&b.tensor_coin(p))?);
        }
    }
    for b in k_q.elements() {
        worst = worst.max(g_h.residual(&b.tensor_coin(Pauli::I))?);
    }
    Ok(DecompositionReport {
        dim_g_h: g_h.dim(),
        dim_l_q: l_q.dim(),
        dim_k_q: k_q.dim(),
        dimension_identity: g_h.dim() == 3 * l_q.dim() + k_q.dim(),
        max_membership_residual: worst,
        membership: worst < SPAN_TOL,
    })
}

/// Whether `i{H_c, H_b}` lies in `g_Q`, with its relative residual.
pub fn jordan_in_dla_check(hc: &PauliOperator, hb: &PauliOperator) -> Result<(bool, f64)> {
    let g_q = qaoa_dla(hc, hb)?;
    let j = bracket_jordan(
        &AlgebraElement::new(hc.clone()),
        &AlgebraElement::new(hb.clone()),
    )?;
    let r = g_q.residual(&j)?;
    Ok((r < SPAN_TOL, r))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DimensionReport {
    pub dim_g_h: usize,
    pub dim_g_q: usize,
    pub jordan_member: bool,
    pub jordan_residual: f64,
    /// `dim g_H > 4 dim g_Q`.
    pub strict_inequality: bool,
    /// The inequality is expected whenever the Jordan element is outside g_Q.
    pub asserted: bool,
    /// `I ⊗ g_Q ⊂ g_H`.
    pub lifted_subalgebra: bool,
}

impl DimensionReport {
    pub fn violated(&self) -> bool {
        self.asserted && !self.strict_inequality
    }
}

pub fn dimension_inequality_report(
    hc: &PauliOperator,
    hb: &PauliOperator,
) -> Result<DimensionReport> {
    check_report_size(same_size(hc, hb)?)?;
    let g_h = hqw_dla(hc, hb, None)?;
    let g_q = qaoa_dla(hc, hb)?;
    let (member, residual) = jordan_in_dla_check(hc, hb)?;
    let mut lifted = true;
    for b in g_q.elements() {
        lifted &= g_h.contains(&b.tensor_coin(Pauli::I))?;
    }
    Ok(DimensionReport {
        dim_g_h: g_h.dim(),
        dim_g_q: g_q.dim(),
        jordan_member: member,
        jordan_residual: residual,
        strict_inequality: g_h.dim() > 4 * g_q.dim(),
        asserted: !member,
        lifted_subalgebra: lifted,
    })
}

/// Everything the `algebra` command prints.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AlgebraReport {
    pub n_qubits: usize,
    pub generators: Vec<String>,
    pub dim_g_q: usize,
    pub dim_l_q: usize,
    pub dim_k_q: usize,
    pub dim_g_h: usize,
    pub decomposition: DecompositionReport,
    pub dimensions: DimensionReport,
}

pub fn algebra_report(hc: &PauliOperator, hb: &PauliOperator) -> Result<AlgebraReport> {
    let decomposition = decomposition_check(hc, hb)?;
    let dimensions = dimension_inequality_report(hc, hb)?;
    Ok(AlgebraReport {
        n_qubits: hc.n_qubits(),
        generators: vec![format!("i({hc})"), format!("i({hb})")],
        dim_g_q: dimensions.dim_g_q,
        dim_l_q: decomposition.dim_l_q,
        dim_k_q: decomposition.dim_k_q,
        dim_g_h: decomposition.dim_g_h,
        decomposition,
        dimensions,
    })
}

impl fmt::Display for AlgebraReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "position qubits: {}", self.n_qubits)?;
        for g in &self.generators {
            writeln!(f, "generator: {g}")?;
        }
        writeln!(f, "dim g_Q = {}", self.dim_g_q)?;
        writeln!(f, "dim L_Q = {}", self.dim_l_q)?;
        writeln!(f, "dim K_Q = {}", self.dim_k_q)?;
        writeln!(f, "dim g_H = {}", self.dim_g_h)?;
        writeln!(
            f,
            "3 dim L_Q + dim K_Q = {} ({})",
            3 * self.dim_l_q + self.dim_k_q,
            if self.decomposition.holds() {
                "matches"
            } else {
                "MISMATCH"
            }
        )?;
        writeln!(
            f,
            "i{{H_c,H_b}} in g_Q: {} (residual {:.3e})",
            self.dimensions.jordan_member, self.dimensions.jordan_residual
        )?;
        let verdict = match (self.dimensions.asserted, self.dimensions.strict_inequality) {
            (true, true) => "holds",
            (true, false) => "VIOLATED",
            (false, true) => "holds (not required)",
            (false, false) => "fails (not required)",
        };
        write!(
            f,
            "dim g_H > 4 dim g_Q: {} > {}: {verdict}",
            self.dim_g_h,
            4 * self.dim_g_q
        )
    }
}
