//! Dense reference implementations built directly from Kronecker products
//! and a scaling-and-squaring matrix exponential.

#![allow(dead_code)]

use hqw::dense::{CMatrix, CVector};
use hqw::graphs::Graph;
use hqw::Complex64;

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn pauli(p: char) -> CMatrix {
    let (o, l, i) = (c(0.0, 0.0), c(1.0, 0.0), c(0.0, 1.0));
    let v = match p {
        'I' => [l, o, o, l],
        'X' => [o, l, l, o],
        'Y' => [o, -i, i, o],
        'Z' => [l, o, o, -l],
        _ => panic!("bad Pauli {p}"),
    };
    CMatrix::from_row_slice(2, 2, &v)
}

pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.kronecker(b)
}

/// Character `k` of `label` acts on qubit `k`, which is bit `k` of the index.
pub fn dense_label(label: &str) -> CMatrix {
    label
        .chars()
        .fold(CMatrix::identity(1, 1), |acc, p| kron(&pauli(p), &acc))
}

pub fn identity(n: usize) -> CMatrix {
    CMatrix::identity(1 << n, 1 << n)
}

fn single(n: usize, k: usize, p: char) -> CMatrix {
    let label: String = (0..n).map(|j| if j == k { p } else { 'I' }).collect();
    dense_label(&label)
}

pub fn dense_maxcut(g: &Graph) -> CMatrix {
    let n = g.n_vertices();
    let mut h = CMatrix::zeros(1 << n, 1 << n);
    for e in g.edges() {
        let zz = single(n, e.u, 'Z') * single(n, e.v, 'Z');
        h += (identity(n) - zz) * c(e.w / 2.0, 0.0);
    }
    h
}

pub fn dense_mixer(n: usize) -> CMatrix {
    (0..n).fold(CMatrix::zeros(1 << n, 1 << n), |acc, k| {
        acc + single(n, k, 'X')
    })
}

/// `exp(−i t H)` by Taylor series with scaling and squaring.
pub fn expm_i(h: &CMatrix, t: f64) -> CMatrix {
    let m = h * c(0.0, -t);
    let norm = m.iter().map(|z| z.norm()).fold(0.0, f64::max) * m.nrows() as f64;
    let mut s = 0;
    while norm / 2f64.powi(s) > 0.25 {
        s += 1;
    }
    let a = &m * c(1.0 / 2f64.powi(s), 0.0);
    let dim = m.nrows();
    let mut out = CMatrix::identity(dim, dim);
    let mut term = CMatrix::identity(dim, dim);
    for k in 1..30 {
        term = &term * &a * c(1.0 / k as f64, 0.0);
        out += &term;
    }
    for _ in 0..s {
        out = &out * &out;
    }
    out
}

pub fn plus_state(n: usize) -> CVector {
    let d = 1 << n;
    CVector::from_element(d, c(1.0 / (d as f64).sqrt(), 0.0))
}

pub fn u3(theta: f64, phi: f64, delta: f64) -> CMatrix {
    let (s, co) = (theta / 2.0).sin_cos();
    let e = |a: f64| Complex64::from_polar(1.0, a);
    CMatrix::from_row_slice(
        2,
        2,
        &[c(co, 0.0), -e(delta) * s, e(phi) * s, e(phi + delta) * co],
    )
}

pub fn projector(bit: u8) -> CMatrix {
    let mut m = CMatrix::zeros(2, 2);
    m[(bit as usize, bit as usize)] = c(1.0, 0.0);
    m
}

pub fn qaoa_dense(hc: &CMatrix, layers: &[(f64, f64)]) -> CVector {
    let n = hc.nrows().trailing_zeros() as usize;
    let hb = dense_mixer(n);
    layers.iter().fold(plus_state(n), |psi, &(g, b)| {
        expm_i(&hb, b) * (expm_i(hc, g) * psi)
    })
}

/// HQW state with the coin as the most significant qubit; each step is
/// `(γ, β, θ, φ, δ)`.
pub fn hqw_dense(hc: &CMatrix, steps: &[[f64; 5]]) -> CVector {
    let n = hc.nrows().trailing_zeros() as usize;
    let hb = dense_mixer(n);
    let id = identity(n);
    let mut psi = CVector::zeros(2 << n);
    psi.rows_mut(0, 1 << n).copy_from(&plus_state(n));
    for &[g, b, th, ph, de] in steps {
        let coin = kron(&u3(th, ph, de), &id);
        let diag = expm_i(&kron(&projector(1), hc), g);
        let mix = expm_i(&kron(&projector(0), &hb), b);
        psi = mix * (diag * (coin * psi));
    }
    psi
}

pub fn max_abs_diff(a: &[Complex64], b: &[Complex64]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

/// Real-vector view of a Hermitian matrix for span computations.
fn real_vec(m: &CMatrix) -> Vec<f64> {
    m.iter().flat_map(|z| [z.re, z.im]).collect()
}

/// Orthonormal basis of a real span of Hermitian matrices.
#[derive(Default, Clone)]
pub struct DenseSpan {
    pub ortho: Vec<Vec<f64>>,
    pub mats: Vec<CMatrix>,
}

impl DenseSpan {
    pub fn dim(&self) -> usize {
        self.ortho.len()
    }

    /// Relative distance of `m` from the span.
    pub fn residual(&self, m: &CMatrix) -> f64 {
        let mut v = real_vec(m);
        let n0 = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if n0 == 0.0 {
            return 0.0;
        }
        for q in &self.ortho {
            let d: f64 = q.iter().zip(&v).map(|(a, b)| a * b).sum();
            v.iter_mut().zip(q).for_each(|(x, qi)| *x -= d * qi);
        }
        v.iter().map(|x| x * x).sum::<f64>().sqrt() / n0
    }

    pub fn try_add(&mut self, m: CMatrix) -> bool {
        let mut v = real_vec(&m);
        let n0 = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if n0 < 1e-12 {
            return false;
        }
        // two Gram-Schmidt passes for stability
        for _ in 0..2 {
            for q in &self.ortho {
                let d: f64 = q.iter().zip(&v).map(|(a, b)| a * b).sum();
                v.iter_mut().zip(q).for_each(|(x, qi)| *x -= d * qi);
            }
        }
        let n1 = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if n1 / n0 < 1e-9 {
            return false;
        }
        self.ortho.push(v.into_iter().map(|x| x / n1).collect());
        self.mats.push(m);
        true
    }
}

/// Lie map on Hermitian representatives: `[iA, iB] = i · i[A, B]`.
pub fn dense_lie(a: &CMatrix, b: &CMatrix) -> CMatrix {
    (a * b - b * a) * c(0.0, 1.0)
}

/// Jordan map on Hermitian representatives: `i{A, B}`.
pub fn dense_jordan(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a * b + b * a
}

/// Closure of Hermitian generators under the Lie map, and the Jordan map
/// when `jordan` is set.
pub fn dense_closure(generators: &[CMatrix], jordan: bool) -> DenseSpan {
    let mut span = DenseSpan::default();
    for g in generators {
        span.try_add(g.clone());
    }
    let mut next = 0;
    while next < span.mats.len() {
        let a = span.mats[next].clone();
        for j in 0..=next {
            let b = span.mats[j].clone();
            span.try_add(dense_lie(&a, &b));
            if jordan {
                span.try_add(dense_jordan(&a, &b));
            }
        }
        next += 1;
    }
    span
}

/// Largest residual of either set of matrices in the span of the other.
pub fn mutual_residual(a: &DenseSpan, b: &DenseSpan) -> f64 {
    let ab = a.mats.iter().map(|m| b.residual(m)).fold(0.0, f64::max);
    let ba = b.mats.iter().map(|m| a.residual(m)).fold(0.0, f64::max);
    ab.max(ba)
}

/// Largest entry modulus.
pub fn max_abs(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}
