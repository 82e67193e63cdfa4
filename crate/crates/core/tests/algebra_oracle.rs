//! Pauli-string closures against dense-matrix closures, and the bilinear
//! identities of the Jordan-Lie structure.

mod common;

use common::*;
use hqw::algebra::{
    bracket_jordan, bracket_lie, decomposition_check, hqw_dla, jordan_lie_closure, k_q_basis,
    l_q_basis, lie_closure, qaoa_dla, AlgebraBasis, AlgebraElement,
};
use hqw::dense::CMatrix;
use hqw::graphs::Graph;
use hqw::hamiltonian::{maxcut_hamiltonian, mis_pauli, mixer_hamiltonian};
use hqw::pauli::PauliOperator;
use proptest::prelude::*;

/// Every `(H_c, H_b)` pair with at most three position qubits.
fn instances() -> Vec<(&'static str, PauliOperator, PauliOperator)> {
    let mc = |g: Graph| maxcut_hamiltonian(&g).unwrap().1;
    let mut out = vec![(
        "Z,X",
        PauliOperator::from_labels(&[("Z", 1.0)]).unwrap(),
        mixer_hamiltonian(1).unwrap(),
    )];
    out.push((
        "edge",
        mc(Graph::unweighted(2, &[(0, 1)]).unwrap()),
        mixer_hamiltonian(2).unwrap(),
    ));
    out.push((
        "path3",
        mc(Graph::unweighted(3, &[(0, 1), (1, 2)]).unwrap()),
        mixer_hamiltonian(3).unwrap(),
    ));
    out.push((
        "triangle",
        mc(Graph::complete(3)),
        mixer_hamiltonian(3).unwrap(),
    ));
    out.push((
        "weighted3",
        mc(Graph::new(3, [(0, 1, 1.0), (1, 2, 0.5), (0, 2, 2.0)]).unwrap()),
        mixer_hamiltonian(3).unwrap(),
    ));
    out.push((
        "mis_path3",
        mis_pauli(&Graph::unweighted(3, &[(0, 1), (1, 2)]).unwrap(), 1.0).unwrap(),
        mixer_hamiltonian(3).unwrap(),
    ));
    out
}

fn dense_span_of(b: &AlgebraBasis) -> DenseSpan {
    let mut s = DenseSpan::default();
    for e in b.elements() {
        assert!(
            s.try_add(e.hermitian().to_dense()),
            "emitted basis is dependent"
        );
    }
    s
}

fn check(name: &str, what: &str, pauli: &AlgebraBasis, dense: &DenseSpan) {
    assert_eq!(pauli.dim(), dense.dim(), "{name} {what} dimension");
    let r = mutual_residual(&dense_span_of(pauli), dense);
    assert!(r < 1e-9, "{name} {what} span residual {r:e}");
}

fn dense_hqw_generators(hc: &CMatrix, hb: &CMatrix) -> Vec<CMatrix> {
    let id = CMatrix::identity(hc.nrows(), hc.nrows());
    vec![
        kron(&pauli('Y'), &id),
        kron(&pauli('Z'), &id),
        kron(&projector(1), hc),
        kron(&projector(0), hb),
    ]
}

#[test]
fn closures_match_dense_oracle() {
    for (name, hc, hb) in instances() {
        let (dc, db) = (dense_label_free(&hc), dense_label_free(&hb));
        let id = CMatrix::identity(dc.nrows(), dc.nrows());

        let g_q = dense_closure(&[dc.clone(), db.clone()], false);
        check(name, "g_Q", &qaoa_dla(&hc, &hb).unwrap(), &g_q);

        let l_q_dense = dense_closure(&[dc.clone(), db.clone(), id], true);
        let l_q = l_q_basis(&hc, &hb).unwrap();
        check(name, "L_Q", &l_q, &l_q_dense);

        let mut k_q_dense = DenseSpan::default();
        for (i, a) in l_q_dense.mats.iter().enumerate() {
            for b in &l_q_dense.mats[i + 1..] {
                k_q_dense.try_add(dense_lie(a, b));
            }
        }
        k_q_dense.try_add(dc.clone());
        k_q_dense.try_add(db.clone());
        check(name, "K_Q", &k_q_basis(&l_q, &hc, &hb).unwrap(), &k_q_dense);

        let g_h = dense_closure(&dense_hqw_generators(&dc, &db), false);
        check(name, "g_H", &hqw_dla(&hc, &hb, None).unwrap(), &g_h);
        assert_eq!(
            g_h.dim(),
            3 * l_q_dense.dim() + k_q_dense.dim(),
            "{name} dimension identity (dense)"
        );
    }
}

/// Dense form built from the operator's labels through Kronecker products.
fn dense_label_free(op: &PauliOperator) -> CMatrix {
    let d = 1usize << op.n_qubits();
    op.terms()
        .iter()
        .fold(CMatrix::zeros(d, d), |acc, (p, &w)| {
            acc + dense_label(&p.to_string()) * c(w, 0.0)
        })
}

#[test]
fn single_qubit_dimensions() {
    let hc = PauliOperator::from_labels(&[("Z", 1.0)]).unwrap();
    let hb = PauliOperator::from_labels(&[("X", 1.0)]).unwrap();
    let r = decomposition_check(&hc, &hb).unwrap();
    assert_eq!(qaoa_dla(&hc, &hb).unwrap().dim(), 3);
    assert_eq!((r.dim_l_q, r.dim_k_q, r.dim_g_h), (4, 3, 15));
    assert!(r.holds());
}

#[test]
fn decomposition_holds_on_every_instance() {
    for (name, hc, hb) in instances() {
        let r = decomposition_check(&hc, &hb).unwrap();
        assert!(r.holds(), "{name}: {r:?}");
    }
}

#[test]
fn closure_is_idempotent() {
    for (name, hc, hb) in instances() {
        let l_q = l_q_basis(&hc, &hb).unwrap();
        assert_eq!(
            jordan_lie_closure(l_q.elements(), None).unwrap().dim(),
            l_q.dim(),
            "{name}"
        );
        let g_h = hqw_dla(&hc, &hb, None).unwrap();
        assert_eq!(
            lie_closure(g_h.elements(), None).unwrap().dim(),
            g_h.dim(),
            "{name}"
        );
    }
}

fn combo(basis: &AlgebraBasis, w: &[f64]) -> AlgebraElement {
    basis.elements().iter().zip(w.iter().cycle()).fold(
        AlgebraElement::new(PauliOperator::zero(basis.n_qubits())),
        |acc, (e, &x)| acc.add(&e.scale(x)).unwrap(),
    )
}

fn max_coeff_diff(a: &AlgebraElement, b: &AlgebraElement) -> f64 {
    let d = a.sub(b).unwrap();
    d.hermitian()
        .terms()
        .values()
        .fold(0.0, |m, v| m.max(v.abs()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn jordan_lie_axioms(which in 0usize..6, wa in prop::collection::vec(-1.0f64..1.0, 1..12),
                         wb in prop::collection::vec(-1.0f64..1.0, 1..12), wc in prop::collection::vec(-1.0f64..1.0, 1..12)) {
        let (_, hc, hb) = instances().swap_remove(which);
        let l_q = l_q_basis(&hc, &hb).unwrap();
        let (a, b, c) = (combo(&l_q, &wa), combo(&l_q, &wb), combo(&l_q, &wc));
        let lie = |x: &AlgebraElement, y: &AlgebraElement| bracket_lie(x, y).unwrap();
        let jor = |x: &AlgebraElement, y: &AlgebraElement| bracket_jordan(x, y).unwrap();

        prop_assert_eq!(jor(&a, &b), jor(&b, &a));
        prop_assert!(max_coeff_diff(&lie(&a, &b), &lie(&b, &a).scale(-1.0)) < 1e-10);

        let leibniz_rhs = jor(&lie(&a, &b), &c).add(&jor(&b, &lie(&a, &c))).unwrap();
        prop_assert!(max_coeff_diff(&lie(&a, &jor(&b, &c)), &leibniz_rhs) < 1e-10);

        let jacobi = lie(&a, &lie(&b, &c)).add(&lie(&b, &lie(&c, &a))).unwrap().add(&lie(&c, &lie(&a, &b))).unwrap();
        prop_assert!(max_coeff_diff(&jacobi, &AlgebraElement::new(PauliOperator::zero(l_q.n_qubits()))) < 1e-10);

        let assoc = jor(&jor(&a, &b), &c).sub(&jor(&a, &jor(&b, &c))).unwrap();
        prop_assert!(max_coeff_diff(&assoc, &lie(&lie(&a, &c), &b)) < 1e-10);

        // closure of L_Q under both maps
        prop_assert!(l_q.contains(&lie(&a, &b)).unwrap());
        prop_assert!(l_q.contains(&jor(&a, &b)).unwrap());
    }
}
