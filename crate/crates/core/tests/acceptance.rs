//! Acceptance run: one PASS/FAIL line per criterion.
//!
//! `cargo test --release --test acceptance`. Exits 0 after reporting unless
//! `HQW_ACCEPTANCE_STRICT=1`, in which case any FAIL exits 1.

mod common;

use std::fs;
use std::path::Path;
use std::time::Instant;

use anyhow::{bail, Result};
use common::*;
use hqw::algebra::{
    bracket_jordan, bracket_lie, decomposition_check, hqw_dla, k_q_basis, l_q_basis, qaoa_dla,
    AlgebraBasis, AlgebraElement,
};
use hqw::ansatz::{
    hqw_path_expansion, hqw_state, qaoa_reduction_check, AnsatzKind, Circuit, HqwParams, HqwStep,
    QaoaParams,
};
use hqw::bench::{
    run_component_analysis, run_maxcut_benchmark, run_negativity_correlation, BenchmarkConfig,
    BenchmarkTable,
};
use hqw::control::{
    blend_coefficients, control_hamiltonian, integrate_adjoint, integrate_schrodinger, pmp_sweep,
    ControlInterval, ControlSchedule,
};
use hqw::dense::CMatrix;
use hqw::graphs::{random_connected_graph, Graph};
use hqw::hamiltonian::{maxcut_hamiltonian, mis_hamiltonian, mis_pauli, mixer_hamiltonian};
use hqw::optimizer::{energy, energy_and_gradient, Outcome, ProblemKind};
use hqw::pauli::PauliOperator;
use hqw::simulator::init_plus_state;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Verdict {
    pass: bool,
    detail: String,
    sub: Vec<(String, bool, String)>,
}

impl Verdict {
    fn new(pass: bool, detail: String) -> Self {
        Self {
            pass,
            detail,
            sub: Vec::new(),
        }
    }
}

fn tag(pass: bool) -> &'static str {
    if pass {
        "PASS"
    } else {
        "FAIL"
    }
}

fn within(pass: bool, t: &Instant, limit_s: f64) -> bool {
    pass && t.elapsed().as_secs_f64() < limit_s
}

fn random_graph(n: usize, rng: &mut impl Rng) -> Graph {
    if n == 1 {
        return Graph::new(1, []).unwrap();
    }
    random_connected_graph(n, n - 1, n * (n - 1) / 2, rng.random()).unwrap()
}

fn random_hqw(steps: usize, rng: &mut impl Rng) -> HqwParams {
    let mut a = || rng.random_range(0.0..std::f64::consts::TAU);
    HqwParams::new(
        (0..steps)
            .map(|_| HqwStep {
                gamma: a(),
                beta: a(),
                theta: a(),
                phi: a(),
                delta: a(),
            })
            .collect(),
    )
    .unwrap()
}

fn reduction() -> Result<Verdict> {
    let t = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut worst = 0.0f64;
    for i in 0..100 {
        let (p, n) = (1 + i % 3, 2 + (i / 3) % 3);
        let (diag, _) = maxcut_hamiltonian(&random_graph(n, &mut rng))?;
        let layers = (0..p)
            .map(|_| (rng.random_range(-6.3..6.3), rng.random_range(-6.3..6.3)))
            .collect();
        worst = worst.max(qaoa_reduction_check(&QaoaParams::new(layers)?, &diag, n)?);
    }
    Ok(Verdict::new(
        within(worst < 1e-10, &t, 10.0),
        format!(
            "max residual {worst:.2e} over 100 draws ({:.2} s)",
            t.elapsed().as_secs_f64()
        ),
    ))
}

fn path_expansion() -> Result<Verdict> {
    let t = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut worst = 0.0f64;
    for i in 0..50 {
        let (p, n) = (1 + i % 8, 1 + (i * 7) % 6);
        let (diag, _) = maxcut_hamiltonian(&random_graph(n, &mut rng))?;
        let params = random_hqw(p, &mut rng);
        let (sum, _) = hqw_path_expansion(&params, &diag, n)?;
        worst = worst.max(max_abs_diff(
            sum.amplitudes(),
            hqw_state(&params, &diag, n)?.amplitudes(),
        ));
    }
    Ok(Verdict::new(
        within(worst < 1e-10, &t, 30.0),
        format!(
            "max |Δ| {worst:.2e} over 50 draws ({:.2} s)",
            t.elapsed().as_secs_f64()
        ),
    ))
}

fn gradients() -> Result<Verdict> {
    let t = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let h = 1e-6;
    let mut worst = [0.0f64; 2];
    for (slot, kind) in [AnsatzKind::Qaoa { p: 2 }, AnsatzKind::Hqw { steps: 4 }]
        .into_iter()
        .enumerate()
    {
        for i in 0..25 {
            let n = 3 + i % 4;
            let g = random_graph(n, &mut rng);
            let diag = if i % 2 == 0 {
                maxcut_hamiltonian(&g)?.0
            } else {
                mis_hamiltonian(&g, 1.0)?
            };
            let circuit = Circuit::new(kind, n)?;
            let x: Vec<f64> = (0..circuit.n_params())
                .map(|_| rng.random_range(0.0..std::f64::consts::TAU))
                .collect();
            let (_, grad) = energy_and_gradient(&circuit, &diag, &x)?;
            for (k, gk) in grad.iter().enumerate() {
                let (mut xp, mut xm) = (x.clone(), x.clone());
                xp[k] += h;
                xm[k] -= h;
                let fd =
                    (energy(&circuit, &diag, &xp)? - energy(&circuit, &diag, &xm)?) / (2.0 * h);
                worst[slot] = worst[slot].max((gk - fd).abs() / (1.0 + fd.abs()));
            }
        }
    }
    let pass = worst.iter().all(|&w| w < 1e-5);
    Ok(Verdict::new(
        within(pass, &t, 30.0),
        format!(
            "max relative error QAOA {:.2e}, HQW {:.2e} at 25 points each ({:.2} s)",
            worst[0],
            worst[1],
            t.elapsed().as_secs_f64()
        ),
    ))
}

fn algebra_instances() -> Result<Vec<(&'static str, PauliOperator, PauliOperator)>> {
    let mc = |g: Graph| maxcut_hamiltonian(&g).map(|(_, op)| op);
    Ok(vec![
        (
            "Z,X",
            PauliOperator::from_labels(&[("Z", 1.0)])?,
            mixer_hamiltonian(1)?,
        ),
        (
            "edge",
            mc(Graph::unweighted(2, &[(0, 1)])?)?,
            mixer_hamiltonian(2)?,
        ),
        (
            "path3",
            mc(Graph::unweighted(3, &[(0, 1), (1, 2)])?)?,
            mixer_hamiltonian(3)?,
        ),
        ("triangle", mc(Graph::complete(3))?, mixer_hamiltonian(3)?),
        (
            "mis_path3",
            mis_pauli(&Graph::unweighted(3, &[(0, 1), (1, 2)])?, 1.0)?,
            mixer_hamiltonian(3)?,
        ),
    ])
}

fn dense_of(op: &PauliOperator) -> CMatrix {
    let d = 1usize << op.n_qubits();
    op.terms()
        .iter()
        .fold(CMatrix::zeros(d, d), |acc, (p, &w)| {
            acc + dense_label(&p.to_string()) * c(w, 0.0)
        })
}

fn span_gap(pauli: &AlgebraBasis, dense: &DenseSpan) -> (bool, f64) {
    let mut s = DenseSpan::default();
    for e in pauli.elements() {
        s.try_add(e.hermitian().to_dense());
    }
    (
        s.dim() == dense.dim() && pauli.dim() == dense.dim(),
        mutual_residual(&s, dense),
    )
}

fn max_coeff(a: &AlgebraElement, b: &AlgebraElement) -> Result<f64> {
    Ok(a.sub(b)?
        .hermitian()
        .terms()
        .values()
        .fold(0.0, |m, v| m.max(v.abs())))
}

fn algebra() -> Result<Verdict> {
    let t = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut axiom_err = 0.0f64;
    let mut dims_ok = true;
    let mut span_res = 0.0f64;
    let mut decomp = true;
    let mut zx = (0, 0, 0, 0);
    for (name, hc, hb) in algebra_instances()? {
        let l_q = l_q_basis(&hc, &hb)?;
        let combo = |rng: &mut ChaCha8Rng| -> hqw::Result<AlgebraElement> {
            l_q.elements().iter().try_fold(
                AlgebraElement::new(PauliOperator::zero(l_q.n_qubits())),
                |acc, e| acc.add(&e.scale(rng.random_range(-1.0..1.0))),
            )
        };
        for _ in 0..20 {
            let (a, b, cc) = (combo(&mut rng)?, combo(&mut rng)?, combo(&mut rng)?);
            let lie = |x: &AlgebraElement, y: &AlgebraElement| bracket_lie(x, y);
            let jor = |x: &AlgebraElement, y: &AlgebraElement| bracket_jordan(x, y);
            axiom_err = axiom_err.max(max_coeff(&jor(&a, &b)?, &jor(&b, &a)?)?);
            axiom_err = axiom_err.max(max_coeff(&lie(&a, &b)?, &lie(&b, &a)?.scale(-1.0))?);
            let leibniz = jor(&lie(&a, &b)?, &cc)?.add(&jor(&b, &lie(&a, &cc)?)?)?;
            axiom_err = axiom_err.max(max_coeff(&lie(&a, &jor(&b, &cc)?)?, &leibniz)?);
            let jacobi = lie(&a, &lie(&b, &cc)?)?
                .add(&lie(&b, &lie(&cc, &a)?)?)?
                .add(&lie(&cc, &lie(&a, &b)?)?)?;
            axiom_err = axiom_err.max(
                jacobi
                    .hermitian()
                    .terms()
                    .values()
                    .fold(0.0, |m, v| m.max(v.abs())),
            );
            let assoc = jor(&jor(&a, &b)?, &cc)?.sub(&jor(&a, &jor(&b, &cc)?)?)?;
            axiom_err = axiom_err.max(max_coeff(&assoc, &lie(&lie(&a, &cc)?, &b)?)?);
        }

        let (dc, db) = (dense_of(&hc), dense_of(&hb));
        let id = CMatrix::identity(dc.nrows(), dc.nrows());
        let g_q = qaoa_dla(&hc, &hb)?;
        let l_dense = dense_closure(&[dc.clone(), db.clone(), id.clone()], true);
        let g_h_dense = dense_closure(
            &[
                kron(&pauli('Y'), &id),
                kron(&pauli('Z'), &id),
                kron(&projector(1), &dc),
                kron(&projector(0), &db),
            ],
            false,
        );
        let g_h = hqw_dla(&hc, &hb, None)?;
        for (pb, dn) in [
            (&g_q, &dense_closure(&[dc.clone(), db.clone()], false)),
            (&l_q, &l_dense),
            (&g_h, &g_h_dense),
        ] {
            let (d, r) = span_gap(pb, dn);
            dims_ok &= d;
            span_res = span_res.max(r);
        }
        let r = decomposition_check(&hc, &hb)?;
        decomp &= r.holds();
        if name == "Z,X" {
            zx = (
                g_q.dim(),
                l_q.dim(),
                k_q_basis(&l_q, &hc, &hb)?.dim(),
                g_h.dim(),
            );
        }
    }
    let pass = axiom_err < 1e-10 && dims_ok && span_res < 1e-9 && decomp && zx == (3, 4, 3, 15);
    Ok(Verdict::new(
        within(pass, &t, 60.0),
        format!(
            "axioms {axiom_err:.1e}, dense closures match {dims_ok} (span residual {span_res:.1e}), dimension identity {decomp}, (Z,X) dims {zx:?} ({:.1} s)",
            t.elapsed().as_secs_f64()
        ),
    ))
}

fn pmp() -> Result<Verdict> {
    let t = Instant::now();
    let mut blend_err = 0.0f64;
    for i in 0..=100 {
        let (a, b, cc) = blend_coefficients(i as f64 / 100.0)?;
        blend_err = blend_err.max((a + b + cc - 1.0).abs());
    }
    let ends = blend_coefficients(0.0)? == (0.0, 0.0, 1.0)
        && blend_coefficients(0.5)? == (0.0, 1.0, 0.0)
        && blend_coefficients(1.0)? == (1.0, 0.0, 0.0);

    let (diag, _) = maxcut_hamiltonian(&Graph::unweighted(2, &[(0, 1)])?)?;
    let (hc, hb) = (diag.to_dense(), mixer_hamiltonian(2)?.to_dense());
    let psi0 = init_plus_state(2, true)?.to_cvector();
    let schedule = ControlSchedule::new(vec![
        ControlInterval {
            duration: 0.4,
            u: 0.0,
            axis: Some([0.0, 1.0, 0.0]),
        },
        ControlInterval {
            duration: 0.5,
            u: 1.0,
            axis: None,
        },
        ControlInterval {
            duration: 0.3,
            u: 0.5,
            axis: None,
        },
    ])?;
    let dt = 0.01;
    let report = pmp_sweep(&psi0, &schedule, dt, &hc, &hb)?;
    let (_, psis) = integrate_schrodinger(&psi0, &schedule, dt, &hc, &hb)?;
    let ks = integrate_adjoint(psis.last().expect("non-empty"), &schedule, dt, &hc, &hb)?;
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut slack = f64::INFINITY;
    for ((row, psi), k) in report.rows.iter().zip(&psis).zip(&ks) {
        for u in [0.0, 0.25] {
            let best = control_hamiltonian(psi, k, u, row.axis, &hc, &hb)?;
            for _ in 0..1000 {
                let v: [f64; 3] = std::array::from_fn(|_| rng.random_range(-1.0..1.0));
                let n = v.iter().map(|a| a * a).sum::<f64>().sqrt();
                slack =
                    slack.min(best - control_hamiltonian(psi, k, u, v.map(|a| a / n), &hc, &hb)?);
            }
        }
    }
    let fine = pmp_sweep(&psi0, &schedule, 1e-3, &hc, &hb)?;
    let spread = report.axis_std().into_iter().fold(0.0, f64::max);
    let pass = blend_err < 1e-14
        && ends
        && slack >= -1e-12
        && fine.conservation_drift < 1e-8
        && spread > 1e-3;
    Ok(Verdict::new(
        within(pass, &t, 60.0),
        format!(
            "blend sum error {blend_err:.1e}, endpoints {ends}, min H(opt) - H(random) {slack:.1e} over {} points, drift {:.1e}, axis std {spread:.3} ({:.1} s)",
            report.rows.len(),
            fine.conservation_drift,
            t.elapsed().as_secs_f64()
        ),
    ))
}

fn class_runs(out: &Path) -> Result<(BenchmarkTable, BenchmarkTable)> {
    let cfg = |lo, hi| BenchmarkConfig {
        out_dir: Some(out.to_path_buf()),
        ..BenchmarkConfig::maxcut_class(lo, hi)
    };
    Ok((
        run_maxcut_benchmark(&cfg(18, 23))?,
        run_maxcut_benchmark(&cfg(24, 28))?,
    ))
}

fn benchmark(sparse: &BenchmarkTable, dense: &BenchmarkTable, secs: f64) -> Verdict {
    let frac = |t: &BenchmarkTable| {
        t.rows.iter().filter(|r| r.outcome != Outcome::Qaoa).count() as f64 / t.rows.len() as f64
    };
    let (fs_, fd) = (frac(sparse), frac(dense));
    let a = fs_ >= 0.8 && fd >= 0.9;

    let best_fail: Vec<String> = [("18-23", sparse), ("24-28", dense)]
        .iter()
        .flat_map(|(name, t)| {
            t.rows
                .iter()
                .filter(|r| r.hqw.best > r.qaoa.best + 1e-6)
                .map(move |r| format!("{name}/g{}", r.graph_id))
        })
        .collect();
    let b = best_fail.is_empty();

    let (ms, md) = (
        sparse.summary.mean_rel_improvement_pct,
        dense.summary.mean_rel_improvement_pct,
    );
    let c = matches!((ms, md), (Some(s), Some(d)) if d > s);

    let top = dense.best_improvement();
    let d = top.is_some_and(|r| r.is_complete);

    let sub = vec![
        (
            "6a".into(),
            a,
            format!(
                "HQW mean gap <= QAOA on {:.0}% of 18-23 and {:.0}% of 24-28 graphs",
                100.0 * fs_,
                100.0 * fd
            ),
        ),
        (
            "6b".into(),
            b,
            if b {
                "HQW best gap <= QAOA best gap + 1e-6 on every graph".into()
            } else {
                format!(
                    "HQW best gap above QAOA best gap + 1e-6 on {}",
                    best_fail.join(", ")
                )
            },
        ),
        (
            "6c".into(),
            c,
            format!(
                "mean relative improvement 24-28 {:.2}% vs 18-23 {:.2}%",
                md.unwrap_or(f64::NAN),
                ms.unwrap_or(f64::NAN)
            ),
        ),
        (
            "6d".into(),
            d,
            match top {
                Some(r) => format!(
                    "largest dense-class improvement {:.2}% on g{} ({} edges, complete {})",
                    r.rel_improvement_pct.unwrap_or(f64::NAN),
                    r.graph_id,
                    r.n_edges,
                    r.is_complete
                ),
                None => "no defined improvement".into(),
            },
        ),
    ];
    Verdict {
        pass: a && b && c && d,
        detail: format!(
            "10 graphs per class, 20 restarts, 300 steps, p=2 vs 4 steps ({secs:.1} s)"
        ),
        sub,
    }
}

fn components() -> Result<Verdict> {
    let t = Instant::now();
    let cfg = BenchmarkConfig {
        depths: vec![4],
        ..BenchmarkConfig::components(ProblemKind::MaxCut)
    };
    let s = run_component_analysis(&cfg)?;
    let get = |a: &str| s.point(4, a).map(|p| (p.mean_energy, p.std_energy));
    let (Some(h), Some(q), Some(v1), Some(v2)) =
        (get("hqw"), get("qaoa"), get("variant1"), get("variant2"))
    else {
        bail!("missing depth-4 points");
    };
    let order = h.0 <= q.0 && q.0 <= v1.0.min(v2.0);
    let smallest_std = h.1 <= q.1 && h.1 <= v1.1 && h.1 <= v2.1;
    Ok(Verdict::new(
        order && smallest_std,
        format!(
            "p=4 mean (std): HQW {:.4} ({:.3}), QAOA {:.4} ({:.3}), variant1 {:.4} ({:.3}), variant2 {:.4} ({:.3}); ground {} ({:.1} s)",
            h.0, h.1, q.0, q.1, v1.0, v1.1, v2.0, v2.1, s.ground_energy, t.elapsed().as_secs_f64()
        ),
    ))
}

fn correlation() -> Result<Verdict> {
    let t = Instant::now();
    let res = run_negativity_correlation(&BenchmarkConfig::correlation(19))?;
    let Some(fit) = res.fit else {
        return Ok(Verdict::new(
            false,
            format!("no fit: {}", res.degenerate.unwrap_or_default()),
        ));
    };
    let (lo, hi) = res
        .rows
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), r| {
            (a.min(r.n_min), b.max(r.n_min))
        });
    Ok(Verdict::new(
        fit.r >= 0.8 && fit.slope > 0.0,
        format!(
            "r = {:.3}, slope {:.3}, p = {:.3} over {} instances; N_min in [{lo:.5}, {hi:.5}] ({:.1} s)",
            fit.r,
            fit.slope,
            fit.p_value.unwrap_or(f64::NAN),
            fit.n,
            t.elapsed().as_secs_f64()
        ),
    ))
}

fn determinism(first: &Path) -> Result<Verdict> {
    let t = Instant::now();
    let second = tempfile::tempdir()?;
    class_runs(second.path())?;
    let mut differing = Vec::new();
    for class in ["maxcut_18_23", "maxcut_24_28"] {
        for f in ["runs.csv", "aggregate.csv"] {
            if fs::read(first.join(class).join(f))? != fs::read(second.path().join(class).join(f))?
            {
                differing.push(format!("{class}/{f}"));
            }
        }
    }
    Ok(Verdict::new(
        differing.is_empty(),
        if differing.is_empty() {
            format!(
                "runs.csv and aggregate.csv byte-identical across two runs ({:.1} s)",
                t.elapsed().as_secs_f64()
            )
        } else {
            format!("differs: {}", differing.join(", "))
        },
    ))
}

fn report(id: &str, name: &str, v: Result<Verdict>, tally: &mut (usize, usize)) {
    let v = v.unwrap_or_else(|e| Verdict::new(false, format!("error: {e:#}")));
    if v.pass {
        tally.0 += 1;
    } else {
        tally.1 += 1;
    }
    println!("{} {id} {name}: {}", tag(v.pass), v.detail);
    for (sid, pass, detail) in v.sub {
        println!("  {} {sid}: {detail}", tag(pass));
    }
}

fn main() {
    let mut tally = (0, 0);
    report("1", "QAOA reduction", reduction(), &mut tally);
    report("2", "path expansion", path_expansion(), &mut tally);
    report("3", "adjoint gradients", gradients(), &mut tally);
    report("4", "algebra suite", algebra(), &mut tally);
    report("5", "PMP suite", pmp(), &mut tally);

    let first = tempfile::tempdir().expect("temporary directory");
    let t = Instant::now();
    let classes = class_runs(first.path());
    let secs = t.elapsed().as_secs_f64();
    let classes_ok = classes.is_ok();
    report(
        "6",
        "benchmark classes",
        classes.map(|(s, d)| benchmark(&s, &d, secs)),
        &mut tally,
    );
    report("7", "component analysis", components(), &mut tally);
    report("8", "negativity correlation", correlation(), &mut tally);
    let det = if classes_ok {
        determinism(first.path())
    } else {
        Err(anyhow::anyhow!("first benchmark run failed"))
    };
    report("9", "determinism", det, &mut tally);

    println!("acceptance: {} passed, {} failed", tally.0, tally.1);
    if tally.1 > 0 && std::env::var("HQW_ACCEPTANCE_STRICT").is_ok_and(|v| v == "1") {
        std::process::exit(1);
    }
}
