//! Benchmark outputs: determinism, bookkeeping and CSV-driven plots.

use std::fs;
use std::path::Path;

use hqw::bench::{
    plot_benchmark, read_columns, run_maxcut_benchmark, BenchmarkConfig, BenchmarkTable, Summary,
};
use hqw::optimizer::OptimizerConfig;

fn small(out: &Path) -> BenchmarkConfig {
    BenchmarkConfig {
        name: "small".into(),
        n_vertices: 6,
        m_min: 7,
        m_max: 15,
        count: 4,
        optimizer: OptimizerConfig {
            restarts: 3,
            steps: 40,
            base_seed: 11,
            ..OptimizerConfig::default()
        },
        out_dir: Some(out.to_path_buf()),
        emit_traces: true,
        ..BenchmarkConfig::default()
    }
}

fn run(out: &Path) -> BenchmarkTable {
    run_maxcut_benchmark(&small(out)).unwrap()
}

#[test]
fn reruns_are_byte_identical() {
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    run(a.path());
    run(b.path());
    for f in [
        "runs.csv",
        "aggregate.csv",
        "comparison.csv",
        "traces.csv",
        "summary.json",
        "scatter.svg",
        "improvement_hist.svg",
    ] {
        let x = fs::read(a.path().join("small").join(f)).unwrap();
        let y = fs::read(b.path().join("small").join(f)).unwrap();
        assert!(x == y, "{f} differs");
    }
    for i in 0..4 {
        let g = format!("graphs/g{i:03}.edgelist");
        assert_eq!(
            fs::read(a.path().join("small").join(&g)).unwrap(),
            fs::read(b.path().join("small").join(&g)).unwrap()
        );
    }
}

#[test]
fn different_seeds_change_the_runs() {
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    run(a.path());
    let mut cfg = small(b.path());
    cfg.optimizer.base_seed = 12;
    run_maxcut_benchmark(&cfg).unwrap();
    assert_ne!(
        fs::read(a.path().join("small/runs.csv")).unwrap(),
        fs::read(b.path().join("small/runs.csv")).unwrap()
    );
}

#[test]
fn outcomes_and_summary_recompute_from_rows() {
    let dir = tempfile::tempdir().unwrap();
    let t = run(dir.path());
    let s = &t.summary;
    assert_eq!(s.wins_qaoa + s.wins_hqw + s.ties, t.rows.len());
    assert_eq!(
        s.best.wins_qaoa + s.best.wins_hqw + s.best.ties,
        t.rows.len()
    );
    assert_eq!(t.records.len(), 4 * 2 * 3);

    let cols = read_columns(
        &dir.path().join("small/comparison.csv"),
        &["qaoa_mean_gap", "hqw_mean_gap", "rel_improvement_pct"],
    )
    .unwrap();
    let n = cols.len() as f64;
    let q = cols
        .iter()
        .map(|c| c[0].parse::<f64>().unwrap())
        .sum::<f64>()
        / n;
    let h = cols
        .iter()
        .map(|c| c[1].parse::<f64>().unwrap())
        .sum::<f64>()
        / n;
    assert!((q - s.avg_gap_qaoa).abs() < 1e-12);
    assert!((h - s.avg_gap_hqw).abs() < 1e-12);
    let imps: Vec<f64> = cols
        .iter()
        .filter(|c| !c[2].is_empty())
        .map(|c| c[2].parse().unwrap())
        .collect();
    if let Some(m) = s.mean_rel_improvement_pct {
        assert!((imps.iter().sum::<f64>() / imps.len() as f64 - m).abs() < 1e-12);
    }
    assert_eq!(&Summary::from_rows(&t.rows).unwrap(), s);

    let stored: Summary =
        serde_json::from_str(&fs::read_to_string(dir.path().join("small/summary.json")).unwrap())
            .unwrap();
    assert_eq!(stored.wins_hqw, s.wins_hqw);
    assert!((stored.avg_gap_hqw - s.avg_gap_hqw).abs() < 1e-12);
}

#[test]
fn runs_csv_matches_records() {
    let dir = tempfile::tempdir().unwrap();
    let t = run(dir.path());
    let cols = read_columns(
        &dir.path().join("small/runs.csv"),
        &["graph_id", "algo", "restart", "final_energy", "one_minus_r"],
    )
    .unwrap();
    assert_eq!(cols.len(), t.records.len());
    for (c, r) in cols.iter().zip(&t.records) {
        assert_eq!(c[0], r.graph_id.to_string());
        assert_eq!(c[1], r.algo);
        assert_eq!(c[3].parse::<f64>().unwrap(), r.final_energy);
        assert_eq!(c[4].parse::<f64>().unwrap(), r.one_minus_r.unwrap());
    }
}

#[test]
fn plots_are_rendered_from_the_csv() {
    let dir = tempfile::tempdir().unwrap();
    run(dir.path());
    let d = dir.path().join("small");
    let before = fs::read(d.join("scatter.svg")).unwrap();
    fs::remove_file(d.join("scatter.svg")).unwrap();
    plot_benchmark(&d).unwrap();
    assert_eq!(fs::read(d.join("scatter.svg")).unwrap(), before);

    // editing the CSV alone moves the plotted points
    let text = fs::read_to_string(d.join("aggregate.csv")).unwrap();
    let mut lines: Vec<String> = text.lines().map(String::from).collect();
    let mut fields: Vec<String> = lines[1].split(',').map(String::from).collect();
    fields[2] = "0.5".into();
    lines[1] = fields.join(",");
    fs::write(d.join("aggregate.csv"), lines.join("\n") + "\n").unwrap();
    plot_benchmark(&d).unwrap();
    assert_ne!(fs::read(d.join("scatter.svg")).unwrap(), before);
}
