use std::path::Path;
use std::process::{Command, Output};
use std::time::{Duration, Instant};

fn qcwalk(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qcwalk"))
        .args(args)
        .output()
        .expect("spawn qcwalk")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn last_row(csv: &str) -> Vec<f64> {
    csv.lines()
        .last()
        .unwrap()
        .split(',')
        .map(|x| x.parse().unwrap())
        .collect()
}

fn read(path: &Path) -> String {
    std::fs::read_to_string(path).unwrap()
}

#[test]
fn graph_complete_five() {
    let out = qcwalk(&["graph", "complete", "5"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    let body: Vec<&str> = text.lines().filter(|l| !l.starts_with('#')).collect();
    assert_eq!(body[0], "5");
    assert_eq!(body.len() - 1, 10);
    assert!(text.contains("# fiedler: 5\n"));
}

#[test]
fn graph_ring_reports_fiedler_value() {
    let out = qcwalk(&["graph", "ring", "11"]);
    let line = stdout(&out)
        .lines()
        .find(|l| l.starts_with("# fiedler:"))
        .unwrap()
        .to_string();
    let value: f64 = line.rsplit(' ').next().unwrap().parse().unwrap();
    let expected = 2.0 * (1.0 - (2.0 * std::f64::consts::PI / 11.0).cos());
    assert!((value - expected).abs() < 1e-10);
}

#[test]
fn invalid_sizes_are_usage_errors() {
    assert_eq!(code(&qcwalk(&["graph", "wheel", "3"])), 1);
    assert_eq!(code(&qcwalk(&["graph", "blob", "5"])), 1);
    assert_eq!(code(&qcwalk(&["graph", "random_connected", "6", "7"])), 1);
    assert_eq!(
        code(&qcwalk(&[
            "distance",
            "--graph",
            "ring:5",
            "--quantities",
            "nope"
        ])),
        1
    );
    assert_eq!(
        code(&qcwalk(&["distance", "--graph", "ring:5", "--node", "5"])),
        1
    );
    assert_eq!(code(&qcwalk(&["frobnicate"])), 1);
    assert_eq!(code(&qcwalk(&["--help"])), 0);
}

#[test]
fn two_node_walk_starts_at_zero() {
    let out = qcwalk(&[
        "distance",
        "--graph",
        "complete:2",
        "--tmin",
        "0",
        "--tmax",
        "1",
        "--steps",
        "1",
        "--linear",
        "--quantities",
        "qc",
    ]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out), "t,qc\n0,0\n");
}

#[test]
fn complete_graph_plateau() {
    let out = qcwalk(&[
        "distance",
        "--graph",
        "complete:5",
        "--tmin",
        "10",
        "--tmax",
        "11",
        "--steps",
        "2",
        "--linear",
        "--quantities",
        "qc",
    ]);
    let row = stdout(&out).lines().nth(1).unwrap().to_string();
    let qc: f64 = row.split(',').nth(1).unwrap().parse().unwrap();
    assert!((qc - 0.8).abs() < 1e-12);
}

#[test]
fn vertex_transitive_graph_has_equal_max_and_mean() {
    let out = qcwalk(&["distance", "--graph", "ring:11", "--steps", "50"]);
    let csv = stdout(&out);
    assert_eq!(csv.lines().next().unwrap(), "t,qc,average");
    for line in csv.lines().skip(1) {
        let v: Vec<f64> = line.split(',').map(|x| x.parse().unwrap()).collect();
        assert!((v[1] - v[2]).abs() < 1e-12, "{line}");
    }
}

#[test]
fn disconnected_graph_is_a_computation_error() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("split.txt");
    std::fs::write(&path, "4\n0 1\n2 3\n").unwrap();
    let out = qcwalk(&["distance", "--edges", path.to_str().unwrap()]);
    assert_eq!(code(&out), 2);
    let missing = dir.path().join("missing.txt");
    assert_eq!(
        code(&qcwalk(&["distance", "--edges", missing.to_str().unwrap()])),
        2
    );
}

#[test]
fn edge_list_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("g.txt");
    let p = path.to_str().unwrap();
    let out = qcwalk(&[
        "graph",
        "random_connected",
        "11",
        "6",
        "--seed",
        "3",
        "--out",
        p,
    ]);
    assert_eq!(code(&out), 0);
    let args = ["--steps", "20", "--quantities", "conditional,qc"];
    let from_file = qcwalk(&[&["distance", "--edges", p][..], &args].concat());
    let generated = qcwalk(
        &[
            &["distance", "--graph", "random:11:6", "--seed", "3"][..],
            &args,
        ]
        .concat(),
    );
    assert_eq!(code(&from_file), 0);
    assert_eq!(stdout(&from_file), stdout(&generated));
}

#[test]
fn output_is_deterministic() {
    let args = [
        "distance",
        "--graph",
        "random:11:5",
        "--seed",
        "9",
        "--quantities",
        "qc,average,coherence,gfid,short,long,gamma_s,gamma_l,delta",
    ];
    let a = qcwalk(&args);
    let b = qcwalk(&args);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
}

fn figure(which: &str, dir: &Path) -> Duration {
    let start = Instant::now();
    let out = qcwalk(&["figure", which, "--out", dir.to_str().unwrap()]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    start.elapsed()
}

#[test]
fn fig1_left_plateaus() {
    let dir = tempfile::tempdir().unwrap();
    assert!(figure("fig1-left", dir.path()) < Duration::from_secs(60));
    for (n, plateau) in [(5, 0.8), (10, 0.9), (20, 0.95)] {
        let csv = read(&dir.path().join(format!("fig1-left_complete_{n}.csv")));
        assert!((last_row(&csv)[1] - plateau).abs() < 1e-9);
    }
}

#[test]
fn fig1_center_curves_coincide() {
    let dir = tempfile::tempdir().unwrap();
    assert!(figure("fig1-center", dir.path()) < Duration::from_secs(60));
    let read_col = |kind: &str| {
        let csv = read(&dir.path().join(format!("fig1-center_{kind}_8_node0.csv")));
        csv.lines()
            .skip(1)
            .map(|l| l.split(',').nth(1).unwrap().parse::<f64>().unwrap())
            .collect::<Vec<_>>()
    };
    let complete = read_col("complete");
    for kind in ["star", "wheel"] {
        for (a, b) in complete.iter().zip(read_col(kind)) {
            assert!((a - b).abs() < 1e-9);
        }
    }
}

#[test]
fn fig3_right_converges_to_inverse_size() {
    let dir = tempfile::tempdir().unwrap();
    assert!(figure("fig3-right", dir.path()) < Duration::from_secs(60));
    let manifest = read(&dir.path().join("manifest.csv"));
    assert_eq!(manifest.lines().count(), 1 + 8);
    for line in manifest.lines().skip(1) {
        let fields: Vec<&str> = line.split(',').collect();
        let n: f64 = fields[3].parse().unwrap();
        let csv = read(&dir.path().join(fields[0]));
        assert!((last_row(&csv)[1] - 1.0 / n).abs() < 1e-6, "{line}");
    }
}

#[test]
fn all_figures_complete_quickly() {
    let dir = tempfile::tempdir().unwrap();
    assert!(figure("all", dir.path()) < Duration::from_secs(60));
    let manifest = read(&dir.path().join("manifest.csv"));
    assert_eq!(manifest.lines().count(), 1 + 27);
    for line in manifest.lines().skip(1) {
        let name = line.split(',').next().unwrap();
        assert!(dir.path().join(name).is_file());
    }
}

#[test]
fn verify_passes_and_detects_tampering() {
    let ok = qcwalk(&["verify"]);
    assert_eq!(code(&ok), 0, "{}", stdout(&ok));
    assert!(!stdout(&ok).contains("FAIL"));

    let bad = qcwalk(&["verify", "--inject-fidelity-bias", "0.5"]);
    assert_eq!(code(&bad), 3);
    assert!(stdout(&bad).contains("worst sample"));

    assert_eq!(code(&qcwalk(&["verify", "--n-max", "12"])), 1);
}
