use std::path::Path;
use std::process::{Command, Output};

fn r3k(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_r3k"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn build_then_verify_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let o = r3k(
        &["build", "--n", "400", "--seed", "7", "--out", "."],
        dir.path(),
    );
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(stdout(&o).contains("triangles=0"));
    let list = dir.path().join("overlay_n400_s7.edges");
    assert!(list.is_file() && dir.path().join("overlay_n400_s7.json").is_file());

    let v = r3k(&["verify", "overlay_n400_s7.edges"], dir.path());
    assert!(v.status.success(), "{}", stderr(&v));
    assert!(stdout(&v).contains("status             ok"));

    let j = r3k(
        &["verify", "overlay_n400_s7.edges", "--format", "json"],
        dir.path(),
    );
    let report: serde_json::Value = serde_json::from_str(&stdout(&j)).unwrap();
    assert_eq!(report["triangles"], 0);
    assert_eq!(report["n"], 400);
    assert_eq!(report["seed"], 7);
}

#[test]
fn build_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    for sub in ["a", "b"] {
        std::fs::create_dir(dir.path().join(sub)).unwrap();
        let o = r3k(
            &[
                "build", "--n", "300", "--seed", "2", "--out", sub, "--format", "json",
            ],
            dir.path(),
        );
        assert!(o.status.success(), "{}", stderr(&o));
    }
    let read =
        |sub: &str| std::fs::read(dir.path().join(sub).join("overlay_n300_s2.graph.json")).unwrap();
    assert_eq!(read("a"), read("b"));
}

#[test]
fn explicit_tiny_parameters() {
    let dir = tempfile::tempdir().unwrap();
    let args = [
        "build",
        "--n",
        "9",
        "--explicit",
        "--N",
        "3",
        "--p",
        "1",
        "--k",
        "3",
        "--out",
        ".",
    ];
    let o = r3k(&args, dir.path());
    assert!(o.status.success(), "{}", stderr(&o));
    let v = r3k(&["verify", "overlay_n9_s0.edges"], dir.path());
    assert!(v.status.success(), "{}", stderr(&v));
}

#[test]
fn config_file_with_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(
        dir.path().join("run.toml"),
        "n = 250\nseed = 1\nout = \".\"\n",
    )
    .unwrap();
    let o = r3k(
        &["build", "--config", "run.toml", "--seed", "4"],
        dir.path(),
    );
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(dir.path().join("overlay_n250_s4.edges").is_file());
}

#[test]
fn usage_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let missing = r3k(&["build", "--n", "200", "--out", "nowhere"], dir.path());
    assert_eq!(missing.status.code(), Some(2));
    assert!(stderr(&missing).contains("does not exist"));

    let half_explicit = r3k(&["build", "--n", "9", "--explicit", "--N", "3"], dir.path());
    assert_eq!(half_explicit.status.code(), Some(2));

    let unknown = r3k(&["build", "--bogus"], dir.path());
    assert_eq!(unknown.status.code(), Some(2));

    let no_file = r3k(&["verify", "absent.edges"], dir.path());
    assert_eq!(no_file.status.code(), Some(2));
}

#[test]
fn triangle_is_a_violation() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("tri.edges"), "3 3 0\n1 2\n2 3\n1 3\n").unwrap();
    let o = r3k(&["verify", "tri.edges"], dir.path());
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("triangles"));
}

#[test]
fn tampered_sidecar_is_a_violation() {
    let dir = tempfile::tempdir().unwrap();
    assert!(r3k(&["build", "--n", "200", "--out", "."], dir.path())
        .status
        .success());
    let list = dir.path().join("overlay_n200_s0.edges");
    let text = std::fs::read_to_string(&list).unwrap();
    // drop the last edge and fix up the header count
    let mut lines: Vec<&str> = text.lines().collect();
    lines.pop();
    let header: Vec<&str> = lines[0].split_whitespace().collect();
    let edges: usize = header[1].parse().unwrap();
    let new_header = format!("{} {} {}", header[0], edges - 1, header[2]);
    lines[0] = &new_header;
    std::fs::write(&list, lines.join("\n") + "\n").unwrap();
    let o = r3k(&["verify", "overlay_n200_s0.edges"], dir.path());
    assert_eq!(o.status.code(), Some(1), "{}", stderr(&o));
}

#[test]
fn empty_graph_alpha_is_n() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("empty.edges"), "12 0 5\n").unwrap();
    let o = r3k(&["alpha", "empty.edges", "--format", "json"], dir.path());
    assert!(o.status.success(), "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["greedy"]["value"], 12);
    assert_eq!(v["exact"]["value"], 12);
}

#[test]
fn hyper_build_and_verify() {
    let dir = tempfile::tempdir().unwrap();
    let o = r3k(
        &[
            "hyper",
            "--n",
            "40",
            "--explicit",
            "--N",
            "7",
            "--p",
            "0.6",
            "--k",
            "20",
            "--out",
            ".",
        ],
        dir.path(),
    );
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(stdout(&o).contains("s4_free=true"));
    let v = r3k(&["verify", "hyper_n40_s0.triples"], dir.path());
    assert!(v.status.success(), "{}", stderr(&v));
}

#[test]
fn diagnose_prints_all_bounds() {
    let dir = tempfile::tempdir().unwrap();
    let o = r3k(
        &[
            "diagnose", "--n", "500", "--sets", "2", "--seeds", "2", "--format", "json",
        ],
        dir.path(),
    );
    assert!(o.status.success(), "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v.as_array().unwrap().len(), 2);
    assert_eq!(v[0]["concentration"]["bounds"].as_array().unwrap().len(), 7);
}

#[test]
fn sweep_rows_are_deterministic_and_consistent() {
    let dir = tempfile::tempdir().unwrap();
    let args = [
        "sweep",
        "--n",
        "150,250",
        "--seeds",
        "2",
        "--constructions",
        "overlay,edge-deletion,process",
        "--exact-max-n",
        "150",
    ];
    let run = |out: &str| {
        let mut a = args.to_vec();
        a.extend(["--out", out]);
        let o = r3k(&a, dir.path());
        assert!(o.status.success(), "{}", stderr(&o));
        std::fs::read_to_string(dir.path().join(out)).unwrap()
    };
    let (first, second) = (run("a.csv"), run("b.csv"));
    assert_eq!(first, second);

    let mut lines = first.lines();
    assert!(lines.next().unwrap().starts_with("# r3k sweep schema v1 "));
    let body = lines.collect::<Vec<_>>().join("\n");
    let mut rd = csv::Reader::from_reader(body.as_bytes());
    let headers = rd.headers().unwrap().clone();
    let col = |name: &str| headers.iter().position(|h| h == name).unwrap();
    let rows: Vec<csv::StringRecord> = rd.records().map(Result::unwrap).collect();
    assert_eq!(rows.len(), 12);
    for r in &rows {
        let n: f64 = r[col("n")].parse().unwrap();
        let alpha: f64 = r[col("alpha_greedy")].parse().unwrap();
        let ratio: f64 = r[col("alpha_ratio")].parse().unwrap();
        assert!((ratio - alpha / (n * n.ln()).sqrt()).abs() < 1e-12);
        assert_eq!(&r[col("triangles")], "0");
        let exact = &r[col("alpha_exact")];
        assert_eq!(exact.is_empty(), n > 150.0);
        if !exact.is_empty() {
            assert!(alpha <= exact.parse().unwrap());
        }
    }
}
