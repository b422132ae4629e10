use std::process::{Command, Output};

fn discrimlab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_discrimlab"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn column(csv: &str, name: &str) -> Vec<String> {
    let mut lines = csv.lines();
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    let i = header
        .iter()
        .position(|c| *c == name)
        .unwrap_or_else(|| panic!("no column {name}"));
    lines.map(|l| l.split(',').nth(i).unwrap().to_string()).collect()
}

#[test]
fn discrim_equal_priors_half_overlap() {
    let out = discrimlab(&["discrim", "--eta1", "0.5", "--gamma2", "0.5", "--samples", "1000"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert_eq!(column(&text, "d_closed"), ["0.853553390593"]);
    assert_eq!(column(&text, "pass"), ["true"]);
}

#[test]
fn same_seed_same_bytes() {
    let args = [
        "discrim",
        "--eta1",
        "0.1,0.4,0.9",
        "--gamma2",
        "0:1:5",
        "--samples",
        "5000",
        "--seed",
        "3",
    ];
    let a = discrimlab(&args);
    let b = discrimlab(&args);
    assert_eq!(a.stdout, b.stdout);
    let c = discrimlab(&[
        "discrim",
        "--eta1",
        "0.1,0.4,0.9",
        "--gamma2",
        "0:1:5",
        "--samples",
        "5000",
        "--seed",
        "4",
    ]);
    assert_ne!(a.stdout, c.stdout);
}

#[test]
fn config_file_with_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    std::fs::write(&cfg, "# bound grid\nq = 0.5\nc = 0.1, 0.25\nformat = json\n").unwrap();
    let out = discrimlab(&["ontic-bound", "--config", cfg.to_str().unwrap(), "--q", "0.2"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let rows = v.as_array().unwrap();
    assert_eq!(rows.len(), 2);
    for row in rows {
        assert_eq!(row["q"], 0.2);
    }
    assert_eq!(rows[0]["bound"], 0.84);
}

#[test]
fn writes_to_out_path() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bell.json");
    let out = discrimlab(&["bell-verify", "--format", "json", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    let rows = v.as_array().unwrap();
    assert_eq!(rows.len(), 1);
    assert_eq!(rows[0]["s_max"], 2.82842712475);
    assert_eq!(rows[0]["pass"], true);
}

#[test]
fn failed_certification_exits_one() {
    let out = discrimlab(&["ontic-search", "--sharp", "false", "--q", "0", "--resolution", "200"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(column(&stdout(&out), "pass"), ["false"]);
}

#[test]
fn bad_input_exits_two() {
    for args in [
        &["discrim", "--eta1", "1.5"][..],
        &["discrim", "--q", "0.5"],
        &["ontic-bound", "--config", "/nonexistent/run.cfg"],
        &["discrim", "--samples", "0"],
    ] {
        let out = discrimlab(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(out.stdout.is_empty());
        assert!(!out.stderr.is_empty());
    }
}

#[test]
fn malformed_config_line_is_reported() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.cfg");
    std::fs::write(&cfg, "q = 0.5\njust words\n").unwrap();
    let out = discrimlab(&["ontic-bound", "--config", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains(":2"), "{err}");
}

#[test]
fn theta_sweep_grows_with_entanglement() {
    let out = discrimlab(&["bell-sweep", "--points", "16"]);
    assert_eq!(out.status.code(), Some(0));
    let s: Vec<f64> = column(&stdout(&out), "s_max")
        .iter()
        .map(|v| v.parse().unwrap())
        .collect();
    assert_eq!(s.len(), 16);
    assert!(s.windows(2).all(|w| w[1] >= w[0] - 1e-9), "{s:?}");
    assert!((s[15] - 2.0 * 2f64.sqrt()).abs() < 1e-9);
}

#[test]
fn scenario_file_for_bell_verify() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("product.json");
    std::fs::write(
        &path,
        r#"{"amplitudes": [[1, 0], [0, 0], [0, 0], [0, 0]], "alice_dirs": [[0, 0, 1], [1, 0, 0]]}"#,
    )
    .unwrap();
    let out = discrimlab(&["bell-verify", "--scenario", path.to_str().unwrap()]);
    // A product state conditions to zero weight on one outcome: reported per row, not fatal.
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(
        column(&text, "error")[0].starts_with("degenerate conditioning"),
        "{text}"
    );
    assert_eq!(column(&text, "s_max"), [""]);
}
