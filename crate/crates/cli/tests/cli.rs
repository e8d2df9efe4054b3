use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn vqc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_vqc"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn kv(text: &str, key: &str) -> String {
    text.lines()
        .find_map(|l| l.strip_prefix(&format!("{key}=")))
        .unwrap_or_else(|| panic!("{key} missing"))
        .to_string()
}

fn write_kernel(dir: &Path) -> String {
    let p = dir.join("k.ir");
    fs::write(&p, "YZZZY\nXZZZX\n").unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn compile_reports_cancellation_per_mode() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_kernel(dir.path());
    for (mode, canceled) in [("tetris", "4"), ("naive_chain", "0")] {
        let out = vqc(&["compile", "--input", &input, "--topology", "linear:5", "--mode", mode]);
        assert!(out.status.success());
        assert_eq!(
            kv(&String::from_utf8(out.stdout).unwrap(), "canceled_cnots"),
            canceled,
            "{mode}"
        );
    }
}

#[test]
fn writes_qasm_report_and_csv() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_kernel(dir.path());
    let qasm = dir.path().join("out.qasm");
    let json = dir.path().join("r.json");
    let csv = dir.path().join("runs.csv");
    let mut stdout = String::new();
    for _ in 0..2 {
        let out = vqc(&[
            "compile",
            "--input",
            &input,
            "--topology",
            "grid:2x3",
            "--qasm-out",
            qasm.to_str().unwrap(),
            "--report-out",
            json.to_str().unwrap(),
            "--csv-out",
            csv.to_str().unwrap(),
        ]);
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
        stdout = String::from_utf8(out.stdout).unwrap();
    }
    let text = fs::read_to_string(&qasm).unwrap();
    assert!(text.starts_with("OPENQASM 2.0;"));
    assert!(!text.contains("swap"));
    let report: serde_json::Value = serde_json::from_str(&fs::read_to_string(&json).unwrap()).unwrap();
    for key in ["canceled_cnots", "cnot_count", "swap_count", "depth"] {
        assert_eq!(report[key].to_string(), kv(&stdout, key), "{key}");
    }
    let rows: Vec<String> = fs::read_to_string(&csv).unwrap().lines().map(String::from).collect();
    assert_eq!(rows.len(), 3);
    assert!(rows[0].starts_with("input,topology,mode"));
    assert_eq!(rows[1], rows[2]);
}

#[test]
fn repeated_runs_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let ir = dir.path().join("ucc.ir");
    assert!(
        vqc(&["gen-ucc", "--n", "6", "--seed", "3", "--out", ir.to_str().unwrap()])
            .status
            .success()
    );
    let run = |tag: &str| {
        let q = dir.path().join(format!("{tag}.qasm"));
        let r = dir.path().join(format!("{tag}.txt"));
        let out = vqc(&[
            "compile",
            "--input",
            ir.to_str().unwrap(),
            "--topology",
            "heavyhex",
            "--w",
            "5",
            "--k",
            "4",
            "--qasm-out",
            q.to_str().unwrap(),
            "--report-out",
            r.to_str().unwrap(),
        ]);
        assert!(out.status.success());
        (fs::read(q).unwrap(), fs::read(r).unwrap())
    };
    assert_eq!(run("a"), run("b"));
}

#[test]
fn generators_are_seeded() {
    let dir = tempfile::tempdir().unwrap();
    let gen = |name: &str, seed: &str| {
        let p = dir.path().join(name);
        let out = vqc(&[
            "gen-qaoa",
            "--kind",
            "regular",
            "--n",
            "16",
            "--seed",
            seed,
            "--out",
            p.to_str().unwrap(),
        ]);
        assert!(out.status.success());
        fs::read_to_string(p).unwrap()
    };
    let a = gen("a.ir", "9");
    assert_eq!(a, gen("b.ir", "9"));
    let strings = a
        .lines()
        .filter(|l| !l.trim().is_empty() && !l.starts_with('#'))
        .count();
    assert_eq!(strings, 24);
}

#[test]
fn graph_file_and_initial_mapping() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_kernel(dir.path());
    let graph = dir.path().join("ring.txt");
    fs::write(&graph, "n 6\n0 1\n1 2\n2 3\n3 4\n4 5\n5 0\n").unwrap();
    let mapping = dir.path().join("map.txt");
    fs::write(&mapping, "5 0 1 2 3\n").unwrap();
    let out = vqc(&[
        "compile",
        "--input",
        &input,
        "--topology",
        graph.to_str().unwrap(),
        "--initial-mapping",
        mapping.to_str().unwrap(),
        "--bridge",
        "off",
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(kv(&String::from_utf8(out.stdout).unwrap(), "bridges"), "0");
}

#[test]
fn errors_exit_nonzero_with_diagnostic() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.ir");
    fs::write(&bad, "ZZ\nQZ\n").unwrap();
    let out = vqc(&["compile", "--input", bad.to_str().unwrap(), "--topology", "linear:3"]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2"));

    let input = write_kernel(dir.path());
    let out = vqc(&["compile", "--input", &input, "--topology", "moebius"]);
    assert!(!out.status.success());
    let out = vqc(&["compile", "--input", &input, "--topology", "linear:3"]);
    assert!(!out.status.success());
    let out = vqc(&[
        "gen-qaoa",
        "--kind",
        "regular",
        "--n",
        "3",
        "--out",
        dir.path().join("x").to_str().unwrap(),
    ]);
    assert!(!out.status.success());
}
