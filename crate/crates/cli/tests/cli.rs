use std::path::{Path, PathBuf};
use std::process::Command;

use serde_json::Value;
use tempfile::TempDir;

struct Run {
    code: i32,
    stdout: String,
    stderr: String,
}

fn polyiso(args: &[&str]) -> Run {
    let out = Command::new(env!("CARGO_BIN_EXE_polyiso"))
        .args(args)
        .output()
        .expect("binary runs");
    Run {
        code: out.status.code().expect("exit code"),
        stdout: String::from_utf8(out.stdout).unwrap(),
        stderr: String::from_utf8(out.stderr).unwrap(),
    }
}

fn generate(dir: &TempDir, family: &str, n: usize, extra: &[&str]) -> PathBuf {
    let path = dir.path().join(format!("{family}{n}.json"));
    let n = n.to_string();
    let mut args = vec![
        "generate",
        "--family",
        family,
        "--n",
        &n,
        "--out",
        path.to_str().unwrap(),
    ];
    args.extend_from_slice(extra);
    let r = polyiso(&args);
    assert_eq!(r.code, 0, "{}", r.stderr);
    path
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn read_json(p: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(p).unwrap()).unwrap()
}

#[test]
fn generate_sizes() {
    let dir = TempDir::new().unwrap();
    for (family, n, count, dim) in [("phi", 3, 6, 9), ("qap", 2, 2, 16), ("bqp", 4, 16, 16)] {
        let f = read_json(&generate(&dir, family, n, &[]));
        assert_eq!(f["vertices"].as_array().unwrap().len(), count);
        assert_eq!(f["ambient_dim"], dim);
    }
}

#[test]
fn generate_guards() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("x.json");
    let r = polyiso(&["generate", "--family", "bqp", "--n", "17", "--out", s(&out)]);
    assert_eq!(r.code, 2);
    assert!(r.stderr.contains("--force"));
    let r = polyiso(&[
        "generate",
        "--family",
        "qap",
        "--n",
        "3",
        "--out",
        s(&out),
        "--order",
        "display",
    ]);
    assert_eq!(r.code, 2);
    let r = polyiso(&["generate", "--family", "zzz", "--n", "3", "--out", s(&out)]);
    assert_eq!(r.code, 2);
}

#[test]
fn face_exit_codes() {
    let dir = TempDir::new().unwrap();
    let p3 = generate(&dir, "phi", 3, &["--order", "display"]);
    let q3 = generate(&dir, "qap", 3, &[]);
    assert_eq!(
        polyiso(&["face", "--vertices", s(&p3), "--subset", "0,1,2"]).code,
        1
    );
    assert_eq!(
        polyiso(&["face", "--vertices", s(&p3), "--subset", "0"]).code,
        0
    );
    assert_eq!(
        polyiso(&["face", "--vertices", s(&q3), "--subset", "0,1,2"]).code,
        0
    );
    for bad in ["0,0", "0,9", "0,1,2,3,4,5", "x"] {
        assert_eq!(
            polyiso(&["face", "--vertices", s(&p3), "--subset", bad]).code,
            2,
            "{bad}"
        );
    }
    let missing = dir.path().join("missing.json");
    assert_eq!(
        polyiso(&["face", "--vertices", s(&missing), "--subset", "0"]).code,
        2
    );
}

#[test]
fn face_json_goes_to_stdout_without_out() {
    let dir = TempDir::new().unwrap();
    let p3 = generate(&dir, "phi", 3, &["--order", "display"]);
    let r = polyiso(&["face", "--vertices", s(&p3), "--subset", "2,0,1"]);
    let v: Value = serde_json::from_str(&r.stdout).unwrap();
    assert_eq!(v["kind"], "non_face");
    assert_eq!(v["subset"], serde_json::json!([0, 1, 2]));
    assert!(r.stderr.contains("not a face"));
}

#[test]
fn check_roundtrip_tamper_and_mismatch() {
    let dir = TempDir::new().unwrap();
    let p3 = generate(&dir, "phi", 3, &["--order", "display"]);
    let q3 = generate(&dir, "qap", 3, &[]);
    let cert = dir.path().join("cert.json");
    for subset in ["0", "0,3", "0,1,2", "1,2,3,4"] {
        polyiso(&[
            "face",
            "--vertices",
            s(&p3),
            "--subset",
            subset,
            "--out",
            s(&cert),
        ]);
        let r = polyiso(&["check", "--vertices", s(&p3), "--certificate", s(&cert)]);
        assert_eq!(r.code, 0, "{subset}: {}", r.stdout);
    }

    polyiso(&[
        "face",
        "--vertices",
        s(&p3),
        "--subset",
        "0",
        "--out",
        s(&cert),
    ]);
    let mut v = read_json(&cert);
    assert_eq!(v["kind"], "face");
    let eps = v["epsilon"].as_str().unwrap().to_string();
    v["epsilon"] = Value::String(format!("-{eps}"));
    let tampered = dir.path().join("tampered.json");
    std::fs::write(&tampered, v.to_string()).unwrap();
    assert_eq!(
        polyiso(&["check", "--vertices", s(&p3), "--certificate", s(&tampered)]).code,
        1
    );

    assert_eq!(
        polyiso(&["check", "--vertices", s(&q3), "--certificate", s(&cert)]).code,
        2
    );
    std::fs::write(&tampered, "{\"not\": \"a certificate\"}").unwrap();
    assert_eq!(
        polyiso(&["check", "--vertices", s(&p3), "--certificate", s(&tampered)]).code,
        2
    );
}

#[test]
fn neighborly_exit_codes() {
    let dir = TempDir::new().unwrap();
    let p4 = generate(&dir, "phi", 4, &[]);
    let b2 = generate(&dir, "bqp", 2, &[]);
    let out = dir.path().join("n.json");
    let r = polyiso(&[
        "neighborly",
        "--vertices",
        s(&p4),
        "--k",
        "2",
        "--out",
        s(&out),
    ]);
    assert_eq!(r.code, 0);
    assert_eq!(read_json(&out)["total_subsets"], 276);
    assert_eq!(
        polyiso(&["neighborly", "--vertices", s(&b2), "--k", "3"]).code,
        0
    );
    assert_eq!(
        polyiso(&["neighborly", "--vertices", s(&b2), "--k", "5"]).code,
        2
    );
    let r = polyiso(&[
        "neighborly",
        "--vertices",
        s(&p4),
        "--k",
        "3",
        "--stop-at-first",
    ]);
    assert_eq!(r.code, 1);
    // fix-first needs a symmetric family.
    assert_eq!(
        polyiso(&[
            "neighborly",
            "--vertices",
            s(&b2),
            "--k",
            "3",
            "--fix-first"
        ])
        .code,
        2
    );
}

#[test]
fn neighborly_scan_guard() {
    let dir = TempDir::new().unwrap();
    let p6 = generate(&dir, "phi", 6, &[]);
    // C(720, 3) triples is far above the guard.
    let r = polyiso(&["neighborly", "--vertices", s(&p6), "--k", "3"]);
    assert_eq!(r.code, 2);
    assert!(r.stderr.contains("--force"));
}

#[test]
fn parallel_scans_write_identical_reports() {
    let dir = TempDir::new().unwrap();
    let q4 = generate(&dir, "qap", 4, &[]);
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    polyiso(&[
        "neighborly",
        "--vertices",
        s(&q4),
        "--k",
        "3",
        "--fix-first",
        "--out",
        s(&a),
    ]);
    polyiso(&[
        "neighborly",
        "--vertices",
        s(&q4),
        "--k",
        "3",
        "--fix-first",
        "--jobs",
        "3",
        "--out",
        s(&b),
    ]);
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
}

#[test]
fn verify_exit_codes_and_guards() {
    let r = polyiso(&["verify", "prop1", "--n", "4"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let v: Value = serde_json::from_str(&r.stdout).unwrap();
    assert_eq!(v["passed"], true);
    assert_eq!(polyiso(&["verify", "thm2", "--k", "2"]).code, 0);
    assert_eq!(polyiso(&["verify", "no-such-scenario"]).code, 2);
    assert_eq!(polyiso(&["verify", "thm1", "--n", "1"]).code, 2);
    let r = polyiso(&["verify", "thm1", "--n", "4"]);
    assert_eq!(r.code, 2);
    assert!(r.stderr.contains("--force"));
}

#[test]
fn verify_is_deterministic_minus_duration() {
    let dir = TempDir::new().unwrap();
    let strip = |p: &Path| {
        let mut v = read_json(p);
        v["duration_ms"] = Value::from(0);
        v.to_string()
    };
    for (scenario, jobs) in [
        ("nonisomorphism", "2"),
        ("lemma1", "1"),
        ("phi-not-3-neighborly", "3"),
    ] {
        let a = dir.path().join("a.json");
        let b = dir.path().join("b.json");
        polyiso(&["verify", scenario, "--out", s(&a)]);
        polyiso(&["verify", scenario, "--jobs", jobs, "--out", s(&b)]);
        assert_eq!(strip(&a), strip(&b), "{scenario}");
    }
}

#[test]
fn embedded_certificates_recheck() {
    let dir = TempDir::new().unwrap();
    let report = dir.path().join("r.json");
    let r = polyiso(&[
        "verify",
        "phi-not-3-neighborly",
        "--n",
        "4",
        "--out",
        s(&report),
    ]);
    assert_eq!(r.code, 0);
    let p4 = generate(&dir, "phi", 4, &[]);
    let r = polyiso(&["check", "--vertices", s(&p4), "--certificate", s(&report)]);
    assert_eq!(r.code, 0, "{}{}", r.stdout, r.stderr);
    assert!(r.stdout.contains("valid"));

    let r = polyiso(&["verify", "lemma1", "--n", "5", "--out", s(&report)]);
    assert_eq!(r.code, 0);
    let p5 = generate(&dir, "phi", 5, &[]);
    assert_eq!(
        polyiso(&["check", "--vertices", s(&p5), "--certificate", s(&report)]).code,
        0
    );

    // A report without certificates has nothing to check.
    polyiso(&["verify", "prop1", "--n", "3", "--out", s(&report)]);
    assert_eq!(
        polyiso(&["check", "--vertices", s(&p4), "--certificate", s(&report)]).code,
        2
    );
}
