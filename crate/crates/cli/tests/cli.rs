use std::fs;
use std::path::{Path, PathBuf};
use std::process::Command;

use exgamble_cli::{run, MatrixFile, EXIT_INCOMPATIBLE, EXIT_INPUT, EXIT_OK, EXIT_UNDECIDED};
use serde_json::Value;

fn fixture(name: &str) -> String {
    format!("{}/fixtures/{name}.json", env!("CARGO_MANIFEST_DIR"))
}

fn exe(args: &[&str]) -> exgamble_cli::Execution {
    let mut all = vec!["exgamble"];
    all.extend_from_slice(args);
    run(all)
}

fn write_matrix(dir: &Path, name: &str, n: usize, m: usize, kind: &str, data: &[f64]) -> String {
    let data: Vec<[f64; 2]> = data.iter().map(|&x| [x, 0.0]).collect();
    let body = serde_json::json!({ "n": n, "m": m, "kind": kind, "data": data });
    let path = dir.join(format!("{name}.json"));
    fs::write(&path, body.to_string()).unwrap();
    path.display().to_string()
}

fn report(stdout: &str) -> Value {
    serde_json::from_str(stdout.lines().last().unwrap()).unwrap()
}

fn diag(v: &[f64]) -> Vec<f64> {
    let n = v.len();
    let mut out = vec![0.0; n * n];
    for (i, x) in v.iter().enumerate() {
        out[i * n + i] = *x;
    }
    out
}

#[test]
fn symmetrize_identity_gives_symmetrizer() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_matrix(dir.path(), "id", 2, 2, "gamble", &diag(&[1.0; 4]));
    let out = dir.path().join("sym.json");
    let r = exe(&["symmetrize", &input, "--star", "sym", "--out", out.to_str().unwrap()]);
    assert_eq!(r.code, EXIT_OK, "{}", r.stderr);
    let got = MatrixFile::read(&out).unwrap();
    let want = MatrixFile::read(Path::new(&fixture("pi_sym"))).unwrap();
    assert_eq!(got.data, want.data);
}

#[test]
fn symmetrize_repeated_state_antisymmetrically_vanishes() {
    let dir = tempfile::tempdir().unwrap();
    // α = (0.6, 0.8i), z = α ⊗ α
    let a = [(0.6, 0.0), (0.0, 0.8)];
    let mut data = Vec::new();
    for x in a {
        for y in a {
            data.push([x.0 * y.0 - x.1 * y.1, x.0 * y.1 + x.1 * y.0]);
        }
    }
    let path = dir.path().join("aa.json");
    fs::write(&path, serde_json::json!({ "n": 2, "m": 2, "kind": "vector", "data": data }).to_string()).unwrap();
    let out = dir.path().join("out.json");
    let r = exe(&["symmetrize", path.to_str().unwrap(), "--star", "anti", "--out", out.to_str().unwrap()]);
    assert_eq!(r.code, EXIT_OK, "{}", r.stderr);
    assert!(r.stdout.contains("norm: 0"));
    assert_eq!(report(&r.stdout)["result"]["norm"], 0.0);
    let v = MatrixFile::read(&out).unwrap();
    assert!(v.data.iter().all(|z| z[0] == 0.0 && z[1] == 0.0));
}

#[test]
fn malformed_input_exits_with_two_and_writes_nothing() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    fs::write(&bad, "{\"n\": 2, ").unwrap();
    let out = dir.path().join("out.json");
    let r = exe(&["symmetrize", bad.to_str().unwrap(), "--star", "sym", "--out", out.to_str().unwrap()]);
    assert_eq!(r.code, EXIT_INPUT);
    assert!(!out.exists());
    assert!(r.stderr.contains("malformed"));
}

#[test]
fn check_exchangeability_of_fixtures() {
    let bos = fixture("rho_bos");
    let r = exe(&["check", &bos, "--star", "sym"]);
    assert_eq!(r.code, EXIT_OK);
    assert!(r.stdout.starts_with("exchangeable: true"));
    let r = exe(&["check", &bos, "--star", "anti"]);
    assert!(r.stdout.starts_with("exchangeable: false"));
    let r = exe(&["check", &fixture("rho_ferm"), "--star", "anti"]);
    assert!(r.stdout.starts_with("exchangeable: true"));
    let r = exe(&["check", &bos]);
    assert_eq!(r.code, EXIT_INPUT);
}

#[test]
fn check_rejects_indefinite_density() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write_matrix(dir.path(), "neg", 2, 1, "density", &[1.5, 0.0, 0.0, -0.5]);
    let r = exe(&["check", &bad, "--star", "sym"]);
    assert_eq!(r.code, EXIT_INPUT);
    assert!(r.stderr.contains("negative"), "{}", r.stderr);
}

#[test]
fn check_coherence_of_gambles() {
    let dir = tempfile::tempdir().unwrap();
    // r_z ≥ 0.5 and r_x ≥ 0.5 on one qubit: coherent, but not at I/2.
    let gz = write_matrix(dir.path(), "gz", 2, 1, "gamble", &[0.5, 0.0, 0.0, -1.5]);
    let gx = write_matrix(dir.path(), "gx", 2, 1, "gamble", &[-0.5, 1.0, 1.0, -0.5]);
    let r = exe(&["check", &gz, &gx]);
    assert_eq!(r.code, EXIT_OK, "{}", r.stderr);
    assert!(r.stdout.starts_with("coherent: feasible"));
    let r = exe(&["check", &gz, &gx, "--iter-cap", "1"]);
    assert_eq!(r.code, EXIT_UNDECIDED);
    assert!(r.stdout.starts_with("coherent: undecided"));
    let neg = write_matrix(dir.path(), "neg", 2, 1, "gamble", &[-1.0, 0.0, 0.0, -1.0]);
    let r = exe(&["check", &neg]);
    assert_eq!(r.code, EXIT_OK);
    assert!(r.stdout.starts_with("coherent: infeasible"));
}

#[test]
fn condition_golden_cases() {
    let dir = tempfile::tempdir().unwrap();
    let p0 = write_matrix(dir.path(), "p0", 2, 1, "operator", &[1.0, 0.0, 0.0, 0.0]);
    let out = dir.path().join("post.json");
    let r = exe(&["condition", &fixture("rho_ferm"), &p0, "--measured", "1", "--out", out.to_str().unwrap()]);
    assert_eq!(r.code, EXIT_OK, "{}", r.stderr);
    assert!(r.stdout.starts_with("probability: 0.5"));
    let post = MatrixFile::read(&out).unwrap();
    let want: Vec<[f64; 2]> = diag(&[0.0, 1.0, 0.0, 0.0]).iter().map(|&x| [x, 0.0]).collect();
    assert_eq!(post.data, want);

    let id = write_matrix(dir.path(), "id", 2, 1, "operator", &[1.0, 0.0, 0.0, 1.0]);
    let r = exe(&["condition", &fixture("rho_bos"), &id, "--measured", "1", "--out", out.to_str().unwrap()]);
    assert!(r.stdout.starts_with("probability: 1"));
    assert_eq!(MatrixFile::read(&out).unwrap().data, MatrixFile::read(Path::new(&fixture("rho_bos"))).unwrap().data);

    // First particle in the second level: projecting it on the first is impossible.
    let rho = write_matrix(dir.path(), "rho", 2, 2, "density", &diag(&[0.0, 0.0, 1.0, 0.0]));
    let r = exe(&["condition", &rho, &p0, "--measured", "1"]);
    assert_eq!(r.code, EXIT_INCOMPATIBLE);

    let r = exe(&["condition", &fixture("rho_bos"), &fixture("pi_sym"), "--measured", "1"]);
    assert_eq!(r.code, EXIT_INPUT);
}

#[test]
fn entangle_examples() {
    let dir = tempfile::tempdir().unwrap();
    let side = dir.path().join("side.json");
    let side_s = side.to_str().unwrap();

    let r = exe(&["entangle", &fixture("rho_ferm"), "--star", "anti", "--out", side_s]);
    assert_eq!(r.code, EXIT_OK);
    assert!(r.stdout.starts_with("separable (decomposition found"));
    let atoms = report(&r.stdout)["result"]["atoms"].clone();
    assert_eq!(atoms.as_array().unwrap().len(), 1);
    assert_eq!(atoms[0]["factors"], serde_json::json!([[[1.0, 0.0], [0.0, 0.0]], [[0.0, 0.0], [1.0, 0.0]]]));

    let r = exe(&["entangle", &fixture("rho_bos"), "--star", "none", "--out", side_s]);
    assert_eq!(r.code, EXIT_OK);
    assert!(r.stdout.starts_with("entangled (witness found"));
    let side_json: Value = serde_json::from_str(&fs::read_to_string(&side).unwrap()).unwrap();
    assert_eq!(side_json["verdict"], "entangled");

    let mixed = write_matrix(dir.path(), "mixed", 2, 2, "density", &diag(&[0.25; 4]));
    let r = exe(&["entangle", &mixed, "--out", side_s]);
    assert_eq!(r.code, EXIT_OK);
    assert!(r.stdout.starts_with("separable"));

    // Werner state just past the entanglement threshold 1/3: neither search
    // reaches a certificate.
    let p = 0.34;
    let mut w = diag(&[(1.0 - p) / 4.0; 4]);
    for (i, j) in [(0, 0), (0, 3), (3, 0), (3, 3)] {
        w[i * 4 + j] += p / 2.0;
    }
    let werner = write_matrix(dir.path(), "werner", 2, 2, "density", &w);
    let r = exe(&["entangle", &werner, "--out", side_s]);
    assert_eq!(r.code, EXIT_UNDECIDED);
    assert!(r.stdout.starts_with("inconclusive"));

    let r = exe(&["entangle", &fixture("rho_bos"), "--star", "anti", "--out", side_s]);
    assert_eq!(r.code, EXIT_INPUT);
}

#[test]
fn default_sidecar_sits_next_to_input() {
    let dir = tempfile::tempdir().unwrap();
    let rho = dir.path().join("rho.json");
    fs::copy(fixture("rho_ferm"), &rho).unwrap();
    let r = exe(&["entangle", rho.to_str().unwrap(), "--star", "anti"]);
    assert_eq!(r.code, EXIT_OK);
    assert!(PathBuf::from(format!("{}.entangle.json", rho.display())).exists());
}

#[test]
fn reports_round_trip_and_repeat() {
    let dir = tempfile::tempdir().unwrap();
    let side = dir.path().join("side.json");
    let args = ["entangle", &fixture("rho_bos"), "--star", "none", "--seed", "5", "--out", side.to_str().unwrap()];
    let strip = |s: &str| {
        let mut v = report(s);
        v.as_object_mut().unwrap().remove("elapsed_seconds");
        v.to_string()
    };
    let a = exe(&args);
    let side_a = fs::read(&side).unwrap();
    let b = exe(&args);
    assert_eq!(strip(&a.stdout), strip(&b.stdout));
    assert_eq!(side_a, fs::read(&side).unwrap());
    let parsed: exgamble_cli::RunReport = serde_json::from_str(a.stdout.lines().last().unwrap()).unwrap();
    assert_eq!(serde_json::to_string(&parsed).unwrap(), a.stdout.lines().last().unwrap());
}

#[test]
fn binary_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_exgamble");
    let status = Command::new(bin).args(["check", &fixture("rho_bos"), "--star", "sym"]).output().unwrap();
    assert_eq!(status.status.code(), Some(0));
    let status = Command::new(bin).args(["check", "/nonexistent.json", "--star", "sym"]).output().unwrap();
    assert_eq!(status.status.code(), Some(2));
    let status = Command::new(bin).args(["frobnicate"]).output().unwrap();
    assert_eq!(status.status.code(), Some(2));
}
