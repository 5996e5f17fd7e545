//! End-to-end tests of the compiled binary via std::process.

use std::collections::BTreeMap;
use std::path::Path;
use std::process::{Command, Output};

use curlball::eigenbasis::{curl_mode, Family, ModeIndex};
use curlball::fieldio::{write_field, GridSpec, SampledField};
use curlball::spectral::SpectralCoefficients;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_curlball"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf8 stdout")
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).expect("utf8 stderr")
}

#[test]
fn zeros_psi_rows_are_multiples_of_pi_and_deterministic() {
    let a = run(&["zeros", "--family", "psi", "--n", "0", "--m", "3"]);
    let b = run(&["zeros", "--family", "psi", "--n", "0", "--m", "3"]);
    assert!(a.status.success());
    // byte-identical across runs
    assert_eq!(a.stdout, b.stdout);
    let text = stdout(&a);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("n\tm\tz"));
    for (i, line) in lines.enumerate() {
        let cols: Vec<&str> = line.split('\t').collect();
        assert_eq!(cols[0], "0");
        assert_eq!(cols[1], (i + 1).to_string());
        let z: f64 = cols[2].parse().unwrap();
        let expect = (i + 1) as f64 * std::f64::consts::PI;
        assert!((z - expect).abs() <= 1e-12, "row {i}: {z} vs {expect}");
    }
}

#[test]
fn zeros_psi_prime_first_value() {
    let out = run(&["zeros", "--family", "psi-prime", "--n", "0", "--m", "1"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let z: f64 = text.lines().nth(1).unwrap().split('\t').nth(2).unwrap().parse().unwrap();
    assert!((z - 4.493409457909064).abs() <= 1e-12);
}

#[test]
fn mode_info_reports_eigenvalue() {
    let out = run(&[
        "mode", "info", "--family", "curl-plus", "--n", "1", "--m", "1", "--k", "0",
    ]);
    assert!(out.status.success());
    let meta: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(meta["index"]["family"], "curl-plus");
    let ev = meta["eigenvalue"].as_f64().unwrap();
    assert!((ev - 4.493409457909064).abs() <= 1e-12);
    assert_eq!(meta["radius"].as_f64().unwrap(), 1.0);
}

#[test]
fn mode_eval_csv_header_and_vtk_output() {
    let out = run(&[
        "mode", "eval", "--family", "grad-div", "--n", "0", "--m", "1", "--k", "0",
        "--grid", "5,5,5",
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.starts_with("x,y,z,vx,vy,vz\n"));
    // every listed point is inside the ball
    for line in text.lines().skip(1) {
        let v: Vec<f64> = line.split(',').map(|s| s.parse().unwrap()).collect();
        assert_eq!(v.len(), 6);
        assert!(v[0] * v[0] + v[1] * v[1] + v[2] * v[2] <= 1.0 + 1e-12);
    }

    // VTK needs --out
    let no_out = run(&[
        "mode", "eval", "--family", "grad-div", "--n", "0", "--m", "1", "--k", "0",
        "--format", "vtk",
    ]);
    assert_eq!(no_out.status.code(), Some(1));

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("mode.vtk");
    let with_out = run(&[
        "mode", "eval", "--family", "grad-div", "--n", "0", "--m", "1", "--k", "0",
        "--grid", "5,5,5", "--format", "vtk", "--out", path.to_str().unwrap(),
    ]);
    assert!(with_out.status.success());
    let vtk = std::fs::read_to_string(&path).unwrap();
    assert!(vtk.starts_with("# vtk DataFile Version"));
    assert!(vtk.contains("STRUCTURED_POINTS"));
}

fn write_mode_field(dir: &Path, amplitude: f64) -> std::path::PathBuf {
    let radius = 1.0;
    let (nr, nt, np) = (32, 16, 32);
    let mode = curl_mode(ModeIndex::new(Family::CurlPlus, 1, 1, 1).unwrap(), radius).unwrap();
    let grid = GridSpec::SphericalProduct {
        nr,
        ntheta: nt,
        nphi: np,
        radius,
    };
    let points = grid.points();
    let values: Vec<[f64; 3]> = points
        .iter()
        .map(|&p| {
            let v = mode.eval_cartesian(p);
            [amplitude * v[0], amplitude * v[1], amplitude * v[2]]
        })
        .collect();
    let field = SampledField::new(radius, points, values, BTreeMap::new()).unwrap();
    let path = dir.join("field.csv");
    write_field(&field, &path).unwrap();
    path
}

#[test]
fn decompose_recovers_mode_amplitude() {
    let dir = tempfile::tempdir().unwrap();
    let field = write_mode_field(dir.path(), 2.0);
    let coeffs_path = dir.path().join("coeffs.json");
    let out = run(&[
        "decompose",
        "--input", field.to_str().unwrap(),
        "--truncation", "5",
        "--nr", "32", "--ntheta", "16", "--nphi", "32",
        "--out", coeffs_path.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "stderr: {}", stderr(&out));
    let log = stderr(&out);
    assert!(log.contains("total_norm2"));
    assert!(log.contains("solenoidal_norm2"));
    let c =
        SpectralCoefficients::from_json(&std::fs::read_to_string(&coeffs_path).unwrap()).unwrap();
    let idx = ModeIndex::new(Family::CurlPlus, 1, 1, 1).unwrap();
    assert!((c.get(idx) - 2.0).abs() <= 1e-8, "got {}", c.get(idx));
    // the field is solenoidal: every grad-div coefficient is tiny
    for (i, v) in c.iter() {
        if i.family == Family::GradDiv {
            assert!(v.abs() <= 1e-8, "{i}: {v}");
        }
    }
}

fn write_coeffs(dir: &Path, name: &str, entries: &[(ModeIndex, f64)]) -> std::path::PathBuf {
    let mut c = SpectralCoefficients::empty(1.0, 5.0, (32, 16, 32));
    for &(i, v) in entries {
        c.set(i, v);
    }
    let path = dir.join(name);
    std::fs::write(&path, c.to_json()).unwrap();
    path
}

#[test]
fn solve_exit_codes_cover_all_resonance_cases() {
    let dir = tempfile::tempdir().unwrap();
    let plus = ModeIndex::new(Family::CurlPlus, 1, 1, 0).unwrap();
    let grad = ModeIndex::new(Family::GradDiv, 0, 1, 0).unwrap();
    let lambda_11 = 4.493409457909064;

    // off-resonance: exact diagonal inverse, exit 0
    let rhs = write_coeffs(dir.path(), "rhs.json", &[(plus, 1.0)]);
    let ok = run(&["solve", "--op", "curl", "--lambda", "2.0", "--input", rhs.to_str().unwrap()]);
    assert!(ok.status.success(), "stderr: {}", stderr(&ok));
    let sol = SpectralCoefficients::from_json(&stdout(&ok)).unwrap();
    assert!((sol.get(plus) - 1.0 / (2.0 + lambda_11)).abs() <= 1e-15);

    // resonant with the right-hand side clear of the kernel: exit 2
    let compat = write_coeffs(dir.path(), "compat.json", &[(grad, 1.0)]);
    let res = run(&[
        "solve", "--op", "curl",
        "--lambda", &format!("{}", -lambda_11),
        "--input", compat.to_str().unwrap(),
    ]);
    assert_eq!(res.status.code(), Some(2), "stderr: {}", stderr(&res));
    assert!(stderr(&res).contains("resonant"));
    let sol = SpectralCoefficients::from_json(&stdout(&res)).unwrap();
    assert!((sol.get(grad) - 1.0 / -lambda_11).abs() <= 1e-15);

    // right-hand side loads a kernel mode: exit 3
    let bad = write_coeffs(dir.path(), "bad.json", &[(plus, 1.0)]);
    let err = run(&[
        "solve", "--op", "curl",
        "--lambda", &format!("{}", -lambda_11),
        "--input", bad.to_str().unwrap(),
    ]);
    assert_eq!(err.status.code(), Some(3), "stderr: {}", stderr(&err));
    assert!(stderr(&err).contains("incompatible"));
}

#[test]
fn trace_radial_mode_stays_on_the_seed_ray() {
    let out = run(&[
        "trace", "--family", "grad-div", "--n", "0", "--m", "1", "--k", "0",
        "--seed", "0.5,0,0", "--step", "1e-3", "--time", "1",
    ]);
    assert!(out.status.success(), "stderr: {}", stderr(&out));
    let text = stdout(&out);
    assert!(text.starts_with("x,y,z\n"));
    for line in text.lines().skip(1) {
        let p: Vec<f64> = line.split(',').map(|s| s.parse().unwrap()).collect();
        assert!(p[1].abs() <= 1e-12 && p[2].abs() <= 1e-12, "left the ray: {line}");
        assert!(p[0] > 0.0 && p[0] <= 1.0 + 1e-6);
    }
}

#[test]
fn config_file_sets_radius_and_rejects_unknown_keys() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.toml");
    std::fs::write(&cfg, "radius = 2.0\n").unwrap();
    let out = run(&[
        "--config", cfg.to_str().unwrap(),
        "mode", "info", "--family", "curl-plus", "--n", "1", "--m", "1", "--k", "0",
    ]);
    assert!(out.status.success(), "stderr: {}", stderr(&out));
    let meta: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(meta["radius"].as_f64().unwrap(), 2.0);
    // eigenvalue scales as 1/R
    let ev = meta["eigenvalue"].as_f64().unwrap();
    assert!((ev - 4.493409457909064 / 2.0).abs() <= 1e-12);

    std::fs::write(&cfg, "radiis = 2.0\n").unwrap();
    let bad = run(&[
        "--config", cfg.to_str().unwrap(),
        "mode", "info", "--family", "curl-plus", "--n", "1", "--m", "1", "--k", "0",
    ]);
    assert_eq!(bad.status.code(), Some(1));
}

#[test]
fn usage_errors_exit_one_and_help_exits_zero() {
    let bad = run(&["zeros", "--family", "psi", "--n", "0", "--m", "3", "--bogus"]);
    assert_eq!(bad.status.code(), Some(1));
    let help = run(&["--help"]);
    assert_eq!(help.status.code(), Some(0));
    assert!(stdout(&help).contains("Usage"));
}
