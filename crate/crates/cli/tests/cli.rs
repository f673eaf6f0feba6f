use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn soestim(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_soestim"))
        .args(args)
        .env("SOESTIM_THREADS", "2")
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn write_small_config(dir: &Path) -> String {
    let path = dir.join("small.cfg");
    fs::write(
        &path,
        "# quick run\nN = 64\nm = 36\np = 1\nK = 3\nsnr_start_db = 20\nsnr_stop_db = 30\nsnr_step_db = 5\ntrials = 20\nmos_trials = 1000\n",
    )
    .unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn bounds_row_is_ordered() {
    let out = soestim(&["bounds", "--n", "5", "--m", "8", "--c", "0.9"]);
    assert!(out.status.success());
    let row = stdout(&out);
    let fields: Vec<f64> = row.trim().split(',').map(|f| f.parse().unwrap()).collect();
    assert_eq!(&fields[..3], &[5.0, 8.0, 0.9]);
    let (lower, achieved, upper) = (fields[3], fields[4], fields[5]);
    assert!(lower <= achieved + 1e-12 && achieved <= upper + 1e-12, "{row}");
}

#[test]
fn unknown_flag_exits_with_config_code() {
    let dir = tempfile::tempdir().unwrap();
    let out_path = dir.path().join("out.csv");
    let out = soestim(&["simulate", "--figure", "2", "--bogus", "--out", out_path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(!out_path.exists());
    assert!(!out.stderr.is_empty());
}

#[test]
fn bad_config_key_exits_with_config_code() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.cfg");
    fs::write(&cfg, "colour = blue\n").unwrap();
    let out = soestim(&["simulate", "--figure", "2", "--config", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let missing = soestim(&["soe", "--measurements", "/nonexistent/b.txt"]);
    assert_eq!(missing.status.code(), Some(1));
}

#[test]
fn simulate_writes_deterministic_csv() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_small_config(dir.path());
    let first = dir.path().join("a.csv");
    let second = dir.path().join("b.csv");
    for (path, threads) in [(&first, "1"), (&second, "3")] {
        let out = soestim(&[
            "simulate", "--figure", "2", "--config", &cfg, "--out", path.to_str().unwrap(), "--threads", threads,
        ]);
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    }
    let a = fs::read_to_string(&first).unwrap();
    assert_eq!(a, fs::read_to_string(&second).unwrap());
    let mut lines = a.lines();
    assert_eq!(lines.next(), Some("SNR,soe_mean,soe_succ"));
    assert_eq!(lines.count(), 3);
}

#[test]
fn design_soe_and_recover_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let matrix = dir.path().join("a.txt");
    let out = soestim(&["design", "-N", "64", "--m", "36", "--p", "none", "--out", matrix.to_str().unwrap()]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));

    // b = (1+i)·a_5 + (−1+i)·a_40
    let text = fs::read_to_string(&matrix).unwrap();
    let a = soestim_core::linalg::text::read_matrix(&text).unwrap();
    let mut x = vec![num_complex::Complex64::new(0.0, 0.0); 64];
    x[5] = num_complex::Complex64::new(1.0, 1.0);
    x[40] = num_complex::Complex64::new(-1.0, 1.0);
    let b = a.mul_vec(&soestim_core::CVector::new(x).unwrap()).unwrap();
    let measurements = dir.path().join("b.txt");
    fs::write(&measurements, soestim_core::linalg::text::write_vector(&b)).unwrap();

    let order = soestim(&["soe", "--measurements", measurements.to_str().unwrap()]);
    assert!(order.status.success());
    assert_eq!(stdout(&order).trim(), "2");

    let recovered = dir.path().join("x.txt");
    let out = soestim(&[
        "recover",
        "--matrix",
        matrix.to_str().unwrap(),
        "--measurements",
        measurements.to_str().unwrap(),
        "--steps",
        "2",
        "--out",
        recovered.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let xhat = soestim_core::linalg::text::read_vector(&fs::read_to_string(&recovered).unwrap()).unwrap();
    let nonzero: Vec<usize> = (0..64).filter(|&i| xhat[i].norm() > 1e-9).collect();
    assert_eq!(nonzero, vec![5, 40]);
}
