use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn nlsphere(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nlsphere"))
        .args(args)
        .arg("--output-dir")
        .arg(dir)
        .output()
        .expect("failed to launch nlsphere")
}

fn read_pairs(path: &Path) -> Vec<(f64, f64)> {
    fs::read_to_string(path)
        .unwrap()
        .lines()
        .skip(1)
        .map(|l| {
            let (a, b) = l.split_once(',').unwrap();
            (a.parse().unwrap(), b.parse().unwrap())
        })
        .collect()
}

#[test]
fn spectrum_whole_sphere_rows() {
    let dir = tempfile::tempdir().unwrap();
    let out = nlsphere(&["spectrum", "--alpha", "-0.5", "--delta", "2", "--degree", "3"], dir.path());
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = fs::read_to_string(dir.path().join("spectrum.csv")).unwrap();
    assert_eq!(text.lines().next(), Some("ell,lambda"));
    let rows = read_pairs(&dir.path().join("spectrum.csv"));
    assert_eq!(rows.len(), 4);
    for (ell, lambda) in rows {
        let expected = -2.0 * ell;
        assert!((lambda - expected).abs() <= 1e-11 * expected.abs().max(1.0), "{ell}: {lambda}");
    }
}

#[test]
fn local_spectrum_and_conflicting_flags() {
    let dir = tempfile::tempdir().unwrap();
    let out = nlsphere(&["spectrum", "--local", "--degree", "10"], dir.path());
    assert!(out.status.success());
    let rows = read_pairs(&dir.path().join("spectrum.csv"));
    assert_eq!(rows[10].1, -110.0);
    let out = nlsphere(&["spectrum", "--local", "--alpha", "0.1"], dir.path());
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn outputs_are_byte_identical_across_runs() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let args = [
        "evolve", "--model", "allen-cahn", "--degree", "15", "--dt", "0.125", "--t-final", "1", "--ic", "random:15:1/16",
        "--seed", "3", "--snapshot-stride", "4", "--cesaro-kappa", "2",
    ];
    for d in [&a, &b] {
        let out = nlsphere(&args, d.path());
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    }
    for name in ["energy.csv", "final_u.csv", "final_u_grid.csv", "snapshot_u_000004.csv", "snapshot_u_000008.csv"] {
        let x = fs::read(a.path().join(name)).unwrap();
        let y = fs::read(b.path().join(name)).unwrap();
        assert_eq!(x, y, "{name} differs");
    }
    for dir in [&a, &b] {
        let out = nlsphere(&["spectrum", "--alpha", "0.3", "--delta", "0.7", "--degree", "80"], dir.path());
        assert!(out.status.success());
    }
    assert_eq!(
        fs::read(a.path().join("spectrum.csv")).unwrap(),
        fs::read(b.path().join("spectrum.csv")).unwrap()
    );
}

#[test]
fn allen_cahn_reference_run_has_decreasing_energy() {
    let dir = tempfile::tempdir().unwrap();
    let out = nlsphere(
        &[
            "evolve", "--model", "allen-cahn", "--epsilon", "0.1", "--alpha", "-0.5", "--delta", "1", "--degree", "63",
            "--dt", "0.00390625", "--t-final", "1", "--ic", "cos10xy",
        ],
        dir.path(),
    );
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let energy = read_pairs(&dir.path().join("energy.csv"));
    assert_eq!(energy.len(), 257);
    assert!((energy[256].0 - 1.0).abs() < 1e-12);
    for w in energy.windows(2) {
        assert!(w[1].1 <= w[0].1 + 1e-8 * w[0].1.abs(), "{:?}", w);
    }
}

#[test]
fn poisson_death_star() {
    let dir = tempfile::tempdir().unwrap();
    let out = nlsphere(&["poisson", "--alpha", "0", "--delta", "1.5", "--degree", "100", "--rhs", "death-star"], dir.path());
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(String::from_utf8_lossy(&out.stdout).contains("relative residual"));
    let sol = fs::read_to_string(dir.path().join("solution.csv")).unwrap();
    assert!(sol.starts_with("# sht-coeffs v1 degree=100\n"));
    assert_eq!(sol.lines().count(), 102);
    let grid = fs::read_to_string(dir.path().join("solution_grid.csv")).unwrap();
    assert_eq!(grid.lines().count(), 1 + 101 * 201);

    // feeding the written right-hand side back in reproduces the solution
    let rhs = dir.path().join("rhs.csv");
    let again = tempfile::tempdir().unwrap();
    let out = nlsphere(
        &["poisson", "--alpha", "0", "--delta", "1.5", "--degree", "100", "--rhs", rhs.to_str().unwrap()],
        again.path(),
    );
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(sol, fs::read_to_string(again.path().join("solution.csv")).unwrap());
}

#[test]
fn brusselator_equilibrium_files() {
    let dir = tempfile::tempdir().unwrap();
    let out = nlsphere(&["evolve", "--model", "brusselator", "--degree", "10", "--dt", "0.1", "--t-final", "2"], dir.path());
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    for name in ["final_u.csv", "final_v.csv", "final_u_grid.csv", "final_v_grid.csv"] {
        assert!(dir.path().join(name).exists(), "{name}");
    }
    assert!(!dir.path().join("energy.csv").exists());
}

#[test]
fn validation_errors_exit_with_one() {
    let dir = tempfile::tempdir().unwrap();
    let cases: [&[&str]; 6] = [
        &["spectrum", "--alpha", "1.5"],
        &["spectrum", "--delta", "0"],
        &["evolve", "--model", "brusselator", "--f", "1.2"],
        &["evolve", "--model", "allen-cahn", "--dt", "0.3", "--t-final", "1"],
        &["evolve", "--model", "allen-cahn", "--ic", "equilibrium"],
        &["frobnicate"],
    ];
    for args in cases {
        let out = nlsphere(args, dir.path());
        assert_eq!(out.status.code(), Some(1), "{args:?}");
    }
}

#[test]
fn blow_up_exits_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let out = nlsphere(
        &["evolve", "--model", "allen-cahn", "--local", "--degree", "6", "--dt", "1", "--t-final", "50", "--ic", "random:6:1000"],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(2), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(String::from_utf8_lossy(&out.stderr).contains("step"));
}

#[test]
fn thread_cap_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let run = |value: &str| {
        Command::new(env!("CARGO_BIN_EXE_nlsphere"))
            .args(["spectrum", "--degree", "20", "--output-dir"])
            .arg(dir.path())
            .env("NLSPHERE_THREADS", value)
            .output()
            .unwrap()
    };
    assert!(run("1").status.success());
    assert_eq!(run("zero").status.code(), Some(1));
}
