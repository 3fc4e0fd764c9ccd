use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_tlsphot"))
}

/// Fresh scratch directory unique to one test.
fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("tlsphot-cli-{}-{name}", std::process::id()));
    let _ = fs::remove_dir_all(&dir);
    fs::create_dir_all(&dir).unwrap();
    dir
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn read(dir: &Path, name: &str) -> String {
    fs::read_to_string(dir.join(name)).unwrap_or_else(|e| panic!("{name}: {e}"))
}

fn csv_rows(text: &str) -> Vec<Vec<String>> {
    text.lines()
        .skip(1)
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect()
}

const SMALL_FIG1B: &str = r#"
[fig1b]
betas = [1.0, 0.9]
sigma_min = 0.2
sigma_max = 2.0
n_sigma = 7
"#;

#[test]
fn fig1b_is_reproducible_from_its_manifest() {
    let dir = scratch("fig1b");
    let cfg = dir.join("small.toml");
    fs::write(&cfg, SMALL_FIG1B).unwrap();
    let a = dir.join("a");
    let out = run(&["run", "fig1b", "--config", cfg.to_str().unwrap(), "--out", a.to_str().unwrap()]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));

    let csv = read(&a, "fig1b.csv");
    assert!(csv.starts_with("beta,sigma_over_gamma,eta,half_eps1_sq"), "{csv}");
    assert_eq!(csv_rows(&csv).len(), 14);
    for row in csv_rows(&csv) {
        let eta: f64 = row[2].parse().unwrap();
        assert!(eta > 0.0 && eta < 0.75, "{row:?}");
    }
    assert!(read(&a, "fig1b.plot.py").contains("\"fig1b.csv\""));
    let conv = read(&a, "fig1b.convergence.csv");
    assert!(conv.starts_with("quantity,value_1x,value_2x,abs_diff,tolerance,converged\n"));
    assert!(conv.lines().skip(1).all(|l| l.ends_with(",1")), "{conv}");

    // Same config again: byte-identical tables.
    let b = dir.join("b");
    let out = run(&["run", "fig1b", "--config", cfg.to_str().unwrap(), "--out", b.to_str().unwrap()]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    assert_eq!(read(&a, "fig1b.csv"), read(&b, "fig1b.csv"));
    assert_eq!(read(&a, "fig1b.convergence.csv"), read(&b, "fig1b.convergence.csv"));

    // The manifest is itself a config that reproduces the run.
    let manifest = a.join("fig1b.manifest.toml");
    let text = read(&a, "fig1b.manifest.toml");
    assert!(text.contains("[manifest]") && text.contains("experiment = \"fig1b\""), "{text}");
    let c = dir.join("c");
    let out = run(&[
        "run",
        "fig1b",
        "--config",
        manifest.to_str().unwrap(),
        "--out",
        c.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    assert_eq!(read(&a, "fig1b.csv"), read(&c, "fig1b.csv"));
    let _ = fs::remove_dir_all(&dir);
}

#[test]
fn matching_points_lossless() {
    let dir = scratch("match");
    let out = run(&["run", "matching-points", "--beta", "1.0", "--out", dir.to_str().unwrap()]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let csv = read(&dir, "matching-points.csv");
    assert!(csv.starts_with("beta,branch,sigma_over_gamma\n"), "{csv}");
    let rows = csv_rows(&csv);
    assert_eq!(rows.len(), 2, "{csv}");
    let sigma = |r: &Vec<String>| r[2].parse::<f64>().unwrap();
    assert_eq!(rows[0][1], "lower");
    assert!((sigma(&rows[0]) - 0.16339).abs() < 1e-4, "{csv}");
    assert_eq!(rows[1][1], "upper");
    assert!((sigma(&rows[1]) - 1.25050).abs() < 1e-4, "{csv}");
    let _ = fs::remove_dir_all(&dir);
}

#[test]
fn flags_override_the_config() {
    let dir = scratch("override");
    let cfg = dir.join("c.toml");
    fs::write(&cfg, "[tls]\nbeta = 0.9\n[run]\nout = \"ignored\"\n").unwrap();
    let out = run(&[
        "run",
        "matching-points",
        "--config",
        cfg.to_str().unwrap(),
        "--beta",
        "1.0",
        "--out",
        dir.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let rows = csv_rows(&read(&dir, "matching-points.csv"));
    assert!(rows.iter().all(|r| r[0] == "1.0"), "{rows:?}");
    let manifest = read(&dir, "matching-points.manifest.toml");
    assert!(manifest.contains("beta = 1.0"), "{manifest}");
    let _ = fs::remove_dir_all(&dir);
}

/// Value of `quantity` in a two-column quantity,value table.
fn value(csv: &str, quantity: &str) -> f64 {
    let prefix = format!("{quantity},");
    csv.lines()
        .find_map(|l| l.strip_prefix(prefix.as_str()))
        .unwrap_or_else(|| panic!("no {quantity} in {csv}"))
        .parse()
        .unwrap()
}

#[test]
fn demos_report_expected_weights() {
    let dir = scratch("demos");
    let out = run(&["run", "sorter-demo", "--out", dir.to_str().unwrap()]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let csv = read(&dir, "sorter-demo.csv");
    assert!((value(&csv, "single_weight") - 0.36).abs() < 1e-6, "{csv}");
    assert!((value(&csv, "pair_weight") - 0.64).abs() < 1e-5, "{csv}");

    let out = run(&["run", "ns-demo", "--out", dir.to_str().unwrap()]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let csv = read(&dir, "ns-demo.csv");
    assert!(value(&csv, "fidelity") > 1.0 - 1e-6, "{csv}");
    assert!((value(&csv, "two_photon_gain_re") + 1.0).abs() < 1e-5, "{csv}");
    let _ = fs::remove_dir_all(&dir);
}

#[test]
fn usage_errors_exit_2() {
    let out = run(&["run", "no-such-experiment"]);
    assert_eq!(code(&out), 2);
    let out = run(&["run", "fig1b", "--sigma", "1.0"]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("--sigma"), "{}", stderr(&out));
    let out = run(&["run", "matching-points", "--beta", "1.5"]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("tls.beta"), "{}", stderr(&out));
}

#[test]
fn unwritable_output_exits_1() {
    let dir = scratch("io");
    let file = dir.join("plain-file");
    fs::write(&file, "x").unwrap();
    let out = run(&["run", "matching-points", "--beta", "1.0", "--out", file.join("sub").to_str().unwrap()]);
    assert_eq!(code(&out), 1, "{}", stderr(&out));
    let _ = fs::remove_dir_all(&dir);
}

#[test]
fn unconverged_headline_exits_3() {
    let dir = scratch("conv");
    let cfg = dir.join("c.toml");
    fs::write(&cfg, "[convergence]\ntolerance = 1e-12\n").unwrap();
    let out = run(&[
        "run",
        "matching-points",
        "--config",
        cfg.to_str().unwrap(),
        "--beta",
        "0.95",
        "--out",
        dir.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 3, "{}", stderr(&out));
    assert!(stderr(&out).contains("not converged"), "{}", stderr(&out));
    // Tables are still written so the discrepancy can be inspected.
    assert!(dir.join("matching-points.convergence.csv").exists());
    let _ = fs::remove_dir_all(&dir);
}

fn validate(name: &str, text: &str) -> Output {
    let dir = scratch(name);
    let cfg = dir.join("c.toml");
    fs::write(&cfg, text).unwrap();
    let out = run(&["validate", "--config", cfg.to_str().unwrap()]);
    let _ = fs::remove_dir_all(&dir);
    out
}

#[test]
fn validate_accepts_the_defaults() {
    let out = validate("v-default", "");
    assert_eq!(code(&out), 0);
    assert_eq!(stderr(&out), "");
}

#[test]
fn validate_names_bad_fields() {
    let out = validate("v-sigma", "[tls]\nsigma = -1.0\n");
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("tls.sigma"), "{}", stderr(&out));

    let out = validate("v-unknown", "[tls]\nbeta = 1.0\nbeat = 2\n[plots]\nx = 1\n");
    assert_eq!(code(&out), 2);
    let err = stderr(&out);
    assert!(err.contains("tls.beat") && err.contains("plots"), "{err}");
}

#[test]
fn validate_warns_on_coarse_grid() {
    let out = validate("v-coarse", "[tls]\nsigma = 1.0\n[grid]\npoints = 11\nhalf_window = 5.0\n");
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let err = stderr(&out);
    assert!(err.contains("warning") && err.contains("grid.points"), "{err}");
    assert!(err.contains("grid.half_window"), "{err}");
}

#[test]
fn validate_reports_syntax_position() {
    let out = validate("v-syntax", "[tls]\nbeta = 1.0\nsigma = = 2\n");
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("line 3"), "{}", stderr(&out));
}
