use fracvec::maxwell::load_snapshot;
use fracvec_cli::{
    convergence_order, failures, run_experiment, Cell, CliError, Experiment, ExperimentConfig, Format, ResultTable,
};
use std::collections::BTreeSet;
use std::process::Command;

fn config(e: Experiment, alpha: &[f64], grid: &[usize]) -> ExperimentConfig {
    let mut cfg = ExperimentConfig::new(e);
    cfg.alpha = alpha.to_vec();
    cfg.grid = grid.to_vec();
    cfg
}

fn real(t: &ResultTable, row: usize, col: &str) -> f64 {
    t.get(row, col).and_then(Cell::as_f64).unwrap_or_else(|| panic!("no real in {col}"))
}

fn csv(t: &ResultTable) -> String {
    let mut buf = Vec::new();
    t.write(&mut buf, Format::Csv).unwrap();
    String::from_utf8(buf).unwrap()
}

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_fracvec"))
}

#[test]
fn green_linear_field_at_alpha_one() {
    let mut cfg = config(Experiment::Green, &[1.0], &[64]);
    cfg.set("function", "y=poly:0,1").unwrap();
    cfg.set("field", "0").unwrap();
    let t = run_experiment(&cfg).unwrap();
    assert_eq!(t.len(), 1);
    // trapezoid and central differences are exact on linear data
    assert!(real(&t, 0, "residual") <= 1e-12);
    assert!(real(&t, 0, "classical_residual") <= 1e-12);
    assert!((real(&t, 0, "lhs") - 1.0).abs() <= 1e-12);
}

#[test]
fn ftfc_rows_decrease_and_converge() {
    let t = run_experiment(&config(Experiment::Ftfc, &[0.5], &[128, 256, 512])).unwrap();
    assert_eq!(t.len(), 3);
    let r: Vec<f64> = (0..3).map(|i| real(&t, i, "residual")).collect();
    assert!(r[1] < r[0] && r[2] < r[1], "{r:?}");
    assert!(convergence_order(&t).unwrap() >= 0.8);
}

#[test]
fn gauss_benchmark_and_serialization() {
    let mut cfg = config(Experiment::Gauss, &[0.5], &[24]);
    cfg.set("function", "x=poly:0,1; 0; 0").unwrap();
    let t = run_experiment(&cfg).unwrap();
    let four_over_pi = 4.0 / std::f64::consts::PI;
    assert!((real(&t, 0, "lhs") - four_over_pi).abs() <= 1e-2);
    assert!((real(&t, 0, "rhs") - four_over_pi).abs() <= 1e-2);
    let text = csv(&t);
    let row: Vec<&str> = text.lines().nth(1).unwrap().split(',').collect();
    let lhs = row[t.column("lhs").unwrap()];
    let mantissa = lhs.split('e').next().unwrap().replace(['.', '-'], "");
    assert!(mantissa.len() >= 10, "{lhs}");
    assert_eq!(lhs.parse::<f64>().unwrap(), real(&t, 0, "lhs"));
}

#[test]
fn rows_are_sorted_and_deterministic() {
    let cfg = config(Experiment::Convolution, &[0.7, 0.3], &[256, 64, 128]);
    let a = run_experiment(&cfg).unwrap();
    let b = run_experiment(&cfg).unwrap();
    assert_eq!(csv(&a), csv(&b));
    let keys: Vec<(f64, f64)> = (0..a.len()).map(|i| (real(&a, i, "alpha"), real(&a, i, "grid"))).collect();
    let mut sorted = keys.clone();
    sorted.sort_by(|x, y| x.partial_cmp(y).unwrap());
    assert_eq!(keys, sorted);
    assert_eq!(a.len(), 6);
}

#[test]
fn every_verifier_is_reachable() {
    let expected = [
        "ftfc_left_inverse_residual",
        "newton_leibniz_residual",
        "ftfc_higher_residual",
        "rl_newton_leibniz_correction",
        "rl_newton_leibniz_lower_limit_rhs",
        "integral_semigroup_residual",
        "caputo_square_vs_double_order",
        "caputo_semigroup_counterexample",
        "leibniz_series",
        "curl_grad_residual",
        "div_curl_residual",
        "double_curl_residual",
        "curl_grad_semidiscrete",
        "div_curl_semidiscrete",
        "double_curl_semidiscrete",
        "leibniz_violation_gap",
        "green_residual",
        "stokes_residual",
        "gauss_residual",
        "elementary_region_integral",
        "indicator_embedding",
        "gauss_constraint_residuals",
        "charge_conservation_residual",
        "integral_charge_balance",
        "wave_residual",
        "dalembert_mode",
        "wave_1d_wright_solution",
        "caputo_from_convolution",
        "convolution_gap",
        "convergence_order",
    ];
    let reached: BTreeSet<&str> = Experiment::ALL.iter().flat_map(|e| e.verifiers().iter().copied()).collect();
    for v in expected {
        assert!(reached.contains(v), "{v} is not reachable");
    }
    // and every experiment runs end to end on a small problem
    for e in Experiment::ALL {
        let grid: &[usize] = match e {
            Experiment::Ftfc | Experiment::Semigroup | Experiment::Convolution | Experiment::Convergence => {
                &[32, 64, 128]
            }
            Experiment::Wave1d => &[401],
            _ => &[10],
        };
        let t = run_experiment(&config(e, &[0.5], grid)).unwrap_or_else(|err| panic!("{e}: {err}"));
        assert!(!t.is_empty(), "{e}");
    }
}

#[test]
fn higher_order_ftfc_uses_the_second_identity() {
    let t = run_experiment(&config(Experiment::Ftfc, &[1.5], &[256])).unwrap();
    assert!(real(&t, 0, "newton_leibniz") < 1e-2);
    assert_eq!(t.get(0, "rl_lhs"), Some(&Cell::Text(String::new())));
}

#[test]
fn registry_miss_names_the_row() {
    let mut cfg = config(Experiment::Ftfc, &[0.5], &[64]);
    cfg.set("function", "cosh").unwrap();
    match run_experiment(&cfg) {
        Err(CliError::Row { alpha, grid, source }) => {
            assert_eq!((alpha, grid), (0.5, 64));
            assert!(matches!(source, fracvec::FvcError::RegistryMiss(_)));
        }
        other => panic!("{other:?}"),
    }
}

#[test]
fn tolerance_drives_status() {
    let mut cfg = config(Experiment::Ftfc, &[0.5], &[64, 512]);
    cfg.tolerance = 1e-3;
    let t = run_experiment(&cfg).unwrap();
    let f = failures(&t);
    assert_eq!(f.len(), 1);
    assert!(f[0].contains("grid=64"), "{}", f[0]);
}

#[test]
fn binary_writes_identical_files_and_exit_zero() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a.csv"), dir.path().join("b.csv"));
    for p in [&a, &b] {
        let st = bin().args(["semigroup", "--alpha", "0.3,0.6", "--grid", "64,128", "--out"]).arg(p).status().unwrap();
        assert!(st.success());
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    let t = ResultTable::read_csv(std::fs::File::open(&a).unwrap()).unwrap();
    assert_eq!(t.len(), 4);
}

#[test]
fn binary_lists_failures_with_exit_one() {
    let out = bin().args(["ftfc", "--alpha", "0.5", "--grid", "64", "--tolerance", "1e-9"]).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("FAIL alpha=5.000000e-1 grid=64"), "{err}");
}

#[test]
fn binary_reports_errors_with_exit_two() {
    let out = bin().args(["run", "--experiment", "heat"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8(out.stderr).unwrap().contains("unknown experiment `heat`"));
    let out = bin().args(["convolution", "--alpha", "1", "--grid", "64"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8(out.stderr).unwrap().contains("alpha = 1, grid = 64"));
}

#[test]
fn config_file_with_overrides() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("run.cfg");
    std::fs::write(&path, "experiment = gauss\nalpha = 0.5\ngrid = 12\nfunction = x=poly:0,1; 0; 0\nformat = csv\n")
        .unwrap();
    let out = bin().arg("run").arg("--config").arg(&path).args(["--format", "json", "--grid", "16"]).output().unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.trim_start().starts_with('['), "{text}");
    assert!(text.contains("\"grid\": 16"), "{text}");
}

#[test]
fn maxwell_records_calibration_and_snapshot() {
    let dir = tempfile::tempdir().unwrap();
    let mut cfg = config(Experiment::Maxwell, &[1.0], &[10]);
    cfg.steps = 4;
    cfg.out = Some(dir.path().join("em.csv"));
    let t = run_experiment(&cfg).unwrap();
    let dt = real(&t, 0, "dt");
    assert_eq!(dt, 0.5 * real(&t, 0, "dt_max"));
    assert!(real(&t, 0, "residual") < 1e-2);
    let (state, params) = load_snapshot(&dir.path().join("em_alpha1_grid10.snap")).unwrap();
    assert!((state.t - 4.0 * dt).abs() < 1e-12);
    assert_eq!(params.orders[0].alpha(), 1.0);
}
