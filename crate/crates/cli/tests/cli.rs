use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use gnss_predict::ingest::{read_series_csv, write_series_csv};
use gnss_predict::{Component, TimeSeries};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gnss-predict")).args(args).output().unwrap()
}

fn code(args: &[&str]) -> i32 {
    run(args).status.code().unwrap()
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn write_series(dir: &Path, name: &str, values: &[f64]) -> String {
    let series = TimeSeries::regular("TST1", Component::E, values, 86_400.0);
    let path = dir.join(name);
    fs::write(&path, write_series_csv(&series)).unwrap();
    path.to_str().unwrap().to_string()
}

fn csv_rows(path: &Path) -> Vec<Vec<String>> {
    fs::read_to_string(path)
        .unwrap()
        .lines()
        .filter(|l| !l.starts_with('#'))
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect()
}

#[test]
fn usage_errors_exit_1() {
    assert_eq!(code(&[]), 1);
    assert_eq!(code(&["predict"]), 1);
    assert_eq!(code(&["frobnicate"]), 1);
    let dir = tempfile::tempdir().unwrap();
    let input = write_series(dir.path(), "a.csv", &[1.0; 80]);
    let out = dir.path().join("o");
    assert_eq!(code(&["predict", "--input", &input, "--wavelet", "db9", "--out", s(&out)]), 1);
    assert_eq!(code(&["predict", "--input", &input, "--window-policy", "shrinking", "--out", s(&out)]), 1);
    assert_eq!(code(&["predict", "--input", &input, "--f0", "-1", "--out", s(&out)]), 1);
    let cfg = dir.path().join("bad.conf");
    fs::write(&cfg, "no_such_key = 3\n").unwrap();
    assert_eq!(code(&["predict", "--input", &input, "--config", s(&cfg), "--out", s(&out)]), 1);
    assert_eq!(code(&["--help"]), 0);
}

#[test]
fn data_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("o");
    let missing = dir.path().join("missing.csv");
    assert_eq!(code(&["predict", "--input", s(&missing), "--out", s(&out)]), 2);
    let garbage = dir.path().join("garbage.txt");
    fs::write(&garbage, "this is not a series\n").unwrap();
    assert_eq!(code(&["ingest", "--input", s(&garbage), "--out", s(&out)]), 2);
    let short = write_series(dir.path(), "short.csv", &[1.0; 10]);
    assert_eq!(code(&["predict", "--input", &short, "--out", s(&out)]), 2);
    assert_eq!(code(&["simulate-outliers", "--series-count", "0", "--out", s(&out)]), 2);
    let flat = write_series(dir.path(), "flat.csv", &[0.5; 100]);
    assert_eq!(code(&["detect-event", "--input", &flat, "--components", "E", "--out", s(&out)]), 2);
}

#[test]
fn numerical_errors_exit_3() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_series(dir.path(), "a.csv", &(0..80).map(|i| (i as f64 * 0.3).sin()).collect::<Vec<_>>());
    let out = dir.path().join("o");
    let args = ["predict", "--input", &input, "--n", "8", "--m-fixed", "4", "--out", s(&out)];
    assert_eq!(code(&args), 3);
}

#[test]
fn predict_writes_requested_horizon() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_series(dir.path(), "const.csv", &[2.5; 100]);
    let out = dir.path().join("o");
    assert_eq!(code(&["predict", "--input", &input, "--out", s(&out)]), 0);
    let pred = read_series_csv(&fs::read_to_string(out.join("predictions.csv")).unwrap()).unwrap();
    assert_eq!(pred.len(), 30);
    for (k, p) in pred.samples.iter().enumerate() {
        assert_eq!(pred.origin + p.t, (100 + k) as f64 * 86_400.0);
        assert!((p.value - 2.5).abs() < 1e-9);
    }
    for f in ["model.txt", "coefficients.csv", "manifest.txt"] {
        assert!(out.join(f).exists(), "{f}");
    }
}

#[test]
fn evaluate_hand_values() {
    let dir = tempfile::tempdir().unwrap();
    // Training [0, 2], actual [1], prediction [3]: sMAPE 100.
    let truth = write_series(dir.path(), "truth.csv", &[0.0, 2.0, 1.0]);
    let pred = TimeSeries::regular("TST1", Component::E, &[3.0], 86_400.0);
    let pred = TimeSeries { origin: 2.0 * 86_400.0, ..pred };
    let pred_path = dir.path().join("pred.csv");
    fs::write(&pred_path, write_series_csv(&pred)).unwrap();
    let out = dir.path().join("o");
    assert_eq!(code(&["evaluate", "--input", &truth, "--predictions", s(&pred_path), "--out", s(&out)]), 0);
    let rows = csv_rows(&out.join("evaluation.csv"));
    assert_eq!(rows[0], ["smape_percent", "mase", "std_m", "mae_m", "q", "n"]);
    let smape: f64 = rows[1][0].parse().unwrap();
    let mae: f64 = rows[1][3].parse().unwrap();
    assert!((smape - 100.0).abs() < 1e-12);
    assert_eq!(mae, 2.0);
    // One error: the spread is undefined.
    assert_eq!(rows[1][2], "NaN");
    assert_eq!(&rows[1][4..], ["1", "2"]);

    // Training [0, 1, 2], actual [3, 4], prediction [3, 5]: MASE 0.25.
    let truth = write_series(dir.path(), "truth2.csv", &[0.0, 1.0, 2.0, 3.0, 4.0]);
    let pred = TimeSeries { origin: 3.0 * 86_400.0, ..TimeSeries::regular("TST1", Component::E, &[3.0, 5.0], 86_400.0) };
    fs::write(&pred_path, write_series_csv(&pred)).unwrap();
    assert_eq!(code(&["evaluate", "--input", &truth, "--predictions", s(&pred_path), "--out", s(&out)]), 0);
    let rows = csv_rows(&out.join("evaluation.csv"));
    let mase: f64 = rows[1][1].parse().unwrap();
    assert!((mase - 0.25).abs() < 1e-12);
}

#[test]
fn evaluate_rejects_unaligned_predictions() {
    let dir = tempfile::tempdir().unwrap();
    let truth = write_series(dir.path(), "truth.csv", &[0.0, 1.0, 2.0]);
    let pred = TimeSeries { origin: 10.0 * 86_400.0, ..TimeSeries::regular("TST1", Component::E, &[3.0], 86_400.0) };
    let pred_path = dir.path().join("pred.csv");
    fs::write(&pred_path, write_series_csv(&pred)).unwrap();
    let out = dir.path().join("o");
    assert_eq!(code(&["evaluate", "--input", &truth, "--predictions", s(&pred_path), "--out", s(&out)]), 2);
}

#[test]
fn config_file_and_flag_precedence() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_series(dir.path(), "const.csv", &[1.0; 100]);
    let cfg = dir.path().join("run.conf");
    fs::write(&cfg, "# short horizon\nhorizon = 5\nn = 40\n").unwrap();
    let out = dir.path().join("a");
    assert_eq!(code(&["predict", "--input", &input, "--config", s(&cfg), "--out", s(&out)]), 0);
    assert_eq!(csv_rows(&out.join("predictions.csv")).len(), 6);
    let manifest = fs::read_to_string(out.join("manifest.txt")).unwrap();
    assert!(manifest.contains("setting.n = 40"), "{manifest}");
    let out = dir.path().join("b");
    assert_eq!(code(&["predict", "--input", &input, "--config", s(&cfg), "--horizon", "7", "--out", s(&out)]), 0);
    assert_eq!(csv_rows(&out.join("predictions.csv")).len(), 8);
}

#[test]
fn simulate_outliers_summary() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("o");
    let o = run(&["simulate-outliers", "--series-count", "4", "--out", s(&out)]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let rows = csv_rows(&out.join("summary.csv"));
    assert_eq!(rows.len(), 6);
    let last = rows.last().unwrap();
    assert_eq!(last[0], "total");
    for f in ["flags.csv", "injections.csv"] {
        assert!(out.join(f).exists(), "{f}");
    }
}

#[test]
fn detect_event_reports_mean_row() {
    let dir = tempfile::tempdir().unwrap();
    let synth = dir.path().join("synth");
    assert_eq!(code(&["synth", "--kind", "event", "--out", s(&synth)]), 0);
    let input = synth.join("EV01_E.csv");
    let out = dir.path().join("o");
    let args = [
        "detect-event", "--input", s(&input), "--m-fixed", "17", "--horizon", "60",
        "--components", "E", "--reference", "231", "--out", s(&out),
    ];
    let o = run(&args);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let rows = csv_rows(&out.join("events.csv"));
    assert_eq!(rows.last().unwrap()[0], "mean");
    let header = &rows[0];
    let col = |name: &str| header.iter().position(|h| h == name).unwrap();
    let t: f64 = rows[1][col("predicted_event_time_s")].parse().unwrap();
    assert!((t - 197.0).abs() <= 2.0);
    let lead: f64 = rows[1][col("lead_time_s")].parse().unwrap();
    assert!(lead > 0.0);
}

#[test]
fn bench_with_empty_grid() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("o");
    assert_eq!(code(&["bench", "--grid", "", "--out", s(&out)]), 0);
    assert_eq!(csv_rows(&out.join("bench.csv")).len(), 1);
    assert_eq!(code(&["bench", "--grid", "64:4", "--repeats", "2", "--out", s(&out)]), 0);
    assert_eq!(csv_rows(&out.join("bench.csv")).len(), 2);
}

#[test]
fn ingest_ngl_writes_per_component_files() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("P123.tenv3");
    fs::write(
        &input,
        "site YYMMMDD yyyy.yyyy __MJD week d reflon _e0(m) __east(m) ____n0(m) _north(m) u0(m) ____up(m) _ant(m) sig_e(m) sig_n(m) sig_u(m) __corr_en __corr_eu __corr_nu\n\
         P123 20JAN01 2020.0014 58849 2086 3 -117.1 -100 0.5000 4200000 0.2500 1000 0.0100 0.0 0.0010 0.0012 0.0040 0.0 0.0 0.0\n\
         P123 20JAN02 2020.0041 58850 2086 4 -117.1 -100 0.5020 4200000 0.2510 1000 0.0120 0.0 0.0011 0.0013 0.0041 0.0 0.0 0.0\n",
    )
    .unwrap();
    let out = dir.path().join("o");
    assert_eq!(code(&["ingest", "--input", s(&input), "--out", s(&out)]), 0);
    for c in ["E", "N", "U"] {
        let series = read_series_csv(&fs::read_to_string(out.join(format!("P123_{c}.csv"))).unwrap()).unwrap();
        assert_eq!(series.len(), 2);
    }
}
