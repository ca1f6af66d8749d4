use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use gnss_predict::event::{predict_event, EventConfig, EventReport, TrainingSpan};
use gnss_predict::ingest::{
    parse_delimited, parse_ngl, read_series_csv, write_results, write_series_csv, Cell, OutputFormat,
    SeriesFileSchema, Table,
};
use gnss_predict::metrics::{mae, mase_with, smape, std_err, MaseScale};
use gnss_predict::outlier::{run_campaign, CampaignConfig};
use gnss_predict::synth::{swing_event, synthetic_corpus, SwingSpec, SyntheticSpec};
use gnss_predict::{
    predict_horizon, predict_one, slice_window, train, Component, Error, PipelineConfig, TimeSeries, Wavelet,
    Window, WindowPolicy,
};

use crate::settings::Settings;
use crate::{Common, Failure, Pipeline};

const VERSION: &str = env!("CARGO_PKG_VERSION");

fn settings(defaults: &[(&str, &str)], common: &Common) -> Result<Settings, Failure> {
    let mut s = Settings::new(defaults);
    if let Some(path) = &common.config {
        let text = fs::read_to_string(path)
            .map_err(|e| Failure::usage(format!("config {}: {e}", path.display())))?;
        s.apply_config(&text)?;
    }
    s.apply_flag("seed", common.seed);
    s.apply_flag("workers", common.workers);
    Ok(s)
}

fn apply_pipeline(s: &mut Settings, p: &Pipeline) {
    s.apply_flag("n", p.n);
    s.apply_flag("m_min", p.m_min);
    s.apply_flag("m_max", p.m_max);
    s.apply_flag("m_fixed", p.m_fixed);
    s.apply_flag("mse_threshold", p.mse_threshold);
    s.apply_flag("f0", p.f0.as_ref());
    s.apply_flag("window_policy", p.window_policy.as_ref());
    s.apply_flag("wavelet", p.wavelet.as_ref());
    s.apply_flag("refit_each_step", p.refit_each_step);
}

/// `f0 = auto` means one cycle per sampling interval.
fn pipeline_config(s: &Settings, sampling_interval: f64) -> Result<PipelineConfig, Failure> {
    let f0 = match s.raw("f0") {
        "auto" => 1.0 / sampling_interval,
        _ => s.get("f0")?,
    };
    let cfg = PipelineConfig {
        n: s.get("n")?,
        f0,
        m_fixed: s.get_opt("m_fixed")?,
        m_min: s.get("m_min")?,
        m_max: s.get("m_max")?,
        mse_threshold: s.get("mse_threshold")?,
        wavelet: s.raw("wavelet").parse::<Wavelet>()?,
        window_policy: s.raw("window_policy").parse::<WindowPolicy>()?,
        refit_each_step: s.get("refit_each_step")?,
    };
    cfg.validate()?;
    Ok(cfg)
}

fn pipeline_defaults<'a>(n: &'a str, m_max: &'a str, policy: &'a str, refit: &'a str) -> Vec<(&'a str, &'a str)> {
    vec![
        ("n", n),
        ("m_min", "1"),
        ("m_max", m_max),
        ("m_fixed", ""),
        ("mse_threshold", "1e-6"),
        ("f0", "auto"),
        ("window_policy", policy),
        ("wavelet", "haar"),
        ("refit_each_step", refit),
        ("seed", "1"),
        ("workers", "0"),
    ]
}

fn setup_workers(s: &Settings) -> Result<(), Failure> {
    let workers: usize = s.get("workers")?;
    if workers > 0 {
        // A second build in the same process fails harmlessly.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(workers).build_global();
    }
    Ok(())
}

fn prepare_out(dir: &Path) -> Result<(), Failure> {
    fs::create_dir_all(dir).map_err(|e| Failure::io(dir, e))
}

fn write(dir: &Path, name: &str, contents: &str) -> Result<(), Failure> {
    let path = dir.join(name);
    fs::write(&path, contents).map_err(|e| Failure::io(&path, e))
}

fn manifest(subcommand: &str, inputs: &[PathBuf], common: &Common, s: &Settings) -> Result<(), Failure> {
    let mut m = String::new();
    let _ = writeln!(m, "subcommand = {subcommand}");
    let inputs: Vec<String> = inputs.iter().map(|p| p.display().to_string()).collect();
    let _ = writeln!(m, "inputs = {}", inputs.join(";"));
    let _ = writeln!(m, "config = {}", common.config.as_ref().map(|p| p.display().to_string()).unwrap_or_default());
    let _ = writeln!(m, "seed = {}", s.raw("seed"));
    let _ = writeln!(m, "out = {}", common.out.display());
    let _ = writeln!(m, "tool_version = {VERSION}");
    for (k, v) in s.iter() {
        let _ = writeln!(m, "setting.{k} = {v}");
    }
    write(&common.out, "manifest.txt", &m)
}

fn load_series(path: &Path) -> Result<TimeSeries, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::io(path, e))?;
    read_series_csv(&text).map_err(|e| {
        let f = Failure::from(e);
        Failure { message: format!("{}: {}", path.display(), f.message), ..f }
    })
}

/// Directories expand to their `.csv` files in name order.
fn expand_inputs(inputs: &[PathBuf]) -> Result<Vec<PathBuf>, Failure> {
    let mut out = Vec::new();
    for p in inputs {
        if p.is_dir() {
            let mut files: Vec<PathBuf> = fs::read_dir(p)
                .map_err(|e| Failure::io(p, e))?
                .filter_map(|e| e.ok().map(|e| e.path()))
                .filter(|f| f.extension().is_some_and(|x| x == "csv"))
                .collect();
            files.sort();
            out.extend(files);
        } else {
            out.push(p.clone());
        }
    }
    Ok(out)
}

fn series_file_name(s: &TimeSeries) -> String {
    let station: String = s
        .station_id
        .chars()
        .map(|c| if c.is_ascii_alphanumeric() || c == '-' { c } else { '_' })
        .collect();
    format!("{station}_{}.csv", s.component)
}

pub fn ingest(inputs: &[PathBuf], format: &str, schema: Option<&Path>, common: &Common) -> Result<(), Failure> {
    let s = settings(&[("seed", ""), ("workers", "0")], common)?;
    let schema = match format {
        "ngl" => None,
        "delimited" => {
            let path = schema.ok_or_else(|| Failure::usage("--format delimited needs --schema"))?;
            let text = fs::read_to_string(path).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))?;
            Some(SeriesFileSchema::from_key_values(&text)?)
        }
        other => return Err(Failure::usage(format!("unknown format `{other}` (ngl or delimited)"))),
    };
    let files = expand_inputs(inputs)?;
    let mut all = Vec::new();
    for f in &files {
        let text = fs::read_to_string(f).map_err(|e| Failure::io(f, e))?;
        let parsed = match &schema {
            None => parse_ngl(&text),
            Some(sc) => parse_delimited(&text, sc),
        };
        all.extend(parsed.map_err(|e| {
            let fl = Failure::from(e);
            Failure { message: format!("{}: {}", f.display(), fl.message), ..fl }
        })?);
    }
    prepare_out(&common.out)?;
    let mut index = Table::new(["file", "station", "component", "samples", "origin_s", "sampling_interval_s"]);
    let mut seen = std::collections::BTreeSet::new();
    for series in &all {
        let name = series_file_name(series);
        if !seen.insert(name.clone()) {
            return Err(Failure::data(format!("{name} produced by more than one input")));
        }
        write(&common.out, &name, &write_series_csv(series))?;
        index.push(vec![
            name.into(),
            series.station_id.as_str().into(),
            series.component.as_str().into(),
            series.len().into(),
            series.origin.into(),
            series.sampling_interval.into(),
        ]);
    }
    write(&common.out, "series.csv", &write_results(&index, OutputFormat::Delimited))?;
    manifest("ingest", inputs, common, &s)
}

pub fn predict(input: &Path, horizon: Option<usize>, pipeline: &Pipeline, common: &Common) -> Result<(), Failure> {
    let mut defaults = pipeline_defaults("64", "4", "sliding", "true");
    defaults.push(("horizon", "30"));
    let mut s = settings(&defaults, common)?;
    apply_pipeline(&mut s, pipeline);
    s.apply_flag("horizon", horizon);

    let series = load_series(input)?;
    let cfg = pipeline_config(&s, series.sampling_interval)?;
    let q: usize = s.get("horizon")?;
    let window = slice_window(&series, series.len().saturating_sub(1), cfg.n)?;
    let model = train(&window, &cfg)?;
    let predicted = predict_horizon(&series, &cfg, q)?;

    prepare_out(&common.out)?;
    write(&common.out, "predictions.csv", &write_series_csv(&series.with_samples(predicted)))?;

    let mut summary = Table::new([
        "n", "m", "rank", "unknowns", "p", "f0_hz", "df_hz", "mean_m", "trend_a_m", "trend_b_m_per_s",
        "training_mse_m2", "window_start_s", "window_end_s",
    ]);
    summary.push(vec![
        cfg.n.into(),
        model.m_used.into(),
        model.rank.into(),
        (2 * model.m_used).into(),
        model.grid.p.into(),
        model.grid.f0.into(),
        model.grid.df.into(),
        model.mean.into(),
        model.trend_a.into(),
        model.trend_b.into(),
        model.training_mse.into(),
        model.origin.into(),
        model.last_epoch.into(),
    ]);
    write(&common.out, "model.txt", &write_results(&summary, OutputFormat::Structured))?;

    let mut coeffs = Table::new(["k", "frequency_hz", "cos_low", "sin_low", "cos_high", "sin_high"]);
    for (k, f) in model.grid.freqs.iter().enumerate() {
        coeffs.push(vec![
            (k + 1).into(),
            (*f).into(),
            model.low.cos_coeffs[k].into(),
            model.low.sin_coeffs[k].into(),
            model.high.cos_coeffs[k].into(),
            model.high.sin_coeffs[k].into(),
        ]);
    }
    write(&common.out, "coefficients.csv", &write_results(&coeffs, OutputFormat::Delimited))?;
    manifest("predict", &[input.to_path_buf()], common, &s)
}

fn metric(r: gnss_predict::Result<f64>) -> Result<Cell, Failure> {
    match r {
        Ok(v) => Ok(v.into()),
        Err(Error::ZeroDenominator | Error::InsufficientData { .. }) => Ok(f64::NAN.into()),
        Err(e) => Err(e.into()),
    }
}

pub fn evaluate(input: &Path, predictions: &Path, mase_scale: Option<String>, common: &Common) -> Result<(), Failure> {
    let mut s = settings(&[("mase_scale", "full"), ("seed", ""), ("workers", "0")], common)?;
    s.apply_flag("mase_scale", mase_scale);
    let scale = match s.raw("mase_scale") {
        "full" => MaseScale::FullSeries,
        "training" => MaseScale::TrainingOnly,
        other => return Err(Failure::usage(format!("mase_scale `{other}` (full or training)"))),
    };
    let truth = load_series(input)?;
    let pred = load_series(predictions)?;
    let first = pred.origin + pred.samples[0].t;
    let tol = 1e-6 * truth.sampling_interval.max(pred.sampling_interval);
    let absolute = |s: &TimeSeries, i: usize| s.origin + s.samples[i].t;
    let training: Vec<f64> = (0..truth.len())
        .filter(|&i| absolute(&truth, i) < first - tol)
        .map(|i| truth.samples[i].value)
        .collect();
    let mut actual = Vec::with_capacity(pred.len());
    for j in 0..pred.len() {
        let e = absolute(&pred, j);
        let i = (0..truth.len())
            .find(|&i| (absolute(&truth, i) - e).abs() <= tol)
            .ok_or_else(|| Failure::data(format!("no observation at predicted epoch {e}")))?;
        actual.push(truth.samples[i].value);
    }
    let predicted = pred.values();
    let full: Vec<f64> = training.iter().chain(&actual).copied().collect();

    let mut t = Table::new(["smape_percent", "mase", "std_m", "mae_m", "q", "n"]);
    t.push(vec![
        metric(smape(&actual, &predicted))?,
        metric(mase_with(&actual, &predicted, &full, training.len(), scale))?,
        metric(std_err(&actual, &predicted))?,
        metric(mae(&actual, &predicted))?,
        actual.len().into(),
        training.len().into(),
    ]);
    prepare_out(&common.out)?;
    write(&common.out, "evaluation.csv", &write_results(&t, OutputFormat::Delimited))?;
    manifest("evaluate", &[input.to_path_buf(), predictions.to_path_buf()], common, &s)
}

pub struct OutlierFlags {
    pub threshold: Option<f64>,
    pub injections: Option<usize>,
    pub min_magnitude: Option<f64>,
    pub max_magnitude: Option<f64>,
    pub max_iterations: Option<usize>,
    pub series_count: Option<usize>,
    pub series_length: Option<usize>,
}

pub fn simulate_outliers(
    inputs: &[PathBuf],
    flags: OutlierFlags,
    pipeline: &Pipeline,
    common: &Common,
) -> Result<(), Failure> {
    let mut defaults = pipeline_defaults("30", "2", "sliding", "true");
    defaults.extend([
        ("threshold", "0.03"),
        ("injections", "5"),
        ("min_magnitude", "0.02"),
        ("max_magnitude", "5"),
        ("max_iterations", "10"),
        ("series_count", "50"),
        ("series_length", "200"),
        ("noise_sigma", "0.005"),
    ]);
    let mut s = settings(&defaults, common)?;
    apply_pipeline(&mut s, pipeline);
    s.apply_flag("threshold", flags.threshold);
    s.apply_flag("injections", flags.injections);
    s.apply_flag("min_magnitude", flags.min_magnitude);
    s.apply_flag("max_magnitude", flags.max_magnitude);
    s.apply_flag("max_iterations", flags.max_iterations);
    s.apply_flag("series_count", flags.series_count);
    s.apply_flag("series_length", flags.series_length);
    setup_workers(&s)?;

    let seed: u64 = s.get("seed")?;
    let files = expand_inputs(inputs)?;
    let corpus: Vec<TimeSeries> = if inputs.is_empty() {
        let spec = SyntheticSpec {
            length: s.get("series_length")?,
            noise_sigma: s.get("noise_sigma")?,
            ..Default::default()
        };
        synthetic_corpus(&spec, s.get("series_count")?, seed)
    } else {
        files.iter().map(|f| load_series(f)).collect::<Result<_, _>>()?
    };
    if corpus.is_empty() {
        return Err(Failure::data("empty corpus"));
    }
    let interval = corpus[0].sampling_interval;
    let cfg = CampaignConfig {
        pipeline: pipeline_config(&s, interval)?,
        injections_per_series: s.get("injections")?,
        min_magnitude: s.get("min_magnitude")?,
        max_magnitude: s.get("max_magnitude")?,
        threshold: s.get("threshold")?,
        max_iterations: s.get("max_iterations")?,
        seed,
    };
    let result = run_campaign(&corpus, &cfg)?;

    let mut summary = Table::new([
        "series",
        "injected",
        "detected",
        "success_rate_percent",
        "false_positives",
        "epochs",
        "false_positive_rate_percent",
    ]);
    let rate = |fp: usize, epochs: usize| 100.0 * fp as f64 / epochs.max(1) as f64;
    for o in &result.series {
        summary.push(vec![
            o.truth.series_id.as_str().into(),
            o.score.injected_count.into(),
            o.score.detected_count.into(),
            o.score.success_rate().into(),
            o.score.false_positive_count.into(),
            o.epochs.into(),
            rate(o.score.false_positive_count, o.epochs).into(),
        ]);
    }
    summary.push(vec![
        "total".into(),
        result.total.injected_count.into(),
        result.total.detected_count.into(),
        result.total.success_rate().into(),
        result.total.false_positive_count.into(),
        result.epochs.into(),
        result.false_positive_rate().into(),
    ]);

    let mut flags_t =
        Table::new(["series", "index", "epoch_s", "observed_m", "forward_m", "backward_m", "magnitude_m"]);
    let mut inj = Table::new(["series", "index", "magnitude_m"]);
    for o in &result.series {
        for f in &o.flags {
            flags_t.push(vec![
                o.truth.series_id.as_str().into(),
                f.index.into(),
                f.epoch.into(),
                f.observed.into(),
                f.forward_pred.into(),
                f.backward_pred.into(),
                f.magnitude_estimate.into(),
            ]);
        }
        for (i, m) in o.truth.indices.iter().zip(&o.truth.magnitudes) {
            inj.push(vec![o.truth.series_id.as_str().into(), (*i).into(), (*m).into()]);
        }
    }
    prepare_out(&common.out)?;
    write(&common.out, "summary.csv", &write_results(&summary, OutputFormat::Delimited))?;
    write(&common.out, "flags.csv", &write_results(&flags_t, OutputFormat::Delimited))?;
    write(&common.out, "injections.csv", &write_results(&inj, OutputFormat::Delimited))?;
    println!(
        "injected {} detected {} success {:.2}% false positives {} ({:.3}% of epochs)",
        result.total.injected_count,
        result.total.detected_count,
        result.total.success_rate(),
        result.total.false_positive_count,
        result.false_positive_rate()
    );
    manifest("simulate-outliers", &files, common, &s)
}

pub struct EventFlags {
    pub step_threshold: Option<f64>,
    pub event_threshold: Option<f64>,
    pub horizon: Option<usize>,
    pub training_fraction: Option<f64>,
    pub departure_offset: Option<usize>,
    pub baseline_len: Option<usize>,
    pub reference: Option<f64>,
    pub components: Option<String>,
}

pub fn detect_event(inputs: &[PathBuf], flags: EventFlags, pipeline: &Pipeline, common: &Common) -> Result<(), Failure> {
    let mut defaults = pipeline_defaults("17487", "32", "growing", "false");
    defaults.extend([
        ("step_threshold", "0.03"),
        ("event_threshold", ""),
        ("horizon", "600"),
        ("training_fraction", ""),
        ("departure_offset", "0"),
        ("baseline_len", "300"),
        ("reference", ""),
        ("components", "E,U"),
    ]);
    let mut s = settings(&defaults, common)?;
    apply_pipeline(&mut s, pipeline);
    s.apply_flag("step_threshold", flags.step_threshold);
    s.apply_flag("event_threshold", flags.event_threshold);
    s.apply_flag("horizon", flags.horizon);
    s.apply_flag("training_fraction", flags.training_fraction);
    s.apply_flag("departure_offset", flags.departure_offset);
    s.apply_flag("baseline_len", flags.baseline_len);
    s.apply_flag("reference", flags.reference);
    s.apply_flag("components", flags.components);
    setup_workers(&s)?;

    let wanted: Vec<Component> = s
        .raw("components")
        .split(',')
        .filter(|c| !c.trim().is_empty())
        .map(|c| c.trim().parse::<Component>())
        .collect::<Result<_, _>>()?;
    let files = expand_inputs(inputs)?;
    let mut corpus = Vec::new();
    for f in &files {
        let series = load_series(f)?;
        if wanted.contains(&series.component) {
            corpus.push(series);
        } else {
            eprintln!("skipping {}: component {} not selected", f.display(), series.component);
        }
    }
    if corpus.is_empty() {
        return Err(Failure::data("no input series for the selected components"));
    }
    let step: f64 = s.get("step_threshold")?;
    let training = match s.get_opt::<f64>("training_fraction")? {
        Some(f) => TrainingSpan::Fraction(f),
        None => TrainingSpan::Departure { offset: s.get("departure_offset")? },
    };
    let reference: Option<f64> = s.get_opt("reference")?;

    let run = |series: &TimeSeries| -> Result<EventReport, Failure> {
        let cfg = EventConfig {
            pipeline: pipeline_config(&s, series.sampling_interval)?,
            step_threshold: step,
            event_threshold: s.get_opt("event_threshold")?.unwrap_or(10.0 * step),
            baseline_len: s.get("baseline_len")?,
            training,
            horizon: s.get("horizon")?,
        };
        let mut r = predict_event(series, &cfg)?;
        // Report absolute epochs.
        r.departure_epoch += series.origin;
        r.predicted_event_time += series.origin;
        if let Some(reference) = reference {
            r = r.with_reference(reference);
        }
        Ok(r)
    };
    let results: Vec<Result<EventReport, Failure>> = {
        use rayon::prelude::*;
        corpus.par_iter().map(run).collect()
    };

    let mut t = Table::new([
        "station",
        "component",
        "departure_index",
        "departure_epoch_s",
        "predicted_event_time_s",
        "predicted_first_motion_m",
        "lead_time_s",
        "training_fraction",
        "training_len",
    ]);
    let mut ok: Vec<&EventReport> = Vec::new();
    let mut first_failure = None;
    let mut all_no_departure = true;
    for (series, r) in corpus.iter().zip(&results) {
        match r {
            Ok(r) => {
                all_no_departure = false;
                ok.push(r);
                t.push(vec![
                    series.station_id.as_str().into(),
                    series.component.as_str().into(),
                    r.departure_index.into(),
                    r.departure_epoch.into(),
                    r.predicted_event_time.into(),
                    r.predicted_first_motion.into(),
                    r.lead_time.into(),
                    r.training_fraction.into(),
                    r.training_len.into(),
                ]);
            }
            Err(f) => {
                if f.message != Error::NoDeparture.to_string() {
                    all_no_departure = false;
                }
                eprintln!("{} {}: {}", series.station_id, series.component, f.message);
                first_failure.get_or_insert(Failure { code: f.code, message: f.message.clone() });
            }
        }
    }
    if ok.is_empty() {
        return Err(if all_no_departure {
            Failure::data("no departure found in any input")
        } else {
            first_failure.expect("at least one input")
        });
    }
    let mean = |f: &dyn Fn(&EventReport) -> f64| ok.iter().map(|r| f(r)).sum::<f64>() / ok.len() as f64;
    let leads: Vec<f64> = ok.iter().filter_map(|r| r.lead_time).collect();
    t.push(vec![
        "mean".into(),
        Cell::Empty,
        mean(&|r| r.departure_index as f64).into(),
        mean(&|r| r.departure_epoch).into(),
        mean(&|r| r.predicted_event_time).into(),
        mean(&|r| r.predicted_first_motion).into(),
        if leads.is_empty() { Cell::Empty } else { (leads.iter().sum::<f64>() / leads.len() as f64).into() },
        mean(&|r| r.training_fraction).into(),
        mean(&|r| r.training_len as f64).into(),
    ]);
    prepare_out(&common.out)?;
    write(&common.out, "events.csv", &write_results(&t, OutputFormat::Delimited))?;
    manifest("detect-event", &files, common, &s)
}

fn parse_grid(text: &str) -> Result<Vec<(usize, usize)>, Failure> {
    text.split(',')
        .map(str::trim)
        .filter(|p| !p.is_empty())
        .map(|p| {
            let (n, m) = p.split_once(':').ok_or_else(|| Failure::usage(format!("grid entry `{p}` is not n:m")))?;
            let n = n.trim().parse().map_err(|_| Failure::usage(format!("grid entry `{p}`")))?;
            let m = m.trim().parse().map_err(|_| Failure::usage(format!("grid entry `{p}`")))?;
            Ok((n, m))
        })
        .collect()
}

pub fn bench(grid: Option<String>, repeats: Option<usize>, common: &Common) -> Result<(), Failure> {
    let mut s = settings(&[("grid", "1024:64"), ("repeats", "15"), ("seed", ""), ("workers", "0")], common)?;
    s.apply_flag("grid", grid);
    s.apply_flag("repeats", repeats);
    let grid = parse_grid(s.raw("grid"))?;
    let repeats: usize = s.get("repeats")?;
    if repeats == 0 {
        return Err(Failure::usage("repeats must be at least 1"));
    }
    let mut t = Table::new(["n", "m", "repeats", "median_ms", "mean_ms", "std_ms", "min_ms"]);
    for &(n, m) in &grid {
        let times: Vec<f64> = (0..n).map(|i| i as f64).collect();
        let values: Vec<f64> = times
            .iter()
            .map(|t| 0.01 * (0.05 * t).sin() + 1e-5 * t + 0.002 * (0.9 * t).cos())
            .collect();
        let window = Window::unweighted(times, values)?;
        let cfg = PipelineConfig { n, f0: 1.0, m_fixed: Some(m), ..Default::default() };
        cfg.validate_for_len(n)?;
        let mut ms = Vec::with_capacity(repeats);
        for _ in 0..repeats {
            let start = Instant::now();
            let model = train(&window, &cfg)?;
            std::hint::black_box(predict_one(&model, n as f64)?);
            ms.push(start.elapsed().as_secs_f64() * 1e3);
        }
        let mean = ms.iter().sum::<f64>() / repeats as f64;
        let var = if repeats > 1 {
            ms.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (repeats - 1) as f64
        } else {
            0.0
        };
        let mut sorted = ms.clone();
        sorted.sort_by(f64::total_cmp);
        let median = if repeats % 2 == 1 {
            sorted[repeats / 2]
        } else {
            0.5 * (sorted[repeats / 2 - 1] + sorted[repeats / 2])
        };
        t.push(vec![n.into(), m.into(), repeats.into(), median.into(), mean.into(), var.sqrt().into(), sorted[0].into()]);
    }
    prepare_out(&common.out)?;
    write(&common.out, "bench.csv", &write_results(&t, OutputFormat::Delimited))?;
    manifest("bench", &[], common, &s)
}

pub fn synth(kind: &str, series_count: Option<usize>, series_length: Option<usize>, common: &Common) -> Result<(), Failure> {
    let mut s = settings(
        &[("series_count", "50"), ("series_length", "200"), ("noise_sigma", "0.005"), ("seed", "1"), ("workers", "0")],
        common,
    )?;
    s.apply_flag("series_count", series_count);
    s.apply_flag("series_length", series_length);
    let corpus = match kind {
        "outliers" => {
            let spec = SyntheticSpec {
                length: s.get("series_length")?,
                noise_sigma: s.get("noise_sigma")?,
                ..Default::default()
            };
            synthetic_corpus(&spec, s.get("series_count")?, s.get("seed")?)
        }
        "event" => vec![swing_event(&SwingSpec::default(), "EV01", Component::E)],
        other => return Err(Failure::usage(format!("unknown kind `{other}` (outliers or event)"))),
    };
    prepare_out(&common.out)?;
    for series in &corpus {
        write(&common.out, &series_file_name(series), &write_series_csv(series))?;
    }
    manifest("synth", &[], common, &s)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_parsing() {
        assert_eq!(parse_grid("1024:64, 512:32").unwrap(), vec![(1024, 64), (512, 32)]);
        assert!(parse_grid("").unwrap().is_empty());
        assert!(parse_grid("1024").is_err());
    }
}
