use gnss_predict::event::{find_departure, predict_event, EventConfig, TrainingSpan};
use gnss_predict::ingest::{
    parse_delimited, parse_ngl, read_series_csv, write_series_csv, SeriesFileSchema,
};
use gnss_predict::outlier::{
    detect_outliers, inject_outliers, run_campaign, score_detection, CampaignConfig,
};
use gnss_predict::synth::{swing_event, synthetic_corpus, synthetic_series, SwingSpec, SyntheticSpec};
use gnss_predict::{Component, Error, PipelineConfig, Sample, TimeSeries, WindowPolicy};

fn outlier_config() -> PipelineConfig {
    CampaignConfig::default().pipeline
}

fn quiet_series(seed: u64) -> TimeSeries {
    let spec = SyntheticSpec { noise_sigma: 0.0, ..Default::default() };
    synthetic_series(&spec, "Q", Component::N, seed)
}

#[test]
fn clean_signal_has_no_outliers() {
    for seed in 0..5 {
        let d = detect_outliers(&quiet_series(seed), &outlier_config(), 0.03, 10).unwrap();
        assert!(d.flags.is_empty(), "seed {seed}: {:?}", d.flags.iter().map(|f| f.index).collect::<Vec<_>>());
    }
}

#[test]
fn injected_spikes_are_found_and_replaced() {
    let clean = quiet_series(3);
    let (dirty, truth) = inject_outliers(&clean, 5, 0.1, 2.0, 17).unwrap();
    let d = detect_outliers(&dirty, &outlier_config(), 0.03, 10).unwrap();
    let score = score_detection(&truth, &d.flags);
    assert_eq!(score.detected_count, 5);
    assert_eq!(score.false_positive_count, 0);
    for (i, mag) in truth.indices.iter().zip(&truth.magnitudes) {
        let flag = d.flags.iter().find(|f| f.index == *i).unwrap();
        assert!((flag.magnitude_estimate - mag.abs()).abs() < 0.03);
        assert!((d.cleaned.samples[*i].value - clean.samples[*i].value).abs() < 0.03);
    }
}

#[test]
fn cleaned_series_is_a_fixed_point() {
    let (dirty, _) = inject_outliers(&quiet_series(4), 4, 0.2, 1.0, 5).unwrap();
    let d = detect_outliers(&dirty, &outlier_config(), 0.03, 10).unwrap();
    let again = detect_outliers(&d.cleaned, &outlier_config(), 0.03, 10).unwrap();
    assert!(again.flags.is_empty());
}

#[test]
fn huge_threshold_flags_nothing() {
    let (dirty, _) = inject_outliers(&quiet_series(5), 3, 0.5, 1.0, 2).unwrap();
    assert!(detect_outliers(&dirty, &outlier_config(), 10.0, 10).unwrap().flags.is_empty());
}

#[test]
fn injection_keeps_other_samples() {
    let clean = quiet_series(6);
    let (dirty, truth) = inject_outliers(&clean, 6, 0.02, 5.0, 9).unwrap();
    for (i, (a, b)) in clean.samples.iter().zip(&dirty.samples).enumerate() {
        match truth.indices.iter().position(|&j| j == i) {
            Some(k) => assert!((b.value - a.value - truth.magnitudes[k]).abs() < 1e-12),
            None => assert_eq!(a, b),
        }
    }
    assert!(truth.magnitudes.iter().all(|m| (0.02..=5.0).contains(&m.abs())));
    assert!(matches!(inject_outliers(&clean, 1, 0.1, 1.0, 0), Err(Error::InvalidConfig(_))));
    assert!(matches!(inject_outliers(&clean, 201, 0.1, 1.0, 0), Err(Error::TooManyInjections { .. })));
}

#[test]
fn campaign_is_reproducible() {
    let spec = SyntheticSpec { length: 120, ..Default::default() };
    let corpus = synthetic_corpus(&spec, 4, 21);
    let a = run_campaign(&corpus, &CampaignConfig::default()).unwrap();
    let b = run_campaign(&corpus, &CampaignConfig::default()).unwrap();
    assert_eq!(a, b);
    assert_eq!(a.epochs, 480);
    assert_eq!(a.total.injected_count, 20);
    assert!(matches!(run_campaign(&[], &CampaignConfig::default()), Err(Error::EmptyInput)));
}

fn event_config() -> EventConfig {
    EventConfig {
        pipeline: PipelineConfig {
            n: 100_000,
            f0: 1.0,
            m_fixed: Some(17),
            window_policy: WindowPolicy::Growing,
            refit_each_step: false,
            ..Default::default()
        },
        horizon: 60,
        ..Default::default()
    }
}

fn swing_truth(spec: &SwingSpec, series: &TimeSeries, threshold: f64) -> (f64, f64) {
    let dev: Vec<f64> = series.samples.iter().map(|s| s.value - spec.baseline).collect();
    let onset = dev.iter().position(|d| d.abs() > threshold).unwrap();
    let peak = (0..dev.len()).max_by(|&i, &j| dev[i].abs().total_cmp(&dev[j].abs())).unwrap();
    (series.samples[onset].t, series.samples[peak].t)
}

#[test]
fn swing_onset_and_amplitude() {
    let spec = SwingSpec::default();
    let s = swing_event(&spec, "EV", Component::E);
    let cfg = event_config();
    let (onset, peak) = swing_truth(&spec, &s, cfg.event_threshold);
    let r = predict_event(&s, &cfg).unwrap().with_reference(peak);
    assert!(r.departure_index < onset as usize);
    assert!((r.predicted_event_time - onset).abs() <= 2.0);
    assert!((r.predicted_first_motion.abs() - spec.amplitude).abs() <= 0.2 * spec.amplitude);
    assert!(r.lead_time.unwrap() > 0.0);
    assert_eq!(r.training_len, r.departure_index + 1);
    assert!((r.baseline - spec.baseline).abs() < 0.03);
}

#[test]
fn swing_is_translation_equivariant() {
    let spec = SwingSpec::default();
    let s = swing_event(&spec, "EV", Component::E);
    let r = predict_event(&s, &event_config()).unwrap();
    let shifted = TimeSeries {
        samples: s.samples.iter().map(|p| Sample::new(p.t, p.value + 12.5)).collect(),
        origin: 4.0e8,
        ..s.clone()
    };
    let r2 = predict_event(&shifted, &event_config()).unwrap();
    assert_eq!(r.departure_index, r2.departure_index);
    assert!((r.predicted_event_time - r2.predicted_event_time).abs() < 1e-9);
    assert!((r.predicted_first_motion - r2.predicted_first_motion).abs() < 1e-6);
}

#[test]
fn short_training_cannot_anticipate_the_swing() {
    let spec = SwingSpec::default();
    let s = swing_event(&spec, "EV", Component::E);
    let (onset, _) = swing_truth(&spec, &s, 0.3);
    let cfg = EventConfig { training: TrainingSpan::Fraction(0.1), ..event_config() };
    match predict_event(&s, &cfg) {
        Err(e) => assert!(matches!(e, Error::UnderdeterminedSystem { .. } | Error::NoEventInHorizon), "{e}"),
        Ok(r) => assert!((r.predicted_event_time - onset).abs() > 2.0),
    }
}

#[test]
fn departure_needs_a_step() {
    let flat = TimeSeries::regular("F", Component::U, &[1.0; 50], 1.0);
    assert_eq!(find_departure(&flat, 0.03), Err(Error::NoDeparture));
    let mut v = vec![1.0; 50];
    v[30..].iter_mut().for_each(|x| *x += 0.05);
    let stepped = TimeSeries::regular("F", Component::U, &v, 1.0);
    assert_eq!(find_departure(&stepped, 0.03), Ok(30));
    assert_eq!(predict_event(&flat, &event_config()), Err(Error::NoDeparture));
}

#[test]
fn series_csv_round_trip() {
    let s = synthetic_series(&SyntheticSpec::default(), "RT01", Component::U, 8);
    let text = write_series_csv(&s);
    let back = read_series_csv(&text).unwrap();
    assert_eq!(back, s);
    assert_eq!(write_series_csv(&back), text);
}

#[test]
fn delimited_file_with_sidecar() {
    let schema = SeriesFileSchema::from_key_values(
        "delimiter = ;\nheader_lines = 1\nepoch_col = 0\nepoch_unit = mjd\nstation = ABCD\nU.value = 2\nU.sigma = 3\n",
    )
    .unwrap();
    let text = "mjd;junk;up;sig\n58849.0;x;0.010;0.002\n58850.0;x;0.012;0.002\n58851.0;x;0.011;0.004\n";
    let series = parse_delimited(text, &schema).unwrap();
    assert_eq!(series.len(), 1);
    let u = &series[0];
    assert_eq!((u.station_id.as_str(), u.component), ("ABCD", Component::U));
    assert_eq!(u.sampling_interval, 86_400.0);
    assert_eq!(u.times(), vec![0.0, 86_400.0, 172_800.0]);
    assert_eq!(u.samples[2].sigma, Some(0.004));
    assert!(matches!(
        SeriesFileSchema::from_key_values("U.value = 1\nfoo = 2\n"),
        Err(Error::SchemaMismatch(_))
    ));
    assert!(matches!(
        parse_delimited("58849;0.1\n58850;oops\n", &SeriesFileSchema::from_key_values("delimiter = ;\nU.value = 1\n").unwrap()),
        Err(Error::MalformedLine { line: 2, .. })
    ));
}

#[test]
fn ngl_file() {
    let text = "site YYMMMDD yyyy.yyyy __MJD week d reflon _e0(m) __east(m) ____n0(m) _north(m) u0(m) ____up(m) _ant(m) sig_e(m) sig_n(m) sig_u(m) __corr_en __corr_eu __corr_nu\n\
        P123 20JAN01 2020.0014 58849 2086 3 -117.1 -100 0.5000 4200000 0.2500 1000 0.0100 0.0 0.0010 0.0012 0.0040 0.0 0.0 0.0\n\
        P123 20JAN02 2020.0041 58850 2086 4 -117.1 -100 0.5020 4200000 0.2510 1000 0.0120 0.0 0.0011 0.0013 0.0041 0.0 0.0 0.0\n";
    let series = parse_ngl(text).unwrap();
    assert_eq!(series.len(), 3);
    let e = series.iter().find(|s| s.component == Component::E).unwrap();
    assert_eq!(e.station_id, "P123");
    assert!((e.samples[1].value - -99.498).abs() < 1e-9);
    assert_eq!(e.samples[1].t, 86_400.0);
    assert_eq!(e.samples[0].sigma, Some(0.0010));
    assert!(matches!(parse_ngl("a,b,c\n1,2,3\n"), Err(Error::UnknownFormat(_))));
}
