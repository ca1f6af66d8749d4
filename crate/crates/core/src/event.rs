//! Onset and amplitude prediction for sudden ground motion in high-rate
//! series: find where the series starts moving, train up to there, forecast
//! forward and look for the first large departure from the baseline.

use crate::error::{Error, Result};
use crate::model::{PipelineConfig, TimeSeries, WindowPolicy};
use crate::predictor::predict_horizon;

/// Where the training window ends.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TrainingSpan {
    /// At the departure index plus `offset` samples.
    Departure { offset: usize },
    /// After the first `⌊fraction·len⌋` samples.
    Fraction(f64),
}

impl Default for TrainingSpan {
    fn default() -> Self {
        TrainingSpan::Departure { offset: 0 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EventConfig {
    /// `pipeline.n` caps the training window; shorter spans use everything
    /// available from the start of the series.
    pub pipeline: PipelineConfig,
    pub step_threshold: f64,
    pub event_threshold: f64,
    pub baseline_len: usize,
    pub training: TrainingSpan,
    pub horizon: usize,
}

impl Default for EventConfig {
    /// 1 Hz data, 3 cm steps, event at ten times the step threshold.
    fn default() -> Self {
        Self {
            pipeline: PipelineConfig {
                f0: 1.0,
                window_policy: WindowPolicy::Growing,
                refit_each_step: false,
                ..Default::default()
            },
            step_threshold: 0.03,
            event_threshold: 0.3,
            baseline_len: 300,
            training: TrainingSpan::default(),
            horizon: 600,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EventReport {
    pub departure_index: usize,
    pub departure_epoch: f64,
    pub predicted_event_time: f64,
    pub predicted_first_motion: f64,
    /// Set by [`EventReport::with_reference`].
    pub lead_time: Option<f64>,
    /// Share of the series used up to the end of the training window.
    pub training_fraction: f64,
    pub training_len: usize,
    pub baseline: f64,
}

impl EventReport {
    pub fn with_reference(mut self, reference_event_time: f64) -> Self {
        self.lead_time = Some(lead_time(self.predicted_event_time, reference_event_time));
        self
    }
}

/// Positive when the prediction came first.
pub fn lead_time(predicted_event_time: f64, reference_event_time: f64) -> f64 {
    reference_event_time - predicted_event_time
}

/// First index `i ≥ 1` with `|y[i] - y[i-1]| > step_threshold`.
pub fn find_departure(series: &TimeSeries, step_threshold: f64) -> Result<usize> {
    if series.len() < 2 {
        return Err(Error::SeriesTooShort { len: series.len(), needed: 2 });
    }
    if !(step_threshold > 0.0) {
        return Err(Error::InvalidConfig(format!("step threshold {step_threshold}")));
    }
    series
        .samples
        .windows(2)
        .position(|w| (w[1].value - w[0].value).abs() > step_threshold)
        .map(|i| i + 1)
        .ok_or(Error::NoDeparture)
}

fn training_end(len: usize, departure: usize, span: TrainingSpan) -> Result<usize> {
    match span {
        TrainingSpan::Departure { offset } => Ok((departure + offset + 1).min(len)),
        TrainingSpan::Fraction(f) => {
            if !(f > 0.0 && f <= 1.0) {
                return Err(Error::InvalidConfig(format!("training fraction {f}")));
            }
            Ok((f * len as f64).floor() as usize)
        }
    }
}

/// Runs the event pipeline on one station component.
pub fn predict_event(series: &TimeSeries, config: &EventConfig) -> Result<EventReport> {
    if !(config.event_threshold > 0.0) {
        return Err(Error::InvalidConfig(format!("event threshold {}", config.event_threshold)));
    }
    if config.baseline_len == 0 {
        return Err(Error::InvalidConfig("baseline length must be at least 1".into()));
    }
    let departure = find_departure(series, config.step_threshold)?;
    let departure_epoch = series.samples[departure].t;

    let end = training_end(series.len(), departure, config.training)?;
    let n = config.pipeline.n.min(end);
    let training = series.with_samples(series.samples[end - n..end].to_vec());
    let pipeline = PipelineConfig { n, ..config.pipeline.clone() };
    let forecast = predict_horizon(&training, &pipeline, config.horizon)?;

    let from = departure.saturating_sub(config.baseline_len);
    let pre = &series.samples[from..departure];
    let baseline = pre.iter().map(|s| s.value).sum::<f64>() / pre.len() as f64;

    let deviation: Vec<f64> = forecast.iter().map(|s| s.value - baseline).collect();
    let onset = forecast
        .iter()
        .zip(&deviation)
        .position(|(s, d)| s.t >= departure_epoch && d.abs() > config.event_threshold)
        .ok_or(Error::NoEventInHorizon)?;

    // Follow the swing to its first turning point.
    let direction = deviation[onset].signum();
    let mut peak = onset;
    while peak + 1 < deviation.len() && direction * (deviation[peak + 1] - deviation[peak]) >= 0.0 {
        peak += 1;
    }

    Ok(EventReport {
        departure_index: departure,
        departure_epoch,
        predicted_event_time: forecast[onset].t,
        predicted_first_motion: deviation[peak].abs(),
        lead_time: None,
        training_fraction: end as f64 / series.len() as f64,
        training_len: n,
        baseline,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Component;

    fn series(values: &[f64]) -> TimeSeries {
        TimeSeries::regular("S", Component::E, values, 1.0)
    }

    #[test]
    fn departure_examples() {
        assert!(matches!(find_departure(&series(&[2.0; 50]), 0.03), Err(Error::NoDeparture)));
        let mut v = vec![0.0; 1000];
        for x in &mut v[500..] {
            *x = 0.1;
        }
        assert_eq!(find_departure(&series(&v), 0.03).unwrap(), 500);
        assert!(matches!(find_departure(&series(&v), 0.2), Err(Error::NoDeparture)));
        assert!(find_departure(&series(&v[..1]), 0.03).is_err());
    }

    #[test]
    fn lead_time_sign() {
        assert_eq!(lead_time(452_864.0, 452_864.0), 0.0);
        assert_eq!(lead_time(452_864.0, 452_984.0), 120.0);
        assert!(lead_time(10.0, 5.0) < 0.0);
    }

    #[test]
    fn flat_forecast_has_no_event() {
        // Nothing in the forecast gets anywhere near 10 m.
        let mut v = vec![1.0; 120];
        v[119] = 1.05;
        let cfg = EventConfig {
            pipeline: PipelineConfig { n: 120, m_min: 1, m_max: 1, f0: 1.0, ..EventConfig::default().pipeline },
            horizon: 20,
            event_threshold: 10.0,
            ..Default::default()
        };
        assert!(matches!(predict_event(&series(&v), &cfg), Err(Error::NoEventInHorizon)));
    }
}
