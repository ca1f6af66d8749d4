//! Training with frequency-count search and auto-regressive prediction.

use crate::error::{Error, Result};
use crate::harmonic::{evaluate_band, fit_bands, frequency_grid, BandCoefficients, FrequencyGrid};
use crate::model::{slice_window, PipelineConfig, Sample, TimeSeries, Window, WindowPolicy};
use crate::preprocess::{detrend, restore_parts};
use crate::wavelet::decompose;

/// Everything needed to evaluate the fitted model at a new epoch.
///
/// Trend and band models use window-relative time; `origin` is the absolute
/// epoch of the first training sample.
#[derive(Debug, Clone, PartialEq)]
pub struct TrainedModel {
    pub mean: f64,
    pub trend_a: f64,
    pub trend_b: f64,
    pub grid: FrequencyGrid,
    pub low: BandCoefficients,
    pub high: BandCoefficients,
    pub training_mse: f64,
    pub m_used: usize,
    /// Numerical rank of the weighted design at `m_used`.
    pub rank: usize,
    pub origin: f64,
    pub last_epoch: f64,
}

impl TrainedModel {
    /// Model value at absolute epoch `t`, without the causality check.
    pub fn evaluate(&self, t: f64) -> f64 {
        let rel = t - self.origin;
        let core = evaluate_band(&self.low, &self.grid, rel) + evaluate_band(&self.high, &self.grid, rel);
        restore_parts(core, rel, self.trend_a, self.trend_b, self.mean)
    }

    /// Low and high band coefficients summed; the full semi-periodic part.
    pub fn combined_coefficients(&self) -> BandCoefficients {
        self.low.sum(&self.high)
    }

    pub fn rank_deficient(&self) -> bool {
        self.rank < 2 * self.m_used
    }
}

/// Fits the model to `window`, increasing `m` from the lower bound until the
/// weighted training MSE drops below the threshold. If it never does, the
/// probed `m` with the smallest MSE wins (ties go to the smaller `m`).
pub fn train(window: &Window, config: &PipelineConfig) -> Result<TrainedModel> {
    let n = window.len();
    config.validate_for_len(n)?;
    let detrended = detrend(window)?;
    let bands = decompose(&detrended.residuals, config.wavelet)?;
    let (m_lo, m_hi) = config.m_range();

    let mut best: Option<TrainedModel> = None;
    for m in m_lo..=m_hi {
        let grid = frequency_grid(config.f0, n, m)?;
        let fits = fit_bands(
            &detrended.times,
            &[&bands.low, &bands.high],
            &detrended.weights,
            &grid,
        )?;
        let mut fits = fits.into_iter();
        let low = fits.next().expect("two bands fitted");
        let high = fits.next().expect("two bands fitted");
        let mut model = TrainedModel {
            mean: detrended.mean,
            trend_a: detrended.trend_a,
            trend_b: detrended.trend_b,
            grid,
            rank: low.rank,
            low: low.coeffs,
            high: high.coeffs,
            training_mse: 0.0,
            m_used: m,
            origin: window.times[0],
            last_epoch: window.times[n - 1],
        };
        model.training_mse = training_mse(&model, window);
        let done = model.training_mse < config.mse_threshold;
        if best.as_ref().is_none_or(|b| model.training_mse < b.training_mse) {
            best = Some(model);
        }
        if done {
            break;
        }
    }
    Ok(best.expect("frequency range is non-empty"))
}

/// Weighted mean of squared reconstruction errors, weights normalised to
/// mean 1.
pub fn training_mse(model: &TrainedModel, window: &Window) -> f64 {
    let mut num = 0.0;
    let mut den = 0.0;
    for ((&t, &y), &w) in window.times.iter().zip(&window.values).zip(&window.weights) {
        let e = y - model.evaluate(t);
        num += w * e * e;
        den += w;
    }
    if den > 0.0 {
        num / den
    } else {
        0.0
    }
}

/// Predicts the value at `t_next`, which must lie after the training window.
pub fn predict_one(model: &TrainedModel, t_next: f64) -> Result<f64> {
    if !(t_next > model.last_epoch) {
        return Err(Error::NonCausalEpoch { t_next, last: model.last_epoch });
    }
    Ok(model.evaluate(t_next))
}

/// Predicts `q` samples past the end of `series`, one step at a time. Each
/// prediction is appended to the window as a unit-weight observation before
/// the next step.
pub fn predict_horizon(series: &TimeSeries, config: &PipelineConfig, q: usize) -> Result<Vec<Sample>> {
    let len = series.len();
    if len < config.n {
        return Err(Error::SeriesTooShort { len, needed: config.n });
    }
    if q == 0 {
        return Err(Error::InvalidConfig("horizon must be at least 1".into()));
    }
    if !(series.sampling_interval > 0.0) {
        return Err(Error::InvalidConfig("sampling interval must be positive".into()));
    }
    let mut window = slice_window(series, len - 1, config.n)?;
    let mut model = train(&window, config)?;
    let mut out = Vec::with_capacity(q);
    for step in 0..q {
        let t_next = window.times[window.len() - 1] + series.sampling_interval;
        let value = predict_one(&model, t_next)?;
        out.push(Sample::new(t_next, value));
        if step + 1 == q {
            break;
        }
        if config.window_policy == WindowPolicy::Sliding {
            window.times.remove(0);
            window.values.remove(0);
            window.weights.remove(0);
        }
        window.times.push(t_next);
        window.values.push(value);
        window.weights.push(1.0);
        if config.refit_each_step {
            model = train(&window, config)?;
        }
    }
    Ok(out)
}
