//! Mean removal and endpoint-line detrending of a training window.

use crate::error::{Error, Result};
use crate::model::Window;

/// A window after mean and endpoint-trend removal.
///
/// `times` are window-relative (first epoch at 0). The trend line is
/// expressed in those relative times.
#[derive(Debug, Clone, PartialEq)]
pub struct DetrendedWindow {
    pub times: Vec<f64>,
    pub residuals: Vec<f64>,
    pub weights: Vec<f64>,
    pub mean: f64,
    pub trend_a: f64,
    pub trend_b: f64,
}

/// Subtracts the arithmetic mean of the window values.
pub fn remove_mean(window: &Window) -> Result<(Window, f64)> {
    if window.is_empty() {
        return Err(Error::EmptyWindow);
    }
    let mean = window.values.iter().sum::<f64>() / window.len() as f64;
    let centered = Window {
        times: window.times.clone(),
        values: window.values.iter().map(|v| v - mean).collect(),
        weights: window.weights.clone(),
    };
    Ok((centered, mean))
}

/// Removes the line through the first and last samples.
///
/// Times are first shifted so the window starts at 0. The returned
/// [`DetrendedWindow`] has no mean; pair it with the mean from
/// [`remove_mean`] or use [`detrend`].
pub fn remove_endpoint_trend(centered: &Window) -> Result<DetrendedWindow> {
    let n = centered.len();
    if n < 2 {
        return Err(Error::EmptyWindow);
    }
    let origin = centered.times[0];
    let times: Vec<f64> = centered.times.iter().map(|t| t - origin).collect();
    let (t_first, t_last) = (times[0], times[n - 1]);
    if t_first == t_last {
        return Err(Error::DegenerateWindow);
    }
    let (y_first, y_last) = (centered.values[0], centered.values[n - 1]);
    let b = (y_first - y_last) / (t_first - t_last);
    let a = -b * t_last + y_last;
    let mut residuals: Vec<f64> = times
        .iter()
        .zip(&centered.values)
        .map(|(t, y)| y - a - b * t)
        .collect();
    // Exact by construction; pin against rounding.
    residuals[0] = 0.0;
    residuals[n - 1] = 0.0;
    Ok(DetrendedWindow {
        times,
        residuals,
        weights: centered.weights.clone(),
        mean: 0.0,
        trend_a: a,
        trend_b: b,
    })
}

/// Mean removal followed by endpoint detrending.
pub fn detrend(window: &Window) -> Result<DetrendedWindow> {
    let (centered, mean) = remove_mean(window)?;
    let mut out = remove_endpoint_trend(&centered)?;
    out.mean = mean;
    Ok(out)
}

/// Adds trend and mean back onto a modelled residual at window-relative `t`.
pub fn restore(prediction_core: f64, t: f64, detrended: &DetrendedWindow) -> f64 {
    restore_parts(prediction_core, t, detrended.trend_a, detrended.trend_b, detrended.mean)
}

pub(crate) fn restore_parts(core: f64, t: f64, a: f64, b: f64, mean: f64) -> f64 {
    core + a + b * t + mean
}
