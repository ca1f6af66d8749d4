//! Browser bindings: forecast a series, split it into wavelet bands, and
//! flag outliers. Build with
//! `wasm-pack build crates/wasm-demo --target web --out-dir www/pkg`
//! and serve `crates/wasm-demo/www/`.

use gnss_predict::outlier::{detect_outliers, inject_outliers};
use gnss_predict::synth::{synthetic_series, SyntheticSpec};
use gnss_predict::wavelet::decompose_named;
use gnss_predict::{predict_horizon, Component, PipelineConfig, Result, TimeSeries};
use wasm_bindgen::prelude::*;

fn series(values: &[f64], interval: f64) -> TimeSeries {
    TimeSeries::regular("WEB", Component::U, values, interval)
}

fn config(n: usize, m_max: usize, interval: f64) -> PipelineConfig {
    PipelineConfig { n, f0: 1.0 / interval, m_min: 1, m_max, ..Default::default() }
}

/// Next `horizon` values after `values`.
pub fn forecast_values(values: &[f64], interval: f64, n: usize, m_max: usize, horizon: usize) -> Result<Vec<f64>> {
    let out = predict_horizon(&series(values, interval), &config(n, m_max, interval), horizon)?;
    Ok(out.into_iter().map(|s| s.value).collect())
}

/// Low band followed by high band, each as long as `values`.
pub fn band_split(values: &[f64], wavelet: &str) -> Result<Vec<f64>> {
    let bands = decompose_named(values, wavelet)?;
    Ok(bands.low.into_iter().chain(bands.high).collect())
}

pub fn outlier_indices(values: &[f64], interval: f64, n: usize, threshold: f64) -> Result<Vec<u32>> {
    let d = detect_outliers(&series(values, interval), &config(n, 2, interval), threshold, 10)?;
    Ok(d.flags.iter().map(|f| f.index as u32).collect())
}

/// A daily series with a few spikes of 5 cm to 50 cm.
pub fn sample_values(seed: u32, length: usize, spikes: usize) -> Vec<f64> {
    let spec = SyntheticSpec { length, ..Default::default() };
    let clean = synthetic_series(&spec, "WEB", Component::U, u64::from(seed));
    match inject_outliers(&clean, spikes, 0.05, 0.5, u64::from(seed) + 1) {
        Ok((corrupted, _)) => corrupted.values(),
        Err(_) => clean.values(),
    }
}

#[wasm_bindgen]
pub fn forecast(values: &[f64], interval: f64, n: usize, m_max: usize, horizon: usize) -> std::result::Result<Vec<f64>, JsError> {
    Ok(forecast_values(values, interval, n, m_max, horizon)?)
}

#[wasm_bindgen]
pub fn split(values: &[f64], wavelet: &str) -> std::result::Result<Vec<f64>, JsError> {
    Ok(band_split(values, wavelet)?)
}

#[wasm_bindgen]
pub fn outliers(values: &[f64], interval: f64, n: usize, threshold: f64) -> std::result::Result<Vec<u32>, JsError> {
    Ok(outlier_indices(values, interval, n, threshold)?)
}

#[wasm_bindgen]
pub fn sample(seed: u32, length: usize, spikes: usize) -> Vec<f64> {
    sample_values(seed, length, spikes)
}
