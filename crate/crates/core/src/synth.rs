//! Synthetic series drawn from the prediction model itself plus Gaussian
//! noise. Used by the outlier campaign and by tests.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal, StandardNormal};

use crate::harmonic::{evaluate_band, frequency_grid, BandCoefficients};
use crate::model::{Component, Sample, TimeSeries};

#[derive(Debug, Clone, PartialEq)]
pub struct SyntheticSpec {
    pub length: usize,
    /// Sampling interval in seconds.
    pub interval: f64,
    /// Fundamental frequency of the generating grid (Hz).
    pub f0: f64,
    /// Number of grid frequencies in the semi-periodic part.
    pub m: usize,
    /// Largest absolute value of the semi-periodic part over the series (m).
    pub amplitude: f64,
    /// Linear velocity (m/s).
    pub velocity: f64,
    /// White-noise standard deviation (m); attached to every sample as its
    /// sigma when positive.
    pub noise_sigma: f64,
}

impl Default for SyntheticSpec {
    /// One year-ish of daily positions: 2 cm of semi-periodic motion,
    /// 1 cm/yr velocity and 5 mm white noise.
    fn default() -> Self {
        Self {
            length: 200,
            interval: 86_400.0,
            f0: 1.0 / 86_400.0,
            m: 3,
            amplitude: 0.02,
            velocity: 0.01 / (365.25 * 86_400.0),
            noise_sigma: 0.005,
        }
    }
}

/// Draws one series. Identical `seed` gives an identical series.
pub fn synthetic_series(
    spec: &SyntheticSpec,
    station_id: &str,
    component: Component,
    seed: u64,
) -> TimeSeries {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let times: Vec<f64> = (0..spec.length).map(|i| i as f64 * spec.interval).collect();
    let m = spec.m.max(1);
    let grid = frequency_grid(spec.f0, spec.length.max(1), m).expect("positive f0 and small m");
    let coeffs = BandCoefficients {
        cos_coeffs: (0..m).map(|_| StandardNormal.sample(&mut rng)).collect(),
        sin_coeffs: (0..m).map(|_| StandardNormal.sample(&mut rng)).collect(),
    };
    let raw: Vec<f64> = times.iter().map(|&t| evaluate_band(&coeffs, &grid, t)).collect();
    let peak = raw.iter().fold(0.0f64, |a, v| a.max(v.abs()));
    let scale = if peak > 0.0 { spec.amplitude / peak } else { 0.0 };
    let offset: f64 = rng.random_range(-1.0..1.0);
    let noise = (spec.noise_sigma > 0.0)
        .then(|| Normal::new(0.0, spec.noise_sigma).expect("finite sigma"));
    let samples = times
        .iter()
        .zip(&raw)
        .map(|(&t, &h)| {
            let e = noise.as_ref().map_or(0.0, |d| d.sample(&mut rng));
            let value = offset + spec.velocity * t + scale * h + e;
            match noise {
                Some(_) => Sample::with_sigma(t, value, spec.noise_sigma),
                None => Sample::new(t, value),
            }
        })
        .collect();
    TimeSeries::new(station_id, component, samples, spec.interval)
}

/// `count` series with per-series seeds derived from `seed`.
pub fn synthetic_corpus(spec: &SyntheticSpec, count: usize, seed: u64) -> Vec<TimeSeries> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|i| {
            let s: u64 = rng.random();
            synthetic_series(spec, &format!("SYN{i:04}"), Component::E, s)
        })
        .collect()
}

/// A 1 Hz series that sits near `baseline` and then swings by `amplitude`
/// metres around sample `center`: `baseline + t·g(t)` with
/// `g(t) ∝ ((1 + cos(2π(t - center)/period))/2)^degree`. This is exactly
/// representable by the harmonic model with `m = degree + 1` when the
/// training window starts at the first sample and `period` is `p + 2` for
/// the window length.
#[derive(Debug, Clone, PartialEq)]
pub struct SwingSpec {
    pub length: usize,
    pub period: usize,
    pub degree: i32,
    pub center: f64,
    pub amplitude: f64,
    pub baseline: f64,
}

impl Default for SwingSpec {
    fn default() -> Self {
        Self { length: 256, period: 258, degree: 16, center: 230.0, amplitude: 5.0, baseline: 0.3 }
    }
}

pub fn swing_event(spec: &SwingSpec, station_id: &str, component: Component) -> TimeSeries {
    let shape: Vec<f64> = (0..spec.length)
        .map(|i| {
            let t = i as f64;
            let c = (2.0 * std::f64::consts::PI * (t - spec.center) / spec.period as f64).cos();
            t * (0.5 * (1.0 + c)).powi(spec.degree)
        })
        .collect();
    let peak = shape.iter().fold(0.0f64, |a, v| a.max(v.abs()));
    let scale = if peak > 0.0 { spec.amplitude / peak } else { 0.0 };
    let values: Vec<f64> = shape.iter().map(|d| spec.baseline + scale * d).collect();
    TimeSeries::regular(station_id, component, &values, 1.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic() {
        let spec = SyntheticSpec::default();
        assert_eq!(
            synthetic_series(&spec, "A", Component::E, 7),
            synthetic_series(&spec, "A", Component::E, 7)
        );
        assert_ne!(
            synthetic_series(&spec, "A", Component::E, 7),
            synthetic_series(&spec, "A", Component::E, 8)
        );
    }

    #[test]
    fn noise_free_amplitude() {
        let spec = SyntheticSpec { noise_sigma: 0.0, velocity: 0.0, ..Default::default() };
        let s = synthetic_series(&spec, "A", Component::E, 1);
        let v = s.values();
        let offset = v[0];
        let peak = v.iter().fold(0.0f64, |a, x| a.max((x - offset).abs()));
        assert!((peak - 0.02).abs() < 1e-12);
        assert!(s.samples.iter().all(|x| x.sigma.is_none()));
    }
}
