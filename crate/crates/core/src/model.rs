//! Series, window and configuration types shared by the pipeline stages.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::harmonic::grid_power;
use crate::wavelet::Wavelet;

/// One observation. `t` is in seconds relative to the owning series' origin.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sample {
    pub t: f64,
    pub value: f64,
    pub sigma: Option<f64>,
}

impl Sample {
    pub fn new(t: f64, value: f64) -> Self {
        Self { t, value, sigma: None }
    }

    pub fn with_sigma(t: f64, value: f64, sigma: f64) -> Self {
        Self { t, value, sigma: Some(sigma) }
    }
}

/// Coordinate component label. Geocentric (X, Y, Z) or local (E, N, U).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Component {
    X,
    Y,
    Z,
    E,
    N,
    U,
}

impl Component {
    pub fn as_str(self) -> &'static str {
        match self {
            Component::X => "X",
            Component::Y => "Y",
            Component::Z => "Z",
            Component::E => "E",
            Component::N => "N",
            Component::U => "U",
        }
    }
}

impl fmt::Display for Component {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Component {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_uppercase().as_str() {
            "X" => Ok(Component::X),
            "Y" => Ok(Component::Y),
            "Z" => Ok(Component::Z),
            "E" | "EAST" => Ok(Component::E),
            "N" | "NORTH" => Ok(Component::N),
            "U" | "UP" => Ok(Component::U),
            other => Err(Error::InvalidConfig(format!("unknown component `{other}`"))),
        }
    }
}

/// Ordered samples of one coordinate component of one station.
///
/// `origin` is the absolute epoch (seconds in the source time scale) that
/// sample times are measured from. Keeping times small preserves the
/// conditioning of the `t`-modulated basis.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeSeries {
    pub station_id: String,
    pub component: Component,
    pub samples: Vec<Sample>,
    pub sampling_interval: f64,
    pub origin: f64,
}

impl TimeSeries {
    pub fn new(
        station_id: impl Into<String>,
        component: Component,
        samples: Vec<Sample>,
        sampling_interval: f64,
    ) -> Self {
        Self {
            station_id: station_id.into(),
            component,
            samples,
            sampling_interval,
            origin: 0.0,
        }
    }

    /// Builds an unweighted series with times `0, dt, 2dt, ...`.
    pub fn regular(
        station_id: impl Into<String>,
        component: Component,
        values: &[f64],
        dt: f64,
    ) -> Self {
        let samples = values
            .iter()
            .enumerate()
            .map(|(i, &v)| Sample::new(i as f64 * dt, v))
            .collect();
        Self::new(station_id, component, samples, dt)
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn times(&self) -> Vec<f64> {
        self.samples.iter().map(|s| s.t).collect()
    }

    pub fn values(&self) -> Vec<f64> {
        self.samples.iter().map(|s| s.value).collect()
    }

    /// Copy of this series with `samples` replaced.
    pub fn with_samples(&self, samples: Vec<Sample>) -> Self {
        Self {
            station_id: self.station_id.clone(),
            component: self.component,
            samples,
            sampling_interval: self.sampling_interval,
            origin: self.origin,
        }
    }
}

/// Checks the series invariants: non-empty, finite, strictly increasing
/// epochs, positive sigmas and a positive sampling interval.
///
/// Out-of-order epochs are rejected rather than sorted so that a corrupted
/// input file never passes through unnoticed.
pub fn validate_series(raw: TimeSeries) -> Result<TimeSeries> {
    if raw.samples.is_empty() {
        return Err(Error::EmptySeries);
    }
    if !(raw.sampling_interval.is_finite() && raw.sampling_interval > 0.0) {
        return Err(Error::InvalidConfig(format!(
            "sampling interval must be positive, got {}",
            raw.sampling_interval
        )));
    }
    for (index, s) in raw.samples.iter().enumerate() {
        if !s.t.is_finite() || !s.value.is_finite() {
            return Err(Error::NonFiniteValue { index });
        }
        if let Some(sigma) = s.sigma {
            if !sigma.is_finite() {
                return Err(Error::NonFiniteValue { index });
            }
            if sigma <= 0.0 {
                return Err(Error::NonPositiveSigma(sigma));
            }
        }
        if index > 0 {
            let prev = raw.samples[index - 1].t;
            if s.t == prev {
                return Err(Error::DuplicateEpoch { index, epoch: s.t });
            }
            if s.t < prev {
                return Err(Error::UnsortedEpochs { index });
            }
        }
    }
    Ok(raw)
}

/// Precision weight `1 / sigma²`.
pub fn observation_weight(sigma: f64) -> Result<f64> {
    if sigma > 0.0 && sigma.is_finite() {
        Ok(1.0 / (sigma * sigma))
    } else {
        Err(Error::NonPositiveSigma(sigma))
    }
}

/// Training data for one prediction step.
#[derive(Debug, Clone, PartialEq)]
pub struct Window {
    pub times: Vec<f64>,
    pub values: Vec<f64>,
    pub weights: Vec<f64>,
}

impl Window {
    pub fn new(times: Vec<f64>, values: Vec<f64>, weights: Vec<f64>) -> Result<Self> {
        if times.len() != values.len() {
            return Err(Error::LengthMismatch(times.len(), values.len()));
        }
        if times.len() != weights.len() {
            return Err(Error::LengthMismatch(times.len(), weights.len()));
        }
        if let Some(&w) = weights.iter().find(|w| !(**w > 0.0 && w.is_finite())) {
            return Err(Error::InvalidConfig(format!("weights must be positive, got {w}")));
        }
        Ok(Self { times, values, weights })
    }

    pub fn unweighted(times: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        let weights = vec![1.0; times.len()];
        Self::new(times, values, weights)
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn first_epoch(&self) -> Option<f64> {
        self.times.first().copied()
    }

    pub fn last_epoch(&self) -> Option<f64> {
        self.times.last().copied()
    }
}

/// The `n` samples ending at `end_index` (inclusive). Samples without a sigma
/// get weight 1.
pub fn slice_window(series: &TimeSeries, end_index: usize, n: usize) -> Result<Window> {
    let len = series.len();
    if n == 0 || end_index >= len || end_index + 1 < n {
        return Err(Error::WindowOutOfRange { end_index, n, len });
    }
    let start = end_index + 1 - n;
    let slice = &series.samples[start..=end_index];
    let mut times = Vec::with_capacity(n);
    let mut values = Vec::with_capacity(n);
    let mut weights = Vec::with_capacity(n);
    for s in slice {
        times.push(s.t);
        values.push(s.value);
        weights.push(match s.sigma {
            Some(sigma) => observation_weight(sigma)?,
            None => 1.0,
        });
    }
    Ok(Window { times, values, weights })
}

/// How the training window advances when predictions are fed back.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum WindowPolicy {
    /// Drop the oldest sample for every appended prediction (fixed `n`).
    #[default]
    Sliding,
    /// Keep every sample; the window grows by one per step.
    Growing,
}

impl FromStr for WindowPolicy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "sliding" => Ok(WindowPolicy::Sliding),
            "growing" => Ok(WindowPolicy::Growing),
            other => Err(Error::InvalidConfig(format!("unknown window policy `{other}`"))),
        }
    }
}

impl fmt::Display for WindowPolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            WindowPolicy::Sliding => "sliding",
            WindowPolicy::Growing => "growing",
        })
    }
}

/// Parameters of the training and prediction loop.
#[derive(Debug, Clone, PartialEq)]
pub struct PipelineConfig {
    /// Window length in samples.
    pub n: usize,
    /// Fundamental frequency in Hz, normally the sampling frequency.
    pub f0: f64,
    /// Skip the search and always use this many frequencies.
    pub m_fixed: Option<usize>,
    pub m_min: usize,
    pub m_max: usize,
    /// Training stops increasing `m` once the weighted MSE drops below this (m²).
    pub mse_threshold: f64,
    pub wavelet: Wavelet,
    pub window_policy: WindowPolicy,
    /// Refit the model before every auto-regressive step. When false the
    /// model trained on the initial window is reused for the whole horizon.
    pub refit_each_step: bool,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        Self {
            n: 64,
            f0: 1.0 / 86_400.0,
            m_fixed: None,
            m_min: 1,
            m_max: 4,
            mse_threshold: 1e-6,
            wavelet: Wavelet::Haar,
            window_policy: WindowPolicy::Sliding,
            refit_each_step: true,
        }
    }
}

impl PipelineConfig {
    /// Inclusive range of frequency counts the training loop will probe.
    pub fn m_range(&self) -> (usize, usize) {
        match self.m_fixed {
            Some(m) => (m, m),
            None => (self.m_min, self.m_max),
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.validate_for_len(self.n)
    }

    /// Same checks as [`validate`](Self::validate) but against a window of
    /// `n` samples (growing windows outgrow the configured length).
    pub fn validate_for_len(&self, n: usize) -> Result<()> {
        if n < 4 {
            return Err(Error::InvalidConfig(format!("window length must be >= 4, got {n}")));
        }
        if !(self.f0.is_finite() && self.f0 > 0.0) {
            return Err(Error::NonPositiveF0(self.f0));
        }
        if !(self.mse_threshold > 0.0) {
            return Err(Error::InvalidConfig(format!(
                "mse threshold must be positive, got {}",
                self.mse_threshold
            )));
        }
        let (lo, hi) = self.m_range();
        if lo < 1 || lo > hi {
            return Err(Error::InvalidConfig(format!("invalid frequency count range {lo}..={hi}")));
        }
        let overdetermined = (n - 1) / 2;
        if hi > overdetermined {
            return Err(Error::UnderdeterminedSystem { rows: n, unknowns: 2 * hi });
        }
        let positive = grid_power(n) + 1;
        if hi > positive {
            return Err(Error::TooManyFrequencies { m: hi, max: positive });
        }
        Ok(())
    }
}
