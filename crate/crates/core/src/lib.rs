//! Prediction of GNSS position time series with a precision-weighted,
//! `t`-modulated harmonic model, plus outlier and seismic-event detection
//! built on top of it.
//!
//! The prediction pipeline for one window of `n` samples:
//!
//! 1. subtract the window mean;
//! 2. remove the straight line through the first and last samples;
//! 3. split the residual into low- and high-frequency bands with a
//!    single-level wavelet transform;
//! 4. fit each band with `Σ c_k t cos(2π f_k t) + s_k t sin(2π f_k t)` by
//!    weighted least squares (weights `1/σ²`) and evaluate the sum of the
//!    bands, trend and mean at the next epoch.
//!
//! Predictions are fed back as observations for multi-step horizons.

pub mod error;
pub mod event;
pub mod harmonic;
pub mod ingest;
pub mod metrics;
pub mod model;
pub mod outlier;
pub mod predictor;
pub mod preprocess;
pub mod synth;
pub mod wavelet;

pub use error::{Error, Result};
pub use model::{
    observation_weight, slice_window, validate_series, Component, PipelineConfig, Sample,
    TimeSeries, Window, WindowPolicy,
};
pub use predictor::{predict_horizon, predict_one, train, training_mse, TrainedModel};
pub use wavelet::Wavelet;
