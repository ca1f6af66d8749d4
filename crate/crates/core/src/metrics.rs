//! Forecast error criteria: sMAPE, MASE, standard deviation and MAE of the
//! prediction errors.

use crate::error::{Error, Result};

/// The four error criteria over one prediction horizon.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvaluationReport {
    /// Percent, in `[0, 200]`.
    pub smape: f64,
    pub mase: f64,
    /// Metres.
    pub std: f64,
    /// Metres.
    pub mae: f64,
    /// Number of predictions.
    pub q: usize,
    /// Number of training samples.
    pub n: usize,
}

/// Which first differences scale the MASE numerator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum MaseScale {
    /// All `Q = n + q` samples: training followed by the actual values.
    #[default]
    FullSeries,
    /// Training samples only (the textbook definition).
    TrainingOnly,
}

fn check_pair(actual: &[f64], predicted: &[f64]) -> Result<()> {
    if actual.len() != predicted.len() {
        return Err(Error::LengthMismatch(actual.len(), predicted.len()));
    }
    if actual.is_empty() {
        return Err(Error::EmptyInput);
    }
    Ok(())
}

/// `200/q Σ |y - ŷ| / (|y| + |ŷ|)`; a term with `|y| + |ŷ| = 0` counts as 0.
pub fn smape(actual: &[f64], predicted: &[f64]) -> Result<f64> {
    check_pair(actual, predicted)?;
    let sum: f64 = actual
        .iter()
        .zip(predicted)
        .map(|(y, p)| {
            let den = y.abs() + p.abs();
            if den == 0.0 {
                0.0
            } else {
                (y - p).abs() / den
            }
        })
        .sum();
    Ok(200.0 * sum / actual.len() as f64)
}

/// `(n-1)/q · Σ|y - ŷ| / Σ_{j=2..Q} |y_j - y_{j-1}|` where `full_series` holds
/// the `n` training values followed by the `q` actual values.
pub fn mase(actual: &[f64], predicted: &[f64], full_series: &[f64], n: usize) -> Result<f64> {
    mase_with(actual, predicted, full_series, n, MaseScale::FullSeries)
}

pub fn mase_with(
    actual: &[f64],
    predicted: &[f64],
    full_series: &[f64],
    n: usize,
    scale: MaseScale,
) -> Result<f64> {
    check_pair(actual, predicted)?;
    let q = actual.len();
    if full_series.len() != n + q {
        return Err(Error::LengthMismatch(full_series.len(), n + q));
    }
    if n < 2 {
        return Err(Error::InsufficientData { needed: 2, got: n });
    }
    let scaled = match scale {
        MaseScale::FullSeries => full_series,
        MaseScale::TrainingOnly => &full_series[..n],
    };
    let den: f64 = scaled.windows(2).map(|w| (w[1] - w[0]).abs()).sum();
    if den == 0.0 {
        return Err(Error::ZeroDenominator);
    }
    let num: f64 = actual.iter().zip(predicted).map(|(y, p)| (y - p).abs()).sum();
    Ok((n - 1) as f64 / q as f64 * num / den)
}

/// Sample standard deviation of the errors `y - ŷ`.
pub fn std_err(actual: &[f64], predicted: &[f64]) -> Result<f64> {
    if actual.len() != predicted.len() {
        return Err(Error::LengthMismatch(actual.len(), predicted.len()));
    }
    let q = actual.len();
    if q < 2 {
        return Err(Error::InsufficientData { needed: 2, got: q });
    }
    let errors: Vec<f64> = actual.iter().zip(predicted).map(|(y, p)| y - p).collect();
    let mean = errors.iter().sum::<f64>() / q as f64;
    let ss: f64 = errors.iter().map(|e| (e - mean) * (e - mean)).sum();
    Ok((ss / (q - 1) as f64).sqrt())
}

pub fn mae(actual: &[f64], predicted: &[f64]) -> Result<f64> {
    check_pair(actual, predicted)?;
    let sum: f64 = actual.iter().zip(predicted).map(|(y, p)| (y - p).abs()).sum();
    Ok(sum / actual.len() as f64)
}

/// All four criteria for predictions that follow `training`.
pub fn evaluate(training: &[f64], actual: &[f64], predicted: &[f64]) -> Result<EvaluationReport> {
    evaluate_with(training, actual, predicted, MaseScale::FullSeries)
}

pub fn evaluate_with(
    training: &[f64],
    actual: &[f64],
    predicted: &[f64],
    scale: MaseScale,
) -> Result<EvaluationReport> {
    let full: Vec<f64> = training.iter().chain(actual).copied().collect();
    Ok(EvaluationReport {
        smape: smape(actual, predicted)?,
        mase: mase_with(actual, predicted, &full, training.len(), scale)?,
        std: std_err(actual, predicted)?,
        mae: mae(actual, predicted)?,
        q: actual.len(),
        n: training.len(),
    })
}
