//! Frequency grid and precision-weighted fitting of the `t`-modulated
//! sinusoid model
//!
//! ```text
//! y(t) = Σ_k c_k t cos(2π f_k t) + s_k t sin(2π f_k t)
//! ```
//!
//! with `f_1 = f0` and `f_k = f0 - (k-1) df`, `df = f0 / (p + 2)`, where `p`
//! is the least power of two strictly greater than the window length.

mod lsq;

pub use lsq::{Matrix, WeightedLeastSquares, RCOND};

use std::f64::consts::TAU;

use crate::error::{Error, Result};

/// Least power of two strictly greater than `n`.
pub fn grid_power(n: usize) -> usize {
    (n + 1).next_power_of_two()
}

#[derive(Debug, Clone, PartialEq)]
pub struct FrequencyGrid {
    pub f0: f64,
    pub p: usize,
    pub df: f64,
    pub freqs: Vec<f64>,
}

impl FrequencyGrid {
    pub fn m(&self) -> usize {
        self.freqs.len()
    }

    /// `df = f0 / df_denominator()`, kept as an integer for exact checks.
    pub fn df_denominator(&self) -> usize {
        self.p + 2
    }
}

/// Builds the `m`-frequency grid for a window of `n` samples.
pub fn frequency_grid(f0: f64, n: usize, m: usize) -> Result<FrequencyGrid> {
    if !(f0.is_finite() && f0 > 0.0) {
        return Err(Error::NonPositiveF0(f0));
    }
    let p = grid_power(n);
    if m == 0 || m > p + 1 {
        return Err(Error::TooManyFrequencies { m, max: p + 1 });
    }
    let den = (p + 2) as f64;
    let df = f0 / den;
    // f0 (p + 2 - k) / (p + 2): one rounding per frequency when f0 = 1.
    let freqs = (0..m).map(|k| f0 * (p + 2 - k) as f64 / den).collect();
    Ok(FrequencyGrid { f0, p, df, freqs })
}

/// `[t cos(2π f_1 t), t sin(2π f_1 t), ..., t cos(2π f_m t), t sin(2π f_m t)]`.
pub fn design_row(t: f64, grid: &FrequencyGrid) -> Vec<f64> {
    let mut row = Vec::with_capacity(2 * grid.m());
    for &f in &grid.freqs {
        let (s, c) = (TAU * f * t).sin_cos();
        row.push(t * c);
        row.push(t * s);
    }
    row
}

/// Design matrix with one [`design_row`] per epoch.
pub fn design_matrix(times: &[f64], grid: &FrequencyGrid) -> Matrix {
    let mut a = Matrix::zeros(times.len(), 2 * grid.m());
    for (r, &t) in times.iter().enumerate() {
        for (k, &f) in grid.freqs.iter().enumerate() {
            let (s, c) = (TAU * f * t).sin_cos();
            a.set(r, 2 * k, t * c);
            a.set(r, 2 * k + 1, t * s);
        }
    }
    a
}

/// Fitted coefficients of one band (m/s).
#[derive(Debug, Clone, PartialEq)]
pub struct BandCoefficients {
    pub cos_coeffs: Vec<f64>,
    pub sin_coeffs: Vec<f64>,
}

impl BandCoefficients {
    pub fn zeros(m: usize) -> Self {
        Self { cos_coeffs: vec![0.0; m], sin_coeffs: vec![0.0; m] }
    }

    /// From the interleaved solution vector `[c_1, s_1, c_2, s_2, ...]`.
    pub fn from_interleaved(x: &[f64]) -> Self {
        Self {
            cos_coeffs: x.iter().step_by(2).copied().collect(),
            sin_coeffs: x.iter().skip(1).step_by(2).copied().collect(),
        }
    }

    pub fn interleaved(&self) -> Vec<f64> {
        self.cos_coeffs
            .iter()
            .zip(&self.sin_coeffs)
            .flat_map(|(&c, &s)| [c, s])
            .collect()
    }

    /// Coefficient-wise sum, e.g. of the low and high bands.
    pub fn sum(&self, other: &Self) -> Self {
        Self {
            cos_coeffs: self.cos_coeffs.iter().zip(&other.cos_coeffs).map(|(a, b)| a + b).collect(),
            sin_coeffs: self.sin_coeffs.iter().zip(&other.sin_coeffs).map(|(a, b)| a + b).collect(),
        }
    }
}

/// Band coefficients plus the numerical rank seen by the solver.
#[derive(Debug, Clone, PartialEq)]
pub struct BandFit {
    pub coeffs: BandCoefficients,
    pub rank: usize,
    pub unknowns: usize,
}

impl BandFit {
    pub fn rank_deficient(&self) -> bool {
        self.rank < self.unknowns
    }
}

/// Weighted least-squares fit of one band. Rank-deficient designs are not an
/// error: the minimum-norm solution is returned and flagged through
/// [`BandFit::rank_deficient`].
pub fn weighted_fit(
    times: &[f64],
    band_values: &[f64],
    weights: &[f64],
    grid: &FrequencyGrid,
) -> Result<BandFit> {
    let mut fits = fit_bands(times, &[band_values], weights, grid)?;
    Ok(fits.remove(0))
}

/// Fits several bands that share epochs and weights with one factorisation.
pub fn fit_bands(
    times: &[f64],
    bands: &[&[f64]],
    weights: &[f64],
    grid: &FrequencyGrid,
) -> Result<Vec<BandFit>> {
    let n = times.len();
    let unknowns = 2 * grid.m();
    if n <= unknowns {
        return Err(Error::UnderdeterminedSystem { rows: n, unknowns });
    }
    if weights.len() != n {
        return Err(Error::LengthMismatch(n, weights.len()));
    }
    if let Some(&w) = weights.iter().find(|w| !(**w > 0.0 && w.is_finite())) {
        return Err(Error::InvalidConfig(format!("weights must be positive, got {w}")));
    }
    let ls = WeightedLeastSquares::new(&design_matrix(times, grid), weights);
    bands
        .iter()
        .map(|values| {
            if values.len() != n {
                return Err(Error::LengthMismatch(n, values.len()));
            }
            Ok(BandFit {
                coeffs: BandCoefficients::from_interleaved(&ls.solve(values)),
                rank: ls.rank(),
                unknowns,
            })
        })
        .collect()
}

/// Evaluates the band model at `t`.
pub fn evaluate_band(coeffs: &BandCoefficients, grid: &FrequencyGrid, t: f64) -> f64 {
    grid.freqs
        .iter()
        .zip(coeffs.cos_coeffs.iter().zip(&coeffs.sin_coeffs))
        .map(|(&f, (&c, &s))| {
            let (sn, cs) = (TAU * f * t).sin_cos();
            c * t * cs + s * t * sn
        })
        .sum()
}

/// `Aᵀ W r` for the fitted coefficients; zero at the least-squares optimum.
pub fn weighted_normal_residual(
    times: &[f64],
    values: &[f64],
    weights: &[f64],
    grid: &FrequencyGrid,
    coeffs: &BandCoefficients,
) -> Vec<f64> {
    let a = design_matrix(times, grid);
    let fitted = a.mul_vec(&coeffs.interleaved());
    let wr: Vec<f64> = values
        .iter()
        .zip(&fitted)
        .zip(weights)
        .map(|((y, f), w)| w * (y - f))
        .collect();
    a.tr_mul_vec(&wr)
}
