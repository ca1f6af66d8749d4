//! Single-level discrete wavelet split into low- and high-frequency bands.
//!
//! Both bands are synthesised back to the input length, so `low + high`
//! reproduces the input. The transform is the periodic (circular) orthogonal
//! DWT applied to a symmetrically extended copy of the signal:
//!
//! ```text
//! approx[k] = Σ_j h[j] x[(2k + j) mod N]
//! detail[k] = Σ_j g[j] x[(2k + j) mod N],   g[j] = (-1)^j h[L-1-j]
//! ```
//!
//! Extension is half-point symmetric (`x[-1] = x[0]`), `L - 2` samples on each
//! side, plus one extra sample on the right for odd lengths. Haar therefore
//! needs no extension on even lengths and its bands are then exactly
//! orthogonal.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

const SQRT_HALF: f64 = std::f64::consts::FRAC_1_SQRT_2;

const HAAR: [f64; 2] = [SQRT_HALF, SQRT_HALF];

// (1 ± √3)/(4√2), (3 ± √3)/(4√2)
const DB2: [f64; 4] = [
    0.482_962_913_144_534_14,
    0.836_516_303_737_807_9,
    0.224_143_868_042_013_4,
    -0.129_409_522_551_260_37,
];

const DB3: [f64; 6] = [
    0.332_670_552_950_082_6,
    0.806_891_509_311_092_5,
    0.459_877_502_118_491_5,
    -0.135_011_020_010_254_6,
    -0.085_441_273_882_026_7,
    0.035_226_291_885_709_5,
];

const DB4: [f64; 8] = [
    0.230_377_813_308_896_4,
    0.714_846_570_552_915_4,
    0.630_880_767_929_858_7,
    -0.027_983_769_416_859_9,
    -0.187_034_811_719_093_1,
    0.030_841_381_835_560_7,
    0.032_883_011_666_885_2,
    -0.010_597_401_785_069_0,
];

/// Orthogonal wavelet filters available for the band split.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Wavelet {
    #[default]
    Haar,
    /// Daubechies, 2 vanishing moments (4 taps).
    Db2,
    Db3,
    /// Daubechies, 4 vanishing moments (8 taps).
    Db4,
}

impl Wavelet {
    pub fn lowpass(self) -> &'static [f64] {
        match self {
            Wavelet::Haar => &HAAR,
            Wavelet::Db2 => &DB2,
            Wavelet::Db3 => &DB3,
            Wavelet::Db4 => &DB4,
        }
    }

    pub fn highpass(self) -> Vec<f64> {
        let h = self.lowpass();
        let len = h.len();
        (0..len)
            .map(|j| if j % 2 == 0 { h[len - 1 - j] } else { -h[len - 1 - j] })
            .collect()
    }

    pub fn name(self) -> &'static str {
        match self {
            Wavelet::Haar => "haar",
            Wavelet::Db2 => "db2",
            Wavelet::Db3 => "db3",
            Wavelet::Db4 => "db4",
        }
    }
}

impl FromStr for Wavelet {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "haar" | "db1" => Ok(Wavelet::Haar),
            "db2" | "d4" => Ok(Wavelet::Db2),
            "db3" | "d6" => Ok(Wavelet::Db3),
            "db4" | "d8" => Ok(Wavelet::Db4),
            _ => Err(Error::UnknownWavelet(s.to_string())),
        }
    }
}

impl fmt::Display for Wavelet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Boundary treatment before the circular transform.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Boundary {
    /// Half-point symmetric extension, trimmed after synthesis.
    #[default]
    Symmetric,
    /// Plain periodisation (odd lengths still get one mirrored sample).
    /// Bands of even-length inputs are orthogonal for every filter.
    Periodic,
}

/// Low- and high-frequency parts of a signal.
#[derive(Debug, Clone, PartialEq)]
pub struct BandPair {
    pub low: Vec<f64>,
    pub high: Vec<f64>,
}

/// Splits `residuals` with the default symmetric boundary.
pub fn decompose(residuals: &[f64], wavelet: Wavelet) -> Result<BandPair> {
    decompose_with(residuals, wavelet, Boundary::Symmetric)
}

/// Like [`decompose`] but the wavelet is named by identifier (`haar`, `db2`, ...).
pub fn decompose_named(residuals: &[f64], wavelet: &str) -> Result<BandPair> {
    decompose(residuals, wavelet.parse()?)
}

pub fn decompose_with(residuals: &[f64], wavelet: Wavelet, boundary: Boundary) -> Result<BandPair> {
    let n = residuals.len();
    if n < 2 {
        return Err(Error::InsufficientData { needed: 2, got: n });
    }
    let h = wavelet.lowpass();
    let g = wavelet.highpass();
    let pad = match boundary {
        Boundary::Symmetric => h.len() - 2,
        Boundary::Periodic => 0,
    };
    let total = n + 2 * pad + n % 2;
    let extended: Vec<f64> = (0..total)
        .map(|i| residuals[reflect(i as isize - pad as isize, n)])
        .collect();

    let half = total / 2;
    let mut approx = vec![0.0; half];
    let mut detail = vec![0.0; half];
    for k in 0..half {
        let (mut a, mut d) = (0.0, 0.0);
        for j in 0..h.len() {
            let x = extended[(2 * k + j) % total];
            a += h[j] * x;
            d += g[j] * x;
        }
        approx[k] = a;
        detail[k] = d;
    }

    let mut low = vec![0.0; total];
    let mut high = vec![0.0; total];
    for k in 0..half {
        for j in 0..h.len() {
            let i = (2 * k + j) % total;
            low[i] += h[j] * approx[k];
            high[i] += g[j] * detail[k];
        }
    }
    Ok(BandPair {
        low: low[pad..pad + n].to_vec(),
        high: high[pad..pad + n].to_vec(),
    })
}

/// Half-point symmetric index into `0..n` for any integer position.
fn reflect(i: isize, n: usize) -> usize {
    let period = 2 * n as isize;
    let r = i.rem_euclid(period);
    if r < n as isize {
        r as usize
    } else {
        (period - 1 - r) as usize
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn all_wavelets() -> [Wavelet; 4] {
        [Wavelet::Haar, Wavelet::Db2, Wavelet::Db3, Wavelet::Db4]
    }

    #[test]
    fn filters_are_orthonormal() {
        for w in all_wavelets() {
            let h = w.lowpass();
            let g = w.highpass();
            let sum: f64 = h.iter().sum();
            assert!((sum - 2f64.sqrt()).abs() < 1e-12, "{w}");
            assert!(g.iter().sum::<f64>().abs() < 1e-12, "{w}");
            for shift in (0..h.len()).step_by(2) {
                let hh: f64 = (0..h.len() - shift).map(|j| h[j] * h[j + shift]).sum();
                let gg: f64 = (0..h.len() - shift).map(|j| g[j] * g[j + shift]).sum();
                let expect = if shift == 0 { 1.0 } else { 0.0 };
                assert!((hh - expect).abs() < 1e-12, "{w} shift {shift}");
                assert!((gg - expect).abs() < 1e-12, "{w} shift {shift}");
            }
        }
    }

    #[test]
    fn constant_is_pure_approximation() {
        for w in all_wavelets() {
            for n in [2, 5, 8, 13] {
                let x = vec![0.7; n];
                let b = decompose(&x, w).unwrap();
                for i in 0..n {
                    assert!((b.low[i] - 0.7).abs() < 1e-12, "{w} n={n}");
                    assert!(b.high[i].abs() < 1e-12, "{w} n={n}");
                }
            }
        }
    }

    #[test]
    fn alternating_is_pure_detail_for_haar() {
        let x = [1.0, -1.0, 1.0, -1.0];
        let b = decompose(&x, Wavelet::Haar).unwrap();
        for i in 0..4 {
            assert!(b.low[i].abs() < 1e-15);
            assert!((b.high[i] - x[i]).abs() < 1e-15);
        }
    }

    #[test]
    fn reflect_indices() {
        let idx: Vec<usize> = (-3..8).map(|i| reflect(i, 3)).collect();
        assert_eq!(idx, vec![2, 1, 0, 0, 1, 2, 2, 1, 0, 0, 1]);
    }

    #[test]
    fn names() {
        assert_eq!("Haar".parse::<Wavelet>().unwrap(), Wavelet::Haar);
        assert_eq!("db4".parse::<Wavelet>().unwrap(), Wavelet::Db4);
        assert!(matches!("morlet".parse::<Wavelet>(), Err(Error::UnknownWavelet(_))));
        assert!(decompose_named(&[1.0, 2.0], "sym5").is_err());
        assert!(decompose(&[1.0], Wavelet::Haar).is_err());
    }
}
