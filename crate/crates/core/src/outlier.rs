//! Outlier detection by forward and backward prediction, outlier injection
//! and detection scoring.

use std::collections::BTreeSet;

use rand::seq::index::sample as sample_indices;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::model::{observation_weight, PipelineConfig, TimeSeries, Window};
use crate::predictor::{predict_one, train};

#[derive(Debug, Clone, PartialEq)]
pub struct OutlierFlag {
    pub index: usize,
    pub epoch: f64,
    pub observed: f64,
    /// `None` near the start of the series where no full preceding window exists.
    pub forward_pred: Option<f64>,
    /// `None` near the end of the series.
    pub backward_pred: Option<f64>,
    /// Distance from the observation to the closer prediction.
    pub magnitude_estimate: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Detection {
    pub flags: Vec<OutlierFlag>,
    pub cleaned: TimeSeries,
    pub iterations: usize,
}

fn window_weights(series: &TimeSeries, range: std::ops::Range<usize>) -> Result<Vec<f64>> {
    series.samples[range]
        .iter()
        .map(|s| s.sigma.map_or(Ok(1.0), observation_weight))
        .collect()
}

/// Prediction at `i` from the `n` samples ending `gap` samples before it.
fn forward_prediction(
    series: &TimeSeries,
    i: usize,
    gap: usize,
    config: &PipelineConfig,
) -> Result<Option<f64>> {
    let n = config.n;
    if i < n + gap {
        return Ok(None);
    }
    let range = i - gap - n..i - gap;
    let s = &series.samples[range.clone()];
    let w = Window::new(
        s.iter().map(|x| x.t).collect(),
        s.iter().map(|x| x.value).collect(),
        window_weights(series, range)?,
    )?;
    let model = train(&w, config)?;
    predict_one(&model, series.samples[i].t).map(Some)
}

/// Prediction at `i` from the `n` samples starting `gap` samples after it,
/// run on the time-reversed series.
fn backward_prediction(
    series: &TimeSeries,
    i: usize,
    gap: usize,
    config: &PipelineConfig,
) -> Result<Option<f64>> {
    let n = config.n;
    if i + gap + n >= series.len() {
        return Ok(None);
    }
    let range = i + gap + 1..i + gap + n + 1;
    let s = &series.samples[range.clone()];
    let mut weights = window_weights(series, range)?;
    weights.reverse();
    let w = Window::new(
        s.iter().rev().map(|x| -x.t).collect(),
        s.iter().rev().map(|x| x.value).collect(),
        weights,
    )?;
    let model = train(&w, config)?;
    predict_one(&model, -series.samples[i].t).map(Some)
}

/// Predictions for one epoch. Near the ends of the series only one
/// direction has a full window; there the second opinion comes from the
/// same direction with the window moved one sample further away.
#[derive(Debug, Clone, Copy, Default)]
struct Opinions {
    forward: Option<f64>,
    backward: Option<f64>,
    shifted: Option<f64>,
}

impl Opinions {
    fn all(&self) -> impl Iterator<Item = f64> {
        [self.forward, self.backward, self.shifted].into_iter().flatten()
    }

    fn count(&self) -> usize {
        self.all().count()
    }

    /// Distance to the closest prediction; `None` when fewer than two exist.
    fn deviation(&self, observed: f64) -> Option<f64> {
        (self.count() >= 2).then(|| self.all().map(|p| (observed - p).abs()).fold(f64::INFINITY, f64::min))
    }

    fn mean(&self) -> f64 {
        self.all().sum::<f64>() / self.count() as f64
    }
}

fn opinions(series: &TimeSeries, i: usize, config: &PipelineConfig) -> Result<Opinions> {
    let forward = forward_prediction(series, i, 0, config)?;
    let backward = backward_prediction(series, i, 0, config)?;
    let shifted = match (forward, backward) {
        (None, Some(_)) => backward_prediction(series, i, 1, config)?,
        (Some(_), None) => forward_prediction(series, i, 1, config)?,
        _ => None,
    };
    Ok(Opinions { forward, backward, shifted })
}

fn all_opinions(series: &TimeSeries, config: &PipelineConfig) -> Result<Vec<Opinions>> {
    let one = |i: usize| opinions(series, i, config);
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        (0..series.len()).into_par_iter().map(one).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        (0..series.len()).map(one).collect()
    }
}

/// Keeps a new candidate only if no other new candidate within `radius`
/// samples has a larger deviation (ties go to the earlier index).
/// Candidates already replaced in the previous pass are always kept. A large
/// outlier contaminates the windows of its neighbours, so they are re-tested
/// after it has been replaced.
fn suppress_neighbours(
    candidates: &[(usize, f64)],
    replaced: &BTreeSet<usize>,
    radius: usize,
) -> Vec<usize> {
    let fresh: Vec<(usize, f64)> =
        candidates.iter().copied().filter(|(i, _)| !replaced.contains(i)).collect();
    candidates
        .iter()
        .filter(|&&(i, d)| {
            replaced.contains(&i)
                || !fresh.iter().any(|&(j, e)| {
                    j != i && i.abs_diff(j) <= radius && (e > d || (e == d && j < i))
                })
        })
        .map(|&(i, _)| i)
        .collect()
}

/// Flags epochs whose observation is further than `threshold` from every
/// available prediction: the forward and backward ones in the interior,
/// two same-direction ones near the ends. Within any `n`-sample stretch only
/// the largest new exceedance is taken per pass. Flagged values are replaced by
/// the mean of their predictions and every original observation is tested
/// again against the cleaned series, until the flag set stops changing or
/// `max_iterations` passes have run.
pub fn detect_outliers(
    series: &TimeSeries,
    config: &PipelineConfig,
    threshold: f64,
    max_iterations: usize,
) -> Result<Detection> {
    let needed = config.n + 1;
    if series.len() < needed {
        return Err(Error::SeriesTooShort { len: series.len(), needed });
    }
    config.validate_for_len(config.n)?;
    if threshold.is_nan() || threshold < 0.0 {
        return Err(Error::InvalidConfig(format!("threshold {threshold}")));
    }

    let observed = series.values();
    let mut cleaned = series.clone();
    let mut previous: BTreeSet<usize> = BTreeSet::new();
    let mut last: Vec<(usize, Opinions)> = Vec::new();
    let mut iterations = 0;

    while iterations < max_iterations {
        iterations += 1;
        let ops = all_opinions(&cleaned, config)?;
        let candidates: Vec<(usize, f64)> = ops
            .iter()
            .enumerate()
            .filter_map(|(i, o)| o.deviation(observed[i]).filter(|&d| d > threshold).map(|d| (i, d)))
            .collect();
        let current: Vec<(usize, Opinions)> = suppress_neighbours(&candidates, &previous, config.n)
            .into_iter()
            .map(|i| (i, ops[i]))
            .collect();

        let mut next = series.clone();
        for &(i, o) in &current {
            next.samples[i].value = o.mean();
        }
        cleaned = next;
        let set: BTreeSet<usize> = current.iter().map(|&(i, _)| i).collect();
        last = current;
        if set == previous {
            break;
        }
        previous = set;
    }

    let flags = last
        .into_iter()
        .map(|(i, o)| OutlierFlag {
            index: i,
            epoch: series.samples[i].t,
            observed: observed[i],
            forward_pred: o.forward,
            backward_pred: o.backward,
            magnitude_estimate: o.deviation(observed[i]).unwrap_or(f64::NAN),
        })
        .collect();
    Ok(Detection { flags, cleaned, iterations })
}

#[derive(Debug, Clone, PartialEq)]
pub struct InjectionRecord {
    pub series_id: String,
    /// Ascending.
    pub indices: Vec<usize>,
    pub magnitudes: Vec<f64>,
}

/// Adds `count` signed offsets with `|offset|` uniform in `[min_mag, max_mag]`
/// at distinct random indices.
pub fn inject_outliers(
    series: &TimeSeries,
    count: usize,
    min_mag: f64,
    max_mag: f64,
    seed: u64,
) -> Result<(TimeSeries, InjectionRecord)> {
    if count < 2 {
        return Err(Error::InvalidConfig(format!("injection count {count} < 2")));
    }
    if !(min_mag > 0.0 && min_mag < max_mag && max_mag.is_finite()) {
        return Err(Error::InvalidConfig(format!("magnitude range [{min_mag}, {max_mag}]")));
    }
    if count > series.len() {
        return Err(Error::TooManyInjections { count, len: series.len() });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut indices = sample_indices(&mut rng, series.len(), count).into_vec();
    indices.sort_unstable();
    let magnitudes: Vec<f64> = indices
        .iter()
        .map(|_| {
            let m = rng.random_range(min_mag..=max_mag);
            if rng.random_bool(0.5) { m } else { -m }
        })
        .collect();
    let mut corrupted = series.clone();
    for (&i, &m) in indices.iter().zip(&magnitudes) {
        corrupted.samples[i].value += m;
    }
    let record = InjectionRecord { series_id: series.station_id.clone(), indices, magnitudes };
    Ok((corrupted, record))
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct DetectionScore {
    pub injected_count: usize,
    pub detected_count: usize,
    pub false_positive_count: usize,
}

impl DetectionScore {
    /// Percent of injections flagged; 0 when nothing was injected.
    pub fn success_rate(&self) -> f64 {
        if self.injected_count == 0 {
            0.0
        } else {
            100.0 * self.detected_count as f64 / self.injected_count as f64
        }
    }

    pub fn merge(self, other: Self) -> Self {
        Self {
            injected_count: self.injected_count + other.injected_count,
            detected_count: self.detected_count + other.detected_count,
            false_positive_count: self.false_positive_count + other.false_positive_count,
        }
    }
}

/// Exact index matching.
pub fn score_detection(truth: &InjectionRecord, flags: &[OutlierFlag]) -> DetectionScore {
    let injected: BTreeSet<usize> = truth.indices.iter().copied().collect();
    let flagged: BTreeSet<usize> = flags.iter().map(|f| f.index).collect();
    let detected = injected.intersection(&flagged).count();
    DetectionScore {
        injected_count: injected.len(),
        detected_count: detected,
        false_positive_count: flagged.len() - detected,
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CampaignConfig {
    pub pipeline: PipelineConfig,
    pub injections_per_series: usize,
    pub min_magnitude: f64,
    pub max_magnitude: f64,
    pub threshold: f64,
    pub max_iterations: usize,
    pub seed: u64,
}

impl Default for CampaignConfig {
    fn default() -> Self {
        Self {
            pipeline: PipelineConfig { n: 30, m_min: 1, m_max: 2, ..Default::default() },
            injections_per_series: 5,
            min_magnitude: 0.02,
            max_magnitude: 5.0,
            threshold: 0.03,
            max_iterations: 10,
            seed: 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SeriesOutcome {
    pub truth: InjectionRecord,
    pub flags: Vec<OutlierFlag>,
    pub score: DetectionScore,
    pub epochs: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CampaignResult {
    pub series: Vec<SeriesOutcome>,
    pub total: DetectionScore,
    pub epochs: usize,
}

impl CampaignResult {
    /// False positives as a percentage of all tested epochs.
    pub fn false_positive_rate(&self) -> f64 {
        if self.epochs == 0 {
            0.0
        } else {
            100.0 * self.total.false_positive_count as f64 / self.epochs as f64
        }
    }
}

/// Inject, detect and score every series of `corpus`. Injection seeds are
/// derived from `config.seed` in corpus order.
pub fn run_campaign(corpus: &[TimeSeries], config: &CampaignConfig) -> Result<CampaignResult> {
    if corpus.is_empty() {
        return Err(Error::EmptyInput);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let seeds: Vec<u64> = corpus.iter().map(|_| rng.random()).collect();
    let run = |(series, &seed): (&TimeSeries, &u64)| -> Result<SeriesOutcome> {
        let (corrupted, truth) = inject_outliers(
            series,
            config.injections_per_series,
            config.min_magnitude,
            config.max_magnitude,
            seed,
        )?;
        let detection =
            detect_outliers(&corrupted, &config.pipeline, config.threshold, config.max_iterations)?;
        let score = score_detection(&truth, &detection.flags);
        Ok(SeriesOutcome { truth, flags: detection.flags, score, epochs: series.len() })
    };
    #[cfg(feature = "parallel")]
    let series: Vec<SeriesOutcome> = {
        use rayon::prelude::*;
        corpus.par_iter().zip(seeds.par_iter()).map(run).collect::<Result<_>>()?
    };
    #[cfg(not(feature = "parallel"))]
    let series: Vec<SeriesOutcome> = corpus.iter().zip(seeds.iter()).map(run).collect::<Result<_>>()?;
    let total = series.iter().fold(DetectionScore::default(), |acc, s| acc.merge(s.score));
    let epochs = series.iter().map(|s| s.epochs).sum();
    Ok(CampaignResult { series, total, epochs })
}
