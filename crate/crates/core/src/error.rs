use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("series is empty")]
    EmptySeries,
    #[error("duplicate epoch {epoch} at sample {index}")]
    DuplicateEpoch { index: usize, epoch: f64 },
    #[error("epochs decrease at sample {index}")]
    UnsortedEpochs { index: usize },
    #[error("non-finite value at sample {index}")]
    NonFiniteValue { index: usize },
    #[error("sigma must be positive, got {0}")]
    NonPositiveSigma(f64),
    #[error("window of {n} samples ending at {end_index} does not fit a series of {len}")]
    WindowOutOfRange { end_index: usize, n: usize, len: usize },
    #[error("line {line}: {reason}")]
    MalformedLine { line: usize, reason: String },
    #[error("unknown input format: {0}")]
    UnknownFormat(String),
    #[error("schema mismatch: {0}")]
    SchemaMismatch(String),
    #[error("window is empty")]
    EmptyWindow,
    #[error("window endpoints share the same epoch")]
    DegenerateWindow,
    #[error("unknown wavelet `{0}`")]
    UnknownWavelet(String),
    #[error("{m} frequencies requested but at most {max} are positive for this window")]
    TooManyFrequencies { m: usize, max: usize },
    #[error("fundamental frequency must be positive, got {0}")]
    NonPositiveF0(f64),
    #[error("{rows} observations cannot determine {unknowns} unknowns")]
    UnderdeterminedSystem { rows: usize, unknowns: usize },
    #[error("prediction epoch {t_next} is not after the last training epoch {last}")]
    NonCausalEpoch { t_next: f64, last: f64 },
    #[error("length mismatch: {0} vs {1}")]
    LengthMismatch(usize, usize),
    #[error("input is empty")]
    EmptyInput,
    #[error("scaling denominator is zero")]
    ZeroDenominator,
    #[error("need at least {needed} values, got {got}")]
    InsufficientData { needed: usize, got: usize },
    #[error("series of {len} samples is too short, need at least {needed}")]
    SeriesTooShort { len: usize, needed: usize },
    #[error("cannot inject {count} outliers into {len} samples")]
    TooManyInjections { count: usize, len: usize },
    #[error("no departure above the step threshold")]
    NoDeparture,
    #[error("no predicted sample exceeds the event threshold")]
    NoEventInHorizon,
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
}
