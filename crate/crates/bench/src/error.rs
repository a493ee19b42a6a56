use genloss_core::GeneratorError;
use genloss_diff::DiffError;
use genloss_logic::LogicError;

#[derive(Debug, thiserror::Error)]
pub enum BenchError {
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: bad magic 0x{found:08X}, expected 0x{expected:08X}")]
    BadMagic {
        path: String,
        found: u32,
        expected: u32,
    },
    #[error("{path}: truncated, wanted {wanted} bytes but the file has {got}")]
    Truncated {
        path: String,
        wanted: usize,
        got: usize,
    },
    #[error("{path}: images are {rows}x{cols}, expected 28x28")]
    DimensionMismatch {
        path: String,
        rows: usize,
        cols: usize,
    },
    #[error("{path}: label {value} outside 0..=9")]
    BadLabel { path: String, value: u8 },
    #[error("image/label counts disagree: {images} images vs {labels} labels")]
    CountMismatch { images: usize, labels: usize },
    #[error("cannot take {want} items from a dataset of {have}")]
    SubsampleTooLarge { want: usize, have: usize },
    #[error("{path} line {line}: {message}")]
    Config {
        path: String,
        line: usize,
        message: String,
    },
    #[error("invalid value for {what}: {raw}")]
    InvalidValue { what: &'static str, raw: String },
    #[error("no results to report")]
    EmptyResults,
    #[error(transparent)]
    Generator(#[from] GeneratorError),
    #[error(transparent)]
    Logic(#[from] LogicError),
    #[error(transparent)]
    Diff(#[from] DiffError),
}

impl BenchError {
    /// Stable failure tag for the CLI's machine-readable error line.
    pub fn kind(&self) -> &'static str {
        match self {
            BenchError::Io { .. } => "io",
            BenchError::BadMagic { .. } => "bad-magic",
            BenchError::Truncated { .. } => "truncated",
            BenchError::DimensionMismatch { .. } => "dimension-mismatch",
            BenchError::BadLabel { .. } => "bad-label",
            BenchError::CountMismatch { .. } => "count-mismatch",
            BenchError::SubsampleTooLarge { .. } => "subsample-too-large",
            BenchError::Config { .. } => "config",
            BenchError::InvalidValue { .. } => "invalid-value",
            BenchError::EmptyResults => "empty-results",
            BenchError::Generator(_) => "generator",
            BenchError::Logic(LogicError::UnsupportedGenerator { .. }) => "unsupported-generator",
            BenchError::Logic(_) => "logic",
            BenchError::Diff(_) => "diff",
        }
    }

    pub(crate) fn io(path: &std::path::Path, source: std::io::Error) -> Self {
        BenchError::Io {
            path: path.display().to_string(),
            source,
        }
    }
}
