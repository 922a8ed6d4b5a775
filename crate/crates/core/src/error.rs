use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("width {0} out of range (1..=1024)")]
    WidthOutOfRange(usize),

    #[error("width mismatch: expected {expected} bits, found {found}")]
    WidthMismatch { expected: usize, found: usize },

    #[error("invalid digit {digit:?} for radix {radix}")]
    InvalidDigit { digit: char, radix: u32 },

    #[error("value does not fit in {width} bits")]
    ValueTooWide { width: usize },

    #[error("empty word text")]
    EmptyText,

    #[error("unknown radix {0:?} (expected bin or hex)")]
    InvalidRadix(String),

    #[error("empty trace")]
    EmptyTrace,

    #[error("trace needs at least 2 words, found {0}")]
    TraceTooShort(usize),

    #[error("invalid tap position {tap} for width {width} (expected 1..={width})")]
    InvalidTap { tap: usize, width: usize },

    #[error("tap set must include position {0}")]
    MissingTopTap(usize),

    #[error("LFSR taps required")]
    MissingTaps,

    #[error("all-zero LFSR seed locks the register")]
    ZeroLfsrSeed,

    #[error("zero transfers: switching activity undefined")]
    ZeroTransfers,

    #[error("{transitions} transitions exceed capacity of {capacity} bit transfers")]
    TransitionsExceedCapacity { transitions: u64, capacity: u128 },

    #[error("reference switching activity is zero; reduction undefined")]
    ZeroReferenceActivity,

    #[error("{name} = {value} out of range: {expected}")]
    ParameterRange {
        name: &'static str,
        value: f64,
        expected: &'static str,
    },

    #[error("line {line}: {source}")]
    AtLine {
        line: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("invalid trace header {0:?} (expected `width=<n> radix=<bin|hex>`)")]
    InvalidHeader(String),

    #[error("missing trace header")]
    MissingHeader,

    #[error("unknown {what} {value:?}")]
    UnknownName { what: &'static str, value: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn at_line(self, line: usize) -> Error {
        Error::AtLine {
            line,
            source: Box::new(self),
        }
    }
}
