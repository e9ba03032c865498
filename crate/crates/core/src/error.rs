use thiserror::Error;

use crate::inventory::{AreaKind, ElementClass, Ledger};
use crate::sharing::ValidationReport;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("missing unit cost for scaled class `{0}`")]
    MissingCostEntry(ElementClass),

    #[error("invalid amount for `{class}`: {value} (amounts must be finite and >= 0)")]
    InvalidAmount { class: ElementClass, value: f64 },

    #[error("{0} ledger has zero total; fractions are undefined")]
    ZeroTotalLedger(Ledger),

    #[error("unknown preset `{0}`")]
    UnknownPreset(String),

    #[error("unknown element class `{0}`")]
    UnknownClass(String),

    #[error("malformed configuration `{name}`: {reason}")]
    InvalidConfiguration { name: String, reason: String },

    #[error("horizon must be at least one year, got {0}")]
    InvalidHorizon(u32),

    #[error("operator index {index} out of range for {count} operators")]
    InvalidOperatorIndex { index: usize, count: usize },

    #[error("baseline grand total is zero")]
    ZeroBaseline,

    #[error("horizon mismatch: {0} vs {1} years")]
    HorizonMismatch(u32, u32),

    #[error("area mismatch: {0} vs {1}")]
    AreaMismatch(AreaKind, AreaKind),

    #[error("shared cost exceeds baseline for `{0}`; savings cannot be negative")]
    NegativeSaving(String),

    #[error("malformed scenario: {0}")]
    MalformedScenario(String),

    #[error("invalid scenario: {reason}")]
    InvalidScenario {
        reason: String,
        report: Option<Box<ValidationReport>>,
    },

    #[error("grid cell ({area}, {configuration}): {source}")]
    GridCell {
        area: AreaKind,
        configuration: String,
        #[source]
        source: Box<Error>,
    },

    #[error("invalid sweep parameter: {0}")]
    InvalidSweepParameter(String),

    #[error("calibration infeasible; violated: {}", .violated.join("; "))]
    InfeasibleCalibration { violated: Vec<String> },

    #[error("fixture `{name}`: {reason}")]
    Fixture { name: String, reason: String },

    #[error("I/O failure on `{path}`: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}
