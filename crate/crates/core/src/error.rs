use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("line {line}: {message} (key `{key}`)")]
    Parse {
        line: usize,
        key: String,
        message: String,
    },

    #[error("invalid scenario: {0}")]
    Validation(String),

    #[error("{quantity} = {value} is outside {domain}")]
    Domain {
        quantity: &'static str,
        value: f64,
        domain: &'static str,
    },

    #[error("beam diameter {beam_m} m exceeds the far relay's ground arc {arc_m} m")]
    BeamExceedsArc { beam_m: f64, arc_m: f64 },

    #[error("no numerology satisfies requirement of {required_hz} Hz")]
    NoNumerology { required_hz: f64 },

    #[error("residual Doppler never exceeds {tolerance_hz} Hz; position error is unbounded")]
    UnboundedPositionError { tolerance_hz: f64 },

    #[error("invalid HARQ configuration: {0}")]
    HarqConfig(String),
}
