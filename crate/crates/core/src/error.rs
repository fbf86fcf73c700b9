//! Error types shared across the crate.

use std::io;
use std::path::PathBuf;

use crate::curves::CurveKind;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("curve order {0} is out of range (expected 1..=13)")]
    OrderOutOfRange(u32),

    #[error("index {index} is out of range for a curve with {cells} cells")]
    IndexOutOfRange { index: usize, cells: usize },

    #[error("point ({x}, {y}) lies outside the {side}x{side} grid")]
    PointOutOfRange { x: u32, y: u32, side: u32 },

    #[error("clip of {len} samples does not fit in {cells} cells")]
    ClipTooLong { len: usize, cells: usize },

    #[error("sequence length {got} does not match the {expected} cells of the grid")]
    LengthMismatch { expected: usize, got: usize },

    #[error("images disagree on {what}: {left} vs {right}")]
    MetadataMismatch {
        what: &'static str,
        left: String,
        right: String,
    },

    #[error("kernel order {kernel} must satisfy 1 <= l < k = {image}")]
    KernelOrder { kernel: u32, image: u32 },

    #[error("shift multiplier d = {d} must be below {limit}")]
    ShiftOutOfRange { d: usize, limit: usize },

    #[error("expected {curve:?} image, got {got:?}")]
    WrongCurve { curve: CurveKind, got: CurveKind },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("unknown curve id {0}")]
    UnknownCurve(u8),

    #[error(transparent)]
    Wav(#[from] WavError),

    #[error(transparent)]
    Format(#[from] FormatError),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}

/// Reasons a WAV file is refused.
#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum WavError {
    #[error("not a RIFF/WAVE file")]
    NotRiff,
    #[error("file truncated at byte {offset}")]
    Truncated { offset: usize },
    #[error("missing {0} chunk")]
    MissingChunk(&'static str),
    #[error("sample rate {0} Hz is not supported (expected 16000)")]
    SampleRate(u32),
    #[error("{0} channels found, only mono is supported")]
    Channels(u16),
    #[error("unsupported encoding: format tag {format}, {bits} bits per sample")]
    Encoding { format: u16, bits: u16 },
}

/// Malformed `.sfci` or PGM data.
#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum FormatError {
    #[error("bad magic at byte 0")]
    BadMagic,
    #[error("unsupported version {version} at byte {offset}")]
    Version { version: u8, offset: usize },
    #[error("invalid {field} value {value} at byte {offset}")]
    Field {
        field: &'static str,
        value: u64,
        offset: usize,
    },
    #[error("expected {expected} bytes, found {found}")]
    Size { expected: usize, found: usize },
}
