use std::path::PathBuf;

use thiserror::Error;

use crate::ingest::dicom::Tag;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Which part of the pipeline an error came from.
///
/// The command-line front end maps these onto process exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    Ingest,
    Kernel,
    Model,
    Data,
    Io,
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("not a DICOM part-10 file: {0}")]
    Format(String),
    #[error("unsupported DICOM content: {0}")]
    Unsupported(String),
    #[error("required tag {0} is absent")]
    MissingTag(Tag),
    #[error("malformed PGM image: {0}")]
    Pgm(String),
    #[error("no readable slices in {0}")]
    EmptySeries(PathBuf),
    #[error("slice dimensions differ: expected {expected:?}, found {found:?} in {path}")]
    SeriesShape {
        expected: (usize, usize),
        found: (usize, usize),
        path: PathBuf,
    },
    #[error("series mixes patient IDs {0:?} and {1:?}")]
    MixedSeries(String, String),
    #[error("instance number {0} occurs more than once")]
    DuplicateInstance(i64),

    #[error("dimension mismatch: {0:?} vs {1:?}")]
    Shape((usize, usize), (usize, usize)),
    #[error("marker set is empty")]
    EmptyMarker,
    #[error("watershed needs at least one marker pixel")]
    NoMarker,
    #[error("region has no non-zero pixels")]
    EmptyRegion,
    #[error("slice {index}: {source}")]
    Slice {
        index: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("training set is empty")]
    EmptyTrainingSet,
    #[error("training set contains a single class (label {0})")]
    SingleClass(u8),
    #[error("cannot split {samples} samples into {folds} folds")]
    FoldTooSmall { samples: usize, folds: usize },
    #[error("length mismatch: {0} predictions vs {1} labels")]
    LengthMismatch(usize, usize),
    #[error("nothing to evaluate")]
    EmptyEvaluation,
    #[error("model file version {found} is not supported (expected {expected})")]
    ModelVersion { found: u32, expected: u32 },
    #[error("corrupt model file: {0}")]
    ModelFormat(String),

    #[error("invalid config: {0}")]
    Config(String),
    #[error("malformed labels file at line {line}: {message}")]
    Labels { line: usize, message: String },
    #[error("bad feature row at line {line}: {message}")]
    Row { line: usize, message: String },
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub fn kind(&self) -> ErrorKind {
        use Error::*;
        match self {
            Format(_) | Unsupported(_) | MissingTag(_) | Pgm(_) | EmptySeries(_)
            | SeriesShape { .. } | MixedSeries(..) | DuplicateInstance(_) => ErrorKind::Ingest,
            Shape(..) | EmptyMarker | NoMarker | EmptyRegion => ErrorKind::Kernel,
            Slice { source, .. } => source.kind(),
            ModelVersion { .. } | ModelFormat(_) => ErrorKind::Model,
            EmptyTrainingSet | SingleClass(_) | FoldTooSmall { .. } | LengthMismatch(..)
            | EmptyEvaluation | Config(_) | Labels { .. } | Row { .. } | Csv(_) => ErrorKind::Data,
            Io { .. } => ErrorKind::Io,
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
