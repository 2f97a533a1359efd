//! Training data: uniform time grids, the weighted discrete inner product,
//! synthetic waveform families and the training-file format.

mod family;
mod grid;
pub mod io;
mod training;

use thiserror::Error;

pub use family::{generate_family, Family, FamilySpec, Sampling};
pub use grid::{discrete_inner, discrete_norm, TimeGrid};
pub(crate) use grid::{euclidean_inner, norm_sqr};
pub use io::{load_training_csv, read_training, save_training_csv, write_training};
pub use training::TrainingSet;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CatalogError {
    #[error("length mismatch: expected {expected}, found {found}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("invalid time grid: {0}")]
    InvalidGrid(String),
    #[error("unknown family '{0}' (expected damped_chirp, gaussian_packet or poly_fourier)")]
    UnknownFamily(String),
    #[error("invalid parameter range: {0}")]
    InvalidRange(String),
    #[error("training set is empty")]
    EmptyTraining,
    #[error("parameters {first} and {second} are identical")]
    DuplicateParameter { first: usize, second: usize },
    #[error("grid mismatch: {0}")]
    GridMismatch(String),
    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("non-finite sample on line {line} (waveform {row}, sample {column})")]
    NonFiniteSample {
        line: usize,
        row: usize,
        column: usize,
    },
    #[error("i/o error: {0}")]
    Io(String),
}
