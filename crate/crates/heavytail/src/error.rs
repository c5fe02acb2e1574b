use thiserror::Error;

use crate::Model;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FitError {
    #[error("sample has {0} values; at least {min} are required", min = crate::Sample::MIN_LEN)]
    TooSmall(usize),
    #[error("sample values must be positive integers")]
    NonPositive,
    #[error("line {line}: {value:?} is not a positive integer")]
    Parse { line: usize, value: String },
    #[error("all values are equal ({0}); no heavy-tailed fit is possible")]
    DegenerateSample(u64),
    #[error("tail above xmin = {xmin} has {n_tail} points; at least 10 are required")]
    TooFewTailPoints { xmin: u64, n_tail: usize },
    #[error("{model} fit did not reach a finite likelihood")]
    NonConvergence { model: Model },
    #[error("fits use different tails (xmin {a} vs {b})")]
    XminMismatch { a: u64, b: u64 },
}
