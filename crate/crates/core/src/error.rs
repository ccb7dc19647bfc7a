use alloc::string::String;
use alloc::vec::Vec;

use crate::model::Violation;

/// Errors produced by the pure pipeline stages.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum CoreError {
    #[error("hourly table is empty")]
    EmptyTable,

    #[error("non-contiguous hourly grid at index {index}: expected 3600 s step, got {gap_s} s")]
    NonContiguousGrid { index: usize, gap_s: i64 },

    #[error("horizon {horizon_h} h is beyond 10-day support")]
    HorizonTooLong { horizon_h: u32 },

    #[error("horizon must be at least 1 h")]
    HorizonTooShort,

    #[error("angle set is empty")]
    EmptyAngles,

    #[error("angle {0} deg outside [0, 360)")]
    AngleOutOfRange(f64),

    #[error("weights length {weights} does not match angles length {angles}")]
    WeightMismatch { angles: usize, weights: usize },

    #[error("window width {0} h does not divide 24")]
    BadWindowWidth(u8),

    #[error("context failed validation ({} violation(s)): {}", .0.len(), first_violation(.0))]
    InvalidContext(Vec<Violation>),

    #[error("keyword {0:?} is not in the controlled vocabulary")]
    UnknownKeyword(String),

    #[error("analysis requires daily and six-hour aggregates or an hourly table to derive them")]
    MissingAggregates,
}

fn first_violation(v: &[Violation]) -> String {
    v.first()
        .map(|v| alloc::format!("{}: {}", v.path, v.message))
        .unwrap_or_default()
}
