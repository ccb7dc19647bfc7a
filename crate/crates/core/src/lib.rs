//! Core types and algorithms for hierarchical weather-report generation.
//!
//! This crate holds everything that does not need an operating system:
//! the domain model and its structural validation, hierarchical window
//! aggregation (including the circular wind-direction mean), rule-based
//! weather categorization, the keyword evidence predicates and semantic
//! validator, the deterministic offline analyst and template writer, and
//! canonical JSON serialization used for caching and context echoes.
//!
//! The crate is `no_std`-compatible (requires `alloc`); the `std` feature
//! is enabled by default. Network clients, the cache store, the REST
//! gateway, and the CLI live in the companion `hiermet` crate.

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod aggregate;
pub mod analysis;
pub mod canonical;
pub mod category;
pub mod context;
pub mod evidence;
#[cfg(feature = "fixtures")]
pub mod fixtures;
pub mod model;
pub mod prompt;
pub mod validate;
pub mod vocab;
pub mod writer;

mod error;

pub use error::CoreError;
pub use model::{
    AnalysisResult, ContextMode, ForecastContext, GeoLocation, HourlyRecord, MonthlyClimatology,
    MonthlyNormal, ProofEntry, Report, ReportHeader, Signal, SignalPattern, SignalVariable,
    Violation, Warning, WarningKind, WeatherCategory, WindowAggregate, WindowRef,
};
pub use vocab::{Keyword, PredicateStrength};
