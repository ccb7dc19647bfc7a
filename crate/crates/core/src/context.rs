//! Context-mode selection, payload assembly, and content-addressed keys.

use alloc::string::String;
use alloc::vec::Vec;

use chrono::{DateTime, Utc};
use serde::{Deserialize, Serialize};

use crate::aggregate::{aggregate_daily, aggregate_six_hour, WindowSpec};
use crate::canonical::content_hash;
use crate::error::CoreError;
use crate::model::{
    validate_context, ContextMode, ForecastContext, GeoLocation, HourlyRecord,
    MonthlyClimatology, HOURLY_CUTOFF_H, MAX_HORIZON_H,
};

/// What the caller asked for; `auto` resolves to hierarchical, the mode
/// the pipeline is built around (baseline is kept for A/B comparison).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RequestedMode {
    Baseline,
    Hierarchical,
    #[default]
    Auto,
}

/// Resolved mode plus whether the hourly table rides along.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ModeDecision {
    pub mode: ContextMode,
    pub include_hourly: bool,
}

/// Resolves the context mode for a horizon. Hierarchical contexts carry
/// the hourly table only under 5 days; in the 5..=10 day band the hourly
/// grid is omitted to keep payloads small. Horizons beyond 10 days are
/// unsupported.
pub fn select_mode(horizon_h: u32, requested: RequestedMode) -> Result<ModeDecision, CoreError> {
    if horizon_h < 1 {
        return Err(CoreError::HorizonTooShort);
    }
    if horizon_h > MAX_HORIZON_H {
        return Err(CoreError::HorizonTooLong { horizon_h });
    }
    let decision = match requested {
        RequestedMode::Baseline => {
            ModeDecision { mode: ContextMode::Baseline, include_hourly: true }
        }
        RequestedMode::Hierarchical | RequestedMode::Auto => ModeDecision {
            mode: ContextMode::Hierarchical,
            include_hourly: horizon_h < HOURLY_CUTOFF_H,
        },
    };
    Ok(decision)
}

/// Assembles the agent payload from normalized, categorized hourly rows.
/// Hierarchical contexts get daily and 6-hour aggregates computed here;
/// the hourly table is attached per the mode decision re-evaluated
/// against the actual table length, so the output always satisfies
/// [`validate_context`].
pub fn build_context(
    location: GeoLocation,
    climatology: Option<MonthlyClimatology>,
    hourly: Vec<HourlyRecord>,
    decision: ModeDecision,
    issued_at_utc: DateTime<Utc>,
) -> Result<ForecastContext, CoreError> {
    if hourly.is_empty() {
        return Err(CoreError::EmptyTable);
    }
    let horizon_h = hourly.len() as u32;
    if horizon_h > MAX_HORIZON_H {
        return Err(CoreError::HorizonTooLong { horizon_h });
    }

    let ctx = match decision.mode {
        ContextMode::Baseline => ForecastContext {
            mode: ContextMode::Baseline,
            location,
            climatology,
            daily: None,
            six_hour: None,
            hourly: Some(hourly),
            horizon_h,
            issued_at_utc,
        },
        ContextMode::Hierarchical => {
            let offset = location.utc_offset_s;
            let daily = aggregate_daily(&hourly, WindowSpec::daily(), offset)?;
            let six_hour = aggregate_six_hour(&hourly, WindowSpec::six_hour(), offset)?;
            let include_hourly = horizon_h < HOURLY_CUTOFF_H;
            ForecastContext {
                mode: ContextMode::Hierarchical,
                location,
                climatology,
                daily: Some(daily),
                six_hour: Some(six_hour),
                hourly: include_hourly.then_some(hourly),
                horizon_h,
                issued_at_utc,
            }
        }
    };

    let violations = validate_context(&ctx);
    if violations.is_empty() {
        Ok(ctx)
    } else {
        Err(CoreError::InvalidContext(violations))
    }
}

#[derive(Serialize)]
struct KeyMaterial<'a> {
    location: &'a GeoLocation,
    #[serde(with = "crate::model::ts_iso")]
    issued_at_utc: DateTime<Utc>,
    sources: &'a [String],
    horizon_h: u32,
}

/// Content-addressed cache key: SHA-256 over the canonical serialization
/// of (location, issue time, source identifiers, horizon). Two builds
/// from the same frozen inputs collide exactly when they should.
pub fn context_key(
    location: &GeoLocation,
    issued_at_utc: DateTime<Utc>,
    sources: &[String],
    horizon_h: u32,
) -> String {
    content_hash(&KeyMaterial { location, issued_at_utc, sources, horizon_h })
        .expect("key material always serializes")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mode_table_matches_the_cutoff() {
        for horizon in (24..=240).step_by(24) {
            let d = select_mode(horizon, RequestedMode::Hierarchical).unwrap();
            assert_eq!(d.mode, ContextMode::Hierarchical);
            assert_eq!(d.include_hourly, horizon <= 96, "horizon {horizon}");
        }
    }

    #[test]
    fn boundary_cases() {
        assert!(select_mode(72, RequestedMode::Hierarchical).unwrap().include_hourly);
        assert!(!select_mode(120, RequestedMode::Hierarchical).unwrap().include_hourly);
        assert!(select_mode(240, RequestedMode::Auto).is_ok());
        assert_eq!(
            select_mode(264, RequestedMode::Auto),
            Err(CoreError::HorizonTooLong { horizon_h: 264 })
        );
        assert_eq!(select_mode(0, RequestedMode::Auto), Err(CoreError::HorizonTooShort));
    }

    #[test]
    fn baseline_always_carries_hourly() {
        for horizon in [24, 120, 240] {
            let d = select_mode(horizon, RequestedMode::Baseline).unwrap();
            assert_eq!(d.mode, ContextMode::Baseline);
            assert!(d.include_hourly);
        }
    }

    #[test]
    fn auto_resolves_to_hierarchical() {
        assert_eq!(
            select_mode(48, RequestedMode::Auto).unwrap().mode,
            ContextMode::Hierarchical
        );
    }
}
