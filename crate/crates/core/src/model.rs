//! Domain types shared by every pipeline stage, plus structural validation.
//!
//! All types are immutable values after construction and serialize to the
//! canonical JSON form described in [`crate::canonical`]. Optional physical
//! fields (gust, visibility, pressure) are explicit absences, never zero.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use chrono::{DateTime, Utc};
use serde::{Deserialize, Serialize};

use crate::vocab::Keyword;

/// Serde adapter: ISO-8601 UTC timestamps with a trailing `Z` and whole
/// seconds, the one form used in canonical JSON.
pub mod ts_iso {
    use chrono::{DateTime, SecondsFormat, Utc};
    use serde::{self, Deserialize, Deserializer, Serializer};

    use alloc::string::String;

    pub fn serialize<S: Serializer>(dt: &DateTime<Utc>, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&dt.to_rfc3339_opts(SecondsFormat::Secs, true))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<DateTime<Utc>, D::Error> {
        let raw = String::deserialize(d)?;
        DateTime::parse_from_rfc3339(&raw)
            .map(|dt| dt.with_timezone(&Utc))
            .map_err(serde::de::Error::custom)
    }
}

/// One structural-invariant violation found by [`validate_context`].
///
/// Violations are data, not faults: an invalid context is reported, never
/// panicked on, so the gateway can return the full list to the caller.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    /// JSON-pointer-like path into the offending field, e.g. `hourly[3].rh_pct`.
    pub path: String,
    pub message: String,
}

impl Violation {
    fn new(path: impl Into<String>, message: impl Into<String>) -> Self {
        Self { path: path.into(), message: message.into() }
    }
}

/// Compact weather category assigned to each forecast hour by the
/// rule-based categorizer.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WeatherCategory {
    Clear,
    PartlyCloudy,
    Overcast,
    LightRain,
    Rain,
    HeavyRain,
    Snow,
    Thunderstorm,
    Fog,
    Drizzle,
}

/// Resolved place metadata for the forecast point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeoLocation {
    pub city: String,
    pub region: String,
    pub country: String,
    /// Degrees, [-90, 90].
    pub latitude: f64,
    /// Degrees, [-180, 180].
    pub longitude: f64,
    /// Meters above mean sea level.
    pub elevation_m: f64,
    /// Seconds east of UTC, within [-14 h, +14 h].
    pub utc_offset_s: i32,
    /// Short encyclopedia blurb, present only when the lookup succeeded.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub description: Option<String>,
}

pub const MAX_UTC_OFFSET_S: i32 = 14 * 3600;

/// One forecast hour on the strict Δt = 1 h grid, normalized to SI units.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HourlyRecord {
    #[serde(with = "ts_iso")]
    pub ts_utc: DateTime<Utc>,
    /// Provider categorical condition code (OpenWeather numbering).
    pub condition: u16,
    /// Air temperature, °C (0.01 resolution).
    pub t_c: f64,
    /// Feels-like temperature, °C.
    pub t_feel_c: f64,
    /// Dew point, °C. Physical sanity: `dew_point_c <= t_c + 0.5`.
    pub dew_point_c: f64,
    /// Relative humidity, percent in [0, 100].
    pub rh_pct: f64,
    /// Wind speed, m/s >= 0 (0.1 resolution).
    pub wind_ms: f64,
    /// Wind direction, degrees in [0, 360).
    pub wind_dir_deg: f64,
    /// Wind gust, m/s; absent when the provider did not report one.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gust_ms: Option<f64>,
    /// Liquid/solid precipitation, mm >= 0 (0.1 resolution).
    pub precip_mm: f64,
    /// True when the provider omitted precipitation and 0.0 was imputed.
    #[serde(default, skip_serializing_if = "core::ops::Not::not")]
    pub precip_imputed: bool,
    /// Horizontal visibility, meters; absent when not reported.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub visibility_m: Option<f64>,
    /// Surface pressure, hPa; ingested only when the source provides it.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pressure_hpa: Option<f64>,
    /// Assigned by the categorizer; `None` only mid-normalization.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub category: Option<WeatherCategory>,
}

/// Aggregate statistics for one non-overlapping 6-hour or daily window.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WindowAggregate {
    #[serde(with = "ts_iso")]
    pub window_start_utc: DateTime<Utc>,
    /// 6 or 24.
    pub window_len_h: u8,
    /// Number of member hours; edge windows may hold fewer than the width.
    pub hours: u8,
    /// True when the window is a partial edge window.
    #[serde(default, skip_serializing_if = "core::ops::Not::not")]
    pub partial: bool,
    pub t_mean_c: f64,
    pub t_max_c: f64,
    pub t_min_c: f64,
    pub rh_mean_pct: f64,
    pub wind_mean_ms: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub wind_max_ms: Option<f64>,
    /// Circular mean of wind direction. Present only for 6-hour windows,
    /// and absent there too when the mean resultant length is below the
    /// undefined-direction threshold.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub wind_dir_mean_deg: Option<f64>,
    /// Mean resultant length of the direction vectors (6-hour windows only).
    /// Recorded even when the mean itself is undefined.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub wind_dir_r: Option<f64>,
    pub precip_sum_mm: f64,
    pub dew_point_mean_c: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub visibility_mean_m: Option<f64>,
}

/// Which service produced the monthly climatology.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ClimatologySource {
    Meteostat,
    Era5Fallback,
}

/// Long-term reference statistics for one calendar month.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MonthlyNormal {
    /// Calendar month 1..=12.
    pub month: u8,
    pub t_min_c: f64,
    pub t_max_c: f64,
    pub precip_total_mm: f64,
}

/// Twelve months of climate normals plus their provenance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MonthlyClimatology {
    /// Exactly 12 entries, months 1..=12 in order.
    pub months: Vec<MonthlyNormal>,
    pub source: ClimatologySource,
}

impl MonthlyClimatology {
    /// Normals for a calendar month (1..=12), if present.
    pub fn month(&self, month: u8) -> Option<&MonthlyNormal> {
        self.months.iter().find(|m| m.month == month)
    }
}

/// Context payload shape: flat hourly table, or the hierarchical
/// daily + 6-hour aggregate tables.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ContextMode {
    Baseline,
    Hierarchical,
}

/// Horizon (hours) below which hierarchical contexts still carry the
/// hourly table; at or above it the hourly grid is omitted.
pub const HOURLY_CUTOFF_H: u32 = 120;
/// Maximum supported forecast horizon, hours.
pub const MAX_HORIZON_H: u32 = 240;

/// The serialized payload handed to the analysis agents.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ForecastContext {
    pub mode: ContextMode,
    pub location: GeoLocation,
    /// Absent only when the pipeline ran with climatology disabled;
    /// warning-adequacy checks are skipped in that case.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub climatology: Option<MonthlyClimatology>,
    /// Daily aggregates; present iff hierarchical.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub daily: Option<Vec<WindowAggregate>>,
    /// 6-hour aggregates; present iff hierarchical.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub six_hour: Option<Vec<WindowAggregate>>,
    /// Hourly rows; presence is governed by the mode rule.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hourly: Option<Vec<HourlyRecord>>,
    /// Lead time in hours, 1..=240.
    pub horizon_h: u32,
    #[serde(with = "ts_iso")]
    pub issued_at_utc: DateTime<Utc>,
}

/// Table-derived variable a proof signal refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum SignalVariable {
    T,
    #[serde(rename = "RH")]
    Rh,
    U,
    #[serde(rename = "theta")]
    Theta,
    P,
    Vis,
    #[serde(rename = "pressure")]
    Pressure,
}

/// Pattern class a proof signal claims in the tables.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SignalPattern {
    TrendDown,
    TrendUp,
    Shift,
    Exceedance,
    Persistence,
}

/// Reference to one aggregation window inside the context horizon.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct WindowRef {
    #[serde(with = "ts_iso")]
    pub start_utc: DateTime<Utc>,
    pub window_len_h: u8,
}

/// One table-derived signal backing a proof claim.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Signal {
    pub variable: SignalVariable,
    pub window_ref: WindowRef,
    pub pattern: SignalPattern,
}

/// One evidential claim with the signals that support it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProofEntry {
    /// One-sentence statement of the observed pattern.
    pub claim: String,
    /// Non-empty list of table-derived signals.
    pub signals: Vec<Signal>,
}

/// Hazard classes the warning rules can expect.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WarningKind {
    HeavyRain,
    StrongWind,
}

/// Anomalous/hazardous condition flagged by the analysis.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Warning {
    pub kind: WarningKind,
    pub text: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub evidence_ref: Option<WindowRef>,
}

/// The Meteorologist's structured output.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalysisResult {
    /// Multi-paragraph narrative grounded in the supplied tables.
    pub summary: String,
    /// Non-empty evidential block.
    pub proof: Vec<ProofEntry>,
    /// 3 to 5 controlled-vocabulary tokens, no duplicates.
    pub keywords: Vec<Keyword>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<Warning>,
}

/// Location-aware title plus a short preamble.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportHeader {
    pub title: String,
    pub information: String,
}

/// The final JSON report returned by the Writer.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub header: ReportHeader,
    pub analysis: AnalysisResult,
    /// Echo of the context actually used, byte-identical under canonical
    /// serialization to the agents' input.
    pub context: ForecastContext,
}

/// Checks every structural invariant of a context and the types it
/// contains. Returns all violations in a deterministic order; an empty
/// list means the context is valid.
pub fn validate_context(ctx: &ForecastContext) -> Vec<Violation> {
    let mut v = Vec::new();

    validate_location(&ctx.location, &mut v);

    if let Some(clim) = &ctx.climatology {
        validate_climatology(clim, &mut v);
    }

    if ctx.horizon_h < 1 {
        v.push(Violation::new("horizon_h", "horizon must be at least 1 h"));
    } else if ctx.horizon_h > MAX_HORIZON_H {
        v.push(Violation::new(
            "horizon_h",
            format!("horizon {} h is beyond 10-day support", ctx.horizon_h),
        ));
    }

    match ctx.mode {
        ContextMode::Baseline => {
            if ctx.hourly.is_none() {
                v.push(Violation::new("hourly", "baseline context requires the hourly table"));
            }
            if ctx.daily.is_some() {
                v.push(Violation::new("daily", "baseline context must not carry daily aggregates"));
            }
            if ctx.six_hour.is_some() {
                v.push(Violation::new(
                    "six_hour",
                    "baseline context must not carry six-hour aggregates",
                ));
            }
        }
        ContextMode::Hierarchical => {
            if ctx.daily.is_none() {
                v.push(Violation::new("daily", "hierarchical context requires daily aggregates"));
            }
            if ctx.six_hour.is_none() {
                v.push(Violation::new(
                    "six_hour",
                    "hierarchical context requires six-hour aggregates",
                ));
            }
            if ctx.horizon_h < HOURLY_CUTOFF_H && ctx.hourly.is_none() {
                v.push(Violation::new(
                    "hourly",
                    "hourly table must be present for horizons under 5 days",
                ));
            }
            if (HOURLY_CUTOFF_H..=MAX_HORIZON_H).contains(&ctx.horizon_h) && ctx.hourly.is_some() {
                v.push(Violation::new(
                    "hourly",
                    "hourly table must be absent for horizons in the 5..=10 day band",
                ));
            }
        }
    }

    if let Some(daily) = &ctx.daily {
        validate_window_table(daily, 24, "daily", &mut v);
    }
    if let Some(six) = &ctx.six_hour {
        validate_window_table(six, 6, "six_hour", &mut v);
    }
    if let Some(hourly) = &ctx.hourly {
        validate_hourly_table(hourly, &mut v);
    }

    v
}

fn validate_location(loc: &GeoLocation, v: &mut Vec<Violation>) {
    if !(-90.0..=90.0).contains(&loc.latitude) {
        v.push(Violation::new(
            "location.latitude",
            format!("latitude {} outside [-90, 90]", loc.latitude),
        ));
    }
    if !(-180.0..=180.0).contains(&loc.longitude) {
        v.push(Violation::new(
            "location.longitude",
            format!("longitude {} outside [-180, 180]", loc.longitude),
        ));
    }
    if loc.utc_offset_s.abs() > MAX_UTC_OFFSET_S {
        v.push(Violation::new(
            "location.utc_offset_s",
            format!("utc offset {} s outside [-14 h, +14 h]", loc.utc_offset_s),
        ));
    }
}

fn validate_climatology(clim: &MonthlyClimatology, v: &mut Vec<Violation>) {
    if clim.months.len() != 12 {
        v.push(Violation::new(
            "climatology.months",
            format!("expected 12 months, got {}", clim.months.len()),
        ));
    }
    for (i, m) in clim.months.iter().enumerate() {
        if !(1..=12).contains(&m.month) {
            v.push(Violation::new(
                format!("climatology.months[{i}].month"),
                format!("month {} outside 1..=12", m.month),
            ));
        }
        if m.precip_total_mm < 0.0 {
            v.push(Violation::new(
                format!("climatology.months[{i}].precip_total_mm"),
                "monthly precipitation total must be >= 0",
            ));
        }
    }
    for month in 1..=12u8 {
        if !clim.months.iter().any(|m| m.month == month) {
            v.push(Violation::new("climatology.months", format!("month {month} is missing")));
        }
    }
}

fn validate_window_table(table: &[WindowAggregate], want_len: u8, name: &str, v: &mut Vec<Violation>) {
    if table.is_empty() {
        v.push(Violation::new(name, "aggregate table is empty"));
    }
    for (i, w) in table.iter().enumerate() {
        let at = |field: &str| format!("{name}[{i}].{field}");
        if w.window_len_h != want_len {
            v.push(Violation::new(
                at("window_len_h"),
                format!("expected {want_len} h windows, got {}", w.window_len_h),
            ));
        }
        if w.hours == 0 || w.hours > w.window_len_h {
            v.push(Violation::new(
                at("hours"),
                format!("member count {} outside 1..={}", w.hours, w.window_len_h),
            ));
        }
        if !(w.t_min_c <= w.t_mean_c && w.t_mean_c <= w.t_max_c) {
            v.push(Violation::new(
                at("t_mean_c"),
                format!(
                    "mean {} not within [min {}, max {}]",
                    w.t_mean_c, w.t_min_c, w.t_max_c
                ),
            ));
        }
        if w.window_len_h == 24 && w.wind_dir_mean_deg.is_some() {
            v.push(Violation::new(
                at("wind_dir_mean_deg"),
                "daily windows must not carry a circular wind-direction mean",
            ));
        }
        if w.precip_sum_mm < 0.0 {
            v.push(Violation::new(at("precip_sum_mm"), "precipitation sum must be >= 0"));
        }
        if let Some(dir) = w.wind_dir_mean_deg {
            if !(0.0..360.0).contains(&dir) {
                v.push(Violation::new(
                    at("wind_dir_mean_deg"),
                    format!("direction {dir} outside [0, 360)"),
                ));
            }
        }
        if i > 0 && table[i - 1].window_start_utc >= w.window_start_utc {
            v.push(Violation::new(
                at("window_start_utc"),
                "window starts must be strictly increasing",
            ));
        }
    }
}

fn validate_hourly_table(table: &[HourlyRecord], v: &mut Vec<Violation>) {
    if table.is_empty() {
        v.push(Violation::new("hourly", "hourly table is empty"));
    }
    for (i, r) in table.iter().enumerate() {
        let at = |field: &str| format!("hourly[{i}].{field}");
        if i > 0 {
            let gap = (r.ts_utc - table[i - 1].ts_utc).num_seconds();
            if gap != 3600 {
                v.push(Violation::new(
                    at("ts_utc"),
                    format!("records must be exactly 3600 s apart, got {gap} s"),
                ));
            }
        }
        if !(0.0..=100.0).contains(&r.rh_pct) {
            v.push(Violation::new(at("rh_pct"), format!("rh {} outside [0, 100]", r.rh_pct)));
        }
        if !(0.0..360.0).contains(&r.wind_dir_deg) {
            v.push(Violation::new(
                at("wind_dir_deg"),
                format!("direction {} outside [0, 360)", r.wind_dir_deg),
            ));
        }
        if r.precip_mm < 0.0 {
            v.push(Violation::new(at("precip_mm"), "precipitation must be >= 0"));
        }
        if r.wind_ms < 0.0 {
            v.push(Violation::new(at("wind_ms"), "wind speed must be >= 0"));
        }
        if let Some(g) = r.gust_ms {
            if g < 0.0 {
                v.push(Violation::new(at("gust_ms"), "gust must be >= 0"));
            }
        }
        if let Some(vis) = r.visibility_m {
            if vis < 0.0 {
                v.push(Violation::new(at("visibility_m"), "visibility must be >= 0"));
            }
        }
        if r.dew_point_c > r.t_c + 0.5 {
            v.push(Violation::new(
                at("dew_point_c"),
                format!("dew point {} exceeds temperature {} by more than 0.5", r.dew_point_c, r.t_c),
            ));
        }
        if r.category.is_none() {
            v.push(Violation::new(at("category"), "hour is missing its weather category"));
        }
    }
}

/// Structural checks for an analysis payload (keyword count and
/// uniqueness, non-empty proof). Vocabulary membership is enforced by
/// the [`Keyword`] type itself.
pub fn validate_analysis(a: &AnalysisResult) -> Vec<Violation> {
    let mut v = Vec::new();
    if a.keywords.len() < 3 || a.keywords.len() > 5 {
        v.push(Violation::new(
            "keywords",
            format!("keyword count {} out of range 3..=5", a.keywords.len()),
        ));
    }
    for (i, kw) in a.keywords.iter().enumerate() {
        if a.keywords[..i].contains(kw) {
            v.push(Violation::new(
                format!("keywords[{i}]"),
                format!("duplicate keyword {}", kw.token()),
            ));
        }
    }
    if a.proof.is_empty() {
        v.push(Violation::new("proof", "proof block must not be empty"));
    }
    for (i, p) in a.proof.iter().enumerate() {
        if p.signals.is_empty() {
            v.push(Violation::new(
                format!("proof[{i}].signals"),
                "proof entry must carry at least one signal",
            ));
        }
    }
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use chrono::TimeZone;

    fn base_location() -> GeoLocation {
        GeoLocation {
            city: "Cork".into(),
            region: "Munster".into(),
            country: "Ireland".into(),
            latitude: 51.903614,
            longitude: -8.468399,
            elevation_m: 10.0,
            utc_offset_s: 3600,
            description: None,
        }
    }

    fn hour(ts_h: u32) -> HourlyRecord {
        HourlyRecord {
            ts_utc: Utc.with_ymd_and_hms(2025, 10, 20, 0, 0, 0).unwrap()
                + chrono::Duration::hours(ts_h as i64),
            condition: 800,
            t_c: 12.0,
            t_feel_c: 11.5,
            dew_point_c: 8.0,
            rh_pct: 80.0,
            wind_ms: 3.0,
            wind_dir_deg: 180.0,
            gust_ms: None,
            precip_mm: 0.0,
            precip_imputed: false,
            visibility_m: Some(10_000.0),
            pressure_hpa: None,
            category: Some(WeatherCategory::Clear),
        }
    }

    fn baseline_ctx(hours: u32) -> ForecastContext {
        ForecastContext {
            mode: ContextMode::Baseline,
            location: base_location(),
            climatology: None,
            daily: None,
            six_hour: None,
            hourly: Some((0..hours).map(hour).collect()),
            horizon_h: hours,
            issued_at_utc: Utc.with_ymd_and_hms(2025, 10, 20, 0, 0, 0).unwrap(),
        }
    }

    #[test]
    fn valid_baseline_context_passes() {
        assert!(validate_context(&baseline_ctx(48)).is_empty());
    }

    #[test]
    fn rh_bound_violation_names_the_record() {
        let mut ctx = baseline_ctx(6);
        ctx.hourly.as_mut().unwrap()[3].rh_pct = 120.0;
        let v = validate_context(&ctx);
        assert_eq!(v.len(), 1);
        assert_eq!(v[0].path, "hourly[3].rh_pct");
    }

    #[test]
    fn broken_grid_is_reported() {
        let mut ctx = baseline_ctx(6);
        ctx.hourly.as_mut().unwrap()[4].ts_utc += chrono::Duration::minutes(30);
        let v = validate_context(&ctx);
        assert!(v.iter().any(|v| v.path == "hourly[4].ts_utc"));
        // the following record is now also off-grid relative to its neighbor
        assert!(v.iter().any(|v| v.path == "hourly[5].ts_utc"));
    }

    #[test]
    fn validation_is_idempotent_and_order_stable() {
        let mut ctx = baseline_ctx(6);
        ctx.hourly.as_mut().unwrap()[1].rh_pct = -3.0;
        ctx.hourly.as_mut().unwrap()[2].wind_dir_deg = 360.0;
        let a = validate_context(&ctx);
        let b = validate_context(&ctx);
        assert_eq!(a, b);
        assert_eq!(a[0].path, "hourly[1].rh_pct");
        assert_eq!(a[1].path, "hourly[2].wind_dir_deg");
    }

    #[test]
    fn dew_point_slack_is_respected() {
        let mut ctx = baseline_ctx(3);
        ctx.hourly.as_mut().unwrap()[0].dew_point_c = 12.4; // t_c + 0.4: fine
        assert!(validate_context(&ctx).is_empty());
        ctx.hourly.as_mut().unwrap()[0].dew_point_c = 12.6;
        assert_eq!(validate_context(&ctx).len(), 1);
    }
}
