//! Hierarchical temporal aggregation over non-overlapping 6-hour and
//! daily windows, including the circular wind-direction mean.
//!
//! Daily windows align to local midnight and 6-hour windows to local
//! 00/06/12/18 by default, so daily extremes mean what a reader expects;
//! partial windows at the table edges are kept and flagged rather than
//! dropped. Wind direction is averaged on the circle for 6-hour windows
//! only and reported undefined when the mean resultant length falls
//! below [`EPSILON_DIR_R`].

use alloc::vec::Vec;

use chrono::{DateTime, Duration, Utc};

use crate::error::CoreError;
use crate::model::{HourlyRecord, WindowAggregate};

/// Mean resultant length below which the circular mean is undefined.
pub const EPSILON_DIR_R: f64 = 0.1;

/// How windows are anchored on the time axis.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WindowAlignment {
    /// Boundaries at local midnight (daily) / local 00-06-12-18 (6 h),
    /// derived from the location's UTC offset.
    LocalMidnight,
    /// Boundaries anchored at the first record's timestamp.
    FirstTimestamp,
}

/// Window width and anchoring for one aggregation pass.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WindowSpec {
    /// Window width in hours; must divide 24.
    pub width_h: u8,
    pub alignment: WindowAlignment,
}

impl WindowSpec {
    pub fn new(width_h: u8, alignment: WindowAlignment) -> Result<Self, CoreError> {
        if width_h == 0 || 24 % width_h != 0 {
            return Err(CoreError::BadWindowWidth(width_h));
        }
        Ok(Self { width_h, alignment })
    }

    /// Default spec for 6-hour aggregation (local 00/06/12/18).
    pub fn six_hour() -> Self {
        Self { width_h: 6, alignment: WindowAlignment::LocalMidnight }
    }

    /// Default spec for daily aggregation (local midnight).
    pub fn daily() -> Self {
        Self { width_h: 24, alignment: WindowAlignment::LocalMidnight }
    }
}

/// One partition cell: the aligned window start and the member records.
#[derive(Debug, Clone, PartialEq)]
pub struct WindowSlice<'a> {
    pub start_utc: DateTime<Utc>,
    pub records: &'a [HourlyRecord],
}

/// Verifies the strict hourly grid: consecutive records 3600 s apart.
pub fn verify_hourly_grid(table: &[HourlyRecord]) -> Result<(), CoreError> {
    if table.is_empty() {
        return Err(CoreError::EmptyTable);
    }
    for i in 1..table.len() {
        let gap = (table[i].ts_utc - table[i - 1].ts_utc).num_seconds();
        if gap != 3600 {
            return Err(CoreError::NonContiguousGrid { index: i, gap_s: gap });
        }
    }
    Ok(())
}

/// Splits an hourly table into non-overlapping windows. Windows are
/// disjoint, cover every record exactly once, and come back ordered by
/// time; the first and last may be partial.
pub fn partition_windows<'a>(
    table: &'a [HourlyRecord],
    spec: WindowSpec,
    utc_offset_s: i32,
) -> Result<Vec<WindowSlice<'a>>, CoreError> {
    verify_hourly_grid(table)?;

    let width = Duration::hours(spec.width_h as i64);
    let first_start = match spec.alignment {
        WindowAlignment::FirstTimestamp => table[0].ts_utc,
        WindowAlignment::LocalMidnight => {
            // Seconds since local midnight, folded into the window width.
            let offset = Duration::seconds(utc_offset_s as i64);
            let local = table[0].ts_utc + offset;
            let secs_into_day =
                local.timestamp().rem_euclid(86_400);
            let secs_into_window = secs_into_day.rem_euclid(width.num_seconds());
            table[0].ts_utc - Duration::seconds(secs_into_window)
        }
    };

    let mut windows = Vec::new();
    let mut start = first_start;
    let mut lo = 0usize;
    while lo < table.len() {
        let end = start + width;
        let mut hi = lo;
        while hi < table.len() && table[hi].ts_utc < end {
            hi += 1;
        }
        // A window is emitted only if it owns records; with a contiguous
        // hourly grid every step owns at least one.
        windows.push(WindowSlice { start_utc: start, records: &table[lo..hi] });
        lo = hi;
        start = end;
    }
    Ok(windows)
}

/// Result of a circular mean: either a direction with its concentration,
/// or "undefined" when the direction vectors cancel out.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CircularMean {
    Defined { angle_deg: f64, resultant_length: f64 },
    Undefined { resultant_length: f64 },
}

impl CircularMean {
    pub fn angle(self) -> Option<f64> {
        match self {
            CircularMean::Defined { angle_deg, .. } => Some(angle_deg),
            CircularMean::Undefined { .. } => None,
        }
    }

    pub fn resultant_length(self) -> f64 {
        match self {
            CircularMean::Defined { resultant_length, .. }
            | CircularMean::Undefined { resultant_length } => resultant_length,
        }
    }
}

/// Circular mean of directions in degrees:
/// `atan2(mean sin, mean cos)` mapped to [0, 360). The mean is undefined
/// when the mean resultant length drops below [`EPSILON_DIR_R`].
///
/// Weights, when given, must match the angle count; `None` weighs every
/// angle equally.
pub fn circular_mean_deg(angles: &[f64], weights: Option<&[f64]>) -> Result<CircularMean, CoreError> {
    if angles.is_empty() {
        return Err(CoreError::EmptyAngles);
    }
    if let Some(w) = weights {
        if w.len() != angles.len() {
            return Err(CoreError::WeightMismatch { angles: angles.len(), weights: w.len() });
        }
    }
    let mut sin_sum = 0.0;
    let mut cos_sum = 0.0;
    let mut weight_sum = 0.0;
    for (i, &a) in angles.iter().enumerate() {
        if !(0.0..360.0).contains(&a) {
            return Err(CoreError::AngleOutOfRange(a));
        }
        let w = weights.map_or(1.0, |w| w[i]);
        let rad = a.to_radians();
        sin_sum += w * libm::sin(rad);
        cos_sum += w * libm::cos(rad);
        weight_sum += w;
    }
    let mean_sin = sin_sum / weight_sum;
    let mean_cos = cos_sum / weight_sum;
    let r = libm::sqrt(mean_sin * mean_sin + mean_cos * mean_cos);
    if r < EPSILON_DIR_R {
        return Ok(CircularMean::Undefined { resultant_length: r });
    }
    let mut angle = libm::atan2(mean_sin, mean_cos).to_degrees();
    if angle < 0.0 {
        angle += 360.0;
    }
    if angle >= 360.0 {
        angle -= 360.0;
    }
    Ok(CircularMean::Defined { angle_deg: angle, resultant_length: r })
}

/// Smallest absolute angular distance between two directions, degrees.
pub fn circular_distance_deg(a: f64, b: f64) -> f64 {
    let d = libm::fabs(a - b) % 360.0;
    if d > 180.0 {
        360.0 - d
    } else {
        d
    }
}

/// 6-hour aggregates: means for T/RH/U/dew point/visibility, extremes
/// for T, sum for P, optional max for wind, circular mean for direction.
pub fn aggregate_six_hour(
    table: &[HourlyRecord],
    spec: WindowSpec,
    utc_offset_s: i32,
) -> Result<Vec<WindowAggregate>, CoreError> {
    aggregate_windows(table, spec, utc_offset_s, true)
}

/// Daily aggregates: the same statistics minus wind direction, whose
/// circular average over a full day is easily misleading.
pub fn aggregate_daily(
    table: &[HourlyRecord],
    spec: WindowSpec,
    utc_offset_s: i32,
) -> Result<Vec<WindowAggregate>, CoreError> {
    aggregate_windows(table, spec, utc_offset_s, false)
}

fn aggregate_windows(
    table: &[HourlyRecord],
    spec: WindowSpec,
    utc_offset_s: i32,
    with_direction: bool,
) -> Result<Vec<WindowAggregate>, CoreError> {
    let windows = partition_windows(table, spec, utc_offset_s)?;
    let mut out = Vec::with_capacity(windows.len());
    for w in windows {
        out.push(aggregate_one(&w, spec.width_h, with_direction)?);
    }
    Ok(out)
}

fn aggregate_one(
    slice: &WindowSlice<'_>,
    width_h: u8,
    with_direction: bool,
) -> Result<WindowAggregate, CoreError> {
    let recs = slice.records;
    debug_assert!(!recs.is_empty());
    let n = recs.len() as f64;

    let mut t_sum = 0.0;
    let mut t_max = f64::NEG_INFINITY;
    let mut t_min = f64::INFINITY;
    let mut rh_sum = 0.0;
    let mut wind_sum = 0.0;
    let mut wind_max = f64::NEG_INFINITY;
    let mut precip_sum = 0.0;
    let mut dew_sum = 0.0;
    let mut vis_sum = 0.0;
    let mut vis_n = 0usize;

    for r in recs {
        t_sum += r.t_c;
        t_max = t_max.max(r.t_c);
        t_min = t_min.min(r.t_c);
        rh_sum += r.rh_pct;
        wind_sum += r.wind_ms;
        wind_max = wind_max.max(r.wind_ms);
        precip_sum += r.precip_mm;
        dew_sum += r.dew_point_c;
        if let Some(v) = r.visibility_m {
            vis_sum += v;
            vis_n += 1;
        }
    }

    let (dir_mean, dir_r) = if with_direction {
        let angles: Vec<f64> = recs.iter().map(|r| r.wind_dir_deg).collect();
        let cm = circular_mean_deg(&angles, None)?;
        (cm.angle(), Some(cm.resultant_length()))
    } else {
        (None, None)
    };

    Ok(WindowAggregate {
        window_start_utc: slice.start_utc,
        window_len_h: width_h,
        hours: recs.len() as u8,
        partial: recs.len() < width_h as usize,
        t_mean_c: t_sum / n,
        t_max_c: t_max,
        t_min_c: t_min,
        rh_mean_pct: rh_sum / n,
        wind_mean_ms: wind_sum / n,
        wind_max_ms: Some(wind_max),
        wind_dir_mean_deg: dir_mean,
        wind_dir_r: dir_r,
        precip_sum_mm: precip_sum,
        dew_point_mean_c: dew_sum / n,
        visibility_mean_m: if vis_n > 0 { Some(vis_sum / vis_n as f64) } else { None },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use chrono::TimeZone;

    fn rec(ts: DateTime<Utc>) -> HourlyRecord {
        HourlyRecord {
            ts_utc: ts,
            condition: 800,
            t_c: 10.0,
            t_feel_c: 10.0,
            dew_point_c: 5.0,
            rh_pct: 70.0,
            wind_ms: 3.0,
            wind_dir_deg: 90.0,
            gust_ms: None,
            precip_mm: 0.0,
            precip_imputed: false,
            visibility_m: Some(10_000.0),
            pressure_hpa: None,
            category: Some(crate::model::WeatherCategory::Clear),
        }
    }

    fn table(start: DateTime<Utc>, hours: usize) -> Vec<HourlyRecord> {
        (0..hours).map(|h| rec(start + Duration::hours(h as i64))).collect()
    }

    #[test]
    fn exact_division_first_timestamp() {
        let start = Utc.with_ymd_and_hms(2025, 10, 20, 0, 0, 0).unwrap();
        let t = table(start, 120);
        let spec = WindowSpec::new(24, WindowAlignment::FirstTimestamp).unwrap();
        let w = partition_windows(&t, spec, 0).unwrap();
        assert_eq!(w.len(), 5);
        assert!(w.iter().all(|w| w.records.len() == 24));
    }

    #[test]
    fn local_midnight_partial_edges() {
        // 120 records starting 14:00 local (offset +1 h, so 13:00 UTC):
        // hand-count gives window sizes 10, 24, 24, 24, 24, 14.
        let start = Utc.with_ymd_and_hms(2025, 10, 20, 13, 0, 0).unwrap();
        let t = table(start, 120);
        let spec = WindowSpec::daily();
        let w = partition_windows(&t, spec, 3600).unwrap();
        let sizes: Vec<usize> = w.iter().map(|w| w.records.len()).collect();
        assert_eq!(sizes, [10, 24, 24, 24, 24, 14]);
        // first window starts at the local-midnight boundary before 14:00
        assert_eq!(
            w[0].start_utc,
            Utc.with_ymd_and_hms(2025, 10, 19, 23, 0, 0).unwrap()
        );
    }

    #[test]
    fn single_window_of_six() {
        let start = Utc.with_ymd_and_hms(2025, 10, 20, 0, 0, 0).unwrap();
        let t = table(start, 6);
        let spec = WindowSpec::new(6, WindowAlignment::FirstTimestamp).unwrap();
        let w = partition_windows(&t, spec, 0).unwrap();
        assert_eq!(w.len(), 1);
        assert_eq!(w[0].records.len(), 6);
    }

    #[test]
    fn empty_table_rejected() {
        let spec = WindowSpec::daily();
        assert_eq!(partition_windows(&[], spec, 0), Err(CoreError::EmptyTable));
    }

    #[test]
    fn half_hour_offset_keeps_cover() {
        // +05:30 offset: window boundaries fall between the UTC whole-hour
        // stamps, but every record still lands in exactly one window.
        let start = Utc.with_ymd_and_hms(2025, 10, 19, 19, 0, 0).unwrap();
        let t = table(start, 120);
        let w = partition_windows(&t, WindowSpec::daily(), 19_800).unwrap();
        let total: usize = w.iter().map(|w| w.records.len()).sum();
        assert_eq!(total, 120);
        assert_eq!(w.len(), 5);
        assert_eq!(
            w[0].start_utc,
            Utc.with_ymd_and_hms(2025, 10, 19, 18, 30, 0).unwrap()
        );
    }

    #[test]
    fn circular_mean_constant() {
        let cm = circular_mean_deg(&[90.0, 90.0, 90.0], None).unwrap();
        assert_eq!(cm.angle(), Some(90.0));
    }

    #[test]
    fn circular_mean_wraps_north() {
        let cm = circular_mean_deg(&[350.0, 10.0], None).unwrap();
        let angle = cm.angle().unwrap();
        assert!(angle.abs() < 1e-9 || (angle - 360.0).abs() < 1e-9);
        assert_eq!(angle, 0.0);
    }

    #[test]
    fn circular_mean_matches_direct_atan2() {
        // atan2(1/3, 2/3) in degrees = 26.565051177...
        let cm = circular_mean_deg(&[0.0, 0.0, 90.0], None).unwrap();
        let expected = libm::atan2(1.0 / 3.0, 2.0 / 3.0).to_degrees();
        assert!((cm.angle().unwrap() - expected).abs() < 1e-12);
        assert!((cm.angle().unwrap() - 26.565051177077994).abs() < 1e-9);
    }

    #[test]
    fn circular_mean_antipodal_is_undefined() {
        let cm = circular_mean_deg(&[0.0, 180.0], None).unwrap();
        match cm {
            CircularMean::Undefined { resultant_length } => {
                assert!(resultant_length < 1e-12)
            }
            CircularMean::Defined { .. } => panic!("antipodal angles must cancel"),
        }
    }

    #[test]
    fn circular_mean_rejects_bad_input() {
        assert_eq!(circular_mean_deg(&[], None), Err(CoreError::EmptyAngles));
        assert_eq!(
            circular_mean_deg(&[360.0], None),
            Err(CoreError::AngleOutOfRange(360.0))
        );
    }

    #[test]
    fn weighted_mean_leans_toward_heavier_angle() {
        let cm = circular_mean_deg(&[0.0, 90.0], Some(&[3.0, 1.0])).unwrap();
        let angle = cm.angle().unwrap();
        assert!(angle > 0.0 && angle < 45.0, "got {angle}");
    }

    #[test]
    fn six_hour_aggregate_constant_window() {
        let start = Utc.with_ymd_and_hms(2025, 10, 20, 0, 0, 0).unwrap();
        let mut t = table(start, 6);
        for r in &mut t {
            r.precip_mm = 1.0;
        }
        let aggs = aggregate_six_hour(&t, WindowSpec::six_hour(), 0).unwrap();
        assert_eq!(aggs.len(), 1);
        let a = &aggs[0];
        assert_eq!(a.t_mean_c, 10.0);
        assert_eq!(a.t_max_c, 10.0);
        assert_eq!(a.t_min_c, 10.0);
        assert!((a.precip_sum_mm - 6.0).abs() < 1e-12);
        assert!(!a.partial);
    }

    #[test]
    fn six_hour_wind_mean_by_hand() {
        let start = Utc.with_ymd_and_hms(2025, 10, 20, 0, 0, 0).unwrap();
        let mut t = table(start, 6);
        let winds = [2.0, 3.0, 4.0, 5.0, 6.0, 7.8];
        for (r, w) in t.iter_mut().zip(winds) {
            r.wind_ms = w;
        }
        let aggs = aggregate_six_hour(&t, WindowSpec::six_hour(), 0).unwrap();
        let expected = winds.iter().sum::<f64>() / 6.0;
        assert!((aggs[0].wind_mean_ms - expected).abs() < 1e-12);
        assert!((aggs[0].wind_mean_ms - 4.633333333333334).abs() < 1e-9);
        assert_eq!(aggs[0].wind_max_ms, Some(7.8));
    }

    #[test]
    fn alternating_direction_is_undefined_but_recorded() {
        let start = Utc.with_ymd_and_hms(2025, 10, 20, 0, 0, 0).unwrap();
        let mut t = table(start, 6);
        for (i, r) in t.iter_mut().enumerate() {
            r.wind_dir_deg = if i % 2 == 0 { 0.0 } else { 180.0 };
        }
        let aggs = aggregate_six_hour(&t, WindowSpec::six_hour(), 0).unwrap();
        assert_eq!(aggs[0].wind_dir_mean_deg, None);
        assert!(aggs[0].wind_dir_r.unwrap() < 1e-12);
    }

    #[test]
    fn daily_never_carries_direction() {
        let start = Utc.with_ymd_and_hms(2025, 10, 20, 0, 0, 0).unwrap();
        let t = table(start, 48);
        let aggs = aggregate_daily(&t, WindowSpec::daily(), 0).unwrap();
        assert_eq!(aggs.len(), 2);
        assert!(aggs.iter().all(|a| a.wind_dir_mean_deg.is_none()));
        assert!(aggs.iter().all(|a| a.wind_dir_r.is_none()));
    }

    #[test]
    fn daily_precip_equals_six_hour_sums() {
        let start = Utc.with_ymd_and_hms(2025, 10, 20, 0, 0, 0).unwrap();
        let mut t = table(start, 48);
        for (i, r) in t.iter_mut().enumerate() {
            r.precip_mm = (i % 5) as f64 * 0.3;
        }
        let daily = aggregate_daily(&t, WindowSpec::daily(), 0).unwrap();
        let six = aggregate_six_hour(&t, WindowSpec::six_hour(), 0).unwrap();
        let daily_total: f64 = daily.iter().map(|a| a.precip_sum_mm).sum();
        let six_total: f64 = six.iter().map(|a| a.precip_sum_mm).sum();
        let hourly_total: f64 = t.iter().map(|r| r.precip_mm).sum();
        assert!((daily_total - hourly_total).abs() < 1e-9);
        assert!((six_total - hourly_total).abs() < 1e-9);
    }
}
