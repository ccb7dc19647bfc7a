//! Oracle equivalence for the window aggregation: an independent
//! brute-force recomputation over random tables, plus the conservation,
//! bounds, and circular-equivariance properties.

use chrono::{DateTime, Duration, Utc};
use proptest::prelude::*;

use hiermet_core::aggregate::{
    aggregate_daily, aggregate_six_hour, circular_mean_deg, CircularMean, WindowAlignment,
    WindowSpec,
};
use hiermet_core::fixtures::random_hourly_table;
use hiermet_core::model::{HourlyRecord, WindowAggregate};

// -------------------------------------------------------------------
// Brute-force reference: recompute every window by scanning the whole
// table for membership and folding with naive loops. Shares no code
// with the implementation under test.
// -------------------------------------------------------------------

struct OracleWindow {
    start: DateTime<Utc>,
    t_mean: f64,
    t_max: f64,
    t_min: f64,
    rh_mean: f64,
    wind_mean: f64,
    wind_max: f64,
    precip_sum: f64,
    dew_mean: f64,
    vis_mean: Option<f64>,
    dir_mean: Option<f64>,
    count: usize,
}

fn oracle_windows(
    table: &[HourlyRecord],
    width_h: i64,
    offset_s: i32,
    align_local: bool,
    with_dir: bool,
) -> Vec<OracleWindow> {
    // Window origin: either the first timestamp, or the previous local
    // boundary found by stepping back hour by hour.
    let mut origin = table[0].ts_utc;
    if align_local {
        // step-back search in 30-minute increments: offsets are always
        // multiples of half an hour here
        while (origin.timestamp() + offset_s as i64).rem_euclid(86_400) % (width_h * 3600) != 0 {
            origin -= Duration::minutes(30);
            assert!(
                table[0].ts_utc - origin < Duration::hours(25),
                "runaway boundary search"
            );
        }
    }

    let last = table.last().unwrap().ts_utc;
    let mut out = Vec::new();
    let mut start = origin;
    while start <= last {
        let end = start + Duration::hours(width_h);
        let members: Vec<&HourlyRecord> =
            table.iter().filter(|r| r.ts_utc >= start && r.ts_utc < end).collect();
        if !members.is_empty() {
            let n = members.len() as f64;
            let mut t_sum = 0.0;
            let mut t_max = members[0].t_c;
            let mut t_min = members[0].t_c;
            let mut rh_sum = 0.0;
            let mut w_sum = 0.0;
            let mut w_max = members[0].wind_ms;
            let mut p_sum = 0.0;
            let mut d_sum = 0.0;
            let mut v_sum = 0.0;
            let mut v_n = 0usize;
            let mut sin_sum = 0.0;
            let mut cos_sum = 0.0;
            for r in &members {
                t_sum += r.t_c;
                if r.t_c > t_max {
                    t_max = r.t_c;
                }
                if r.t_c < t_min {
                    t_min = r.t_c;
                }
                rh_sum += r.rh_pct;
                w_sum += r.wind_ms;
                if r.wind_ms > w_max {
                    w_max = r.wind_ms;
                }
                p_sum += r.precip_mm;
                d_sum += r.dew_point_c;
                if let Some(v) = r.visibility_m {
                    v_sum += v;
                    v_n += 1;
                }
                let rad = r.wind_dir_deg.to_radians();
                sin_sum += rad.sin();
                cos_sum += rad.cos();
            }
            let dir_mean = if with_dir {
                let ms = sin_sum / n;
                let mc = cos_sum / n;
                let r = (ms * ms + mc * mc).sqrt();
                if r < 0.1 {
                    None
                } else {
                    let mut a = ms.atan2(mc).to_degrees();
                    if a < 0.0 {
                        a += 360.0;
                    }
                    if a >= 360.0 {
                        a -= 360.0;
                    }
                    Some(a)
                }
            } else {
                None
            };
            out.push(OracleWindow {
                start,
                t_mean: t_sum / n,
                t_max,
                t_min,
                rh_mean: rh_sum / n,
                wind_mean: w_sum / n,
                wind_max: w_max,
                precip_sum: p_sum,
                dew_mean: d_sum / n,
                vis_mean: (v_n > 0).then(|| v_sum / v_n as f64),
                dir_mean,
                count: members.len(),
            });
        }
        start = end;
    }
    out
}

const TOL: f64 = 1e-9;

fn assert_matches(got: &WindowAggregate, want: &OracleWindow) {
    assert_eq!(got.window_start_utc, want.start);
    assert_eq!(got.hours as usize, want.count);
    assert!((got.t_mean_c - want.t_mean).abs() < TOL);
    assert!((got.t_max_c - want.t_max).abs() < TOL);
    assert!((got.t_min_c - want.t_min).abs() < TOL);
    assert!((got.rh_mean_pct - want.rh_mean).abs() < TOL);
    assert!((got.wind_mean_ms - want.wind_mean).abs() < TOL);
    assert!((got.wind_max_ms.unwrap() - want.wind_max).abs() < TOL);
    assert!((got.precip_sum_mm - want.precip_sum).abs() < TOL);
    assert!((got.dew_point_mean_c - want.dew_mean).abs() < TOL);
    match (got.visibility_mean_m, want.vis_mean) {
        (Some(a), Some(b)) => assert!((a - b).abs() < TOL),
        (None, None) => {}
        other => panic!("visibility mismatch: {other:?}"),
    }
    match (got.wind_dir_mean_deg, want.dir_mean) {
        (Some(a), Some(b)) => assert!((a - b).abs() < TOL),
        (None, None) => {}
        other => panic!("direction mismatch: {other:?}"),
    }
}

#[test]
fn thousand_random_tables_match_the_oracle() {
    let start = std::time::Instant::now();
    for seed in 0..1000u64 {
        let hours = 24 + (seed as usize * 7) % 217; // 24..=240
        let table = random_hourly_table(seed + 1, hours);
        let offset = [-28_800, -3_600, 0, 3_600, 19_800, 28_800][(seed % 6) as usize];

        let six = aggregate_six_hour(&table, WindowSpec::six_hour(), offset).unwrap();
        let want_six = oracle_windows(&table, 6, offset, true, true);
        assert_eq!(six.len(), want_six.len());
        for (g, w) in six.iter().zip(&want_six) {
            assert_matches(g, w);
        }

        let daily = aggregate_daily(&table, WindowSpec::daily(), offset).unwrap();
        let want_daily = oracle_windows(&table, 24, offset, true, false);
        assert_eq!(daily.len(), want_daily.len());
        for (g, w) in daily.iter().zip(&want_daily) {
            assert_matches(g, w);
        }

        // conservation across all three levels
        let hourly_total: f64 = table.iter().map(|r| r.precip_mm).sum();
        let six_total: f64 = six.iter().map(|w| w.precip_sum_mm).sum();
        let daily_total: f64 = daily.iter().map(|w| w.precip_sum_mm).sum();
        assert!((hourly_total - six_total).abs() < TOL);
        assert!((hourly_total - daily_total).abs() < TOL);

        // windows cover every record exactly once
        let covered: usize = six.iter().map(|w| w.hours as usize).sum();
        assert_eq!(covered, table.len());
    }
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 10.0, "oracle sweep took {elapsed:?}");
}

#[test]
fn first_timestamp_alignment_matches_oracle_too() {
    for seed in [3u64, 17, 99] {
        let table = random_hourly_table(seed, 120);
        let spec = WindowSpec::new(6, WindowAlignment::FirstTimestamp).unwrap();
        let six = aggregate_six_hour(&table, spec, 0).unwrap();
        let want = oracle_windows(&table, 6, 0, false, true);
        assert_eq!(six.len(), want.len());
        for (g, w) in six.iter().zip(&want) {
            assert_matches(g, w);
        }
    }
}

proptest! {
    /// Every windowed mean lies within the window's own extremes.
    #[test]
    fn means_lie_within_bounds(seed in 1u64..5000, hours in 24usize..240) {
        let table = random_hourly_table(seed, hours);
        let six = aggregate_six_hour(&table, WindowSpec::six_hour(), 3600).unwrap();
        for w in &six {
            prop_assert!(w.t_min_c <= w.t_mean_c + 1e-12);
            prop_assert!(w.t_mean_c <= w.t_max_c + 1e-12);
            prop_assert!(w.wind_mean_ms <= w.wind_max_ms.unwrap() + 1e-12);
        }
    }

    /// Rotating all inputs rotates the circular mean by the same angle.
    #[test]
    fn circular_mean_is_rotation_equivariant(
        angles in prop::collection::vec(0.0f64..360.0, 1..48),
        delta in 0.0f64..360.0,
    ) {
        let rotated: Vec<f64> = angles.iter().map(|a| (a + delta).rem_euclid(360.0)).collect();
        let base = circular_mean_deg(&angles, None).unwrap();
        let moved = circular_mean_deg(&rotated, None).unwrap();
        if let (CircularMean::Defined { angle_deg: a, .. }, CircularMean::Defined { angle_deg: b, .. }) =
            (base, moved)
        {
            let want = (a + delta).rem_euclid(360.0);
            let diff = (b - want).abs();
            let diff = diff.min(360.0 - diff);
            prop_assert!(diff < 1e-6, "rotated mean {b}, expected {want}");
        }
        // resultant length is rotation-invariant regardless of definedness
        prop_assert!((base.resultant_length() - moved.resultant_length()).abs() < 1e-9);
    }

    /// The undefined threshold acts on the resultant length exactly.
    #[test]
    fn undefined_iff_resultant_below_epsilon(
        angles in prop::collection::vec(0.0f64..360.0, 1..48),
    ) {
        match circular_mean_deg(&angles, None).unwrap() {
            CircularMean::Defined { resultant_length, .. } => prop_assert!(resultant_length >= 0.1),
            CircularMean::Undefined { resultant_length } => prop_assert!(resultant_length < 0.1),
        }
    }
}
