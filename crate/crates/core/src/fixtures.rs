//! Synthetic forecast scenarios and deterministic random generators,
//! compiled behind the `fixtures` feature for tests, benchmarks, and
//! offline demos.
//!
//! The four city scenarios reproduce the numeric envelopes of real
//! late-October situations: a mild coastal cooling transition (Cork), a
//! persistent tropical regime (Manila), a monsoon wind-up with an early
//! rain peak (Chennai), and an extreme-rainfall episode (Da Nang). Each
//! generates a 120-hour hourly table whose daily/6-hour aggregates hit
//! the planned values exactly: temperatures peak at 14:00 local and dip
//! at 05:00, humidity is a full-period cosine (so daily means are
//! exact), and wind speed/direction are constant within each 6-hour
//! segment (so 6-hour means equal the plan).

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use chrono::{DateTime, Duration, TimeZone, Utc};

use crate::category::{categorize_table, CategorizerThresholds};
use crate::context::{build_context, select_mode, RequestedMode};
use crate::model::{
    ClimatologySource, ForecastContext, GeoLocation, HourlyRecord, MonthlyClimatology,
    MonthlyNormal,
};

fn q2(x: f64) -> f64 {
    libm::round(x * 100.0) / 100.0
}

fn q1(x: f64) -> f64 {
    libm::round(x * 10.0) / 10.0
}

/// One local day of the scenario plan. Segment arrays cover the four
/// local 6-hour blocks 00-06, 06-12, 12-18, 18-24.
#[derive(Debug, Clone)]
pub struct DayPlan {
    pub t_min_c: f64,
    pub t_max_c: f64,
    pub rh_mean_pct: f64,
    pub rh_amp_pct: f64,
    pub wind_ms: [f64; 4],
    pub wind_dir_deg: [f64; 4],
    pub precip_mm: [f64; 4],
    /// Condition code for dry hours (800..=804).
    pub dry_condition: u16,
    /// Gust = wind * factor when factor > 1, otherwise no gust reported.
    pub gust_factor: f64,
}

/// A complete scenario: place, climate normals, and the daily plans.
#[derive(Debug, Clone)]
pub struct Scenario {
    pub location: GeoLocation,
    pub climatology: MonthlyClimatology,
    /// First hourly timestamp; always a local midnight.
    pub start_utc: DateTime<Utc>,
    pub days: Vec<DayPlan>,
    /// Hourly wind speeds overriding one 6-hour segment:
    /// (day, segment, values).
    pub wind_override: Option<(usize, usize, [f64; 6])>,
}

impl Scenario {
    /// Generates the categorized hourly table for the whole plan.
    pub fn hourly_table(&self) -> Vec<HourlyRecord> {
        let mut out = Vec::with_capacity(self.days.len() * 24);
        for (d, day) in self.days.iter().enumerate() {
            let prev_max = if d > 0 { self.days[d - 1].t_max_c } else { day.t_max_c };
            let next_min =
                if d + 1 < self.days.len() { self.days[d + 1].t_min_c } else { day.t_min_c };
            for k in 0..24usize {
                let ts = self.start_utc + Duration::hours((d * 24 + k) as i64);
                let seg = k / 6;
                let t = q2(diurnal_temp(day, prev_max, next_min, k as f64));
                let rh = q1(
                    (day.rh_mean_pct
                        - day.rh_amp_pct
                            * libm::cos(2.0 * core::f64::consts::PI * (k as f64 - 14.0) / 24.0))
                    .clamp(1.0, 100.0),
                );
                let mut wind = day.wind_ms[seg];
                if let Some((od, os, values)) = &self.wind_override {
                    if *od == d && *os == seg {
                        wind = values[k % 6];
                    }
                }
                let wind = q1(wind);
                let precip = q1(segment_hour_precip(day.precip_mm[seg], k % 6));
                let condition = if precip >= 4.0 {
                    502
                } else if precip >= 1.0 {
                    501
                } else if precip > 0.0 {
                    500
                } else {
                    day.dry_condition
                };
                let visibility = if precip >= 4.0 {
                    3500.0
                } else if precip > 0.0 {
                    6000.0
                } else {
                    10_000.0
                };
                out.push(HourlyRecord {
                    ts_utc: ts,
                    condition,
                    t_c: t,
                    t_feel_c: q2(t - 0.2 * wind),
                    dew_point_c: q2(t - (100.0 - rh) / 5.0),
                    rh_pct: rh,
                    wind_ms: wind,
                    wind_dir_deg: day.wind_dir_deg[seg],
                    gust_ms: (day.gust_factor > 1.0).then(|| q1(wind * day.gust_factor)),
                    precip_mm: precip,
                    precip_imputed: false,
                    visibility_m: Some(visibility),
                    pressure_hpa: None,
                    category: None,
                });
            }
        }
        categorize_table(&mut out, &CategorizerThresholds::default());
        out
    }

    /// Builds the agent payload for this scenario.
    pub fn context(&self, requested: RequestedMode) -> ForecastContext {
        let hourly = self.hourly_table();
        let decision =
            select_mode(hourly.len() as u32, requested).expect("scenario horizon in range");
        build_context(
            self.location.clone(),
            Some(self.climatology.clone()),
            hourly,
            decision,
            self.start_utc,
        )
        .expect("scenario contexts are valid by construction")
    }
}

/// Diurnal temperature: minimum at 05:00 local, maximum at 14:00, cosine
/// easing toward the neighbors' extremes overnight.
fn diurnal_temp(day: &DayPlan, prev_max: f64, next_min: f64, h: f64) -> f64 {
    let ease = |frac: f64| (1.0 - libm::cos(core::f64::consts::PI * frac)) / 2.0;
    if h < 5.0 {
        // descending from yesterday's 14:00 maximum (10 h into the fall)
        prev_max + (day.t_min_c - prev_max) * ease((h + 10.0) / 15.0)
    } else if h <= 14.0 {
        day.t_min_c + (day.t_max_c - day.t_min_c) * ease((h - 5.0) / 9.0)
    } else {
        day.t_max_c + (next_min - day.t_max_c) * ease((h - 14.0) / 15.0)
    }
}

/// Spreads a 6-hour precipitation total over its first hours at roughly
/// 3 mm/h, keeping every hourly value on the 0.1 mm grid and the segment
/// sum exact.
fn segment_hour_precip(total: f64, hour_in_segment: usize) -> f64 {
    if total <= 0.0 {
        return 0.0;
    }
    let k = (libm::ceil(total / 3.0) as usize).clamp(1, 6);
    if hour_in_segment >= k {
        return 0.0;
    }
    let per = libm::floor(total / k as f64 * 10.0) / 10.0;
    if hour_in_segment == k - 1 {
        q1(total - per * (k as f64 - 1.0))
    } else {
        per
    }
}

fn clim(source: ClimatologySource, rows: [(f64, f64, f64); 12]) -> MonthlyClimatology {
    MonthlyClimatology {
        months: rows
            .iter()
            .enumerate()
            .map(|(i, (t_min_c, t_max_c, precip_total_mm))| MonthlyNormal {
                month: (i + 1) as u8,
                t_min_c: *t_min_c,
                t_max_c: *t_max_c,
                precip_total_mm: *precip_total_mm,
            })
            .collect(),
        source,
    }
}

/// Cork, Ireland: smooth autumn cooling, light intermittent rain, a
/// S -> W/NW shift mid-window, winds spanning 2 to 7.8 m/s.
pub fn cork() -> Scenario {
    let day = |t_min: f64,
               t_max: f64,
               rh: f64,
               wind: [f64; 4],
               dir: [f64; 4],
               precip: [f64; 4]| DayPlan {
        t_min_c: t_min,
        t_max_c: t_max,
        rh_mean_pct: rh,
        rh_amp_pct: 6.0,
        wind_ms: wind,
        wind_dir_deg: dir,
        precip_mm: precip,
        dry_condition: 803,
        gust_factor: 1.4,
    };
    Scenario {
        location: GeoLocation {
            city: "Cork".into(),
            region: "Munster".into(),
            country: "Ireland".into(),
            latitude: 51.903614,
            longitude: -8.468399,
            elevation_m: 10.0,
            utc_offset_s: 3600,
            description: Some(
                "A port city on Ireland's rugged south coast, at the mouth of the River Lee."
                    .into(),
            ),
        },
        climatology: clim(
            ClimatologySource::Meteostat,
            [
                (3.0, 8.5, 130.0),
                (3.0, 9.0, 100.0),
                (4.0, 10.5, 95.0),
                (5.0, 12.5, 75.0),
                (7.5, 15.0, 80.0),
                (10.0, 17.5, 70.0),
                (12.0, 19.0, 75.0),
                (12.0, 19.0, 90.0),
                (10.5, 17.0, 95.0),
                (8.0, 13.5, 120.0),
                (5.0, 10.5, 115.0),
                (3.5, 9.0, 135.0),
            ],
        ),
        start_utc: Utc.with_ymd_and_hms(2025, 10, 19, 23, 0, 0).unwrap(),
        days: alloc::vec![
            day(9.5, 15.5, 84.0, [3.2, 4.1, 5.0, 4.2], [180.0, 180.0, 182.0, 184.0], [0.0, 0.7, 0.5, 0.0]),
            day(9.0, 14.4, 85.0, [3.0, 3.6, 4.4, 3.8], [185.0, 190.0, 200.0, 210.0], [0.0; 4]),
            day(8.2, 13.0, 86.0, [3.0, 3.4, 5.8, 5.0], [210.0, 215.0, 290.0, 295.0], [0.0, 1.0, 1.6, 0.5]),
            day(7.5, 11.7, 83.0, [4.6, 5.4, 4.8, 4.0], [300.0, 295.0, 290.0, 285.0], [1.2, 2.0, 1.4, 0.8]),
            day(6.8, 10.5, 85.0, [3.5, 3.0, 2.8, 2.5], [290.0, 285.0, 280.0, 285.0], [0.8, 0.0, 0.0, 0.0]),
        ],
        // one segment carries the hand-checked wind set {2..7.8}
        wind_override: Some((3, 1, [2.0, 3.0, 4.0, 5.0, 6.0, 7.8])),
    }
}

/// Manila, Philippines: warm and humid, light infrequent rain, weak
/// E-SE winds, maxima slightly below the climatological mean.
pub fn manila() -> Scenario {
    let day = |t_min: f64,
               t_max: f64,
               rh: f64,
               wind: [f64; 4],
               dir: [f64; 4],
               precip: [f64; 4],
               code: u16| DayPlan {
        t_min_c: t_min,
        t_max_c: t_max,
        rh_mean_pct: rh,
        rh_amp_pct: 11.0,
        wind_ms: wind,
        wind_dir_deg: dir,
        precip_mm: precip,
        dry_condition: code,
        gust_factor: 1.0,
    };
    Scenario {
        location: GeoLocation {
            city: "Manila".into(),
            region: "Metro Manila".into(),
            country: "Philippines".into(),
            latitude: 14.5995,
            longitude: 120.9842,
            elevation_m: 16.0,
            utc_offset_s: 28_800,
            description: Some(
                "Capital of the Philippines, on the eastern shore of Manila Bay.".into(),
            ),
        },
        climatology: clim(
            ClimatologySource::Meteostat,
            [
                (23.0, 30.0, 17.0),
                (23.2, 30.8, 13.0),
                (24.2, 32.2, 16.0),
                (25.5, 33.8, 25.0),
                (26.0, 34.0, 130.0),
                (25.5, 32.8, 255.0),
                (25.0, 31.5, 425.0),
                (25.0, 31.2, 480.0),
                (24.8, 31.2, 350.0),
                (24.5, 31.0, 193.0),
                (24.2, 31.0, 140.0),
                (23.5, 30.2, 65.0),
            ],
        ),
        start_utc: Utc.with_ymd_and_hms(2025, 10, 19, 16, 0, 0).unwrap(),
        days: alloc::vec![
            day(25.4, 31.0, 78.0, [2.6, 3.4, 4.0, 2.8], [95.0, 105.0, 120.0, 110.0], [0.0, 0.0, 2.5, 0.0], 801),
            day(25.8, 30.2, 77.0, [2.4, 3.0, 3.8, 2.6], [100.0, 110.0, 125.0, 115.0], [0.0; 4], 801),
            day(26.0, 27.6, 79.0, [2.8, 3.6, 4.5, 3.2], [105.0, 115.0, 130.0, 120.0], [0.0, 0.0, 3.6, 1.2], 802),
            day(25.9, 31.2, 78.0, [2.5, 3.2, 4.2, 3.0], [98.0, 108.0, 122.0, 112.0], [0.0, 0.0, 1.2, 0.0], 801),
            day(26.9, 31.8, 78.0, [2.2, 3.0, 3.9, 2.7], [92.0, 102.0, 118.0, 108.0], [0.0, 0.4, 0.0, 0.0], 802),
        ],
        wind_override: None,
    }
}

/// Chennai, India: early rain peak tapering off, winds climbing toward
/// (and past, hourly) 10 m/s, an E -> NW direction change, steady cooling.
pub fn chennai() -> Scenario {
    let day = |t_min: f64,
               t_max: f64,
               rh: f64,
               wind: [f64; 4],
               dir: [f64; 4],
               precip: [f64; 4]| DayPlan {
        t_min_c: t_min,
        t_max_c: t_max,
        rh_mean_pct: rh,
        rh_amp_pct: 7.5,
        wind_ms: wind,
        wind_dir_deg: dir,
        precip_mm: precip,
        dry_condition: 804,
        gust_factor: 1.3,
    };
    Scenario {
        location: GeoLocation {
            city: "Chennai".into(),
            region: "Tamil Nadu".into(),
            country: "India".into(),
            latitude: 13.0827,
            longitude: 80.2707,
            elevation_m: 6.0,
            utc_offset_s: 19_800,
            description: Some(
                "Capital of Tamil Nadu on the Coromandel Coast of the Bay of Bengal.".into(),
            ),
        },
        climatology: clim(
            ClimatologySource::Meteostat,
            [
                (21.2, 29.3, 24.0),
                (22.0, 31.0, 7.0),
                (23.8, 33.0, 4.0),
                (26.0, 34.5, 11.0),
                (27.5, 36.8, 52.0),
                (27.2, 36.5, 53.0),
                (26.3, 35.0, 84.0),
                (25.8, 34.5, 124.0),
                (25.5, 34.0, 118.0),
                (24.5, 31.8, 267.0),
                (23.0, 29.5, 309.0),
                (21.8, 28.8, 139.0),
            ],
        ),
        // +05:30 offset: local midnight falls on a half-hour UTC boundary
        start_utc: Utc.with_ymd_and_hms(2025, 10, 19, 18, 30, 0).unwrap(),
        days: alloc::vec![
            day(26.6, 30.7, 84.5, [3.3, 3.6, 4.0, 3.8], [90.0, 92.0, 95.0, 93.0], [12.1, 8.3, 5.2, 2.1]),
            day(25.9, 29.9, 83.0, [4.0, 4.5, 5.2, 4.8], [95.0, 100.0, 105.0, 102.0], [4.2, 4.0, 2.6, 1.2]),
            day(25.2, 28.4, 82.0, [5.0, 5.8, 6.5, 6.0], [105.0, 110.0, 115.0, 112.0], [2.4, 2.0, 1.0, 0.6]),
            day(24.3, 26.8, 81.0, [6.8, 7.5, 8.3, 7.9], [115.0, 120.0, 290.0, 300.0], [0.0, 1.2, 0.8, 0.0]),
            day(23.4, 25.3, 80.5, [8.6, 9.7, 9.3, 9.0], [305.0, 310.0, 315.0, 312.0], [0.0, 0.5, 0.0, 0.0]),
        ],
        // hourly peaks past 10 m/s while the 6 h mean stays at 9.7
        wind_override: Some((4, 1, [9.0, 9.4, 10.8, 10.3, 9.6, 9.1])),
    }
}

/// Da Nang, Vietnam: persistently saturated air, heavy daily totals
/// peaking at 130.4 mm, strengthening winds to 9.2 m/s, and two large
/// direction shifts.
pub fn da_nang() -> Scenario {
    let day = |t_min: f64,
               t_max: f64,
               rh: f64,
               wind: [f64; 4],
               dir: [f64; 4],
               precip: [f64; 4]| DayPlan {
        t_min_c: t_min,
        t_max_c: t_max,
        rh_mean_pct: rh,
        rh_amp_pct: 5.0,
        wind_ms: wind,
        wind_dir_deg: dir,
        precip_mm: precip,
        dry_condition: 804,
        gust_factor: 1.5,
    };
    Scenario {
        location: GeoLocation {
            city: "Da Nang".into(),
            region: "Hai Chau".into(),
            country: "Vietnam".into(),
            latitude: 16.0472,
            longitude: 108.22,
            elevation_m: 7.0,
            utc_offset_s: 25_200,
            description: Some(
                "A coastal city in central Vietnam at the mouth of the Han River.".into(),
            ),
        },
        climatology: clim(
            ClimatologySource::Meteostat,
            [
                (18.5, 24.8, 96.0),
                (19.8, 26.1, 33.0),
                (21.5, 28.7, 22.0),
                (23.3, 31.0, 27.0),
                (24.5, 33.4, 63.0),
                (25.5, 33.9, 87.0),
                (25.3, 34.3, 86.0),
                (25.5, 33.9, 103.0),
                (24.1, 31.5, 350.0),
                (23.2, 29.5, 612.0),
                (22.6, 27.0, 366.0),
                (19.9, 24.8, 199.0),
            ],
        ),
        start_utc: Utc.with_ymd_and_hms(2025, 10, 19, 17, 0, 0).unwrap(),
        days: alloc::vec![
            day(24.0, 27.5, 88.0, [5.0, 5.6, 6.2, 5.8], [40.0, 45.0, 50.0, 45.0], [8.0, 10.2, 12.4, 7.4]),
            day(23.8, 26.8, 90.0, [6.4, 7.0, 7.8, 7.2], [50.0, 55.0, 120.0, 125.0], [12.0, 15.5, 16.5, 11.0]),
            day(23.5, 26.1, 91.0, [8.0, 8.8, 9.2, 8.6], [130.0, 135.0, 140.0, 138.0], [15.1, 20.0, 21.0, 14.0]),
            day(23.2, 25.6, 90.0, [8.2, 8.8, 9.0, 8.4], [140.0, 70.0, 65.0, 60.0], [28.4, 38.0, 40.0, 24.0]),
            day(23.4, 25.9, 88.0, [6.0, 5.2, 4.6, 4.0], [60.0, 55.0, 50.0, 45.0], [8.5, 7.0, 4.5, 2.5]),
        ],
        wind_override: None,
    }
}

/// The four scenarios, in the order they are usually reported.
pub fn all_scenarios() -> Vec<(&'static str, Scenario)> {
    alloc::vec![
        ("cork", cork()),
        ("manila", manila()),
        ("chennai", chennai()),
        ("da_nang", da_nang()),
    ]
}

// ---------------------------------------------------------------------
// Deterministic pseudo-random generators (xorshift64*), used by the
// property suites. No external RNG so `no_std` builds stay lean and the
// streams are bit-stable across platforms.
// ---------------------------------------------------------------------

/// Tiny deterministic RNG for fixture generation.
#[derive(Debug, Clone)]
pub struct Rng64(u64);

impl Rng64 {
    pub fn new(seed: u64) -> Self {
        Self(seed.max(1))
    }

    pub fn next_u64(&mut self) -> u64 {
        let mut x = self.0;
        x ^= x >> 12;
        x ^= x << 25;
        x ^= x >> 27;
        self.0 = x;
        x.wrapping_mul(0x2545_F491_4F6C_DD1D)
    }

    /// Uniform in [0, 1).
    pub fn f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 / (1u64 << 53) as f64
    }

    pub fn range(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.f64()
    }

    pub fn usize_below(&mut self, n: usize) -> usize {
        (self.next_u64() % n as u64) as usize
    }

    pub fn chance(&mut self, p: f64) -> bool {
        self.f64() < p
    }
}

/// A random but physically plausible hourly table: trending temperature,
/// rain regimes with occasional extremes, occasional gusts and missing
/// visibility, categories assigned.
pub fn random_hourly_table(seed: u64, hours: usize) -> Vec<HourlyRecord> {
    let mut rng = Rng64::new(seed);
    let start = Utc.with_ymd_and_hms(2025, 10, 19, 0, 0, 0).unwrap()
        + Duration::hours(rng.usize_below(24) as i64);
    let mut t = rng.range(-5.0, 32.0);
    let mut dir = rng.range(0.0, 360.0);
    let mut wind = rng.range(0.5, 8.0);
    let mut rain_left = 0usize;
    let mut rain_rate = 0.0;
    let mut out = Vec::with_capacity(hours);
    for h in 0..hours {
        t += rng.range(-0.8, 0.8) + 0.9 * libm::sin((h as f64 - 9.0) / 24.0 * core::f64::consts::TAU);
        wind = (wind + rng.range(-1.2, 1.2)).clamp(0.0, 18.0);
        dir = (dir + rng.range(-40.0, 40.0)).rem_euclid(360.0);
        if rain_left == 0 && rng.chance(0.08) {
            rain_left = 1 + rng.usize_below(12);
            rain_rate = if rng.chance(0.15) { rng.range(4.0, 15.0) } else { rng.range(0.1, 3.5) };
        }
        let precip = if rain_left > 0 {
            rain_left -= 1;
            q1(rain_rate * rng.range(0.6, 1.4))
        } else {
            0.0
        };
        let rh = q1(rng.range(25.0, 100.0).max(if precip > 0.0 { 70.0 } else { 25.0 }));
        let t_c = q2(t);
        let cold = t_c <= 0.0;
        let condition = if precip > 0.0 {
            if cold {
                601
            } else if rng.chance(0.05) {
                211
            } else if precip >= 4.0 {
                502
            } else if precip >= 1.0 {
                501
            } else {
                500
            }
        } else if rng.chance(0.04) {
            741
        } else {
            [800u16, 801, 802, 803, 804][rng.usize_below(5)]
        };
        let visibility = if rng.chance(0.05) {
            None
        } else if condition == 741 {
            Some(q1(rng.range(200.0, 900.0)))
        } else if precip > 0.0 {
            Some(q1(rng.range(2000.0, 9000.0)))
        } else {
            Some(q1(rng.range(7000.0, 10_000.0)))
        };
        out.push(HourlyRecord {
            ts_utc: start + Duration::hours(h as i64),
            condition,
            t_c,
            t_feel_c: q2(t_c - 0.2 * wind),
            dew_point_c: q2(t_c - (100.0 - rh) / 5.0),
            rh_pct: rh,
            wind_ms: q1(wind),
            wind_dir_deg: q1(dir).rem_euclid(360.0),
            gust_ms: rng.chance(0.3).then(|| q1(wind * rng.range(1.2, 1.9))),
            precip_mm: precip,
            precip_imputed: precip == 0.0 && rng.chance(0.2),
            visibility_m: visibility,
            pressure_hpa: rng.chance(0.15).then(|| q1(rng.range(985.0, 1035.0))),
            category: None,
        });
    }
    categorize_table(&mut out, &CategorizerThresholds::default());
    out
}

/// A random location with an offset loosely tied to longitude.
pub fn random_location(rng: &mut Rng64) -> GeoLocation {
    let longitude = q2(rng.range(-180.0, 180.0));
    let base_offset = libm::round(longitude / 15.0) as i32 * 3600;
    let offset = if rng.chance(0.15) { base_offset + 1800 } else { base_offset };
    GeoLocation {
        city: format!("Testville-{}", rng.usize_below(1000)),
        region: String::from("Test Region"),
        country: String::from("Testland"),
        latitude: q2(rng.range(-60.0, 60.0)),
        longitude,
        elevation_m: q1(rng.range(0.0, 800.0)),
        utc_offset_s: offset.clamp(-50_400, 50_400),
        description: rng
            .chance(0.3)
            .then(|| String::from("A small coastal town by the sea.")),
    }
}

/// Random but self-consistent monthly normals.
pub fn random_climatology(rng: &mut Rng64) -> MonthlyClimatology {
    let base = rng.range(-2.0, 26.0);
    let months = (1..=12u8)
        .map(|m| {
            let seasonal = 8.0 * libm::sin((m as f64 - 1.0) / 12.0 * core::f64::consts::TAU);
            let t_min = q2(base + seasonal - rng.range(2.0, 6.0));
            MonthlyNormal {
                month: m,
                t_min_c: t_min,
                t_max_c: q2(t_min + rng.range(4.0, 12.0)),
                precip_total_mm: q1(rng.range(5.0, 400.0)),
            }
        })
        .collect();
    MonthlyClimatology { months, source: ClimatologySource::Meteostat }
}

/// A random hierarchical context (the deterministic analyst's input
/// shape): random location, usually a climatology, horizons across the
/// whole supported band.
pub fn random_context(seed: u64) -> ForecastContext {
    let mut rng = Rng64::new(seed ^ 0x9E37_79B9_7F4A_7C15);
    let horizons = [24u32, 36, 48, 72, 96, 100, 120, 144, 168, 192, 216, 240];
    let horizon = horizons[rng.usize_below(horizons.len())];
    let location = random_location(&mut rng);
    let climatology = (!rng.chance(0.1)).then(|| random_climatology(&mut rng));
    let hourly = random_hourly_table(seed, horizon as usize);
    let issued_at = hourly[0].ts_utc;
    let decision = select_mode(horizon, RequestedMode::Auto).expect("horizon in range");
    build_context(location, climatology, hourly, decision, issued_at)
        .expect("random tables are grid-valid")
}
