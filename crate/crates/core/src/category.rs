//! Rule-based assignment of a compact weather category per hour.
//!
//! The provider condition code is authoritative for the phenomenon type
//! (snow stays snow no matter the amount); precipitation thresholds
//! refine intensity only. Priority when rules overlap:
//! thunderstorm > snow > heavy_rain > rain > drizzle > light_rain >
//! fog > overcast > partly_cloudy > clear.

use serde::{Deserialize, Serialize};

use crate::model::{HourlyRecord, WeatherCategory};

/// Intensity thresholds; loaded from the config key
/// `categorizer.thresholds`, defaults below.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct CategorizerThresholds {
    /// Hourly precipitation at or above this is heavy rain, mm/h.
    pub heavy_rain_mm_per_h: f64,
    /// Hourly precipitation at or above this is rain, mm/h.
    pub rain_mm_per_h: f64,
    /// Visibility below this (with a dry hour) is fog, meters.
    pub fog_visibility_m: f64,
}

impl Default for CategorizerThresholds {
    fn default() -> Self {
        Self { heavy_rain_mm_per_h: 4.0, rain_mm_per_h: 1.0, fog_visibility_m: 1000.0 }
    }
}

/// Phenomenon family derived from an OpenWeather-style condition code.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Phenomenon {
    Thunderstorm, // 2xx
    Drizzle,      // 3xx
    Rain,         // 5xx
    Snow,         // 6xx
    Fog,          // 701 mist, 741 fog
    Obscured,     // remaining 7xx obscurants
    Clear,        // 800
    PartlyCloudy, // 801-802
    Overcast,     // 803-804
    Unknown,
}

fn phenomenon(code: u16) -> Phenomenon {
    match code {
        200..=299 => Phenomenon::Thunderstorm,
        300..=399 => Phenomenon::Drizzle,
        500..=599 => Phenomenon::Rain,
        600..=699 => Phenomenon::Snow,
        701 | 741 => Phenomenon::Fog,
        700..=799 => Phenomenon::Obscured,
        800 => Phenomenon::Clear,
        801 | 802 => Phenomenon::PartlyCloudy,
        803 | 804 => Phenomenon::Overcast,
        _ => Phenomenon::Unknown,
    }
}

/// Maps one hour to exactly one category.
pub fn categorize_hour(rec: &HourlyRecord, thresholds: &CategorizerThresholds) -> WeatherCategory {
    let ph = phenomenon(rec.condition);

    // Phenomenon overrides: a provider thunderstorm or snow code wins
    // regardless of measured amounts.
    match ph {
        Phenomenon::Thunderstorm => return WeatherCategory::Thunderstorm,
        Phenomenon::Snow => return WeatherCategory::Snow,
        _ => {}
    }

    if rec.precip_mm > 0.0 {
        return if rec.precip_mm >= thresholds.heavy_rain_mm_per_h {
            WeatherCategory::HeavyRain
        } else if rec.precip_mm >= thresholds.rain_mm_per_h {
            WeatherCategory::Rain
        } else if ph == Phenomenon::Drizzle {
            WeatherCategory::Drizzle
        } else {
            WeatherCategory::LightRain
        };
    }

    // Dry hour: a liquid-precipitation code still reports the phenomenon
    // at its lightest intensity.
    match ph {
        Phenomenon::Drizzle => return WeatherCategory::Drizzle,
        Phenomenon::Rain => return WeatherCategory::LightRain,
        _ => {}
    }

    let foggy = ph == Phenomenon::Fog
        || rec.visibility_m.is_some_and(|v| v < thresholds.fog_visibility_m);
    if foggy {
        return WeatherCategory::Fog;
    }

    match ph {
        Phenomenon::Overcast | Phenomenon::Obscured => WeatherCategory::Overcast,
        Phenomenon::PartlyCloudy | Phenomenon::Unknown => WeatherCategory::PartlyCloudy,
        Phenomenon::Clear => WeatherCategory::Clear,
        // precipitation/fog families were handled above
        _ => WeatherCategory::Clear,
    }
}

/// Assigns categories across a whole table.
pub fn categorize_table(table: &mut [HourlyRecord], thresholds: &CategorizerThresholds) {
    for rec in table.iter_mut() {
        rec.category = Some(categorize_hour(rec, thresholds));
    }
}

/// Rank of the liquid-precipitation intensity ladder a category sits on;
/// used by the monotonicity property test. Phenomenon-pinned categories
/// (snow, thunderstorm) are not on the ladder.
pub fn precip_intensity_rank(cat: WeatherCategory) -> Option<u8> {
    match cat {
        WeatherCategory::Clear
        | WeatherCategory::PartlyCloudy
        | WeatherCategory::Overcast
        | WeatherCategory::Fog => Some(0),
        WeatherCategory::Drizzle => Some(1),
        WeatherCategory::LightRain => Some(2),
        WeatherCategory::Rain => Some(3),
        WeatherCategory::HeavyRain => Some(4),
        WeatherCategory::Snow | WeatherCategory::Thunderstorm => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use chrono::{TimeZone, Utc};

    fn rec(condition: u16, precip_mm: f64, visibility_m: Option<f64>) -> HourlyRecord {
        HourlyRecord {
            ts_utc: Utc.with_ymd_and_hms(2025, 10, 20, 0, 0, 0).unwrap(),
            condition,
            t_c: 12.0,
            t_feel_c: 12.0,
            dew_point_c: 8.0,
            rh_pct: 75.0,
            wind_ms: 3.0,
            wind_dir_deg: 200.0,
            gust_ms: None,
            precip_mm,
            precip_imputed: false,
            visibility_m,
            pressure_hpa: None,
            category: None,
        }
    }

    #[test]
    fn clear_dry_hour() {
        let t = CategorizerThresholds::default();
        assert_eq!(categorize_hour(&rec(800, 0.0, Some(10_000.0)), &t), WeatherCategory::Clear);
    }

    #[test]
    fn heavy_rain_threshold_breach() {
        let t = CategorizerThresholds::default();
        assert_eq!(categorize_hour(&rec(501, 5.5, Some(4_000.0)), &t), WeatherCategory::HeavyRain);
    }

    #[test]
    fn low_visibility_dry_hour_is_fog() {
        let t = CategorizerThresholds::default();
        assert_eq!(categorize_hour(&rec(804, 0.0, Some(600.0)), &t), WeatherCategory::Fog);
    }

    #[test]
    fn thunderstorm_code_wins_over_amount() {
        let t = CategorizerThresholds::default();
        assert_eq!(categorize_hour(&rec(211, 0.2, Some(8_000.0)), &t), WeatherCategory::Thunderstorm);
    }

    #[test]
    fn snow_code_pins_the_phenomenon() {
        let t = CategorizerThresholds::default();
        assert_eq!(categorize_hour(&rec(601, 6.0, Some(2_000.0)), &t), WeatherCategory::Snow);
    }

    #[test]
    fn drizzle_escalates_with_amount() {
        let t = CategorizerThresholds::default();
        assert_eq!(categorize_hour(&rec(301, 0.4, Some(6_000.0)), &t), WeatherCategory::Drizzle);
        assert_eq!(categorize_hour(&rec(301, 1.5, Some(6_000.0)), &t), WeatherCategory::Rain);
        assert_eq!(categorize_hour(&rec(301, 4.0, Some(6_000.0)), &t), WeatherCategory::HeavyRain);
    }

    #[test]
    fn rain_code_with_imputed_zero_is_light_rain() {
        let t = CategorizerThresholds::default();
        assert_eq!(categorize_hour(&rec(500, 0.0, Some(9_000.0)), &t), WeatherCategory::LightRain);
    }

    #[test]
    fn cloud_codes_split_partly_and_overcast() {
        let t = CategorizerThresholds::default();
        assert_eq!(categorize_hour(&rec(802, 0.0, Some(10_000.0)), &t), WeatherCategory::PartlyCloudy);
        assert_eq!(categorize_hour(&rec(804, 0.0, Some(10_000.0)), &t), WeatherCategory::Overcast);
    }

    #[test]
    fn monotone_in_precipitation() {
        let t = CategorizerThresholds::default();
        for code in [300, 500, 741, 800, 802, 804] {
            let mut last_rank = 0;
            for precip in [0.0, 0.2, 0.9, 1.0, 2.5, 4.0, 9.0] {
                let cat = categorize_hour(&rec(code, precip, Some(5_000.0)), &t);
                let rank = precip_intensity_rank(cat).expect("liquid ladder");
                assert!(rank >= last_rank, "code {code}: rank dropped at {precip}");
                last_rank = rank;
            }
        }
    }
}
