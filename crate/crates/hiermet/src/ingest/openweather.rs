//! One Call client and normalizers. The API version ("2.5" vs "3.0") is
//! configuration; each version has its own normalizer behind the shared
//! [`ForecastFetch`] result shape.

use chrono::{DateTime, Utc};
use serde_json::Value;

use hiermet_core::model::HourlyRecord;

use super::{classify_horizon, request_with_retries, Ingestor, SourceName, SourceStatus};
use crate::error::PipelineError;

/// A normalized forecast fetch: SI records on the strict hourly grid.
pub struct ForecastFetch {
    pub records: Vec<HourlyRecord>,
    pub utc_offset_s: i32,
    pub imputed_hours: usize,
    pub raw: Vec<u8>,
}

pub async fn fetch_hourly_forecast(
    ing: &Ingestor,
    api_key: &str,
    lat: f64,
    lon: f64,
    horizon_h: u32,
    strict_horizon: bool,
) -> Result<(ForecastFetch, SourceStatus), PipelineError> {
    let version = ing.sources.openweather_version.clone();
    let url = format!(
        "{}/data/{}/onecall",
        ing.sources.openweather_base.trim_end_matches('/'),
        version
    );
    let (body, attempts) = request_with_retries(&ing.client, &ing.retry, || {
        ing.client.get(&url).query(&[
            ("lat", lat.to_string()),
            ("lon", lon.to_string()),
            ("exclude", "minutely,daily,alerts".to_string()),
            ("units", "standard".to_string()),
            ("appid", api_key.to_string()),
        ])
    })
    .await;

    let body = body.map_err(|e| PipelineError::Source {
        source_status: SourceStatus::failed(SourceName::Openweather, attempts),
        message: format!("hourly forecast fetch failed: {}", e.message()),
    })?;

    let raw: Value = serde_json::from_slice(&body)?;
    let normalized = match version.as_str() {
        "2.5" => normalize_hourly_v25(&raw, horizon_h)?,
        _ => normalize_hourly_v30(&raw, horizon_h)?,
    };
    let (status, records) =
        classify_horizon(normalized.records, horizon_h, strict_horizon, attempts)?;

    Ok((
        ForecastFetch {
            records,
            utc_offset_s: normalized.utc_offset_s,
            imputed_hours: normalized.imputed_hours,
            raw: body,
        },
        status,
    ))
}

pub struct Normalized {
    pub records: Vec<HourlyRecord>,
    pub utc_offset_s: i32,
    pub imputed_hours: usize,
}

/// One Call 3.0: hourly rows under `hourly`, Kelvin temperatures,
/// precipitation in `rain/snow {"1h": mm}` objects.
pub fn normalize_hourly_v30(raw: &Value, horizon_h: u32) -> Result<Normalized, PipelineError> {
    normalize_shared(raw, horizon_h, false)
}

/// One Call 2.5: same shape, except legacy responses may carry `rain`
/// or `snow` as a bare number.
pub fn normalize_hourly_v25(raw: &Value, horizon_h: u32) -> Result<Normalized, PipelineError> {
    normalize_shared(raw, horizon_h, true)
}

fn normalize_shared(
    raw: &Value,
    horizon_h: u32,
    bare_precip_numbers: bool,
) -> Result<Normalized, PipelineError> {
    let utc_offset_s = raw
        .get("timezone_offset")
        .and_then(Value::as_i64)
        .unwrap_or(0) as i32;
    let hours = raw
        .get("hourly")
        .and_then(Value::as_array)
        .ok_or_else(|| PipelineError::Other("response has no hourly array".into()))?;

    let mut records = Vec::with_capacity(hours.len().min(horizon_h as usize));
    let mut imputed_hours = 0usize;
    for (i, hour) in hours.iter().enumerate().take(horizon_h as usize) {
        let field = |name: &str| -> Result<f64, PipelineError> {
            hour.get(name).and_then(Value::as_f64).ok_or_else(|| {
                PipelineError::Other(format!("hourly[{i}].{name}: missing or not a number"))
            })
        };
        let ts = hour.get("dt").and_then(Value::as_i64).ok_or_else(|| {
            PipelineError::Other(format!("hourly[{i}].dt: missing or not an integer"))
        })?;
        let ts_utc: DateTime<Utc> = DateTime::from_timestamp(ts, 0)
            .ok_or_else(|| PipelineError::Other(format!("hourly[{i}].dt: invalid timestamp")))?;

        let condition = hour
            .get("weather")
            .and_then(Value::as_array)
            .and_then(|w| w.first())
            .and_then(|w| w.get("id"))
            .and_then(Value::as_u64)
            .ok_or_else(|| {
                PipelineError::Other(format!("hourly[{i}].weather[0].id: missing condition code"))
            })? as u16;

        let precip_of = |name: &str| -> Option<f64> {
            let v = hour.get(name)?;
            if let Some(mm) = v.get("1h").and_then(Value::as_f64) {
                Some(mm)
            } else if bare_precip_numbers {
                v.as_f64()
            } else {
                None
            }
        };
        let rain = precip_of("rain");
        let snow = precip_of("snow");
        let imputed = rain.is_none() && snow.is_none();
        if imputed {
            imputed_hours += 1;
        }
        let precip_mm = q1(rain.unwrap_or(0.0) + snow.unwrap_or(0.0));

        records.push(HourlyRecord {
            ts_utc,
            condition,
            t_c: q2(kelvin_to_c(field("temp")?)),
            t_feel_c: q2(kelvin_to_c(field("feels_like")?)),
            dew_point_c: q2(kelvin_to_c(field("dew_point")?)),
            rh_pct: field("humidity")?,
            wind_ms: q1(field("wind_speed")?),
            wind_dir_deg: field("wind_deg")?.rem_euclid(360.0),
            gust_ms: hour.get("wind_gust").and_then(Value::as_f64).map(q1),
            precip_mm,
            precip_imputed: imputed,
            visibility_m: hour.get("visibility").and_then(Value::as_f64),
            pressure_hpa: hour.get("pressure").and_then(Value::as_f64),
            category: None,
        });
    }

    if records.is_empty() {
        return Err(PipelineError::Other("provider returned no hourly rows".into()));
    }
    for i in 1..records.len() {
        let gap = (records[i].ts_utc - records[i - 1].ts_utc).num_seconds();
        if gap != 3600 {
            return Err(PipelineError::Other(format!(
                "non-contiguous hourly grid at index {i}: {gap} s step"
            )));
        }
    }
    Ok(Normalized { records, utc_offset_s, imputed_hours })
}

fn kelvin_to_c(k: f64) -> f64 {
    k - 273.15
}

fn q2(x: f64) -> f64 {
    (x * 100.0).round() / 100.0
}

fn q1(x: f64) -> f64 {
    (x * 10.0).round() / 10.0
}
