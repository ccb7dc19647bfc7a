//! Meteostat climatology client: point normals first, monthly-aggregate
//! means as the in-service fallback. Both normalizers tolerate nulls and
//! enforce the 12-complete-months contract before the data is accepted.

use std::collections::BTreeMap;

use serde_json::Value;

use hiermet_core::model::{ClimatologySource, MonthlyClimatology, MonthlyNormal};

use super::{codes, request_with_retries, Ingestor, RawResponse, SourceName, SourceStatus};

/// Fetches normals, falling back to a 10-year mean of monthly
/// aggregates. Errors come back as the failed status so the caller can
/// continue down the fallback chain.
pub async fn fetch(
    ing: &Ingestor,
    api_key: Option<&str>,
    lat: f64,
    lon: f64,
) -> Result<(MonthlyClimatology, SourceStatus, Vec<RawResponse>), SourceStatus> {
    let base = ing.sources.meteostat_base.trim_end_matches('/');
    let mut raws = Vec::new();

    let normals_url = format!("{base}/point/normals");
    let (body, attempts) = request_with_retries(&ing.client, &ing.retry, || {
        let mut req = ing
            .client
            .get(&normals_url)
            .query(&[("lat", lat.to_string()), ("lon", lon.to_string())]);
        if let Some(key) = api_key {
            req = req.header("x-api-key", key);
        }
        req
    })
    .await;

    if let Ok(body) = body {
        if let Ok(clim) = normalize_normals(&body) {
            raws.push(("meteostat_normals.json".to_string(), body));
            return Ok((clim, SourceStatus::ok(SourceName::Meteostat, attempts), raws));
        }
        raws.push(("meteostat_normals.json".to_string(), body));
    }

    // Normals unavailable or incomplete: mean of the last 10 years of
    // monthly aggregates.
    let monthly_url = format!("{base}/point/monthly");
    let (body, attempts2) = request_with_retries(&ing.client, &ing.retry, || {
        let mut req = ing.client.get(&monthly_url).query(&[
            ("lat", lat.to_string()),
            ("lon", lon.to_string()),
            ("start", "2015-01-01".to_string()),
            ("end", "2024-12-31".to_string()),
        ]);
        if let Some(key) = api_key {
            req = req.header("x-api-key", key);
        }
        req
    })
    .await;

    match body {
        Ok(body) => match normalize_monthly_mean(&body) {
            Ok(clim) => {
                raws.push(("meteostat_monthly.json".to_string(), body));
                Ok((
                    clim,
                    SourceStatus::degraded(
                        SourceName::Meteostat,
                        codes::CLIM_MONTHLY_MEAN,
                        attempts + attempts2,
                    ),
                    raws,
                ))
            }
            Err(_) => Err(SourceStatus::failed(SourceName::Meteostat, attempts + attempts2)),
        },
        Err(_) => Err(SourceStatus::failed(SourceName::Meteostat, attempts + attempts2)),
    }
}

/// Parses a `point/normals` response: `data: [{month, tmin, tmax, prcp}]`.
pub fn normalize_normals(body: &[u8]) -> Result<MonthlyClimatology, String> {
    let raw: Value = serde_json::from_slice(body).map_err(|e| e.to_string())?;
    let rows = raw
        .get("data")
        .and_then(Value::as_array)
        .ok_or_else(|| "normals response has no data array".to_string())?;

    let mut months = Vec::new();
    for row in rows {
        let month = row.get("month").and_then(Value::as_u64);
        let tmin = row.get("tmin").and_then(Value::as_f64);
        let tmax = row.get("tmax").and_then(Value::as_f64);
        let prcp = row.get("prcp").and_then(Value::as_f64);
        if let (Some(m), Some(tmin), Some(tmax), Some(prcp)) = (month, tmin, tmax, prcp) {
            if (1..=12).contains(&m) {
                months.push(MonthlyNormal {
                    month: m as u8,
                    t_min_c: tmin,
                    t_max_c: tmax,
                    precip_total_mm: prcp,
                });
            }
        }
    }
    complete(months, ClimatologySource::Meteostat)
}

/// Parses a `point/monthly` response and averages each calendar month
/// across the requested years.
pub fn normalize_monthly_mean(body: &[u8]) -> Result<MonthlyClimatology, String> {
    let raw: Value = serde_json::from_slice(body).map_err(|e| e.to_string())?;
    let rows = raw
        .get("data")
        .and_then(Value::as_array)
        .ok_or_else(|| "monthly response has no data array".to_string())?;

    let mut acc: BTreeMap<u8, (f64, f64, f64, usize)> = BTreeMap::new();
    for row in rows {
        // rows carry either {"date": "2020-03-01", ...} or {"month": 3, ...}
        let month = row
            .get("month")
            .and_then(Value::as_u64)
            .map(|m| m as u8)
            .or_else(|| {
                row.get("date")
                    .and_then(Value::as_str)
                    .and_then(|d| d.split('-').nth(1))
                    .and_then(|m| m.parse::<u8>().ok())
            });
        let tmin = row.get("tmin").and_then(Value::as_f64);
        let tmax = row.get("tmax").and_then(Value::as_f64);
        let prcp = row.get("prcp").and_then(Value::as_f64);
        if let (Some(m), Some(tmin), Some(tmax), Some(prcp)) = (month, tmin, tmax, prcp) {
            if (1..=12).contains(&m) {
                let e = acc.entry(m).or_insert((0.0, 0.0, 0.0, 0));
                e.0 += tmin;
                e.1 += tmax;
                e.2 += prcp;
                e.3 += 1;
            }
        }
    }

    let months = acc
        .into_iter()
        .map(|(m, (tmin, tmax, prcp, n))| MonthlyNormal {
            month: m,
            t_min_c: round2(tmin / n as f64),
            t_max_c: round2(tmax / n as f64),
            precip_total_mm: round1(prcp / n as f64),
        })
        .collect();
    complete(months, ClimatologySource::Meteostat)
}

fn complete(
    months: Vec<MonthlyNormal>,
    source: ClimatologySource,
) -> Result<MonthlyClimatology, String> {
    for m in 1..=12u8 {
        if !months.iter().any(|x| x.month == m) {
            return Err(format!("month {m} missing or incomplete"));
        }
    }
    if months.len() != 12 {
        return Err(format!("expected 12 months, got {}", months.len()));
    }
    Ok(MonthlyClimatology { months, source })
}

fn round2(x: f64) -> f64 {
    (x * 100.0).round() / 100.0
}

fn round1(x: f64) -> f64 {
    (x * 10.0).round() / 10.0
}
