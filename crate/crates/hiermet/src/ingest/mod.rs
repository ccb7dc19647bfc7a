//! External-data ingestion: location metadata, hourly forecasts, and
//! climatology, with bounded retries, strict fallback order, and
//! explicit degradation codes.

pub mod era5;
pub mod geocode;
pub mod meteostat;
pub mod openweather;

use std::time::Duration;

use serde::{Deserialize, Serialize};

use hiermet_core::model::{GeoLocation, HourlyRecord, MonthlyClimatology};

use crate::config::{RetryConfig, SourcesConfig, ENV_METEOSTAT_KEY, ENV_OPENWEATHER_KEY};
use crate::error::PipelineError;

/// Which external service a status line talks about.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SourceName {
    Openweather,
    Meteostat,
    Era5Fallback,
    Wikipedia,
    /// The remote analysis/writer backend; present so provider failures
    /// surface through the same status channel as data sources.
    LlmProvider,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SourceOutcome {
    Ok,
    Degraded,
    Failed,
}

/// Outcome of consulting one source. Degraded outcomes always carry a
/// machine-readable code.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SourceStatus {
    pub source: SourceName,
    pub outcome: SourceOutcome,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub degradation_code: Option<String>,
    pub attempts: u32,
}

impl SourceStatus {
    pub fn ok(source: SourceName, attempts: u32) -> Self {
        Self { source, outcome: SourceOutcome::Ok, degradation_code: None, attempts }
    }

    pub fn degraded(source: SourceName, code: &str, attempts: u32) -> Self {
        Self {
            source,
            outcome: SourceOutcome::Degraded,
            degradation_code: Some(code.to_string()),
            attempts,
        }
    }

    pub fn failed(source: SourceName, attempts: u32) -> Self {
        Self { source, outcome: SourceOutcome::Failed, degradation_code: None, attempts }
    }
}

/// Degradation codes used across the pipeline.
pub mod codes {
    pub const CLIM_FALLBACK_ERA5: &str = "CLIM_FALLBACK_ERA5";
    pub const CLIM_MONTHLY_MEAN: &str = "CLIM_MONTHLY_MEAN";
    pub const CLIM_ABSENT: &str = "CLIM_ABSENT";
    pub const GEO_COORDINATE_LABEL: &str = "GEO_COORDINATE_LABEL";
    pub const ELEVATION_UNAVAILABLE: &str = "ELEVATION_UNAVAILABLE";
    pub const DESCRIPTION_UNAVAILABLE: &str = "DESCRIPTION_UNAVAILABLE";
    pub const SHORT_HORIZON: &str = "SHORT_HORIZON";
    pub const PRECIP_IMPUTED: &str = "PRECIP_IMPUTED";
    pub const WRITER_FACT_DRIFT: &str = "WRITER_FACT_DRIFT";
    pub const WRITER_PROVIDER_FALLBACK: &str = "WRITER_PROVIDER_FALLBACK";
}

/// A fetch failure, classified for the retry policy.
#[derive(Debug)]
pub enum FetchError {
    Timeout,
    Status(u16),
    Network(String),
    Parse(String),
}

impl FetchError {
    /// Retry only on timeouts and 5xx responses.
    fn transient(&self) -> bool {
        match self {
            FetchError::Timeout => true,
            FetchError::Status(code) => (500..600).contains(code),
            _ => false,
        }
    }

    pub fn message(&self) -> String {
        match self {
            FetchError::Timeout => "request timed out".into(),
            FetchError::Status(code) => format!("HTTP status {code}"),
            FetchError::Network(m) => format!("network error: {m}"),
            FetchError::Parse(m) => format!("response parse error: {m}"),
        }
    }
}

fn classify(err: reqwest::Error) -> FetchError {
    if err.is_timeout() {
        FetchError::Timeout
    } else if let Some(status) = err.status() {
        FetchError::Status(status.as_u16())
    } else {
        FetchError::Network(err.to_string())
    }
}

/// Sends a request with the retry policy: `max_attempts` tries, exponential
/// backoff from `initial_backoff_ms`, retrying only timeouts and 5xx.
/// Returns the verbatim body bytes and the attempt count.
pub async fn request_with_retries(
    client: &reqwest::Client,
    retry: &RetryConfig,
    build: impl Fn() -> reqwest::RequestBuilder,
) -> (Result<Vec<u8>, FetchError>, u32) {
    let mut attempts = 0;
    let mut backoff = Duration::from_millis(retry.initial_backoff_ms);
    loop {
        attempts += 1;
        let outcome = async {
            let resp = build()
                .timeout(Duration::from_secs(retry.timeout_s))
                .send()
                .await
                .map_err(classify)?;
            let status = resp.status();
            if !status.is_success() {
                return Err(FetchError::Status(status.as_u16()));
            }
            resp.bytes().await.map(|b| b.to_vec()).map_err(classify)
        }
        .await;

        match outcome {
            Ok(body) => return (Ok(body), attempts),
            Err(e) if e.transient() && attempts < retry.max_attempts => {
                tokio::time::sleep(backoff).await;
                backoff *= 2;
            }
            Err(e) => return (Err(e), attempts),
        }
    }
}

/// Applies the `strict_horizon` contract to a normalized grid: a short
/// grid either rejects the fetch or proceeds degraded.
pub(crate) fn classify_horizon(
    records: Vec<hiermet_core::model::HourlyRecord>,
    horizon_h: u32,
    strict: bool,
    attempts: u32,
) -> Result<(SourceStatus, Vec<hiermet_core::model::HourlyRecord>), PipelineError> {
    if (records.len() as u32) < horizon_h {
        if strict {
            return Err(PipelineError::Source {
                source_status: SourceStatus::failed(SourceName::Openweather, attempts),
                message: format!(
                    "provider returned {} rows for a {} h request (strict_horizon)",
                    records.len(),
                    horizon_h
                ),
            });
        }
        return Ok((
            SourceStatus::degraded(SourceName::Openweather, codes::SHORT_HORIZON, attempts),
            records,
        ));
    }
    Ok((SourceStatus::ok(SourceName::Openweather, attempts), records))
}

/// One named raw response body, persisted verbatim for replay.
pub type RawResponse = (String, Vec<u8>);

/// Everything the coordinate pipeline fetched for one request.
pub struct IngestBundle {
    pub location: GeoLocation,
    pub hourly: Vec<HourlyRecord>,
    pub climatology: Option<MonthlyClimatology>,
    pub statuses: Vec<SourceStatus>,
    pub raw_responses: Vec<RawResponse>,
    /// Source identifiers that feed the content-addressed cache key.
    pub source_ids: Vec<String>,
    pub imputed_hours: usize,
}

/// The ingestion client. Holds the HTTP connection pool, which is safe
/// for concurrent use; fetches for the three source groups run
/// concurrently.
pub struct Ingestor {
    pub client: reqwest::Client,
    pub sources: SourcesConfig,
    pub retry: RetryConfig,
}

impl Ingestor {
    pub fn new(client: reqwest::Client, sources: SourcesConfig, retry: RetryConfig) -> Self {
        Self { client, sources, retry }
    }

    fn openweather_key(&self) -> Result<String, PipelineError> {
        std::env::var(ENV_OPENWEATHER_KEY).map_err(|_| {
            PipelineError::Config(format!("{ENV_OPENWEATHER_KEY} is not set"))
        })
    }

    fn meteostat_key(&self) -> Option<String> {
        std::env::var(ENV_METEOSTAT_KEY).ok()
    }

    /// Resolves place metadata. Geocoding failure degrades to a
    /// coordinate-labeled location; a missing description only degrades.
    pub async fn fetch_location_meta(
        &self,
        lat: f64,
        lon: f64,
    ) -> Result<(GeoLocation, Vec<SourceStatus>, Vec<RawResponse>), PipelineError> {
        if !(-90.0..=90.0).contains(&lat) {
            return Err(PipelineError::Other(format!("latitude {lat} outside [-90, 90]")));
        }
        if !(-180.0..=180.0).contains(&lon) {
            return Err(PipelineError::Other(format!("longitude {lon} outside [-180, 180]")));
        }
        let key = self.openweather_key()?;
        Ok(geocode::fetch_location_meta(self, &key, lat, lon).await)
    }

    /// Fetches the hourly forecast, normalized to SI and the strict
    /// hourly grid, truncated to the horizon.
    pub async fn fetch_hourly_forecast(
        &self,
        lat: f64,
        lon: f64,
        horizon_h: u32,
        strict_horizon: bool,
    ) -> Result<(openweather::ForecastFetch, SourceStatus), PipelineError> {
        let key = self.openweather_key()?;
        openweather::fetch_hourly_forecast(self, &key, lat, lon, horizon_h, strict_horizon).await
    }

    /// Climatology with strict fallback order: Meteostat normals, then
    /// Meteostat monthly means, then the packaged ERA5 grid file.
    pub async fn fetch_climatology(
        &self,
        lat: f64,
        lon: f64,
    ) -> (Option<MonthlyClimatology>, Vec<SourceStatus>, Vec<RawResponse>) {
        let mut statuses = Vec::new();
        let mut raws = Vec::new();

        match meteostat::fetch(self, self.meteostat_key().as_deref(), lat, lon).await {
            Ok((clim, status, raw)) => {
                statuses.push(status);
                raws.extend(raw);
                return (Some(clim), statuses, raws);
            }
            Err(status) => statuses.push(status),
        }

        match era5::load(&self.sources.era5_path).and_then(|t| t.nearest(lat, lon)) {
            Ok(clim) => {
                statuses.push(SourceStatus::degraded(
                    SourceName::Era5Fallback,
                    codes::CLIM_FALLBACK_ERA5,
                    1,
                ));
                (Some(clim), statuses, raws)
            }
            Err(e) => {
                tracing::warn!("ERA5 fallback unavailable: {e}");
                statuses.push(SourceStatus::failed(SourceName::Era5Fallback, 1));
                (None, statuses, raws)
            }
        }
    }

    /// The whole coordinate-driven acquisition: location, forecast, and
    /// climatology fetched concurrently.
    pub async fn acquire(
        &self,
        lat: f64,
        lon: f64,
        horizon_h: u32,
        strict_horizon: bool,
        allow_no_climatology: bool,
    ) -> Result<IngestBundle, PipelineError> {
        let (loc, forecast, clim) = tokio::join!(
            self.fetch_location_meta(lat, lon),
            self.fetch_hourly_forecast(lat, lon, horizon_h, strict_horizon),
            self.fetch_climatology(lat, lon),
        );

        let (mut location, mut statuses, mut raws) = loc?;
        let (fetch, ow_status) = forecast?;
        statuses.push(ow_status);
        raws.push(("openweather.json".to_string(), fetch.raw));
        location.utc_offset_s = fetch.utc_offset_s;

        let (climatology, clim_statuses, clim_raws) = clim;
        statuses.extend(clim_statuses);
        raws.extend(clim_raws);
        if climatology.is_none() && !allow_no_climatology {
            return Err(PipelineError::Source {
                source_status: SourceStatus::failed(SourceName::Era5Fallback, 1),
                message: "no climatology source available and allow_no_climatology is off".into(),
            });
        }

        let mut source_ids = vec![format!(
            "openweather:{}",
            self.sources.openweather_version
        )];
        match climatology.as_ref().map(|c| c.source) {
            Some(hiermet_core::model::ClimatologySource::Meteostat) => {
                source_ids.push("meteostat".into())
            }
            Some(hiermet_core::model::ClimatologySource::Era5Fallback) => {
                source_ids.push("era5_fallback".into())
            }
            None => source_ids.push("no_climatology".into()),
        }

        Ok(IngestBundle {
            location,
            hourly: fetch.records,
            climatology,
            statuses,
            raw_responses: raws,
            source_ids,
            imputed_hours: fetch.imputed_hours,
        })
    }
}
