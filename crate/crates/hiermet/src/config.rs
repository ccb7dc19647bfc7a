//! Service configuration: one TOML file plus environment overrides.
//!
//! Every tunable the pipeline consumes lives here: endpoints and API
//! versions, retry policy, cache directory, the categorizer threshold
//! table (`categorizer.thresholds`) and the validator predicate table
//! (`validator.predicates`).

use std::net::SocketAddr;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use hiermet_core::category::CategorizerThresholds;
use hiermet_core::evidence::PredicateConfig;

use crate::error::PipelineError;

pub const ENV_CONFIG: &str = "HIERMET_CONFIG";
pub const ENV_CACHE_DIR: &str = "HIERMET_CACHE_DIR";
pub const ENV_ERA5_PATH: &str = "HIERMET_ERA5_PATH";
pub const ENV_OPENWEATHER_KEY: &str = "OPENWEATHER_API_KEY";
pub const ENV_METEOSTAT_KEY: &str = "METEOSTAT_API_KEY";
pub const ENV_LLM_KEY: &str = "HIERMET_LLM_API_KEY";

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ServiceConfig {
    /// Bind address for `hiermet serve`.
    pub bind: String,
    pub cache_dir: PathBuf,
    /// Reject short provider grids instead of proceeding degraded.
    pub strict_horizon: bool,
    /// Let the pipeline continue without climatology (warnings disabled).
    pub allow_no_climatology: bool,
    pub provider: ProviderConfig,
    pub sources: SourcesConfig,
    pub retry: RetryConfig,
    pub categorizer: CategorizerSection,
    pub validator: ValidatorSection,
    /// Optional override directories; embedded copies are used otherwise.
    pub prompts_dir: Option<PathBuf>,
    pub schemas_dir: Option<PathBuf>,
}

impl Default for ServiceConfig {
    fn default() -> Self {
        Self {
            bind: "127.0.0.1:8080".into(),
            cache_dir: PathBuf::from("cache"),
            strict_horizon: false,
            allow_no_climatology: false,
            provider: ProviderConfig::default(),
            sources: SourcesConfig::default(),
            retry: RetryConfig::default(),
            categorizer: CategorizerSection::default(),
            validator: ValidatorSection::default(),
            prompts_dir: None,
            schemas_dir: None,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ProviderConfig {
    /// "rule" or "remote".
    pub kind: String,
    /// Chat-completions style endpoint for the remote provider.
    pub endpoint: String,
    pub model: String,
    pub timeout_s: u64,
    pub max_repair_attempts: u32,
}

impl Default for ProviderConfig {
    fn default() -> Self {
        Self {
            kind: "rule".into(),
            endpoint: "https://api.openai.com/v1/chat/completions".into(),
            model: "gpt-4o-mini".into(),
            timeout_s: 60,
            max_repair_attempts: 1,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SourcesConfig {
    pub openweather_base: String,
    /// One Call API version: "2.5" or "3.0" (the papers disagree, so it
    /// is configuration, not a constant).
    pub openweather_version: String,
    pub geocode_base: String,
    pub elevation_base: String,
    pub wikipedia_base: String,
    pub meteostat_base: String,
    pub era5_path: PathBuf,
}

impl Default for SourcesConfig {
    fn default() -> Self {
        Self {
            openweather_base: "https://api.openweathermap.org".into(),
            openweather_version: "3.0".into(),
            geocode_base: "https://api.openweathermap.org".into(),
            elevation_base: "https://api.open-elevation.com".into(),
            wikipedia_base: "https://en.wikipedia.org".into(),
            meteostat_base: "https://meteostat.p.rapidapi.com".into(),
            era5_path: PathBuf::from("data/era5_monthly_climatology.csv"),
        }
    }
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RetryConfig {
    pub max_attempts: u32,
    pub initial_backoff_ms: u64,
    pub timeout_s: u64,
}

impl Default for RetryConfig {
    fn default() -> Self {
        Self { max_attempts: 3, initial_backoff_ms: 500, timeout_s: 10 }
    }
}

#[derive(Debug, Clone, Copy, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CategorizerSection {
    pub thresholds: CategorizerThresholds,
}

#[derive(Debug, Clone, Copy, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ValidatorSection {
    pub predicates: PredicateConfig,
}

impl ServiceConfig {
    /// Loads the config file (explicit path, `HIERMET_CONFIG`, or pure
    /// defaults), then applies environment overrides and validates.
    pub fn load(path: Option<&Path>) -> Result<Self, PipelineError> {
        let from_env = std::env::var(ENV_CONFIG).ok().map(PathBuf::from);
        let path = path.map(Path::to_path_buf).or(from_env);
        let mut cfg = match path {
            Some(p) => {
                let text = std::fs::read_to_string(&p).map_err(|e| {
                    PipelineError::Config(format!("cannot read {}: {e}", p.display()))
                })?;
                toml::from_str::<ServiceConfig>(&text)
                    .map_err(|e| PipelineError::Config(format!("{}: {e}", p.display())))?
            }
            None => ServiceConfig::default(),
        };
        if let Ok(dir) = std::env::var(ENV_CACHE_DIR) {
            cfg.cache_dir = PathBuf::from(dir);
        }
        if let Ok(p) = std::env::var(ENV_ERA5_PATH) {
            cfg.sources.era5_path = PathBuf::from(p);
        }
        cfg.validate()?;
        Ok(cfg)
    }

    fn validate(&self) -> Result<(), PipelineError> {
        self.bind.parse::<SocketAddr>().map_err(|e| {
            PipelineError::Config(format!("bind: {:?} is not a socket address: {e}", self.bind))
        })?;
        match self.provider.kind.as_str() {
            "rule" | "remote" => {}
            other => {
                return Err(PipelineError::Config(format!(
                    "provider.kind: {other:?} is not one of \"rule\", \"remote\""
                )))
            }
        }
        match self.sources.openweather_version.as_str() {
            "2.5" | "3.0" => {}
            other => {
                return Err(PipelineError::Config(format!(
                    "sources.openweather_version: {other:?} is not one of \"2.5\", \"3.0\""
                )))
            }
        }
        if self.retry.max_attempts == 0 {
            return Err(PipelineError::Config("retry.max_attempts: must be at least 1".into()));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_validate() {
        ServiceConfig::default().validate().unwrap();
    }

    #[test]
    fn threshold_tables_parse_from_toml() {
        let cfg: ServiceConfig = toml::from_str(
            r#"
            bind = "0.0.0.0:9999"
            [categorizer.thresholds]
            heavy_rain_mm_per_h = 5.0
            [validator.predicates]
            heavy_rain_daily_mm = 25.0
            "#,
        )
        .unwrap();
        assert_eq!(cfg.categorizer.thresholds.heavy_rain_mm_per_h, 5.0);
        assert_eq!(cfg.validator.predicates.heavy_rain_daily_mm, 25.0);
        // everything else keeps its default
        assert_eq!(cfg.validator.predicates.warn_rain_daily_mm, 30.0);
    }

    #[test]
    fn bad_field_is_reported_with_its_name() {
        let err = toml::from_str::<ServiceConfig>("[provider]\nkind = 12\n").unwrap_err();
        assert!(err.to_string().contains("kind"), "{err}");
    }

    #[test]
    fn unknown_keys_are_rejected() {
        assert!(toml::from_str::<ServiceConfig>("bund = \"x\"\n").is_err());
    }
}
