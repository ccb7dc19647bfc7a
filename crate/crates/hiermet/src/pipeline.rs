//! Shared orchestration behind both the REST gateway and the CLI:
//! coordinate acquisition, context storage, analysis plus validation,
//! and report composition.

use std::sync::atomic::{AtomicU64, Ordering};

use hiermet_core::category::categorize_table;
use hiermet_core::context::{build_context, context_key, select_mode, RequestedMode};
use hiermet_core::model::{AnalysisResult, ForecastContext, Report};
use hiermet_core::validate::{check_keyword_alignment, ValidationReport};
use hiermet_core::writer::StylePreferences;

use crate::agents::{AgentRunner, ProviderKind};
use crate::cache::CacheStore;
use crate::config::ServiceConfig;
use crate::error::PipelineError;
use crate::ingest::{Ingestor, RawResponse, SourceStatus};
use crate::schema_gate::SchemaGate;

pub struct Pipeline {
    pub config: ServiceConfig,
    pub http: reqwest::Client,
    pub cache: CacheStore,
    pub gate: SchemaGate,
    /// Number of analysis-agent invocations; lets operators (and the
    /// schema-gate tests) confirm nothing invalid reaches the agents.
    pub agent_calls: AtomicU64,
}

impl Pipeline {
    pub fn new(config: ServiceConfig) -> Result<Self, PipelineError> {
        let gate = SchemaGate::load(config.schemas_dir.as_deref())?;
        let cache = CacheStore::new(&config.cache_dir);
        let http = reqwest::Client::builder()
            .user_agent("hiermet/0.1")
            .build()
            .map_err(|e| PipelineError::Config(format!("http client: {e}")))?;
        Ok(Self { config, http, cache, gate, agent_calls: AtomicU64::new(0) })
    }

    pub fn default_provider(&self) -> ProviderKind {
        ProviderKind::parse(&self.config.provider.kind).unwrap_or(ProviderKind::RuleBased)
    }

    fn runner(&self) -> AgentRunner<'_> {
        AgentRunner {
            http: &self.http,
            gate: &self.gate,
            predicates: &self.config.validator.predicates,
            provider_cfg: &self.config.provider,
            retry: &self.config.retry,
            prompts_dir: self.config.prompts_dir.as_deref(),
        }
    }

    fn ingestor(&self) -> Ingestor {
        Ingestor::new(self.http.clone(), self.config.sources.clone(), self.config.retry)
    }

    /// Coordinate-driven acquisition: fetch, normalize, categorize,
    /// aggregate, validate, and cache. Returns the context, its cache
    /// key, and every source status gathered along the way.
    pub async fn context_from_coordinates(
        &self,
        lat: f64,
        lon: f64,
        horizon_h: u32,
        mode: RequestedMode,
    ) -> Result<(ForecastContext, String, Vec<SourceStatus>), PipelineError> {
        let decision = select_mode(horizon_h, mode)?;
        let mut bundle = self
            .ingestor()
            .acquire(
                lat,
                lon,
                horizon_h,
                self.config.strict_horizon,
                self.config.allow_no_climatology,
            )
            .await?;

        categorize_table(&mut bundle.hourly, &self.config.categorizer.thresholds);
        let issued_at = bundle.hourly.first().map(|r| r.ts_utc).ok_or(
            PipelineError::Core(hiermet_core::CoreError::EmptyTable),
        )?;
        let ctx = build_context(
            bundle.location,
            bundle.climatology,
            bundle.hourly,
            decision,
            issued_at,
        )?;

        let key = context_key(&ctx.location, issued_at, &bundle.source_ids, ctx.horizon_h);
        self.cache.put(&key, &ctx, &bundle.raw_responses, &bundle.source_ids, issued_at)?;
        Ok((ctx, key, bundle.statuses))
    }

    /// Stores a caller-supplied context under its content key so later
    /// `/report` calls and replays can reference it.
    pub fn store_context(
        &self,
        ctx: &ForecastContext,
        raw_responses: &[RawResponse],
        source_ids: &[String],
    ) -> Result<String, PipelineError> {
        let key = context_key(&ctx.location, ctx.issued_at_utc, source_ids, ctx.horizon_h);
        self.cache.put(&key, ctx, raw_responses, source_ids, ctx.issued_at_utc)?;
        Ok(key)
    }

    /// Analysis plus semantic validation. The context must already have
    /// passed the schema gate and `validate_context`.
    pub async fn analyze(
        &self,
        ctx: &ForecastContext,
        provider: ProviderKind,
    ) -> Result<(AnalysisResult, ValidationReport), PipelineError> {
        self.agent_calls.fetch_add(1, Ordering::Relaxed);
        let analysis = self.runner().run_meteorologist(provider, ctx).await?;
        let validation =
            check_keyword_alignment(&analysis, ctx, &self.config.validator.predicates)?;
        Ok((analysis, validation))
    }

    /// Report composition; degrades to the template writer, never fails.
    pub async fn compose_report(
        &self,
        analysis: &AnalysisResult,
        ctx: &ForecastContext,
        style: &StylePreferences,
        provider: ProviderKind,
    ) -> (Report, Vec<SourceStatus>) {
        self.runner().run_writer(provider, analysis, ctx, style).await
    }
}
