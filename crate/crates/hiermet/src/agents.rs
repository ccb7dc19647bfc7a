//! The Meteorologist and Writer agents: provider dispatch, strict
//! structured-output parsing with a bounded repair loop, and fact
//! preservation enforcement on the Writer.
//!
//! The rule-based provider needs no network and is the replay/test
//! workhorse; a remote provider speaks the chat-completions JSON shape.

use std::path::Path;

use serde_json::{json, Value};

use hiermet_core::analysis::deterministic_analysis;
use hiermet_core::evidence::PredicateConfig;
use hiermet_core::model::{validate_analysis, AnalysisResult, ForecastContext, Report};
use hiermet_core::prompt::{
    compose_meteorologist_prompt_with, compose_writer_prompt_with, METEOROLOGIST_TEMPLATE,
    WRITER_TEMPLATE,
};
use hiermet_core::writer::{preserves_facts, template_report, StylePreferences};
use hiermet_core::Keyword;

use crate::config::{ProviderConfig, RetryConfig, ENV_LLM_KEY};
use crate::error::PipelineError;
use crate::ingest::{codes, request_with_retries, SourceName, SourceStatus};
use crate::schema_gate::SchemaGate;

/// Which analysis backend serves a request.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProviderKind {
    RuleBased,
    Remote,
}

impl ProviderKind {
    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "rule" | "rule_based" => Some(Self::RuleBased),
            "remote" | "remote_llm" => Some(Self::Remote),
            _ => None,
        }
    }
}

pub struct AgentRunner<'a> {
    pub http: &'a reqwest::Client,
    pub gate: &'a SchemaGate,
    pub predicates: &'a PredicateConfig,
    pub provider_cfg: &'a ProviderConfig,
    pub retry: &'a RetryConfig,
    pub prompts_dir: Option<&'a Path>,
}

impl AgentRunner<'_> {
    fn template(&self, file: &str, embedded: &'static str) -> String {
        if let Some(dir) = self.prompts_dir {
            if let Ok(text) = std::fs::read_to_string(dir.join(file)) {
                return text;
            }
        }
        embedded.to_string()
    }

    /// Runs the analysis stage. Remote output is parsed strictly; each
    /// schema failure triggers one re-ask carrying the error text, up to
    /// `max_repair_attempts`, after which the raw output is surfaced in
    /// the error for diagnostics.
    pub async fn run_meteorologist(
        &self,
        kind: ProviderKind,
        ctx: &ForecastContext,
    ) -> Result<AnalysisResult, PipelineError> {
        match kind {
            ProviderKind::RuleBased => Ok(deterministic_analysis(ctx, self.predicates)?),
            ProviderKind::Remote => self.run_remote_meteorologist(ctx).await,
        }
    }

    async fn run_remote_meteorologist(
        &self,
        ctx: &ForecastContext,
    ) -> Result<AnalysisResult, PipelineError> {
        let template = self.template("meteorologist_v1.txt", METEOROLOGIST_TEMPLATE);
        let prompt = compose_meteorologist_prompt_with(&template, ctx, Keyword::ALL);
        let mut messages = vec![json!({"role": "user", "content": prompt})];

        let mut last_raw = String::new();
        for attempt in 0..=self.provider_cfg.max_repair_attempts {
            let content = self.chat(&messages).await?;
            last_raw = content.clone();
            match self.parse_analysis(&content) {
                Ok(analysis) => return Ok(analysis),
                Err(errors) if attempt < self.provider_cfg.max_repair_attempts => {
                    messages.push(json!({"role": "assistant", "content": content}));
                    messages.push(json!({
                        "role": "user",
                        "content": format!(
                            "Your previous output failed validation:\n{errors}\n\
                             Re-emit the corrected JSON object only."
                        ),
                    }));
                }
                Err(errors) => {
                    return Err(PipelineError::Provider {
                        message: format!("analysis failed schema validation after repairs: {errors}"),
                        raw: Some(last_raw),
                    })
                }
            }
        }
        unreachable!("repair loop always returns");
    }

    /// Strict parse: fence-stripped JSON, schema gate, structural checks.
    fn parse_analysis(&self, content: &str) -> Result<AnalysisResult, String> {
        let text = strip_fences(content);
        let value: Value =
            serde_json::from_str(text).map_err(|e| format!("not a JSON object: {e}"))?;
        let schema_errors = self.gate.check_analysis(&value);
        if !schema_errors.is_empty() {
            let mut msgs: Vec<String> = schema_errors
                .iter()
                .map(|v| format!("{}: {}", v.path, v.message))
                .collect();
            msgs.truncate(8);
            return Err(msgs.join("\n"));
        }
        let analysis: AnalysisResult =
            serde_json::from_value(value).map_err(|e| format!("shape mismatch: {e}"))?;
        let violations = validate_analysis(&analysis);
        if !violations.is_empty() {
            return Err(violations
                .iter()
                .map(|v| format!("{}: {}", v.path, v.message))
                .collect::<Vec<_>>()
                .join("\n"));
        }
        Ok(analysis)
    }

    /// Runs the Writer. A remote writer that drops or alters keywords,
    /// warnings, or proof signals is overridden by the template writer;
    /// provider failures also fall back. This stage degrades, never fails.
    pub async fn run_writer(
        &self,
        kind: ProviderKind,
        analysis: &AnalysisResult,
        ctx: &ForecastContext,
        style: &StylePreferences,
    ) -> (Report, Vec<SourceStatus>) {
        match kind {
            ProviderKind::RuleBased => (template_report(analysis, ctx, style), Vec::new()),
            ProviderKind::Remote => match self.run_remote_writer(analysis, ctx, style).await {
                Ok(report) => (report, vec![SourceStatus::ok(SourceName::LlmProvider, 1)]),
                Err(code) => (
                    template_report(analysis, ctx, style),
                    vec![SourceStatus::degraded(SourceName::LlmProvider, code, 1)],
                ),
            },
        }
    }

    async fn run_remote_writer(
        &self,
        analysis: &AnalysisResult,
        ctx: &ForecastContext,
        style: &StylePreferences,
    ) -> Result<Report, &'static str> {
        let template = self.template("writer_v1.txt", WRITER_TEMPLATE);
        let prompt = compose_writer_prompt_with(&template, analysis, &ctx.location, style);
        let messages = vec![json!({"role": "user", "content": prompt})];
        let content = self
            .chat(&messages)
            .await
            .map_err(|_| codes::WRITER_PROVIDER_FALLBACK)?;

        let value: Value = serde_json::from_str(strip_fences(&content))
            .map_err(|_| codes::WRITER_FACT_DRIFT)?;
        let header = value.get("header").cloned().ok_or(codes::WRITER_FACT_DRIFT)?;
        let written: AnalysisResult =
            serde_json::from_value(value.get("analysis").cloned().unwrap_or(Value::Null))
                .map_err(|_| codes::WRITER_FACT_DRIFT)?;

        if !preserves_facts(analysis, &written) || !validate_analysis(&written).is_empty() {
            return Err(codes::WRITER_FACT_DRIFT);
        }
        let header: hiermet_core::model::ReportHeader =
            serde_json::from_value(header).map_err(|_| codes::WRITER_FACT_DRIFT)?;
        Ok(Report { header, analysis: written, context: ctx.clone() })
    }

    /// One chat-completions call with the shared retry policy.
    async fn chat(&self, messages: &[Value]) -> Result<String, PipelineError> {
        let api_key = std::env::var(ENV_LLM_KEY)
            .map_err(|_| PipelineError::Config(format!("{ENV_LLM_KEY} is not set")))?;
        let body = json!({
            "model": self.provider_cfg.model,
            "messages": messages,
            "temperature": 0,
        });
        let retry = RetryConfig {
            timeout_s: self.provider_cfg.timeout_s,
            ..*self.retry
        };
        let (result, attempts) = request_with_retries(self.http, &retry, || {
            self.http
                .post(&self.provider_cfg.endpoint)
                .bearer_auth(&api_key)
                .json(&body)
        })
        .await;

        let bytes = result.map_err(|e| PipelineError::Source {
            source_status: SourceStatus::failed(SourceName::LlmProvider, attempts),
            message: format!("analysis provider unreachable: {}", e.message()),
        })?;
        let value: Value = serde_json::from_slice(&bytes)?;
        value
            .get("choices")
            .and_then(Value::as_array)
            .and_then(|c| c.first())
            .and_then(|c| c.get("message"))
            .and_then(|m| m.get("content"))
            .and_then(Value::as_str)
            .map(str::to_string)
            .ok_or_else(|| PipelineError::Provider {
                message: "provider response carries no message content".into(),
                raw: Some(String::from_utf8_lossy(&bytes).into_owned()),
            })
    }
}

/// Tolerates ```json fences around the object; everything else is the
/// provider's problem.
fn strip_fences(content: &str) -> &str {
    let trimmed = content.trim();
    let Some(inner) = trimmed.strip_prefix("```") else {
        return trimmed;
    };
    let inner = inner.strip_prefix("json").unwrap_or(inner);
    inner.trim_end_matches('`').trim_end_matches("```").trim()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fences_are_stripped() {
        assert_eq!(strip_fences("```json\n{\"a\":1}\n```"), "{\"a\":1}");
        assert_eq!(strip_fences("{\"a\":1}"), "{\"a\":1}");
        assert_eq!(strip_fences("```\n{}\n```"), "{}");
    }

    #[test]
    fn provider_kind_parses_both_spellings() {
        assert_eq!(ProviderKind::parse("rule"), Some(ProviderKind::RuleBased));
        assert_eq!(ProviderKind::parse("rule_based"), Some(ProviderKind::RuleBased));
        assert_eq!(ProviderKind::parse("remote"), Some(ProviderKind::Remote));
        assert_eq!(ProviderKind::parse("gpt"), None);
    }
}
