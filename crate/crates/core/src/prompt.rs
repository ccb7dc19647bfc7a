//! Prompt composition for the remote agents.
//!
//! Templates are versioned text files in `prompts/` with a small
//! front-matter header and `{{placeholder}}` slots; the defaults are
//! compiled in so replay needs no filesystem. The composed payload
//! embeds the canonical context tables, the controlled vocabulary, and
//! the output schema the provider must satisfy.

use alloc::string::String;
use alloc::vec::Vec;

use crate::canonical::canonical_string;
use crate::model::{AnalysisResult, ForecastContext, GeoLocation};
use crate::vocab::Keyword;
use crate::writer::StylePreferences;

pub const METEOROLOGIST_TEMPLATE: &str = include_str!("../../../prompts/meteorologist_v1.txt");
pub const WRITER_TEMPLATE: &str = include_str!("../../../prompts/writer_v1.txt");

/// JSON Schema documents shipped in `schemas/`, embedded for offline use.
pub const FORECAST_CONTEXT_SCHEMA: &str =
    include_str!("../../../schemas/forecast_context.schema.json");
pub const ANALYSIS_RESULT_SCHEMA: &str =
    include_str!("../../../schemas/analysis_result.schema.json");
pub const REPORT_SCHEMA: &str = include_str!("../../../schemas/report.schema.json");

/// Strips the `key: value` front matter above the `---` divider.
fn template_body(template: &str) -> &str {
    match template.split_once("\n---\n") {
        Some((_, body)) => body,
        None => template,
    }
}

/// Renders the Meteorologist prompt with the default template.
pub fn compose_meteorologist_prompt(ctx: &ForecastContext, vocab: &[Keyword]) -> String {
    compose_meteorologist_prompt_with(METEOROLOGIST_TEMPLATE, ctx, vocab)
}

/// Renders the Meteorologist prompt with a caller-supplied template.
pub fn compose_meteorologist_prompt_with(
    template: &str,
    ctx: &ForecastContext,
    vocab: &[Keyword],
) -> String {
    let vocabulary: Vec<&str> = vocab.iter().map(|k| k.token()).collect();
    let context_json =
        canonical_string(ctx).expect("forecast context always serializes");
    template_body(template)
        .replace("{{vocabulary}}", &vocabulary.join("\n"))
        .replace("{{schema}}", ANALYSIS_RESULT_SCHEMA.trim_end())
        .replace("{{context}}", &context_json)
}

/// Renders the Writer prompt with the default template.
pub fn compose_writer_prompt(
    analysis: &AnalysisResult,
    location: &GeoLocation,
    style: &StylePreferences,
) -> String {
    compose_writer_prompt_with(WRITER_TEMPLATE, analysis, location, style)
}

/// Renders the Writer prompt with a caller-supplied template.
pub fn compose_writer_prompt_with(
    template: &str,
    analysis: &AnalysisResult,
    location: &GeoLocation,
    style: &StylePreferences,
) -> String {
    template_body(template)
        .replace("{{style}}", &canonical_string(style).expect("style serializes"))
        .replace("{{location}}", &canonical_string(location).expect("location serializes"))
        .replace("{{analysis}}", &canonical_string(analysis).expect("analysis serializes"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn front_matter_is_stripped() {
        let body = template_body(METEOROLOGIST_TEMPLATE);
        assert!(!body.contains("template: meteorologist"));
        assert!(body.contains("{{vocabulary}}"));
    }
}
