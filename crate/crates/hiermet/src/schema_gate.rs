//! Runtime JSON Schema validation of every payload that crosses the
//! service boundary, using the documents shipped in `schemas/`. Nothing
//! reaches the agent layer without passing this gate and the semantic
//! context validation behind it.

use std::path::Path;

use jsonschema::Validator;
use serde_json::Value;

use hiermet_core::model::Violation;
use hiermet_core::prompt::{ANALYSIS_RESULT_SCHEMA, FORECAST_CONTEXT_SCHEMA, REPORT_SCHEMA};

use crate::error::PipelineError;

pub struct SchemaGate {
    context: Validator,
    analysis: Validator,
    report: Validator,
}

fn compile(source: &str, name: &str) -> Result<Validator, PipelineError> {
    let schema: Value = serde_json::from_str(source)?;
    jsonschema::validator_for(&schema)
        .map_err(|e| PipelineError::Config(format!("schema {name} does not compile: {e}")))
}

impl SchemaGate {
    /// Loads the three schema documents from a directory, or the
    /// embedded copies when no directory is configured.
    pub fn load(dir: Option<&Path>) -> Result<Self, PipelineError> {
        let read = |file: &str, embedded: &str| -> Result<String, PipelineError> {
            match dir {
                Some(d) => std::fs::read_to_string(d.join(file)).map_err(|e| {
                    PipelineError::Config(format!("cannot read {}: {e}", d.join(file).display()))
                }),
                None => Ok(embedded.to_string()),
            }
        };
        Ok(Self {
            context: compile(
                &read("forecast_context.schema.json", FORECAST_CONTEXT_SCHEMA)?,
                "forecast_context",
            )?,
            analysis: compile(
                &read("analysis_result.schema.json", ANALYSIS_RESULT_SCHEMA)?,
                "analysis_result",
            )?,
            report: compile(&read("report.schema.json", REPORT_SCHEMA)?, "report")?,
        })
    }

    fn check(validator: &Validator, value: &Value) -> Vec<Violation> {
        validator
            .iter_errors(value)
            .map(|err| Violation {
                path: {
                    let p = err.instance_path.to_string();
                    if p.is_empty() {
                        "$".to_string()
                    } else {
                        p
                    }
                },
                message: err.to_string(),
            })
            .collect()
    }

    pub fn check_context(&self, value: &Value) -> Vec<Violation> {
        Self::check(&self.context, value)
    }

    pub fn check_analysis(&self, value: &Value) -> Vec<Violation> {
        Self::check(&self.analysis, value)
    }

    pub fn check_report(&self, value: &Value) -> Vec<Violation> {
        Self::check(&self.report, value)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use hiermet_core::context::RequestedMode;
    use hiermet_core::fixtures::cork;

    #[test]
    fn embedded_schemas_compile_and_accept_fixtures() {
        let gate = SchemaGate::load(None).unwrap();
        let ctx = cork().context(RequestedMode::Auto);
        let value = serde_json::to_value(&ctx).unwrap();
        assert!(gate.check_context(&value).is_empty());
    }

    #[test]
    fn on_disk_schemas_match_the_embedded_copies() {
        // schemas/ is the source of truth; the embedded constants are
        // include_str! of the same files, so this can only fail if the
        // build outputs drift from the tree
        let gate = SchemaGate::load(Some(Path::new(concat!(
            env!("CARGO_MANIFEST_DIR"),
            "/../../schemas"
        ))));
        assert!(gate.is_ok());
    }

    #[test]
    fn violations_carry_field_paths() {
        let gate = SchemaGate::load(None).unwrap();
        let mut value = serde_json::to_value(cork().context(RequestedMode::Auto)).unwrap();
        value["location"]["latitude"] = serde_json::json!(95.0);
        let violations = gate.check_context(&value);
        assert!(!violations.is_empty());
        assert!(violations.iter().any(|v| v.path.contains("latitude")), "{violations:?}");
    }
}
