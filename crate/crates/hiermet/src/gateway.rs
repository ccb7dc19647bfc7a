//! The RESTful surface: `POST /analysis` and `POST /report`, mirroring
//! the two-stage Analysis/Report split. Validation is bundled into every
//! /analysis response, degradation is surfaced in a `status` array, and
//! no payload reaches an agent without passing the schema gate plus
//! semantic context validation.

use std::sync::Arc;

use axum::body::Bytes;
use axum::extract::State;
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::routing::post;
use axum::{Json, Router};
use serde::Deserialize;
use serde_json::{json, Value};

use hiermet_core::context::RequestedMode;
use hiermet_core::model::{
    validate_analysis, validate_context, AnalysisResult, ForecastContext, MAX_HORIZON_H,
};
use hiermet_core::writer::StylePreferences;

use crate::agents::ProviderKind;
use crate::error::PipelineError;
use crate::ingest::SourceStatus;
use crate::pipeline::Pipeline;

pub fn router(pipeline: Arc<Pipeline>) -> Router {
    Router::new()
        .route("/analysis", post(post_analysis))
        .route("/report", post(post_report))
        .with_state(pipeline)
}

/// Serves until the process is stopped.
pub async fn serve(pipeline: Arc<Pipeline>) -> Result<(), PipelineError> {
    let bind = pipeline.config.bind.clone();
    let listener = tokio::net::TcpListener::bind(&bind)
        .await
        .map_err(|e| PipelineError::Config(format!("cannot bind {bind}: {e}")))?;
    tracing::info!("listening on {bind}");
    axum::serve(listener, router(pipeline))
        .await
        .map_err(|e| PipelineError::Other(format!("server error: {e}")))
}

#[derive(Deserialize)]
struct CoordinateRequest {
    lat: f64,
    lon: f64,
    horizon_h: u32,
    #[serde(default)]
    mode: RequestedMode,
}

#[derive(Deserialize)]
struct ReportRequest {
    #[serde(default)]
    analysis: Option<AnalysisResult>,
    #[serde(default)]
    context_key: Option<String>,
    #[serde(default)]
    context: Option<Value>,
    #[serde(default)]
    style: StylePreferences,
}

fn bad_request(violations: &[hiermet_core::Violation]) -> Response {
    (StatusCode::BAD_REQUEST, Json(json!({ "violations": violations }))).into_response()
}

fn error_response(status: StatusCode, message: String, statuses: &[SourceStatus]) -> Response {
    (status, Json(json!({ "error": message, "status": statuses }))).into_response()
}

fn pipeline_error_response(err: PipelineError) -> Response {
    match err {
        PipelineError::Core(hiermet_core::CoreError::HorizonTooLong { horizon_h }) => {
            error_response(
                StatusCode::UNPROCESSABLE_ENTITY,
                format!("horizon {horizon_h} h is beyond 10-day support"),
                &[],
            )
        }
        PipelineError::Violations(v) => bad_request(&v),
        PipelineError::UnknownKey(key) => {
            error_response(StatusCode::NOT_FOUND, format!("unknown context key {key}"), &[])
        }
        PipelineError::Source { source_status, message } => {
            error_response(StatusCode::BAD_GATEWAY, message, &[source_status])
        }
        PipelineError::Provider { message, .. } => {
            error_response(StatusCode::BAD_GATEWAY, message, &[])
        }
        PipelineError::Config(message) => {
            error_response(StatusCode::INTERNAL_SERVER_ERROR, message, &[])
        }
        other => error_response(StatusCode::INTERNAL_SERVER_ERROR, other.to_string(), &[]),
    }
}

/// Gate order: JSON parse, horizon band, schema document, semantic
/// context validation. Only then is the payload allowed near an agent.
fn gate_context(pipeline: &Pipeline, value: &Value) -> Result<ForecastContext, Response> {
    if let Some(h) = value.get("horizon_h").and_then(Value::as_u64) {
        if h > MAX_HORIZON_H as u64 {
            return Err(error_response(
                StatusCode::UNPROCESSABLE_ENTITY,
                format!("horizon {h} h is beyond 10-day support"),
                &[],
            ));
        }
    }
    let schema_violations = pipeline.gate.check_context(value);
    if !schema_violations.is_empty() {
        return Err(bad_request(&schema_violations));
    }
    let ctx: ForecastContext = match serde_json::from_value(value.clone()) {
        Ok(ctx) => ctx,
        Err(e) => {
            return Err(bad_request(&[hiermet_core::Violation {
                path: "$".into(),
                message: format!("payload does not deserialize: {e}"),
            }]))
        }
    };
    let violations = validate_context(&ctx);
    if !violations.is_empty() {
        return Err(bad_request(&violations));
    }
    Ok(ctx)
}

async fn post_analysis(State(pipeline): State<Arc<Pipeline>>, body: Bytes) -> Response {
    let value: Value = match serde_json::from_slice(&body) {
        Ok(v) => v,
        Err(e) => {
            return bad_request(&[hiermet_core::Violation {
                path: "$".into(),
                message: format!("body is not valid JSON: {e}"),
            }])
        }
    };

    // Coordinate form triggers ingestion; context form is gated directly.
    let coordinate_form = value.get("lat").is_some() && value.get("mode").is_none()
        || value.get("lat").is_some() && value.get("location").is_none();

    let (ctx, key, statuses) = if coordinate_form {
        let req: CoordinateRequest = match serde_json::from_value(value) {
            Ok(r) => r,
            Err(e) => {
                return bad_request(&[hiermet_core::Violation {
                    path: "$".into(),
                    message: format!("coordinate request does not parse: {e}"),
                }])
            }
        };
        if req.horizon_h > MAX_HORIZON_H {
            return error_response(
                StatusCode::UNPROCESSABLE_ENTITY,
                format!("horizon {} h is beyond 10-day support", req.horizon_h),
                &[],
            );
        }
        match pipeline
            .context_from_coordinates(req.lat, req.lon, req.horizon_h, req.mode)
            .await
        {
            Ok(t) => t,
            Err(e) => return pipeline_error_response(e),
        }
    } else {
        let ctx = match gate_context(&pipeline, &value) {
            Ok(ctx) => ctx,
            Err(resp) => return resp,
        };
        let key = match pipeline.store_context(&ctx, &[], &["user_supplied".to_string()]) {
            Ok(k) => k,
            Err(e) => return pipeline_error_response(e),
        };
        (ctx, key, Vec::new())
    };

    let provider = pipeline.default_provider();
    match pipeline.analyze(&ctx, provider).await {
        Ok((analysis, validation)) => (
            StatusCode::OK,
            Json(json!({
                "analysis": analysis,
                "validation": validation,
                "context_key": key,
                "status": statuses,
            })),
        )
            .into_response(),
        Err(e) => pipeline_error_response(e),
    }
}

async fn post_report(State(pipeline): State<Arc<Pipeline>>, body: Bytes) -> Response {
    let req: ReportRequest = match serde_json::from_slice(&body) {
        Ok(r) => r,
        Err(e) => {
            return bad_request(&[hiermet_core::Violation {
                path: "$".into(),
                message: format!("report request does not parse: {e}"),
            }])
        }
    };

    let ctx = if let Some(key) = &req.context_key {
        match pipeline.cache.get(key) {
            Ok(Some(entry)) => entry.context,
            Ok(None) => return pipeline_error_response(PipelineError::UnknownKey(key.clone())),
            Err(e) => return pipeline_error_response(e),
        }
    } else if let Some(value) = &req.context {
        match gate_context(&pipeline, value) {
            Ok(ctx) => ctx,
            Err(resp) => return resp,
        }
    } else {
        return bad_request(&[hiermet_core::Violation {
            path: "$".into(),
            message: "either context_key or context is required".into(),
        }]);
    };

    let provider = pipeline.default_provider();
    let mut statuses: Vec<SourceStatus> = Vec::new();
    let analysis = match req.analysis {
        Some(a) => {
            let violations = validate_analysis(&a);
            if !violations.is_empty() {
                return bad_request(&violations);
            }
            a
        }
        None => match pipeline.analyze(&ctx, provider).await {
            Ok((a, _validation)) => a,
            Err(e) => return pipeline_error_response(e),
        },
    };

    let (report, writer_statuses) =
        pipeline.compose_report(&analysis, &ctx, &req.style, provider).await;
    statuses.extend(writer_statuses);

    // Self-check the outgoing payload against the shipped schema.
    let report_value = match serde_json::to_value(&report) {
        Ok(v) => v,
        Err(e) => return pipeline_error_response(e.into()),
    };
    let self_check = pipeline.gate.check_report(&report_value);
    if !self_check.is_empty() {
        return error_response(
            StatusCode::INTERNAL_SERVER_ERROR,
            format!("composed report fails its own schema: {}", self_check[0].message),
            &statuses,
        );
    }

    (StatusCode::OK, Json(json!({ "report": report_value, "status": statuses }))).into_response()
}
