//! Stateless JSON-over-HTTP facade for the learncurve engine.
//!
//! | method | path                | body                                  |
//! |--------|---------------------|---------------------------------------|
//! | GET    | `/api/v1/presets`   |                                       |
//! | POST   | `/api/v1/project`   | source + [`ops::ProjectArgs`] fields  |
//! | POST   | `/api/v1/target`    | source + [`ops::TargetArgs`] fields   |
//! | POST   | `/api/v1/lcoh`      | source + [`ops::LcohArgs`] fields     |
//! | POST   | `/api/v1/sweep`     | source + [`ops::SweepArgs`] fields    |
//! | POST   | `/api/v1/figure`    | source + [`ops::FigureArgs`] fields   |
//!
//! "Source" is `preset` or `scenario`, plus optional `overrides` (a JSON
//! merge patch) and `lax`. Every response is an [`ApiEnvelope`] echoing the
//! resolved scenario document.

pub mod ops;

use std::hash::{DefaultHasher, Hash, Hasher};
use std::net::SocketAddr;
use std::sync::Arc;

use axum::extract::rejection::JsonRejection;
use axum::extract::State;
use axum::http::{header, HeaderValue, Method, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use learncurve_core::io::{scenario_to_value, FigureDataset, PresetCatalog};
use learncurve_core::{Error, Result, Scenario};
use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::{Map, Value};
use tokio::net::TcpListener;
use tower_http::cors::{AllowOrigin, CorsLayer};

use crate::ops::{ScenarioSource, SOURCE_KEYS};

/// Request key selecting the result encoding: `json` (default) or `csv`.
pub const FORMAT_KEY: &str = "format";

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ApiEnvelope {
    /// Deterministic digest of the endpoint and request body.
    pub request_id: String,
    /// The fully resolved scenario document the result was computed from.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub scenario: Option<Value>,
    pub result: Value,
    pub warnings: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ApiError {
    pub request_id: String,
    pub error: ErrorBody,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ErrorBody {
    pub kind: &'static str,
    pub message: String,
}

struct Failure {
    status: StatusCode,
    kind: &'static str,
    message: String,
}

impl From<Error> for Failure {
    fn from(err: Error) -> Self {
        let (status, kind) = match &err {
            Error::Parse { .. } => (StatusCode::BAD_REQUEST, "parse"),
            Error::Io(_) => (StatusCode::INTERNAL_SERVER_ERROR, "internal"),
            Error::UnknownPreset(_) => (StatusCode::UNPROCESSABLE_ENTITY, "unknown_preset"),
            Error::UnknownKeys(_) => (StatusCode::UNPROCESSABLE_ENTITY, "unknown_keys"),
            Error::Domain(_) | Error::UnreachableTarget => (StatusCode::UNPROCESSABLE_ENTITY, "domain"),
            _ => (StatusCode::UNPROCESSABLE_ENTITY, "validation"),
        };
        Failure {
            status,
            kind,
            message: err.to_string(),
        }
    }
}

impl From<JsonRejection> for Failure {
    fn from(rejection: JsonRejection) -> Self {
        let kind = match rejection.status() {
            StatusCode::UNSUPPORTED_MEDIA_TYPE => "content_type",
            _ => "parse",
        };
        Failure {
            status: rejection.status(),
            kind,
            message: rejection.body_text(),
        }
    }
}

fn request_id(endpoint: &str, body: &Value) -> String {
    let mut h = DefaultHasher::new();
    endpoint.hash(&mut h);
    // keys serialize sorted, so equal bodies hash equally
    body.to_string().hash(&mut h);
    format!("{:016x}", h.finish())
}

fn respond<T: Serialize>(status: StatusCode, body: &T) -> Response {
    (status, Json(body)).into_response()
}

fn failure_response(id: String, f: Failure) -> Response {
    respond(
        f.status,
        &ApiError {
            request_id: id,
            error: ErrorBody {
                kind: f.kind,
                message: f.message,
            },
        },
    )
}

struct AppState {
    catalog: PresetCatalog,
}

type Op<A> = fn(&Scenario, &A) -> Result<FigureDataset>;

struct Parsed<A> {
    source: ScenarioSource,
    args: A,
    csv: bool,
    warnings: Vec<String>,
}

fn parse_request<A: DeserializeOwned>(body: Value) -> std::result::Result<Parsed<A>, Failure> {
    let Value::Object(mut fields) = body else {
        return Err(Error::Validation {
            field: "body".into(),
            value: "non-object".into(),
            constraint: "must be a JSON object".into(),
        }
        .into());
    };
    let mut source_fields = Map::new();
    for key in SOURCE_KEYS {
        if let Some(v) = fields.remove(key) {
            source_fields.insert(key.to_string(), v);
        }
    }
    let source: ScenarioSource = serde_json::from_value(Value::Object(source_fields)).map_err(|e| Error::Validation {
        field: "body".into(),
        value: "source".into(),
        constraint: e.to_string(),
    })?;
    let csv = match fields.remove(FORMAT_KEY) {
        None => false,
        Some(Value::String(f)) if f == "json" => false,
        Some(Value::String(f)) if f == "csv" => true,
        Some(other) => {
            return Err(Error::Validation {
                field: FORMAT_KEY.into(),
                value: other.to_string(),
                constraint: "must be \"json\" or \"csv\"".into(),
            }
            .into())
        }
    };
    let mut unknown = Vec::new();
    let args: A = serde_ignored::deserialize(Value::Object(fields), |path| unknown.push(path.to_string())).map_err(
        |e: serde_json::Error| Error::Validation {
            field: "body".into(),
            value: "arguments".into(),
            constraint: e.to_string(),
        },
    )?;
    if !unknown.is_empty() && !source.lax {
        return Err(Error::Validation {
            field: "body".into(),
            value: unknown.join(", "),
            constraint: "are not arguments of this endpoint".into(),
        }
        .into());
    }
    let warnings = unknown.into_iter().map(|k| format!("ignored unknown argument: {k}")).collect();
    Ok(Parsed {
        source,
        args,
        csv,
        warnings,
    })
}

fn evaluate<A: DeserializeOwned>(
    state: &AppState,
    body: Value,
    op: Op<A>,
) -> std::result::Result<ApiEnvelope, Failure> {
    let parsed: Parsed<A> = parse_request(body)?;
    let resolved = parsed.source.resolve(&state.catalog)?;
    let dataset = op(&resolved.scenario, &parsed.args)?;
    let result = if parsed.csv {
        Value::String(dataset.to_csv())
    } else {
        serde_json::to_value(&dataset).map_err(|e| Error::Io(e.to_string()))?
    };
    let mut warnings = resolved.warnings;
    warnings.extend(parsed.warnings);
    Ok(ApiEnvelope {
        request_id: String::new(),
        scenario: Some(scenario_to_value(&resolved.scenario)),
        result,
        warnings,
    })
}

fn run_op<A: DeserializeOwned>(
    state: &AppState,
    endpoint: &str,
    body: std::result::Result<Json<Value>, JsonRejection>,
    op: Op<A>,
) -> Response {
    let body = match body {
        Ok(Json(body)) => body,
        Err(rejection) => return failure_response(request_id(endpoint, &Value::Null), rejection.into()),
    };
    let id = request_id(endpoint, &body);
    match evaluate(state, body, op) {
        Ok(mut envelope) => {
            envelope.request_id = id;
            respond(StatusCode::OK, &envelope)
        }
        Err(f) => failure_response(id, f),
    }
}

macro_rules! endpoint {
    ($name:ident, $path:literal, $op:path) => {
        async fn $name(
            State(state): State<Arc<AppState>>,
            body: std::result::Result<Json<Value>, JsonRejection>,
        ) -> Response {
            run_op(&state, $path, body, $op)
        }
    };
}

endpoint!(project, "/api/v1/project", ops::project);
endpoint!(target, "/api/v1/target", ops::target);
endpoint!(lcoh, "/api/v1/lcoh", ops::lcoh);
endpoint!(sweep, "/api/v1/sweep", ops::sweep);
endpoint!(figure, "/api/v1/figure", ops::figure);

#[derive(Serialize)]
struct PresetEntry<'a> {
    name: &'a str,
    description: &'a str,
    /// Document with provenance notes under `metadata.provenance`.
    scenario: Value,
}

async fn presets(State(state): State<Arc<AppState>>) -> Response {
    let entries: Vec<PresetEntry<'_>> = state
        .catalog
        .iter()
        .map(|(name, s)| PresetEntry {
            name,
            description: &s.metadata.description,
            scenario: scenario_to_value(s),
        })
        .collect();
    let envelope = ApiEnvelope {
        request_id: request_id("/api/v1/presets", &Value::Null),
        scenario: None,
        result: serde_json::to_value(entries).expect("preset documents serialize"),
        warnings: Vec::new(),
    };
    respond(StatusCode::OK, &envelope)
}

async fn not_found() -> Response {
    failure_response(
        request_id("", &Value::Null),
        Failure {
            status: StatusCode::NOT_FOUND,
            kind: "not_found",
            message: "no such endpoint".into(),
        },
    )
}

/// The API routes. `cors_origin` enables CORS for one origin, or for any
/// origin with `*`.
pub fn router(catalog: PresetCatalog, cors_origin: Option<&str>) -> std::result::Result<Router, String> {
    let state = Arc::new(AppState { catalog });
    let mut app = Router::new()
        .route("/api/v1/presets", get(presets))
        .route("/api/v1/project", post(project))
        .route("/api/v1/target", post(target))
        .route("/api/v1/lcoh", post(lcoh))
        .route("/api/v1/sweep", post(sweep))
        .route("/api/v1/figure", post(figure))
        .fallback(not_found)
        .with_state(state);
    if let Some(origin) = cors_origin {
        let allow = if origin == "*" {
            AllowOrigin::any()
        } else {
            let value = HeaderValue::from_str(origin).map_err(|e| format!("invalid CORS origin `{origin}`: {e}"))?;
            AllowOrigin::exact(value)
        };
        app = app.layer(
            CorsLayer::new()
                .allow_origin(allow)
                .allow_methods([Method::GET, Method::POST])
                .allow_headers([header::CONTENT_TYPE]),
        );
    }
    Ok(app)
}

/// Binds `addr` and serves until interrupted.
pub async fn serve(addr: SocketAddr, catalog: PresetCatalog, cors_origin: Option<&str>) -> std::io::Result<()> {
    let app = router(catalog, cors_origin).map_err(|e| std::io::Error::new(std::io::ErrorKind::InvalidInput, e))?;
    let listener = TcpListener::bind(addr).await?;
    eprintln!("listening on http://{}", listener.local_addr()?);
    axum::serve(listener, app)
        .with_graceful_shutdown(async {
            let _ = tokio::signal::ctrl_c().await;
        })
        .await
}
