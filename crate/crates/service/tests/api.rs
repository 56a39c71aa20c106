use axum::body::Body;
use axum::http::{header, Request, StatusCode};
use axum::Router;
use http_body_util::BodyExt;
use learncurve_core::io::{builtin_presets, load_scenario, scenario_to_value, LoadMode, STACKS_BENCHMARK};
use learncurve_service::router;
use serde_json::{json, Value};
use tower::ServiceExt;

fn app() -> Router {
    router(builtin_presets(), None).unwrap()
}

async fn call(app: Router, request: Request<Body>) -> (StatusCode, Value) {
    let response = app.oneshot(request).await.unwrap();
    let status = response.status();
    let bytes = response.into_body().collect().await.unwrap().to_bytes();
    (status, serde_json::from_slice(&bytes).unwrap())
}

async fn post(path: &str, body: Value) -> (StatusCode, Value) {
    let request = Request::post(path)
        .header(header::CONTENT_TYPE, "application/json")
        .body(Body::from(body.to_string()))
        .unwrap();
    call(app(), request).await
}

fn record(result: &Value, pred: impl Fn(&Value) -> bool) -> &Value {
    result["records"].as_array().unwrap().iter().find(|r| pred(r)).unwrap()
}

#[tokio::test]
async fn lists_presets_with_provenance() {
    let (status, body) = call(app(), Request::get("/api/v1/presets").body(Body::empty()).unwrap()).await;
    assert_eq!(status, StatusCode::OK);
    let names: Vec<&str> = body["result"].as_array().unwrap().iter().map(|p| p["name"].as_str().unwrap()).collect();
    assert!(names.contains(&"paper-stacks-benchmark") && names.contains(&"paper-bop-epc-2030"));
    let provenance = &body["result"][0]["scenario"]["metadata"]["provenance"];
    assert!(provenance.as_object().is_some_and(|m| !m.is_empty()));
}

#[tokio::test]
async fn fragmented_halving_target() {
    let (status, body) = post(
        "/api/v1/target",
        json!({
            "preset": STACKS_BENCHMARK,
            "variant": "western_pem",
            "structure": "technology_fragmented",
            "target_cost_usd_per_kw": 300.0
        }),
    )
    .await;
    assert_eq!(status, StatusCode::OK, "{body}");
    let r = &body["result"]["records"][0];
    let capacity = r["required_family_capacity_gw"].as_f64().unwrap();
    assert!((capacity - 8.6).abs() < 0.05, "{capacity}");
    assert_eq!(body["scenario"]["metadata"]["name"], "paper-stacks-benchmark");
    assert_eq!(body["request_id"].as_str().unwrap().len(), 16);
}

#[tokio::test]
async fn project_applies_overrides_and_echoes_them() {
    let (status, body) = post(
        "/api/v1/project",
        json!({
            "preset": STACKS_BENCHMARK,
            "overrides": {"stacks": {"curves": {"western_pem": {"initial_cost_usd_per_kw": 700.0}}}},
            "structure": "shared",
            "at_total_gw": 0.0
        }),
    )
    .await;
    assert_eq!(status, StatusCode::OK, "{body}");
    let wpem = record(&body["result"], |r| r["subject"] == "western_pem");
    assert_eq!(wpem["cost_usd_per_kw"], 700.0);
    assert_eq!(body["scenario"]["stacks"]["curves"]["western_pem"]["initial_cost_usd_per_kw"], 700.0);
    let resolved = load_scenario(&body["scenario"].to_string(), LoadMode::Strict).unwrap();
    assert_eq!(resolved.scenario.stack_curves.len(), 4);
}

#[tokio::test]
async fn shared_projection_after_100_gw() {
    let (_, body) = post(
        "/api/v1/project",
        json!({"preset": STACKS_BENCHMARK, "structure": "shared", "at_total_gw": 100.0}),
    )
    .await;
    let wpem = record(&body["result"], |r| r["subject"] == "western_pem");
    assert!((wpem["cost_usd_per_kw"].as_f64().unwrap() - 353.6).abs() < 0.5);
    assert_eq!(body["result"]["records"].as_array().unwrap().len(), 4);
}

#[tokio::test]
async fn validation_errors_are_422_with_field_names() {
    let (status, body) = post(
        "/api/v1/project",
        json!({
            "preset": STACKS_BENCHMARK,
            "overrides": {"stacks": {"curves": {"western_pem": {"learning_rate": 1.2}}}}
        }),
    )
    .await;
    assert_eq!(status, StatusCode::UNPROCESSABLE_ENTITY);
    assert_eq!(body["error"]["kind"], "validation");
    let msg = body["error"]["message"].as_str().unwrap();
    assert!(msg.starts_with("stacks.curves.western_pem.learning_rate = 1.2"), "{msg}");

    // the same message the loader gives
    let mut doc = scenario_to_value(builtin_presets().get(STACKS_BENCHMARK).unwrap());
    doc["stacks"]["curves"]["western_pem"]["learning_rate"] = json!(1.2);
    let direct = load_scenario(&doc.to_string(), LoadMode::Strict).unwrap_err().to_string();
    assert_eq!(msg, direct);
}

#[tokio::test]
async fn unknown_keys_strict_and_lax() {
    let body = json!({"preset": STACKS_BENCHMARK, "overrides": {"finance": {"waccc": 0.1}}});
    let (status, strict) = post("/api/v1/project", body.clone()).await;
    assert_eq!(status, StatusCode::UNPROCESSABLE_ENTITY);
    assert_eq!(strict["error"]["kind"], "unknown_keys");

    let mut lax = body;
    lax["lax"] = json!(true);
    lax["bogus_argument"] = json!(1);
    let (status, ok) = post("/api/v1/project", lax).await;
    assert_eq!(status, StatusCode::OK);
    let warnings = ok["warnings"].as_array().unwrap();
    assert_eq!(warnings.len(), 2, "{warnings:?}");

    let (status, _) = post("/api/v1/project", json!({"preset": STACKS_BENCHMARK, "bogus_argument": 1})).await;
    assert_eq!(status, StatusCode::UNPROCESSABLE_ENTITY);
}

#[tokio::test]
async fn malformed_and_mistyped_requests() {
    let request = Request::post("/api/v1/project")
        .header(header::CONTENT_TYPE, "text/plain")
        .body(Body::from("{}"))
        .unwrap();
    let (status, body) = call(app(), request).await;
    assert_eq!(status, StatusCode::UNSUPPORTED_MEDIA_TYPE);
    assert_eq!(body["error"]["kind"], "content_type");

    let request = Request::post("/api/v1/project")
        .header(header::CONTENT_TYPE, "application/json")
        .body(Body::from("{\"preset\": "))
        .unwrap();
    let (status, _) = call(app(), request).await;
    assert_eq!(status, StatusCode::BAD_REQUEST);

    let (status, body) = post("/api/v1/project", json!({"scenario": {"metadata": {"name": "x"}}})).await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
    assert_eq!(body["error"]["kind"], "parse");

    let (status, _) = post("/api/v1/project", json!({"preset": "nope"})).await;
    assert_eq!(status, StatusCode::UNPROCESSABLE_ENTITY);

    let (status, _) = post("/api/v1/nothing", json!({})).await;
    assert_eq!(status, StatusCode::NOT_FOUND);
}

#[tokio::test]
async fn figure_csv_and_records_agree() {
    let (_, as_json) = post("/api/v1/figure", json!({"preset": STACKS_BENCHMARK, "id": "fig2"})).await;
    let (_, as_csv) = post("/api/v1/figure", json!({"preset": STACKS_BENCHMARK, "id": "fig2", "format": "csv"})).await;
    let csv = as_csv["result"].as_str().unwrap();
    let lines: Vec<&str> = csv.trim_end().split("\r\n").collect();
    let records = as_json["result"]["records"].as_array().unwrap();
    assert_eq!(lines.len(), records.len() + 1);
    assert_ne!(as_json["request_id"], as_csv["request_id"]);
}

#[tokio::test]
async fn responses_do_not_depend_on_request_order() {
    let requests = [
        ("/api/v1/sweep", json!({"preset": STACKS_BENCHMARK, "variant": "western_pem", "axis_gw": [84.0, 124.0, 164.0]})),
        ("/api/v1/lcoh", json!({"preset": STACKS_BENCHMARK, "capex_usd_per_kw": 215.0, "utilization": 0.5})),
        ("/api/v1/figure", json!({"preset": "paper-bop-epc-2030", "id": "fig4"})),
    ];
    let mut forward = Vec::new();
    for (path, body) in &requests {
        forward.push(post(path, body.clone()).await);
    }
    let app = app();
    let mut backward = Vec::new();
    for (path, body) in requests.iter().rev() {
        let request = Request::post(*path)
            .header(header::CONTENT_TYPE, "application/json")
            .body(Body::from(body.to_string()))
            .unwrap();
        backward.push(call(app.clone(), request).await);
    }
    backward.reverse();
    assert_eq!(forward, backward);

    let lcoh = forward[1].1["result"]["records"][0]["lcoh_usd_per_kg"].as_f64().unwrap();
    assert!((lcoh - 0.41).abs() <= 0.01);
    let sweep = &forward[0].1["result"]["records"];
    assert!((sweep[0]["cost_lr_base_usd_per_kw"].as_f64().unwrap() - 400.87).abs() < 0.01);
}

#[tokio::test]
async fn cors_is_opt_in() {
    let preflight = || {
        Request::options("/api/v1/project")
            .header(header::ORIGIN, "http://localhost:5173")
            .header(header::ACCESS_CONTROL_REQUEST_METHOD, "POST")
            .body(Body::empty())
            .unwrap()
    };
    let with = router(builtin_presets(), Some("http://localhost:5173")).unwrap();
    let response = with.oneshot(preflight()).await.unwrap();
    assert_eq!(
        response.headers().get(header::ACCESS_CONTROL_ALLOW_ORIGIN).unwrap(),
        "http://localhost:5173"
    );
    let response = app().oneshot(preflight()).await.unwrap();
    assert!(response.headers().get(header::ACCESS_CONTROL_ALLOW_ORIGIN).is_none());
    assert!(router(builtin_presets(), Some("bad\norigin")).is_err());
}
