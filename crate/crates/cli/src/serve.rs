//! Local HTTP service: the bundle plus recompute-on-prune.
//!
//! * `GET /health`
//! * `GET /bundle` returns the analysis bundle of the full dataset.
//! * `POST /recompute` with `{"rows": [i, ...]}` returns the statistics of
//!   that row subset together with a hash of the (sorted) index set.

use std::io::Write;
use std::net::SocketAddr;
use std::sync::Arc;

use axum::body::Bytes;
use axum::extract::State;
use axum::http::{header, HeaderValue, Method, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::get;
use axum::Router;
use infoscope_core::{analyze, build_bundle, AnalysisOptions, Dataset, Error, Statistics};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RecomputeRequest {
    pub rows: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RecomputeResponse {
    pub subset_hash: String,
    pub n_rows: usize,
    pub statistics: Statistics,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ErrorBody {
    pub code: String,
    pub message: String,
    /// Echo of the request's subset hash when the index set itself was valid.
    pub subset_hash: Option<String>,
}

#[derive(Debug)]
pub struct ServiceError {
    pub status: StatusCode,
    pub body: ErrorBody,
}

impl ServiceError {
    fn new(
        status: StatusCode,
        code: &str,
        message: impl Into<String>,
        hash: Option<String>,
    ) -> Self {
        Self {
            status,
            body: ErrorBody {
                code: code.into(),
                message: message.into(),
                subset_hash: hash,
            },
        }
    }
}

impl IntoResponse for ServiceError {
    fn into_response(self) -> Response {
        json_response(self.status, &self.body)
    }
}

/// Hex SHA-256 of the sorted indices as little-endian u64s.
pub fn subset_hash(sorted_rows: &[usize]) -> String {
    let mut h = Sha256::new();
    for &r in sorted_rows {
        h.update((r as u64).to_le_bytes());
    }
    hex::encode(h.finalize())
}

fn root_cause(e: &Error) -> &Error {
    match e {
        Error::Subset { source, .. } | Error::Variable { source, .. } => root_cause(source),
        other => other,
    }
}

/// Statistics of the rows `rows` of `d`. Indices may come in any order but
/// must be in range and distinct; the subset is analysed in ascending index
/// order, exactly as a dataset materialized from those rows would be.
pub fn recompute(
    d: &Dataset,
    options: &AnalysisOptions,
    rows: &[usize],
) -> Result<RecomputeResponse, ServiceError> {
    let mut sorted = rows.to_vec();
    sorted.sort_unstable();
    if let Some(&bad) = sorted.iter().find(|&&r| r >= d.n_rows()) {
        return Err(ServiceError::new(
            StatusCode::BAD_REQUEST,
            "row_out_of_range",
            format!("row index {bad} out of range for {} rows", d.n_rows()),
            None,
        ));
    }
    if let Some(w) = sorted.windows(2).find(|w| w[0] == w[1]) {
        return Err(ServiceError::new(
            StatusCode::BAD_REQUEST,
            "duplicate_row",
            format!("row index {} listed more than once", w[0]),
            None,
        ));
    }
    let hash = subset_hash(&sorted);
    let analysed = d.subset_rows(&sorted).and_then(|s| analyze(&s, options));
    match analysed {
        Ok(statistics) => Ok(RecomputeResponse {
            subset_hash: hash,
            n_rows: sorted.len(),
            statistics,
        }),
        Err(e) => {
            let code = match root_cause(&e) {
                Error::SingleClass { .. } | Error::SmallClass { .. } | Error::TooFewRows { .. } => {
                    "insufficient_rows"
                }
                _ => "analysis_failed",
            };
            Err(ServiceError::new(
                StatusCode::UNPROCESSABLE_ENTITY,
                code,
                e.to_string(),
                Some(hash),
            ))
        }
    }
}

pub struct AppState {
    dataset: Dataset,
    options: AnalysisOptions,
    bundle: Vec<u8>,
}

impl AppState {
    pub fn new(dataset: Dataset, options: AnalysisOptions) -> anyhow::Result<Arc<Self>> {
        let bundle = build_bundle(&dataset, &options)?.to_json()?;
        Ok(Arc::new(Self {
            dataset,
            options,
            bundle,
        }))
    }

    pub fn bundle_json(&self) -> &[u8] {
        &self.bundle
    }
}

fn json_response<T: Serialize>(status: StatusCode, body: &T) -> Response {
    match serde_json::to_vec(body) {
        Ok(bytes) => (status, [(header::CONTENT_TYPE, "application/json")], bytes).into_response(),
        Err(e) => (StatusCode::INTERNAL_SERVER_ERROR, e.to_string()).into_response(),
    }
}

async fn health() -> Response {
    json_response(StatusCode::OK, &serde_json::json!({"status": "ok"}))
}

async fn bundle(State(state): State<Arc<AppState>>) -> Response {
    (
        StatusCode::OK,
        [(header::CONTENT_TYPE, "application/json")],
        state.bundle.clone(),
    )
        .into_response()
}

async fn recompute_handler(
    State(state): State<Arc<AppState>>,
    body: Bytes,
) -> Result<Response, ServiceError> {
    let request: RecomputeRequest = serde_json::from_slice(&body).map_err(|e| {
        ServiceError::new(
            StatusCode::BAD_REQUEST,
            "malformed_request",
            e.to_string(),
            None,
        )
    })?;
    let response = tokio::task::spawn_blocking(move || {
        recompute(&state.dataset, &state.options, &request.rows)
    })
    .await
    .map_err(|e| {
        ServiceError::new(
            StatusCode::INTERNAL_SERVER_ERROR,
            "internal",
            e.to_string(),
            None,
        )
    })??;
    Ok(json_response(StatusCode::OK, &response))
}

async fn preflight() -> StatusCode {
    StatusCode::NO_CONTENT
}

async fn cors(req: axum::extract::Request, next: axum::middleware::Next) -> Response {
    let mut res = next.run(req).await;
    let h = res.headers_mut();
    h.insert(
        header::ACCESS_CONTROL_ALLOW_ORIGIN,
        HeaderValue::from_static("*"),
    );
    h.insert(
        header::ACCESS_CONTROL_ALLOW_METHODS,
        HeaderValue::from_static("GET, POST, OPTIONS"),
    );
    h.insert(
        header::ACCESS_CONTROL_ALLOW_HEADERS,
        HeaderValue::from_static("content-type"),
    );
    res
}

pub fn router(state: Arc<AppState>) -> Router {
    Router::new()
        .route("/health", get(health))
        .route("/bundle", get(bundle))
        .route(
            "/recompute",
            axum::routing::post(recompute_handler)
                .on(axum::routing::MethodFilter::OPTIONS, preflight),
        )
        .layer(axum::middleware::from_fn(cors))
        .with_state(state)
        .method_not_allowed_fallback(|m: Method| async move {
            ServiceError::new(
                StatusCode::METHOD_NOT_ALLOWED,
                "method_not_allowed",
                format!("{m} not supported here"),
                None,
            )
        })
}

pub fn serve_blocking(
    state: Arc<AppState>,
    addr: SocketAddr,
    out: &mut dyn Write,
) -> anyhow::Result<()> {
    let rt = tokio::runtime::Builder::new_multi_thread()
        .enable_all()
        .build()?;
    rt.block_on(async {
        let listener = tokio::net::TcpListener::bind(addr).await?;
        writeln!(out, "listening on http://{}", listener.local_addr()?)?;
        out.flush()?;
        axum::serve(listener, router(state))
            .with_graceful_shutdown(async {
                let _ = tokio::signal::ctrl_c().await;
            })
            .await?;
        anyhow::Ok(())
    })?;
    writeln!(out, "shut down")?;
    Ok(())
}
