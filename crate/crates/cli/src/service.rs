//! Read-only JSON API over one atlas, plus static frontend assets.

use std::collections::HashMap;
use std::io::Write;
use std::net::SocketAddr;
use std::path::PathBuf;
use std::sync::Arc;

use axum::extract::{Path, Query, State};
use axum::http::StatusCode;
use axum::response::{Html, IntoResponse, Response};
use axum::routing::get;
use axum::{Json, Router};
use rigo_atlas::render::{view_model, Fill, View, ViewSpec};
use rigo_atlas::topology::TopologyFile;
use rigo_atlas::{Atlas, Execution, Layer, RegionKind};
use serde_json::{json, Value};
use tower_http::services::ServeDir;

#[derive(Debug, Clone, PartialEq)]
pub struct ApiError {
    pub status: StatusCode,
    pub code: &'static str,
    pub message: String,
}

impl ApiError {
    fn new(status: StatusCode, code: &'static str, message: impl Into<String>) -> Self {
        ApiError {
            status,
            code,
            message: message.into(),
        }
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        (self.status, Json(json!({ "code": self.code, "message": self.message }))).into_response()
    }
}

impl From<rigo_atlas::Error> for ApiError {
    fn from(e: rigo_atlas::Error) -> Self {
        let status = match e.code() {
            "E_UNKNOWN_STATE" | "E_EMPTY_VIEW" => StatusCode::NOT_FOUND,
            _ => StatusCode::INTERNAL_SERVER_ERROR,
        };
        let code = e.code();
        ApiError::new(status, code, e.to_string())
    }
}

fn layer_param(params: &HashMap<String, String>) -> Result<Layer, ApiError> {
    match params.get("layer") {
        None => Ok(Layer::Rigo),
        Some(v) => v
            .parse()
            .map_err(|msg: String| ApiError::new(StatusCode::BAD_REQUEST, "E_BAD_LAYER", msg)),
    }
}

pub fn meta(atlas: &Atlas) -> Value {
    let s = atlas.stats();
    let style = atlas.style();
    json!({
        "counties": atlas.counties().len(),
        "rigo_count": s.rigo_count,
        "msa_count": s.msa_count,
        "k": atlas.bins().k,
        "ramps": style.ramps,
        "neutral": rigo_atlas::render::NEUTRAL,
        "strokes": style.strokes,
        "hatch": style.hatch,
        "line_color": style.line_color,
        "states": atlas.states(),
        "layers": Layer::ALL.map(Layer::as_str),
    })
}

/// Geometry, styles, outlines and legend for one view. Geometry is the
/// delta-encoded arc topology clipped to the view, with arcs and counties
/// renumbered locally; `arc_categories` and `counties` are parallel to it.
pub fn view_payload(atlas: &Atlas, view: View, layer: Layer) -> Result<Value, ApiError> {
    let spec = ViewSpec {
        style: atlas.style().clone(),
        ..ViewSpec::new(view.clone(), layer)
    };
    let vm = view_model(atlas, &spec, Execution::default())?;
    let mut arcs: Vec<usize> = vm.arcs.iter().map(|&(i, _)| i).collect();
    arcs.sort_unstable();
    let category_of: HashMap<usize, _> = vm.arcs.iter().copied().collect();
    let mut local = vec![usize::MAX; atlas.topology().arc_count()];
    for (l, &g) in arcs.iter().enumerate() {
        local[g] = l;
    }
    let sub = atlas.topology().subset(&vm.counties, &arcs)?;
    let fips: Vec<String> = vm.counties.iter().map(|&i| atlas.counties()[i].fips.clone()).collect();
    let topology = TopologyFile::encode(&sub, &fips);

    let counties: Vec<Value> = vm
        .counties
        .iter()
        .zip(&vm.styles)
        .map(|(&i, s)| {
            let (ramp, step) = match s.fill {
                Fill::Ramp { ramp, step } => (Some(ramp), Some(step)),
                Fill::Neutral => (None, None),
            };
            json!({
                "fips": atlas.counties()[i].fips,
                "color": s.fill.color(&spec.style),
                "ramp": ramp,
                "step": step,
                "texture": s.texture,
            })
        })
        .collect();
    let outlines: Vec<Value> = vm
        .outlines
        .iter()
        .map(|o| {
            let rings: Vec<Vec<i64>> = o
                .shape
                .arc_rings
                .iter()
                .map(|ring| {
                    ring.iter()
                        .map(|r| {
                            let mut r = *r;
                            r.index = local[r.index as usize] as u32;
                            r.encode()
                        })
                        .collect()
                })
                .collect();
            json!({ "kind": o.kind, "code": o.code, "area": o.shape.area, "rings": rings })
        })
        .collect();
    Ok(json!({
        "view": view.to_string(),
        "layer": layer,
        "topology": topology,
        "arc_categories": arcs.iter().map(|a| category_of[a]).collect::<Vec<_>>(),
        "counties": counties,
        "outlines": outlines,
        "legend": vm.legend,
    }))
}

pub fn county_detail(atlas: &Atlas, fips: &str) -> Result<Value, ApiError> {
    let c = atlas
        .county(fips)
        .ok_or_else(|| ApiError::new(StatusCode::NOT_FOUND, "E_UNKNOWN_FIPS", format!("no county {fips}")))?;
    let oc = atlas.categories().get(fips).copied();
    let region_name = |kind, code: &str| atlas.region(kind, code).map(|r| r.name.clone());
    Ok(json!({
        "fips": c.fips,
        "name": c.name,
        "state": c.state,
        "population": c.population,
        "rigo": c.rigo,
        "rigos": atlas.rigos_of(fips),
        "rigo_names": atlas.rigos_of(fips).iter().map(|r| region_name(RegionKind::Rigo, r)).collect::<Vec<_>>(),
        "msa": c.msa,
        "msa_name": c.msa.as_deref().and_then(|m| region_name(RegionKind::Msa, m)),
        "category": oc.map(|o| o.category),
        "dual_rigo": oc.is_some_and(|o| o.dual_rigo),
    }))
}

type Shared = Arc<Atlas>;

async fn get_meta(State(atlas): State<Shared>) -> Json<Value> {
    Json(meta(&atlas))
}

async fn get_national(
    State(atlas): State<Shared>,
    Query(params): Query<HashMap<String, String>>,
) -> Result<Json<Value>, ApiError> {
    let layer = layer_param(&params)?;
    view_payload(&atlas, View::National, layer).map(Json)
}

async fn get_state(
    State(atlas): State<Shared>,
    Path(code): Path<String>,
    Query(params): Query<HashMap<String, String>>,
) -> Result<Json<Value>, ApiError> {
    let layer = layer_param(&params)?;
    view_payload(&atlas, View::State(code), layer).map(Json)
}

async fn get_county(State(atlas): State<Shared>, Path(fips): Path<String>) -> Result<Json<Value>, ApiError> {
    county_detail(&atlas, &fips).map(Json)
}

async fn get_stats(State(atlas): State<Shared>) -> Json<Value> {
    Json(serde_json::to_value(atlas.stats()).expect("stats serialize"))
}

async fn placeholder() -> Html<&'static str> {
    Html(concat!(
        "<!doctype html><html><head><meta charset=\"utf-8\"><title>RIGO atlas</title></head><body>",
        "<h1>RIGO atlas service</h1><p>No frontend assets were configured; start with --assets DIR to serve them.</p>",
        "<ul><li><a href=\"/api/meta\">/api/meta</a></li><li><a href=\"/api/national?layer=rigo\">/api/national?layer=rigo</a></li>",
        "<li>/api/state/{code}?layer=msa</li><li>/api/county/{fips}</li><li><a href=\"/api/stats\">/api/stats</a></li></ul>",
        "</body></html>"
    ))
}

async fn api_not_found() -> ApiError {
    ApiError::new(StatusCode::NOT_FOUND, "E_NOT_FOUND", "no such endpoint")
}

pub fn router(atlas: Atlas, assets: Option<PathBuf>) -> Router {
    let api = Router::new()
        .route("/meta", get(get_meta))
        .route("/national", get(get_national))
        .route("/state/{code}", get(get_state))
        .route("/county/{fips}", get(get_county))
        .route("/stats", get(get_stats))
        .fallback(api_not_found);
    let app = Router::new().nest("/api", api);
    let app = match assets {
        Some(dir) => app.fallback_service(ServeDir::new(dir)),
        None => app.route("/", get(placeholder)),
    };
    app.with_state(Arc::new(atlas))
}

/// Serves until interrupted.
pub async fn serve(
    atlas: Atlas,
    addr: SocketAddr,
    assets: Option<PathBuf>,
    log: &mut dyn Write,
) -> std::io::Result<()> {
    let listener = tokio::net::TcpListener::bind(addr).await?;
    let _ = writeln!(log, "listening on http://{}", listener.local_addr()?);
    axum::serve(listener, router(atlas, assets))
        .with_graceful_shutdown(async {
            let _ = tokio::signal::ctrl_c().await;
        })
        .await?;
    let _ = writeln!(log, "shut down");
    Ok(())
}
