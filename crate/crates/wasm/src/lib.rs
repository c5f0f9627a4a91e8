//! Browser bindings: three interactive operations, each taking the surface
//! polynomial as text and returning a JSON string (`{"ok":false,"error":..}`
//! on failure, so nothing ever unwinds across the boundary).

use serde::Serialize;
use wasm_bindgen::prelude::wasm_bindgen;

use newton_sobolev::exponents::AnalyzeError;
use newton_sobolev::*;

#[derive(Serialize)]
struct PolygonView {
    vertices: Vec<(u32, u32)>,
    distance: String,
    distance_f64: f64,
    hit: String,
    edge_orders: Vec<u32>,
}

fn polygon_view(p: &Poly2) -> Option<PolygonView> {
    let np = newton_polygon(p).ok()?;
    let hit = diagonal_classification(&np);
    Some(PolygonView {
        vertices: np.vertices().to_vec(),
        distance: np.distance().to_string(),
        distance_f64: np.distance().to_f64(),
        hit: format!("{:?}", hit.kind),
        edge_orders: np.compact_edges().iter().map(|e| e.o).collect(),
    })
}

#[derive(Serialize)]
struct AnalyzeView {
    ok: bool,
    report: AnalysisReport,
    eta_f64: Option<f64>,
    eta_prime_f64: Option<f64>,
    surface: PolygonView,
    hessian: Option<PolygonView>,
    hessian_text: String,
    support: Vec<(u32, u32)>,
    hessian_support: Vec<(u32, u32)>,
}

fn err_json(message: impl std::fmt::Display) -> String {
    serde_json::json!({ "ok": false, "error": message.to_string() }).to_string()
}

fn run_analysis(poly_text: &str) -> Result<(Poly2, AnalysisReport), String> {
    let poly = parse_poly(poly_text).map_err(|e| e.to_string())?;
    match analyze(&poly, &GrowthConfig::default()) {
        Ok(report) => Ok((poly, report)),
        Err(AnalyzeError::UndeterminedIndex { report, .. }) => Ok((poly, *report)),
        Err(e) => Err(e.to_string()),
    }
}

/// Full exponent analysis plus both Newton polygons, as JSON.
#[wasm_bindgen]
pub fn analyze_surface(poly_text: &str) -> String {
    let (poly, report) = match run_analysis(poly_text) {
        Ok(v) => v,
        Err(e) => return err_json(e),
    };
    let hessian = poly.hessian_det();
    let view = AnalyzeView {
        ok: true,
        eta_f64: report.eta.value.as_ref().map(|r| r.to_f64()),
        eta_prime_f64: report.eta_prime.value.as_ref().map(|r| r.to_f64()),
        surface: polygon_view(&poly).expect("analyzed polynomial is nonzero"),
        hessian: polygon_view(&hessian),
        hessian_text: hessian.to_string(),
        support: poly.support().collect(),
        hessian_support: hessian.support().collect(),
        report,
    };
    serde_json::to_string(&view).unwrap_or_else(err_json)
}

#[derive(Serialize)]
struct RegionView {
    theorem: String,
    plane: String,
    vertices: Vec<(f64, f64)>,
    vertices_exact: Vec<(String, String)>,
}

fn region_view(region: &RegionPolygon) -> RegionView {
    RegionView {
        theorem: format!("{:?}", region.theorem),
        plane: format!("{:?}", region.plane),
        vertices: region
            .vertices
            .iter()
            .map(|(x, y)| (x.to_f64(), y.to_f64()))
            .collect(),
        vertices_exact: region
            .vertices
            .iter()
            .map(|(x, y)| (x.to_string(), y.to_string()))
            .collect(),
    }
}

/// Sobolev and Lebesgue boundedness regions for the surface, as JSON.
#[wasm_bindgen]
pub fn boundedness_regions(poly_text: &str) -> String {
    let (_, report) = match run_analysis(poly_text) {
        Ok(v) => v,
        Err(e) => return err_json(e),
    };
    let sobolev = match sobolev_region(&report) {
        Ok(r) => r,
        Err(e) => return err_json(e),
    };
    let lebesgue = match lebesgue_region(&report) {
        Ok(r) => r,
        Err(e) => return err_json(e),
    };
    serde_json::to_string(&serde_json::json!({
        "ok": true,
        "regime": format!("{:?}", report.regime),
        "eta1": report.eta1.as_ref().map(|r| r.to_string()),
        "sobolev": region_view(&sobolev),
        "lebesgue": region_view(&lebesgue),
    }))
    .unwrap_or_else(err_json)
}

/// Sublevel ladder and exponent fit for the surface or its Hessian
/// determinant, as JSON. Runs single-threaded; keep `samples` modest.
#[wasm_bindgen]
pub fn sublevel_ladder(
    poly_text: &str,
    target: &str,
    seed: u32,
    samples: u32,
    j0: u32,
    j1: u32,
) -> String {
    let (poly, report) = match run_analysis(poly_text) {
        Ok(v) => v,
        Err(e) => return err_json(e),
    };
    let (g, exact) = match target {
        "S" => (poly.clone(), report.eta.value.clone()),
        "H" => (poly.hessian_det(), report.eta_prime.value.clone()),
        other => return err_json(format!("unknown target `{other}` (use S or H)")),
    };
    let cfg = SublevelConfig {
        samples_per_rung: samples as u64,
        delta_min_exp: j0,
        delta_max_exp: j1,
        seed: seed as u64,
        ..SublevelConfig::default()
    };
    let rungs = match run_ladder(&g, &cfg) {
        Ok(r) => r,
        Err(e) => return err_json(e),
    };
    let fit = fit_growth(
        &rungs
            .iter()
            .map(|r| (r.delta, r.measure))
            .collect::<Vec<_>>(),
    );
    serde_json::to_string(&serde_json::json!({
        "ok": true,
        "target": target,
        "exact": exact.as_ref().map(|r| r.to_string()),
        "exact_f64": exact.as_ref().map(|r| r.to_f64()),
        "box_area": cfg.box_area(),
        "rungs": rungs,
        "eta_hat": fit.as_ref().ok().map(|f| f.eta_hat),
        "k_hat": fit.as_ref().ok().map(|f| f.k_hat),
        "fit_residual": fit.as_ref().ok().map(|f| f.fit_residual),
    }))
    .unwrap_or_else(err_json)
}
