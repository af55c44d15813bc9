//! WebAssembly bindings for the browser demo in `www/`.
//!
//! Each export takes plain scalars and returns a JSON string, so the page
//! needs no generated TypeScript types. The pure functions in this module do
//! the work and are tested natively; the `#[wasm_bindgen]` wrappers only
//! convert errors.

use avgop::analysis::{estimate_gamma, random_boundary};
use avgop::lattice::{make_box, solve_dirichlet, BoundaryData, SolverConfig};
use avgop::operators::EikonalSign;
use avgop::verifier::{run_battery, SamplingPlan, DEFAULT_GAMMA_GRID};
use avgop::{AveragingOperator, OperatorSpec};
use serde::Serialize;
use wasm_bindgen::prelude::*;

/// Largest box radius the heatmap accepts; keeps a solve under a second.
pub const MAX_HEATMAP_RADIUS: usize = 40;
pub const MAX_SAMPLES: usize = 50_000;
pub const MAX_GAMMA_RADIUS: usize = 24;
pub const MAX_TRIALS: usize = 64;

/// `param` is `p` for the p-laplacian, `alpha` for p-harmonious and the
/// `+e_1` weight `a` for the one-dimensional weighted mean; other operators
/// ignore it.
pub fn build_operator(name: &str, param: f64, dim: usize) -> Result<OperatorSpec, String> {
    let op = match name {
        "mean" => OperatorSpec::mean(dim),
        "p-laplacian" => OperatorSpec::p_laplacian(dim, param),
        "p-harmonious" => OperatorSpec::p_harmonious(dim, param),
        "infinity" => OperatorSpec::infinity(dim),
        "median" => OperatorSpec::median(dim),
        "eikonal-plus" => OperatorSpec::eikonal(dim, EikonalSign::Plus),
        "eikonal-minus" => OperatorSpec::eikonal(dim, EikonalSign::Minus),
        "weighted" if dim == 1 => OperatorSpec::weighted_mean(vec![param, 1.0 - param]),
        "weighted" => return Err("the weighted demo operator is one-dimensional".into()),
        other => return Err(format!("unknown operator {other:?}")),
    };
    op.map_err(|e| e.to_string())
}

fn to_json(value: &impl Serialize) -> Result<String, String> {
    serde_json::to_string(value).map_err(|e| e.to_string())
}

#[derive(Debug, Serialize)]
pub struct Heatmap {
    pub label: String,
    pub radius: usize,
    /// Row-major over `x_1`, then `x_2`, both from `-N` to `N`.
    pub values: Vec<f64>,
    pub min: f64,
    pub max: f64,
    pub sweeps: usize,
    pub residual: f64,
    pub converged: bool,
}

/// Solves on the square `B_N` in `d = 2`. `pattern` is `random` (uniform
/// `[0, 1]` from `seed`), `delta` (1 at `(N, 0)`) or `edge` (1 on `x_1 = N`).
pub fn solve_heatmap(name: &str, param: f64, radius: usize, pattern: &str, seed: u64) -> Result<String, String> {
    if radius == 0 || radius > MAX_HEATMAP_RADIUS {
        return Err(format!("radius must be between 1 and {MAX_HEATMAP_RADIUS}"));
    }
    let op = build_operator(name, param, 2)?;
    let lattice = make_box(2, radius).map_err(|e| e.to_string())?;
    let n = radius as i64;
    let data = match pattern {
        "random" => random_boundary(&lattice, seed, 0),
        "delta" => BoundaryData::from_fn(lattice.clone(), |x| if x == [n, 0] { 1.0 } else { 0.0 }),
        "edge" => BoundaryData::from_fn(lattice.clone(), |x| if x[0] == n { 1.0 } else { 0.0 }),
        other => return Err(format!("unknown boundary pattern {other:?}")),
    }
    .map_err(|e| e.to_string())?;
    let cfg = SolverConfig {
        max_sweeps: 20_000,
        ..SolverConfig::default()
    };
    let (u, report) = solve_dirichlet(&op, &lattice, &data, &cfg).map_err(|e| e.to_string())?;
    to_json(&Heatmap {
        label: op.label(),
        radius,
        values: u.values().to_vec(),
        min: u.min(),
        max: u.max(),
        sweeps: report.sweeps_used,
        residual: report.final_residual,
        converged: report.converged,
    })
}

/// The full axiom battery, serialized as returned by the verifier.
pub fn classify(name: &str, param: f64, dim: usize, samples: usize, seed: u64) -> Result<String, String> {
    if samples == 0 || samples > MAX_SAMPLES {
        return Err(format!("samples must be between 1 and {MAX_SAMPLES}"));
    }
    let op = build_operator(name, param, dim)?;
    let battery = run_battery(&op, &SamplingPlan::new(samples, seed), &DEFAULT_GAMMA_GRID)
        .map_err(|e| e.to_string())?;
    to_json(&battery)
}

/// Neighbour-ratio estimates on each radius in the comma-separated `radii`.
pub fn gamma_trend(
    name: &str,
    param: f64,
    dim: usize,
    radii: &str,
    trials: usize,
    seed: u64,
) -> Result<String, String> {
    let radii = radii
        .split(',')
        .map(|r| r.trim().parse::<usize>().map_err(|e| format!("radius {r:?}: {e}")))
        .collect::<Result<Vec<_>, _>>()?;
    if radii.iter().any(|r| *r == 0 || *r > MAX_GAMMA_RADIUS) {
        return Err(format!("radii must be between 1 and {MAX_GAMMA_RADIUS}"));
    }
    if trials == 0 || trials > MAX_TRIALS {
        return Err(format!("trials must be between 1 and {MAX_TRIALS}"));
    }
    let op = build_operator(name, param, dim)?;
    if op.declared_lambda().is_none() {
        return Err(format!("{} has no ellipticity constant", op.label()));
    }
    let est = estimate_gamma(&op, &radii, trials, seed, &SolverConfig::default())
        .map_err(|e| e.to_string())?;
    to_json(&est)
}

fn js(r: Result<String, String>) -> Result<String, JsError> {
    r.map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = solveHeatmap)]
pub fn solve_heatmap_js(name: &str, param: f64, radius: usize, pattern: &str, seed: u32) -> Result<String, JsError> {
    js(solve_heatmap(name, param, radius, pattern, seed.into()))
}

#[wasm_bindgen(js_name = classifyOperator)]
pub fn classify_js(name: &str, param: f64, dim: usize, samples: usize, seed: u32) -> Result<String, JsError> {
    js(classify(name, param, dim, samples, seed.into()))
}

#[wasm_bindgen(js_name = gammaTrend)]
pub fn gamma_trend_js(
    name: &str,
    param: f64,
    dim: usize,
    radii: &str,
    trials: usize,
    seed: u32,
) -> Result<String, JsError> {
    js(gamma_trend(name, param, dim, radii, trials, seed.into()))
}

#[wasm_bindgen]
pub fn version() -> String {
    avgop::VERSION.to_owned()
}
