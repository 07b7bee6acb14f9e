//! Browser bindings: a sampled Z^2 window, the threshold calculator and the
//! H bracket curve on Z^1. The plain functions are usable natively; the
//! `#[wasm_bindgen]` wrappers only convert errors.

use std::sync::Arc;

use boolperc::analysis::{p_zero, p_zero_exact, prob_h_bracket, Constants, ExactConstants};
use boolperc::window::Scratch;
use boolperc::{Configuration, Evaluator, GraphModel, PercError, ProcessSpec, RadiusLaw, Window};
use serde_json::json;
use wasm_bindgen::prelude::*;

/// Largest window radius the grid view accepts.
pub const MAX_GRID_RADIUS: u64 = 80;

pub const CELL_OUTSIDE: u8 = 0;
pub const CELL_EMPTY: u8 = 1;
pub const CELL_COVERED: u8 = 2;
pub const CELL_OCCUPIED: u8 = 3;
pub const CELL_CLUSTER: u8 = 4;

/// Cell states of B(0, radius) in Z^2, row-major over the
/// (2 radius + 1)^2 square, row y = -radius first. A cell in the cluster of
/// the origin is `CELL_CLUSTER`; otherwise occupied beats covered.
pub fn grid_cells(p: f64, law: &str, radius: u64, seed: u64) -> Result<Vec<u8>, PercError> {
    if radius == 0 || radius > MAX_GRID_RADIUS {
        return Err(PercError::InvalidSpec(format!("grid radius must lie in 1..={MAX_GRID_RADIUS}")));
    }
    let model = GraphModel::z(2);
    let spec = ProcessSpec::new(p, RadiusLaw::parse(law)?, seed)?;
    let window = Arc::new(Window::new(&model, &model.origin(), radius)?);
    let config = Configuration::sample(window.clone(), &spec);
    let side = 2 * radius as usize + 1;
    let cell = |i: usize| {
        let c = window.vertices[i].coords();
        (c[1] + radius as i64) as usize * side + (c[0] + radius as i64) as usize
    };
    let mut cells = vec![CELL_OUTSIDE; side * side];
    for i in 0..window.len() {
        cells[cell(i)] = CELL_EMPTY;
    }
    let mut scratch = Scratch::new();
    let mut ball = Vec::new();
    for i in config.occupied_indices() {
        // radii past the window only matter up to its diameter
        window.ball_from(i, config.radius[i].min(2 * radius), &mut scratch, &mut ball)?;
        for &(j, _) in &ball {
            let k = cell(j as usize);
            if cells[k] == CELL_EMPTY {
                cells[k] = CELL_COVERED;
            }
        }
    }
    for i in config.occupied_indices() {
        cells[cell(i)] = CELL_OCCUPIED;
    }
    for v in Evaluator::new().cluster(&config, &model.origin())?.members {
        if let Some(i) = window.index_of(&v) {
            cells[cell(i)] = CELL_CLUSTER;
        }
    }
    Ok(cells)
}

/// The constants and threshold p0 for `|B(v,r)| <= c1 r^dim`, as JSON.
pub fn threshold_json(dim: f64, c1: f64, law: &str) -> Result<String, PercError> {
    if !(dim >= 0.0 && c1 > 0.0) {
        return Err(PercError::InvalidSpec("need dim >= 0 and c1 > 0".into()));
    }
    let law = RadiusLaw::parse(law)?;
    let c = Constants::new(dim, c1);
    let (p0, p0_exact) = match p_zero(&c, &law) {
        Ok(p0) => {
            let exact = match ExactConstants::from_constants(&c) {
                Some(e) => p_zero_exact(&e, &law)?.map(|q| q.to_string()),
                None => None,
            };
            (Some(p0), exact)
        }
        Err(PercError::InfiniteMoment { .. }) => (None, None),
        Err(e) => return Err(e),
    };
    Ok(json!({
        "law": law.to_string(),
        "c2": c.c2(),
        "c3": c.c3(),
        "k": c.k(),
        "p0": p0,
        "p0_exact": p0_exact,
    })
    .to_string())
}

/// Brackets on P(H(0, r)) on Z^1 for r = 1..=r_max, flattened as
/// `[lo_1, hi_1, lo_2, hi_2, ...]`.
pub fn bracket_curve(p: f64, law: &str, r_max: u64, window: u64) -> Result<Vec<f64>, PercError> {
    if r_max == 0 || window <= 10 * r_max || window > 100_000 {
        return Err(PercError::InvalidSpec("need 1 <= r_max and 10 r_max < window <= 100000".into()));
    }
    let model = GraphModel::z(1);
    let law = RadiusLaw::parse(law)?;
    let (c, _) = Constants::resolve(&model)?;
    let mut out = Vec::with_capacity(2 * r_max as usize);
    for r in 1..=r_max {
        let b = prob_h_bracket(&model, &model.origin(), r, p, &law, window, &c, 2 * window)?;
        out.push(b.lo);
        out.push(b.hi);
    }
    Ok(out)
}

fn js(e: PercError) -> JsError {
    JsError::new(&e.to_string())
}

#[wasm_bindgen(js_name = sampleGrid)]
pub fn sample_grid(p: f64, law: &str, radius: u32, seed: u32) -> Result<Vec<u8>, JsError> {
    grid_cells(p, law, radius.into(), seed.into()).map_err(js)
}

#[wasm_bindgen(js_name = threshold)]
pub fn threshold(dim: f64, c1: f64, law: &str) -> Result<String, JsError> {
    threshold_json(dim, c1, law).map_err(js)
}

#[wasm_bindgen(js_name = bracketCurve)]
pub fn bracket_curve_js(p: f64, law: &str, r_max: u32, window: u32) -> Result<Vec<f64>, JsError> {
    bracket_curve(p, law, r_max.into(), window.into()).map_err(js)
}
