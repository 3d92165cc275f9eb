//! Browser bindings: a lattice mode against its continuum limit, a pole
//! function heatmap, and a convergence plot.

use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

use sholo_core::continuum::{ContinuumMode, Extremity};
use sholo_core::harness::{default_rect, pole_convergence_table, strip_convergence_table, ScalingSequence};
use sholo_core::output::{heatmap_svg, loglog_svg, table_series, write_table_json, Cell, Heatmap};
use sholo_core::slit::SingularSystem;
use sholo_core::{ModeIndex, SpectralBasis, StripKind, StripSpec, Window};

pub const MAX_LEN: usize = 128;
pub const MAX_HEATMAP_LEN: usize = 48;
const CURVE_SAMPLES: usize = 200;

fn index(k: f64) -> Result<ModeIndex, String> {
    ModeIndex::from_f64(k).map_err(|e| e.to_string())
}

fn extremity(which: &str) -> Result<Extremity, String> {
    match which {
        "T" | "t" => Ok(Extremity::Top),
        "L" | "l" => Ok(Extremity::Left),
        "R" | "r" => Ok(Extremity::Right),
        _ => Err(format!("unknown extremity {which:?}; use T, L or R")),
    }
}

fn width(len: usize, max: usize) -> Result<usize, String> {
    if !(2..=max).contains(&len) {
        return Err(format!("width must lie in 2..={max}, got {len}"));
    }
    Ok(len)
}

/// `√ℓ f_k` and `e_k` on the rescaled cross-section, plus `e_k` on a fine
/// grid under `curve`, as JSON.
pub fn mode_comparison(len: usize, k: f64) -> Result<String, String> {
    let len = width(len, MAX_LEN)?;
    let k = index(k)?;
    let spec = StripSpec::centered(len, StripKind::Strip).map_err(|e| e.to_string())?;
    let basis = SpectralBasis::new(spec).map_err(|e| e.to_string())?;
    let f = basis.eigenfunction(k).map_err(|e| e.to_string())?;
    let m = basis.mode(k).map_err(|e| e.to_string())?;
    let mode = ContinuumMode::new(Extremity::Top, k);
    let (c, l) = (0.5 * (spec.a() + spec.b()) as f64, len as f64);
    let mut sup = 0.0f64;
    let points: Vec<Value> = spec
        .cross_section_x2()
        .zip(f.values())
        .map(|(x2, v)| {
            let x = (x2 as f64 / 2.0 - c) / l;
            let d = l.sqrt() * v;
            let e = mode.restriction(x);
            sup = sup.max((d - e).norm());
            json!({ "x": x, "re": d.re, "im": d.im, "re_continuum": e.re, "im_continuum": e.im })
        })
        .collect();
    let curve: Vec<Value> = (0..=CURVE_SAMPLES)
        .map(|i| {
            let x = -0.5 + i as f64 / CURVE_SAMPLES as f64;
            let e = mode.restriction(x);
            json!({ "x": x, "re": e.re, "im": e.im })
        })
        .collect();
    let doc = json!({
        "len": len,
        "k": k.value(),
        "omega": m.omega,
        "lambda": m.lambda_plus,
        "sup_error": sup,
        "points": points,
        "curve": curve,
    });
    Ok(doc.to_string())
}

/// `log |F|` of the pole function with unit singular part at (which, k) on
/// rows `−ℓ..ℓ` of the slit-strip, as SVG.
pub fn pole_heatmap(len: usize, which: &str, k: f64) -> Result<String, String> {
    let len = width(len, MAX_HEATMAP_LEN)?;
    let which = extremity(which)?;
    let k = index(k)?;
    let spec = StripSpec::centered(len, StripKind::SlitStrip).map_err(|e| e.to_string())?;
    let system = SingularSystem::new(spec).map_err(|e| e.to_string())?;
    let p = system.pole_function(which, k).map_err(|e| e.to_string())?;
    let d = len as i32;
    let window = Window::new(-d, d).map_err(|e| e.to_string())?;
    let field = system.extend_pole(&p, window).map_err(|e| e.to_string())?;
    let cells = field
        .iter()
        .map(|(e, z)| {
            let m = e.midpoint();
            Cell { x: m.re, y: m.im, value: z.norm() }
        })
        .collect();
    let title = format!("|p{}_{k}|, ℓ = {len}", which.letter());
    Ok(heatmap_svg(&Heatmap { title, cells, size: 0.5, log: true }))
}

/// Convergence of a strip mode (`table = "strip"`) or a pole function
/// (`table = "pole"`) over ℓ = 8, 16, ... up to `lmax`. JSON with the SVG
/// plot under `svg` and the table under `table`.
pub fn convergence(table: &str, which: &str, k: f64, lmax: usize) -> Result<String, String> {
    let lmax = width(lmax, 64)?;
    if lmax < 8 {
        return Err("lmax must be at least 8".into());
    }
    let k = index(k)?;
    if !k.is_positive() {
        return Err(format!("k = {k} must be positive"));
    }
    let seq = ScalingSequence::doubling(8, lmax).map_err(|e| e.to_string())?;
    let (t, title) = match table {
        "strip" => (strip_convergence_table(k, &seq), format!("strip f_{k}")),
        "pole" => {
            let which = extremity(which)?;
            let rect = default_rect(which);
            (pole_convergence_table(which, k, &seq, rect), format!("p{}_{k} on {}", which.letter(), rect.describe()))
        }
        _ => return Err(format!("unknown table {table:?}; use strip or pole")),
    };
    let t = t.map_err(|e| e.to_string())?;
    let svg = loglog_svg(&title, "ℓ", "error", &table_series(&t));
    let mut buf = Vec::new();
    write_table_json(&mut buf, &t).map_err(|e| e.to_string())?;
    let table: Value = serde_json::from_slice(&buf).map_err(|e| e.to_string())?;
    Ok(json!({ "svg": svg, "table": table }).to_string())
}

#[wasm_bindgen(js_name = modeComparison)]
pub fn mode_comparison_js(len: usize, k: f64) -> Result<String, JsError> {
    mode_comparison(len, k).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = poleHeatmap)]
pub fn pole_heatmap_js(len: usize, which: &str, k: f64) -> Result<String, JsError> {
    pole_heatmap(len, which, k).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = convergence)]
pub fn convergence_js(table: &str, which: &str, k: f64, lmax: usize) -> Result<String, JsError> {
    convergence(table, which, k, lmax).map_err(|e| JsError::new(&e))
}
