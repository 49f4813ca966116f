//! Browser bindings: a thin wasm-bindgen layer over the core crate exposing
//! three interactive operations for the demo page — degree tables, backward
//! orbit clouds, and Green-function grids. All numeric work happens in the
//! core crate; this module only shuttles flat arrays and JSON strings.

use num_complex::Complex64;
use projdyn::measures::{backward_tree, backward_walk, green_estimate, square_grid};
use projdyn::projcore::{fs_point, ProjPoint};
use projdyn::ratmap::parse_map_file;
use projdyn::rng::Stream;
use serde_json::json;
use wasm_bindgen::prelude::*;

fn parse(map_text: &str) -> Result<projdyn::RationalMap, JsValue> {
    parse_map_file(map_text).map_err(|e| JsValue::from_str(&e.to_string()))
}

/// Degree table for the iterates as a JSON string:
/// `{"delta1": [...], "delta2": [...], "q": [...], "holomorphic": bool}`.
#[wasm_bindgen]
pub fn degree_table_json(map_text: &str, kmax: u32, seed: u64) -> Result<String, JsValue> {
    let map = parse(map_text)?;
    let rows = projdyn::degrees::degree_table(&map, kmax, seed)
        .map_err(|e| JsValue::from_str(&e.to_string()))?;
    let report = json!({
        "degree": map.degree(),
        "delta1": rows.iter().map(|r| r.d).collect::<Vec<_>>(),
        "delta2": rows.iter().map(|r| r.lambda).collect::<Vec<_>>(),
        "q": rows.iter().map(|r| r.q).collect::<Vec<_>>(),
        "holomorphic": rows.first().map(|r| r.holomorphic),
    });
    Ok(report.to_string())
}

/// Backward-orbit point cloud in chart-0 affine coordinates.
///
/// Returns a flat array `[n, atoms, re0, im0, (re1, im1,) weight, ...]`:
/// a header with the dimension and atom count, then one row per atom.
/// `method` 0 samples the full tree at `depth`; 1 runs a random backward
/// walk of `samples` steps after a short burn-in.
#[wasm_bindgen]
pub fn backward_orbit(
    map_text: &str,
    method: u32,
    depth: u32,
    samples: u32,
    seed: u64,
) -> Result<Vec<f64>, JsValue> {
    let map = parse(map_text)?;
    let n = map.source_dim();
    let w = random_target(n, seed);
    let measure = match method {
        0 => backward_tree(&map, &w, depth, seed)
            .map_err(|e| JsValue::from_str(&e.to_string()))?
            .measure,
        _ => backward_walk(&map, &w, 50, samples, seed)
            .map_err(|e| JsValue::from_str(&e.to_string()))?
            .measure,
    };
    let mut out = vec![n as f64, 0.0];
    let mut atoms = 0usize;
    for (p, weight) in measure.atoms() {
        let Some(x) = p.affine(0) else { continue };
        for c in &x {
            out.push(c.re);
            out.push(c.im);
        }
        out.push(*weight);
        atoms += 1;
    }
    out[1] = atoms as f64;
    Ok(out)
}

fn random_target(n: usize, seed: u64) -> ProjPoint {
    // A generic target away from the coordinate hyperplanes.
    let p = fs_point(&Stream::new(seed ^ 0xdecade), 0, n);
    if p.coords().iter().all(|c| c.norm() > 0.05) {
        p
    } else {
        let affine: Vec<Complex64> = (0..n)
            .map(|i| Complex64::new(1.1 + 0.2 * i as f64, 0.3))
            .collect();
        ProjPoint::from_affine(&affine)
    }
}

/// Green-function grid G_k over [lo, hi]²: returns
/// `[steps, lo, hi, v00, v01, ...]` row-major; orbits through the
/// indeterminacy locus are marked NaN.
#[wasm_bindgen]
pub fn green_grid(
    map_text: &str,
    k: u32,
    base: f64,
    lo: f64,
    hi: f64,
    steps: usize,
) -> Result<Vec<f64>, JsValue> {
    let map = parse(map_text)?;
    if map.source_dim() != 2 {
        return Err(JsValue::from_str("green grids need a self-map of P^2"));
    }
    let base = if base > 1.0 { base } else { map.degree() as f64 };
    let g = green_estimate(&map, k, base, &square_grid(lo, hi, steps))
        .map_err(|e| JsValue::from_str(&e.to_string()))?;
    let mut out = vec![steps as f64, lo, hi];
    for (_, v) in &g.values {
        out.push(v.unwrap_or(f64::NAN));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    const Q: &str = "n = 2\nm = 2\nvariables = t, z, w\ncomponent = t^3\ncomponent = t*z^2\ncomponent = w^3\n";

    #[test]
    fn bindings_run_natively() {
        let table = degree_table_json(Q, 2, 1).unwrap();
        assert!(table.contains("\"delta1\":[3,9]"));
        let cloud = backward_orbit(Q, 0, 3, 0, 7).unwrap();
        assert_eq!(cloud[0], 2.0);
        assert_eq!(cloud[1], 216.0);
        assert_eq!(cloud.len(), 2 + 216 * 5);
        let grid = green_grid(Q, 8, 3.0, -2.0, 2.0, 10).unwrap();
        assert_eq!(grid.len(), 3 + 100);
        assert!(grid[3..].iter().all(|v| v.is_finite()));
    }
}
