//! Browser bindings for three small demos: integral means along the radius
//! ladder, the monomial decay table, and polynomial cyclicity residuals.
//!
//! Every export takes and returns JSON text. The `*_json` functions are the
//! plain Rust entry points; the `#[wasm_bindgen]` wrappers only convert errors.

use hvlab_core::disk::{safe_radius, safe_radius_l2};
use hvlab_core::lab::{self, cyclicity_curve, ExperimentParams};
use hvlab_core::norms::mean_p;
use hvlab_core::series::realize;
use hvlab_core::{FunctionSpec, RunConfig, Scalar, TaylorSeries};
use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

/// Largest truncation order the page may request.
pub const MAX_ORDER: usize = 1 << 14;

fn err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

/// `M_p(r, f)` on `r_j = 1 - 2^{-j}`, `j = 1..=depth`, with the safe radius
/// that certifies the truncation.
pub fn mean_curve_json(spec: &str, p: f64, order: usize, depth: usize) -> Result<String, String> {
    if order == 0 || order > MAX_ORDER {
        return Err(format!("order must be in 1..={MAX_ORDER}"));
    }
    let cfg = RunConfig { order, ladder_depth: depth, ..RunConfig::default() }.validate().map_err(err)?;
    let f = realize(&FunctionSpec::parse(spec).map_err(err)?, order).map_err(err)?;
    let safe = if p <= 2.0 { safe_radius_l2(&f, cfg.tol) } else { safe_radius(&f, cfg.tol) };
    let mut rows = Vec::new();
    for &r in &cfg.ladder().radii {
        let m = mean_p(&f, r, p).map_err(err)?;
        rows.push(json!({ "r": r, "mean": m, "certified": r <= safe }));
    }
    Ok(json!({ "p": p, "order": order, "safe_radius": safe, "points": rows }).to_string())
}

/// The monomial decay table `n, ‖T_{z^n}‖, closed form` for `n = 1, 2, 4, ... <= n_max`.
pub fn monomial_decay_json(n_max: usize) -> Result<String, String> {
    if n_max == 0 || n_max > 256 {
        return Err("n_max must be in 1..=256".into());
    }
    let params = ExperimentParams { n: Some(lab::doubling(1, n_max)), ..ExperimentParams::default() };
    let cfg = RunConfig { order: 512, ..RunConfig::default() };
    let report = lab::run("monomial-decay", &params, &cfg).map_err(err)?;
    let t = report.table("decay").ok_or("missing decay table")?;
    Ok(json!({ "columns": t.columns, "rows": t.rows, "passed": report.passed }).to_string())
}

/// `dist(1, S · P_N)` in `A^2_1` for each degree, with `S` given as a JSON list
/// of coefficients (reals or `[re, im]` pairs).
pub fn cyclicity_json(coeffs: &str, max_degree: usize) -> Result<String, String> {
    if max_degree > 64 {
        return Err("max_degree must be at most 64".into());
    }
    let c: Vec<Scalar> = serde_json::from_str(coeffs).map_err(err)?;
    if c.is_empty() {
        return Err("the symbol needs at least one coefficient".into());
    }
    let s = TaylorSeries::polynomial(c.into_iter().map(|v| v.0).collect()).map_err(err)?;
    let degrees: Vec<usize> = (0..=max_degree).collect();
    let curve = cyclicity_curve(&s, &degrees);
    let v: Value = json!({
        "degrees": curve.degrees,
        "residuals": curve.residuals,
        "condition": curve.condition,
    });
    Ok(v.to_string())
}

#[wasm_bindgen]
pub fn mean_curve(spec: &str, p: f64, order: usize, depth: usize) -> Result<String, JsValue> {
    mean_curve_json(spec, p, order, depth).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn monomial_decay(n_max: usize) -> Result<String, JsValue> {
    monomial_decay_json(n_max).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn cyclicity(coeffs: &str, max_degree: usize) -> Result<String, JsValue> {
    cyclicity_json(coeffs, max_degree).map_err(|e| JsValue::from_str(&e))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(s: &str) -> Value {
        serde_json::from_str(s).unwrap()
    }

    #[test]
    fn monomial_means_are_powers_of_r() {
        let v = parse(&mean_curve_json(r#"{"kind":"monomial","n":2}"#, 2.0, 64, 6).unwrap());
        for pt in v["points"].as_array().unwrap() {
            let r = pt["r"].as_f64().unwrap();
            assert!((pt["mean"].as_f64().unwrap() - r * r).abs() < 1e-12);
            assert_eq!(pt["certified"], true);
        }
    }

    #[test]
    fn decay_table_has_one_row_per_n() {
        let v = parse(&monomial_decay_json(8).unwrap());
        assert_eq!(v["rows"].as_array().unwrap().len(), 4);
        assert_eq!(v["passed"], true);
    }

    #[test]
    fn one_plus_z_residuals_decrease() {
        let v = parse(&cyclicity_json("[1, 1]", 8).unwrap());
        let r: Vec<f64> = v["residuals"].as_array().unwrap().iter().map(|x| x.as_f64().unwrap()).collect();
        assert_eq!(r.len(), 9);
        assert!(r.windows(2).all(|w| w[1] <= w[0]));
        // dense weighted least squares in numpy for N = 8
        assert!((r[8] - 0.067_419_986_246_324_21).abs() < 1e-12, "{}", r[8]);
    }

    #[test]
    fn bad_input_is_an_error() {
        assert!(mean_curve_json("nonsense", 2.0, 64, 6).is_err());
        assert!(mean_curve_json("neg_log", 2.0, 0, 6).is_err());
        assert!(cyclicity_json("[]", 4).is_err());
        assert!(monomial_decay_json(1000).is_err());
    }
}
