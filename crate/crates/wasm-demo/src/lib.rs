//! Browser bindings: draw `H(Z_n, S)`, decide isomorphism of two 4-valent
//! Haar graphs, and canonical affine forms. Every export returns a JSON
//! string; failures come back as `{"error": "..."}`.

use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

use haar_core::auto::find_isomorphism;
use haar_core::haar::build_haar;
use haar_core::theorem::decide_iso_valency4;
use haar_core::zn::{self, ZnSet};
use haar_core::Error;

fn parse(n: u32, set: &str) -> Result<ZnSet, Error> {
    ZnSet::new(n, zn::parse_elements(set)?)
}

fn respond(result: Result<Value, Error>) -> String {
    match result {
        Ok(v) => v.to_string(),
        Err(e) => json!({ "error": e.to_string() }).to_string(),
    }
}

/// Vertices on two concentric circles (`x⁺` outside, `x⁻` inside, both at
/// angle `2πx/n`) and the edge list, in unit coordinates.
#[wasm_bindgen]
pub fn haar_layout(n: u32, set: &str) -> String {
    respond((|| {
        let s = parse(n, set)?;
        let g = build_haar(&s)?;
        let point = |p: u32| {
            let (x, radius) = if p < n { (p, 1.0) } else { (p - n, 0.62) };
            let angle = std::f64::consts::TAU * x as f64 / n as f64 - std::f64::consts::FRAC_PI_2;
            json!({ "id": p, "label": x, "minus": p >= n, "x": radius * angle.cos(), "y": radius * angle.sin() })
        };
        let vertices: Vec<Value> = (0..2 * n).map(point).collect();
        Ok(json!({
            "modulus": n,
            "set": s.elems(),
            "connected": g.is_connected(),
            "vertices": vertices,
            "edges": g.edges(),
        }))
    })())
}

/// Arithmetic decision for two 4-subsets, cross-checked by the search
/// oracle.
#[wasm_bindgen]
pub fn decide_iso(n: u32, s: &str, t: &str) -> String {
    respond((|| {
        let s = parse(n, s)?;
        let t = parse(n, t)?;
        let d = decide_iso_valency4(&s, &t)?;
        let oracle = find_isomorphism(&build_haar(&s)?, &build_haar(&t)?).is_some();
        let mut v = serde_json::to_value(&d).expect("serializable");
        v["oracle_agrees"] = json!(oracle == d.isomorphic);
        Ok(v)
    })())
}

#[wasm_bindgen]
pub fn canonical_form(n: u32, set: &str) -> String {
    respond((|| {
        let s = parse(n, set)?;
        let (canon, w) = zn::canonical_affine_form(&s);
        Ok(json!({ "canonical": canon.elems(), "a": w.a, "b": w.b }))
    })())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn value(s: String) -> Value {
        serde_json::from_str(&s).unwrap()
    }

    #[test]
    fn layout_shape() {
        let v = value(haar_layout(8, "0,1,2,5"));
        assert_eq!(v["vertices"].as_array().unwrap().len(), 16);
        assert_eq!(v["edges"].as_array().unwrap().len(), 32);
        assert_eq!(v["connected"], true);
        let first = &v["vertices"][0];
        assert!((first["x"].as_f64().unwrap()).abs() < 1e-12);
        assert!((first["y"].as_f64().unwrap() + 1.0).abs() < 1e-12);
    }

    #[test]
    fn decision_and_errors() {
        let v = value(decide_iso(8, "0,1,2,5", "0,1,5,6"));
        assert_eq!(v["isomorphic"], true);
        assert_eq!(v["route"], "exceptional");
        assert_eq!(v["oracle_agrees"], true);
        let v = value(decide_iso(8, "0,1,2", "0,1,5,6"));
        assert!(v["error"].as_str().unwrap().contains("size 4"));
        let v = value(haar_layout(8, "0,x"));
        assert!(v.get("error").is_some());
    }

    #[test]
    fn canonical() {
        let v = value(canonical_form(10, "3,4,6,7"));
        assert_eq!(v["canonical"], json!([0, 1, 3, 4]));
    }
}
