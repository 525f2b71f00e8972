//! Browser bindings. Every export takes plain numbers or text and returns a
//! JSON string; failures come back as `{"error": "..."}` so the page never
//! has to catch exceptions.

use serde_json::{json, Value};
use wasm_bindgen::prelude::wasm_bindgen;

use enriques_nd::certificates::verify_certificate;
use enriques_nd::data_io::parse_certificates;
use enriques_nd::half_fibers::build_hf_set;
use enriques_nd::solver::compute_cnd;
use enriques_nd::{bundled, expand_orbit, notation, CurveSystem, EnumerateOptions, GeneratorSet};

/// Orbit radius accepted from the page; larger values are slow in a browser
/// and show nothing new for the bundled cases.
pub const MAX_RADIUS: usize = 4;

fn case(id: u32) -> Result<(CurveSystem, GeneratorSet), String> {
    bundled::case(id).ok_or_else(|| format!("no bundled data for case {id}"))
}

fn expanded(id: u32, radius: usize) -> Result<(CurveSystem, GeneratorSet), String> {
    if radius > MAX_RADIUS {
        return Err(format!("radius is limited to {MAX_RADIUS}"));
    }
    let (s, g) = case(id)?;
    let s = expand_orbit(&s, &g, radius).map_err(|e| e.to_string())?;
    Ok((s, g))
}

fn finish(r: Result<Value, String>) -> String {
    r.unwrap_or_else(|e| json!({ "error": e })).to_string()
}

/// Case ids with bundled data.
#[wasm_bindgen]
pub fn bundled_cases() -> String {
    json!(bundled::CASES).to_string()
}

/// The bundled certificate for a case, as editable JSON text.
#[wasm_bindgen]
pub fn bundled_certificate(case_id: u32) -> String {
    match case_id {
        145 => bundled::CERTS_145_JSON.to_string(),
        158 => bundled::CERTS_158_JSON.to_string(),
        _ => "[]".to_string(),
    }
}

pub fn orbit_value(case_id: u32, radius: usize) -> Result<Value, String> {
    let (s, _) = expanded(case_id, radius)?;
    let edges: Vec<Value> = (0..s.len())
        .flat_map(|i| (i + 1..s.len()).map(move |j| (i, j)))
        .filter(|&(i, j)| s.intersection(i, j) > 0)
        .map(|(i, j)| json!([i, j, s.intersection(i, j)]))
        .collect();
    Ok(json!({
        "labels": s.labels(),
        "vectors": s.curves().iter().map(|v| v.coords().to_vec()).collect::<Vec<_>>(),
        "intersections": s.intersections(),
        "edges": edges,
    }))
}

/// Curves after expanding a bundled case by `radius`, with their
/// intersection matrix and dual-graph edges.
#[wasm_bindgen]
pub fn orbit(case_id: u32, radius: usize) -> String {
    finish(orbit_value(case_id, radius))
}

pub fn cnd_value(case_id: u32, radius: usize, max_support: usize) -> Result<Value, String> {
    if !(2..=10).contains(&max_support) {
        return Err("max support must be between 2 and 10".into());
    }
    let (s, _) = expanded(case_id, radius)?;
    let opts = EnumerateOptions {
        max_support,
        prune: true,
    };
    let (configs, hf) = build_hf_set(&s, opts).map_err(|e| e.to_string())?;
    let res = compute_cnd(&hf).map_err(|e| e.to_string())?;
    let witness: Vec<Value> = res
        .witness
        .iter()
        .map(|&i| {
            json!({
                "notation": notation::half_fiber(&s, &configs, &hf[i]),
                "type": hf[i].type_label(),
            })
        })
        .collect();
    Ok(json!({
        "curves": s.len(),
        "configurations": configs.len(),
        "half_fibers": hf.len(),
        "cnd": res.length,
        "witness": witness,
    }))
}

/// Longest isotropic sequence of half-fibers supported on the expanded
/// curve set.
#[wasm_bindgen]
pub fn cnd(case_id: u32, radius: usize, max_support: usize) -> String {
    finish(cnd_value(case_id, radius, max_support))
}

pub fn verify_value(case_id: u32, certificate_json: &str) -> Result<Value, String> {
    let (s, g) = case(case_id)?;
    let certs = parse_certificates(certificate_json, "input").map_err(|e| e.to_string())?;
    let cert = certs
        .iter()
        .find(|c| c.case_id == case_id)
        .ok_or_else(|| format!("no certificate for case {case_id} in the input"))?;
    let r = verify_certificate(cert, &s, &g).map_err(|e| e.to_string())?;
    Ok(json!({
        "passed": r.passed(),
        "products_ok": r.sequence.products_ok,
        "length_matches": r.length_matches,
        "products": r.sequence.products.iter()
            .map(|row| row.iter().map(|x| x.to_string()).collect::<Vec<_>>())
            .collect::<Vec<_>>(),
        "entries": r.entries.iter().map(|e| json!({
            "notation": e.notation,
            "type": e.type_label(),
            "error": e.configuration.as_ref().err().map(|x| x.to_string()),
            "integral": e.integral,
            "indivisible": e.indivisible,
        })).collect::<Vec<_>>(),
    }))
}

/// Checks a certificate (JSON list as in the bundled files) against a
/// bundled case.
#[wasm_bindgen]
pub fn verify(case_id: u32, certificate_json: &str) -> String {
    finish(verify_value(case_id, certificate_json))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(s: String) -> Value {
        serde_json::from_str(&s).unwrap()
    }

    #[test]
    fn cnd_matches_known_values() {
        assert_eq!(parse(cnd(145, 0, 10))["cnd"], 4);
        assert_eq!(parse(cnd(145, 2, 10))["cnd"], 4);
        let r = parse(cnd(158, 0, 10));
        assert_eq!(r["cnd"], 9);
        assert_eq!(r["witness"].as_array().unwrap().len(), 9);
    }

    #[test]
    fn bad_inputs_become_error_objects() {
        assert!(parse(cnd(1, 0, 10))["error"].is_string());
        assert!(parse(cnd(145, 0, 11))["error"].is_string());
        assert!(parse(orbit(145, MAX_RADIUS + 1))["error"].is_string());
        assert!(parse(verify(145, "not json"))["error"].is_string());
    }

    #[test]
    fn orbit_graph() {
        let r = parse(orbit(145, 0));
        assert_eq!(r["labels"].as_array().unwrap().len(), 10);
        // ten dual-graph edges, all simple
        let edges = r["edges"].as_array().unwrap();
        assert_eq!(edges.len(), 10);
        assert!(edges.iter().all(|e| e[2] == 1));
        let r = parse(orbit(145, 1));
        assert!(r["vectors"]
            .as_array()
            .unwrap()
            .contains(&json!([10, 4, 11, 18, 15, 12, 9, 6, 4, 2])));
    }

    #[test]
    fn verify_bundled_and_edited() {
        for id in bundled::CASES {
            assert_eq!(parse(verify(id, &bundled_certificate(id)))["passed"], true);
        }
        let edited =
            bundled_certificate(145).replacen("\"claimed_bound\": 4", "\"claimed_bound\": 3", 1);
        let r = parse(verify(145, &edited));
        assert_eq!(r["passed"], false);
        assert_eq!(r["length_matches"], false);
    }
}
