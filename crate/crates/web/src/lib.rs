//! Browser bindings: certify a 2-D catalog model, slice its conjugate, and
//! evaluate the support function of the group orbit.

use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

use svpc::certify::{certify, CertifyOptions};
use svpc::conjugate::sv_conjugate;
use svpc::error::Result;
use svpc::gridfn::{DimKind, GridFunction, GridSpec};
use svpc::models::{catalog, EnergyModel};
use svpc::symmetry::lambda_support;

fn finite_or_null(values: &[f64]) -> Vec<Value> {
    values
        .iter()
        .map(|&v| if v.is_finite() { json!(v) } else { Value::Null })
        .collect()
}

fn sample(name: &str, params_json: &str, half: f64, count: usize) -> Result<GridFunction> {
    let model = EnergyModel::from_json(name, 2, params_json)?;
    let grid = GridSpec::uniform(DimKind::Nu, 2, half, count)?;
    GridFunction::build(grid, |nu| model.phi(nu))
}

pub fn models_value() -> Value {
    serde_json::to_value(catalog()).expect("catalog serializes")
}

pub fn certify_value(name: &str, params_json: &str, half: f64, count: usize) -> Result<Value> {
    let phi = sample(name, params_json, half, count)?;
    let (cert, env) = certify(&phi, &CertifyOptions::for_grid(phi.spec()))?;
    Ok(json!({
        "certificate": serde_json::to_value(&cert).expect("certificate serializes"),
        "axis": phi.spec().axes()[0],
        "phi": finite_or_null(phi.values()),
        "envelope": finite_or_null(env.envelope.values()),
    }))
}

/// `Φ^∧(β1, β2, beta3)` over a uniform `(β1, β2)` grid.
pub fn conjugate_slice_value(
    name: &str,
    params_json: &str,
    half: f64,
    count: usize,
    beta_half: f64,
    beta_count: usize,
    beta3: f64,
) -> Result<Value> {
    let phi = sample(name, params_json, half, count)?;
    let axis = GridSpec::uniform_axis(beta_half, beta_count)?;
    let b = beta3.abs();
    let third = if b == 0.0 { vec![0.0] } else { vec![-b, 0.0, b] };
    let slot = if beta3 < 0.0 { 0 } else { third.len() - 1 };
    let grid = GridSpec::new(DimKind::Beta, vec![axis.clone(), axis.clone(), third])?;
    let conj = sv_conjugate(&phi, &grid)?;
    let stride = grid.strides()[2];
    let values: Vec<f64> = (0..beta_count * beta_count)
        .map(|ij| conj.values()[ij * grid.shape()[2] + slot * stride])
        .collect();
    Ok(json!({ "axis": axis, "beta3": beta3, "values": finite_or_null(&values) }))
}

fn to_js(r: Result<Value>) -> std::result::Result<String, JsError> {
    r.map(|v| v.to_string()).map_err(|e| JsError::new(&e.to_string()))
}

/// Catalog as JSON.
#[wasm_bindgen]
pub fn models() -> String {
    models_value().to_string()
}

/// Certificate plus `Φ` and its envelope on a `count × count` grid over
/// `[-half, half]²`, as JSON; `+inf` samples are `null`.
#[wasm_bindgen]
pub fn certify_model(name: &str, params_json: &str, half: f64, count: usize) -> std::result::Result<String, JsError> {
    to_js(certify_value(name, params_json, half, count))
}

#[wasm_bindgen]
pub fn conjugate_slice(
    name: &str,
    params_json: &str,
    half: f64,
    count: usize,
    beta_half: f64,
    beta_count: usize,
    beta3: f64,
) -> std::result::Result<String, JsError> {
    to_js(conjugate_slice_value(
        name,
        params_json,
        half,
        count,
        beta_half,
        beta_count,
        beta3,
    ))
}

/// `Λ_β(ν)`, the largest lifted pairing over the signed permutations of `ν`.
#[wasm_bindgen]
pub fn lambda(beta: &[f64], nu: &[f64]) -> std::result::Result<f64, JsError> {
    lambda_support(beta, nu).map_err(|e| JsError::new(&e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn certify_reports_grids() {
        let v = certify_value("lifted_affine", "{}", 2.0, 11).unwrap();
        assert_eq!(v["certificate"]["verdict"], "SVPC");
        assert_eq!(v["phi"].as_array().unwrap().len(), 121);
        assert_eq!(v["axis"].as_array().unwrap().len(), 11);
    }

    #[test]
    fn barrier_infinities_become_null() {
        let v = certify_value("det_barrier", "{}", 2.0, 11).unwrap();
        assert!(v["phi"][0].is_null() || v["phi"][10].is_null());
    }

    #[test]
    fn slice_matches_full_conjugate() {
        let phi = sample("double_well", "{}", 2.0, 11).unwrap();
        let axis = GridSpec::uniform_axis(3.0, 7).unwrap();
        let full = GridSpec::new(DimKind::Beta, vec![axis.clone(), axis.clone(), vec![-1.5, 0.0, 1.5]]).unwrap();
        let conj = sv_conjugate(&phi, &full).unwrap();
        for beta3 in [-1.5, 0.0, 1.5] {
            let v = conjugate_slice_value("double_well", "{}", 2.0, 11, 3.0, 7, beta3).unwrap();
            for i in 0..7 {
                for j in 0..7 {
                    let k = full.locate(&[axis[i], axis[j], beta3]).unwrap();
                    assert_eq!(v["values"][i * 7 + j].as_f64().unwrap(), conj.values()[k]);
                }
            }
        }
    }

    #[test]
    fn errors_are_reported() {
        assert!(certify_value("nope", "{}", 2.0, 11).is_err());
        assert!(certify_value("double_well", "{}", 2.0, 10).is_err());
    }
}
