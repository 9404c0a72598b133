//! Browser bindings over wha-core. Every function takes and returns JSON
//! text; errors come back as messages.

use serde_json::json;
use wasm_bindgen::prelude::wasm_bindgen;

use wha_core::deform::{canonical_element, deform_verified, sample_admissible_with};
use wha_core::instances::{function_algebra_wha, op_tensor_wha, pair_groupoid_wha, FiniteGroupoid};
use wha_core::io::{load, save};
use wha_core::weak_hopf::check_axioms;
use wha_core::{default_tol, BlockAlgebra, WeakHopf};

type Out = Result<String, String>;

fn text(e: impl std::fmt::Display) -> String {
    e.to_string()
}

fn structure(doc: &str) -> Result<WeakHopf, String> {
    load(doc.as_bytes()).map_err(text)
}

fn tol_for(w: &WeakHopf, tol: f64) -> f64 {
    if tol > 0.0 {
        tol
    } else {
        default_tol(w.dim())
    }
}

/// `family` is `pair-groupoid`, `function-groupoid` or `op-tensor`; `param`
/// is `n`, a groupoid spec such as `cyclic:2*pair:2`, or block sizes
/// separated by spaces or commas.
#[wasm_bindgen]
pub fn generate(family: &str, param: &str) -> Out {
    let w = match family {
        "pair-groupoid" => pair_groupoid_wha(param.trim().parse().map_err(text)?),
        "function-groupoid" => function_algebra_wha(&FiniteGroupoid::parse(param.trim()).map_err(text)?),
        "op-tensor" => {
            let blocks = param
                .split([',', ' '])
                .filter(|s| !s.is_empty())
                .map(str::parse)
                .collect::<Result<Vec<usize>, _>>()
                .map_err(text)?;
            op_tensor_wha(&BlockAlgebra::new(blocks, "").map_err(text)?)
        }
        other => return Err(format!("unknown family {other:?}")),
    }
    .map_err(text)?;
    String::from_utf8(save(&w)).map_err(text)
}

/// Axiom residuals; a non-positive `tol` selects the default.
#[wasm_bindgen]
pub fn validate(doc: &str, tol: f64) -> Out {
    let w = structure(doc)?;
    let tol = tol_for(&w, tol);
    let report = check_axioms(&w, tol);
    Ok(json!({ "pass": report.pass, "tol": tol, "failing": report.failing(), "residuals": report.residuals })
        .to_string())
}

/// Deform by the admissible element drawn from `seed`; returns the spectrum
/// invariant, the verification verdict and the deformed document.
#[wasm_bindgen]
pub fn deform_sample(doc: &str, seed: u32, tol: f64) -> Out {
    let w = structure(doc)?;
    let tol = tol_for(&w, tol);
    let canon = canonical_element(&w, tol).map_err(text)?;
    let k = sample_admissible_with(&w, &canon, u64::from(seed), tol).map_err(text)?;
    let d = deform_verified(&w, &k, tol).map_err(text)?;
    let document = String::from_utf8(save(&d.structure)).map_err(text)?;
    Ok(json!({
        "pass": d.report.pass,
        "max_residual": d.report.max_residual(),
        "spectrum_invariant": d.canonical.spectrum,
        "document": document,
    })
    .to_string())
}
