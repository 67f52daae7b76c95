//! Browser bindings: truth tables with an optional ω element, consequence
//! against the left companion, and paraconsistency probes. Every export
//! returns a JSON string; errors come back as `{"error": ...}`.

use serde_json::{json, Value};
use wasm_bindgen::prelude::wasm_bindgen;

use varinc::catalog::{self, catalog_get, catalog_ids, Kind};
use varinc::companions::{left_companion, ConsequenceOracle, MatrixOracle};
use varinc::matrix::{countermodel, evaluate, tuples, Matrix, Valuation};
use varinc::plonka::adjoin_contaminating;
use varinc::probes::{classify_paraconsistency, probe_ecq, probe_land_ecq, probe_lnc, ProbeOutcome};
use varinc::syntax::{parse_formula, parse_sequent};

fn load(id: &str, omega: bool) -> Result<Matrix, String> {
    let m = catalog::matrix(id).map_err(|e| e.to_string())?;
    if omega && !id.ends_with(catalog::OMEGA_SUFFIX) {
        adjoin_contaminating(&m).map_err(|e| e.to_string())
    } else {
        Ok(m)
    }
}

fn respond(r: Result<Value, String>) -> String {
    r.unwrap_or_else(|e| json!({ "error": e })).to_string()
}

/// Catalog matrices without their ω-extensions, which the page toggles.
pub fn matrices_json() -> Value {
    let ids: Vec<String> = catalog_ids()
        .into_iter()
        .filter(|id| !id.ends_with(catalog::OMEGA_SUFFIX))
        .filter(|id| matches!(catalog_get(id).map(|e| e.kind()), Ok(Kind::Matrix)))
        .collect();
    json!(ids)
}

pub fn truth_table_json(id: &str, formula: &str, omega: bool) -> Result<Value, String> {
    let m = load(id, omega)?;
    let alg = m.algebra();
    let f = parse_formula(formula, m.lang()).map_err(|e| e.to_string())?;
    let vars: Vec<String> = f.vars().iter().map(|v| v.to_string()).collect();
    let mut rows = Vec::new();
    for t in tuples(alg.size(), vars.len()) {
        let mut v = Valuation::new();
        for (var, &x) in vars.iter().zip(&t) {
            v.assign(var, x);
        }
        let x = evaluate(&f, &v, alg).map_err(|e| e.to_string())?;
        rows.push(json!({
            "inputs": t.iter().map(|&i| alg.label(i)).collect::<Vec<_>>(),
            "value": alg.label(x),
            "designated": m.is_designated(x),
        }));
    }
    Ok(json!({ "formula": f.to_string(), "vars": vars, "rows": rows }))
}

/// `⊨m`, its left companion and `⊨{m, m⊕1}` on one sequent.
pub fn consequence_json(id: &str, sequent: &str) -> Result<Value, String> {
    let m = load(id, false)?;
    let q = parse_sequent(sequent, m.lang()).map_err(|e| e.to_string())?;
    let base = MatrixOracle::new(id, vec![m.clone()]);
    let ext = adjoin_contaminating(&m).map_err(|e| e.to_string())?;
    let sum = vec![m.clone(), ext];
    let b = base.holds(&q.premises, &q.conclusion).map_err(|e| e.to_string())?;
    let l = left_companion(&base).holds(&q.premises, &q.conclusion).map_err(|e| e.to_string())?;
    let p = varinc::matrix::consequence(&q.premises, &q.conclusion, &sum).map_err(|e| e.to_string())?;
    let witness = countermodel(&q.premises, &q.conclusion, &sum)
        .map_err(|e| e.to_string())?
        .map(|cm| cm.valuation.display(sum[cm.matrix].algebra()).to_string());
    Ok(json!({
        "sequent": q.to_string(),
        "base": b,
        "left": l,
        "plonka": p,
        "plonka_countermodel": witness,
    }))
}

pub fn probe_json(id: &str, omega: bool) -> Result<Value, String> {
    let m = load(id, omega)?;
    let show = |o: ProbeOutcome| {
        json!({
            "holds": o.holds,
            "witness": o.witness.map(|w| w.valuation.display(m.algebra()).to_string()),
        })
    };
    let e = |x: varinc::probes::ProbeError| x.to_string();
    Ok(json!({
        "matrix": if omega { format!("{id}{}", catalog::OMEGA_SUFFIX) } else { id.to_string() },
        "ecq": show(probe_ecq(&m).map_err(e)?),
        "land_ecq": show(probe_land_ecq(&m).map_err(e)?),
        "lnc": show(probe_lnc(&m).map_err(e)?),
        "classification": classify_paraconsistency(&m).map_err(e)?.to_string(),
    }))
}

#[wasm_bindgen]
pub fn matrices() -> String {
    matrices_json().to_string()
}

#[wasm_bindgen]
pub fn truth_table(id: &str, formula: &str, omega: bool) -> String {
    respond(truth_table_json(id, formula, omega))
}

#[wasm_bindgen]
pub fn consequence(id: &str, sequent: &str) -> String {
    respond(consequence_json(id, sequent))
}

#[wasm_bindgen]
pub fn probe(id: &str, omega: bool) -> String {
    respond(probe_json(id, omega))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn truth_table_with_omega() {
        let t = truth_table_json("B2", "p & ~p", true).unwrap();
        let rows = t["rows"].as_array().unwrap();
        assert_eq!(rows.len(), 3);
        assert_eq!(rows[2]["inputs"][0], "w");
        assert_eq!(rows[2]["value"], "w");
        assert_eq!(rows[2]["designated"], true);
    }

    #[test]
    fn consequence_compares_companions() {
        let r = consequence_json("B2", "p; ~p |- q").unwrap();
        assert_eq!(
            (r["base"].as_bool(), r["left"].as_bool(), r["plonka"].as_bool()),
            (Some(true), Some(false), Some(false))
        );
        assert_eq!(r["plonka_countermodel"], "p=w, q=0");
    }

    #[test]
    fn probes_and_errors() {
        let r = probe_json("B2", true).unwrap();
        assert_eq!(r["classification"], "weakly paraconsistent");
        assert_eq!(r["ecq"]["witness"], "p=w, q=0");
        let bad: Value = serde_json::from_str(&truth_table("nope", "p", false)).unwrap();
        assert!(bad["error"].as_str().unwrap().contains("nope"));
        assert!(matrices_json().as_array().unwrap().iter().any(|v| v == "M3"));
    }
}
