//! Browser demo bindings: polygon analysis, starting-point enumeration and
//! case certificates, each returning a JSON string for the host page.

use wasm_bindgen::prelude::wasm_bindgen;

use casebook_core::casebook::{list_cases, run_case};
use casebook_core::exactalg::Rat;
use casebook_core::laurent::LaurentPoly;
use casebook_core::newton::{leading_form, st_en, v, Direction, NewtonPolygon};
use casebook_core::startpoints::{possible_starting_points, LoopBound};

fn err_json(msg: impl std::fmt::Display) -> String {
    serde_json::json!({"error": msg.to_string()}).to_string()
}

/// Analyze a Laurent polynomial given in the crate's JSON term format against
/// a direction: hull, directional value, leading form, st/en, and an SVG.
#[wasm_bindgen]
pub fn polygon_analyze(terms_json: &str, rho: i32, sigma: i32) -> String {
    let inner = || -> Result<String, casebook_core::AlgError> {
        let value: serde_json::Value = serde_json::from_str(terms_json)
            .map_err(|e| casebook_core::AlgError::Parse(e.to_string()))?;
        let poly = LaurentPoly::<Rat>::from_json(&value)?;
        let dir = Direction::new(rho as i64, sigma as i64)?;
        let hull = NewtonPolygon::from_support(&poly)?;
        let value_v = v(&dir, &poly)?;
        let lf = leading_form(&dir, &poly)?;
        let (st, en) = st_en(&dir, &poly)?;
        let pred_succ = hull.pred_succ(&dir).ok();
        Ok(serde_json::json!({
            "hull": hull.to_json(),
            "corners": format!("{:?}", hull.vertices().iter().map(|p| p.to_string()).collect::<Vec<_>>()),
            "v": value_v.to_string(),
            "leading_form": lf.to_text(),
            "st": [st.0, st.1],
            "en": [en.0, en.1],
            "pred": pred_succ.as_ref().map(|(p, _)| [p.rho, p.sigma]),
            "succ": pred_succ.as_ref().map(|(_, s)| [s.rho, s.sigma]),
            "svg": hull.render_svg(),
            "ascii": hull.render_ascii(),
        })
        .to_string())
    };
    inner().unwrap_or_else(err_json)
}

/// Enumerate starting-point candidates for the corner (a/l, b).
#[wasm_bindgen]
pub fn starting_points(l: i64, a: i64, b: i64) -> String {
    let inner = || -> Result<String, casebook_core::AlgError> {
        let cands = possible_starting_points(l, a, b, LoopBound::Inclusive)?;
        let alt = possible_starting_points(l, a, b, LoopBound::HalfOpen)?;
        let pts: Vec<_> = cands.iter().map(|c| c.to_json()).collect();
        Ok(serde_json::json!({
            "candidates": pts,
            "readings_agree": cands == alt,
        })
        .to_string())
    };
    inner().unwrap_or_else(err_json)
}

/// The ten-row case table.
#[wasm_bindgen]
pub fn case_list() -> String {
    list_cases().to_string()
}

/// Replay a case pipeline and return the full report (JSON plus text and SVGs).
#[wasm_bindgen]
pub fn case_report(id: &str, seed: u64) -> String {
    match run_case(id, seed) {
        Ok(report) => {
            let mut v = report.to_json();
            v["text"] = serde_json::json!(report.render_text());
            v["svgs"] = serde_json::json!(report
                .svgs
                .iter()
                .map(|(n, s)| serde_json::json!({"name": n, "svg": s}))
                .collect::<Vec<_>>());
            v.to_string()
        }
        Err(e) => err_json(e),
    }
}
