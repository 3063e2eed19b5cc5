//! Browser bindings for the box-analysis toolkit.
//!
//! Three string-in/string-out operations back the demo page: a full JSON
//! report for a preset box, a slice-scan CSV, and sampled curves along the
//! isotropic line for plotting. Errors come back as `{"error": "..."}` JSON
//! so the page never has to unwind a wasm trap.

use nonlocal::boxes::Behavior;
use nonlocal::principles::{check_tlm, ic_van_dam, lo_evaluate, lo_preset};
use nonlocal::report::{parse_preset, report_box, scan_csv, ScanGrid, SliceBasis};
use nonlocal::{min_l1, Result};
use wasm_bindgen::prelude::wasm_bindgen;

fn or_error_json(result: Result<String>) -> String {
    result.unwrap_or_else(|e| {
        serde_json::json!({ "error": e.to_string() }).to_string()
    })
}

/// Full principle report for a named preset (`pr1`..`pr8`, `noise`,
/// `iso:<gamma>`, `det:<bits>`), as JSON.
#[wasm_bindgen]
pub fn report_json(preset: &str) -> String {
    or_error_json((|| {
        let behavior = parse_preset(preset)?;
        let report = report_box(&behavior, &[1, 3])?;
        Ok(serde_json::to_string(&report).expect("report serializes"))
    })())
}

/// CSV scan of the slice gamma*PR1 + beta*B + rest*I with `steps` points
/// per axis. `slice` is "pr-d" or "pr-l12".
#[wasm_bindgen]
pub fn scan_slice_csv(slice: &str, steps: usize) -> String {
    let basis = match slice {
        "pr-d" => SliceBasis::D1111,
        "pr-l12" => SliceBasis::L12,
        other => {
            return serde_json::json!({ "error": format!("unknown slice '{other}'") })
                .to_string()
        }
    };
    let grid = ScanGrid {
        basis,
        gamma_steps: steps,
        beta_steps: steps,
    };
    or_error_json(scan_csv(&grid, 1))
}

/// Curves along the isotropic line, sampled at `points` gammas: M*, the
/// TLM witness, the LO two-copy ten-term sum, and the IC criterion value.
/// JSON object of parallel arrays keyed gamma/mstar/tlm/lo2_10/ic.
#[wasm_bindgen]
pub fn isotropic_curves_json(points: usize) -> String {
    or_error_json(isotropic_curves(points))
}

fn isotropic_curves(points: usize) -> Result<String> {
    let points = points.clamp(2, 501);
    let lo10 = lo_preset("LO2-10").expect("preset id is fixed");
    let mut gamma = Vec::with_capacity(points);
    let mut mstar = Vec::with_capacity(points);
    let mut tlm = Vec::with_capacity(points);
    let mut lo = Vec::with_capacity(points);
    let mut ic = Vec::with_capacity(points);
    for i in 0..points {
        let g = i as f64 / (points - 1) as f64;
        let b = Behavior::isotropic(g)?;
        gamma.push(g);
        mstar.push(min_l1(&b)?.m_star);
        tlm.push(check_tlm(&b)?.lhs);
        lo.push(lo_evaluate(&lo10[0], &b)?.sum);
        let r = ic_van_dam(&b)?;
        ic.push(r.criterion_lhs);
    }
    Ok(serde_json::json!({
        "gamma": gamma,
        "mstar": mstar,
        "tlm": tlm,
        "lo2_10": lo,
        "ic": ic,
    })
    .to_string())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn report_json_for_pr_has_expected_fields() {
        let v: serde_json::Value = serde_json::from_str(&report_json("pr1")).unwrap();
        assert_eq!(v["ns"], true);
        assert!((v["s_max"].as_f64().unwrap() - 4.0).abs() < 1e-12);
        assert!((v["m_star"].as_f64().unwrap() - 2.0).abs() < 1e-8);
    }

    #[test]
    fn bad_preset_reports_error_json() {
        let v: serde_json::Value = serde_json::from_str(&report_json("pr99")).unwrap();
        assert!(v["error"].as_str().unwrap().contains("99"));
    }

    #[test]
    fn scan_csv_has_fixed_header() {
        let csv = scan_slice_csv("pr-d", 4);
        assert!(csv.starts_with("gamma,beta,S,mstar,ns,local,uffink,tlm,ic,lo2_10\n"));
        assert_eq!(csv.lines().count(), 1 + 10);
        let err: serde_json::Value =
            serde_json::from_str(&scan_slice_csv("bogus", 4)).unwrap();
        assert!(err["error"].is_string());
    }

    #[test]
    fn isotropic_curves_hit_known_endpoints() {
        let v: serde_json::Value =
            serde_json::from_str(&isotropic_curves_json(11)).unwrap();
        let mstar = v["mstar"].as_array().unwrap();
        assert!((mstar[0].as_f64().unwrap() - 1.0).abs() < 1e-8);
        assert!((mstar[10].as_f64().unwrap() - 2.0).abs() < 1e-8);
        let lo = v["lo2_10"].as_array().unwrap();
        assert!(lo[10].as_f64().unwrap() > 1.0); // PR violates LO2-10
    }
}
