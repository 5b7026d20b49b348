//! WebAssembly bindings for the browser demo. Every export takes the page's
//! slider state as JSON and returns JSON, so the same functions are tested
//! natively.

use nsfr_fva::scenario::{run, Mode, RunResults, ScenarioConfig};
use serde::{Deserialize, Serialize};
use wasm_bindgen::prelude::*;

/// Slider state sent by the page. Rates are decimals, balance items are in
/// basis points of notional.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DemoParams {
    pub r0: f64,
    pub volatility: f64,
    pub reg_cap_bp: f64,
    pub im_bp: f64,
    pub one_year_alpha: f64,
    pub n_paths: usize,
    pub seed: u64,
}

impl DemoParams {
    fn config(&self, mode: Mode) -> ScenarioConfig {
        let base = ScenarioConfig::default();
        let mut c = ScenarioConfig { mode, ..base };
        c.rates.r0 = self.r0;
        c.rates.volatility = self.volatility;
        c.rates.n_paths = self.n_paths;
        c.rates.seed = self.seed;
        c.balance.reg_cap = self.reg_cap_bp * 1e-4 * c.swap.notional;
        c.swap.im_fraction = self.im_bp * 1e-4;
        c.balance.one_year_alpha = self.one_year_alpha;
        c
    }
}

#[derive(Serialize)]
struct Profile {
    times: Vec<f64>,
    nsfr_standard: Vec<f64>,
    nsfr_pinned: Vec<f64>,
    debt_standard: Vec<f64>,
    debt_pinned: Vec<f64>,
}

#[derive(Serialize)]
struct SweepPoint {
    r0: f64,
    fva_total: f64,
    fva_se: f64,
    fca: f64,
}

#[derive(Serialize)]
struct PolicyView {
    node_times: Vec<f64>,
    tenors: Vec<String>,
    optimal: f64,
    optimal_se: f64,
    fixed: Vec<(String, f64)>,
    fca: f64,
}

fn parse(params: &str) -> Result<DemoParams, String> {
    serde_json::from_str(params).map_err(|e| format!("bad parameters: {e}"))
}

fn to_json<T: Serialize>(value: &T) -> Result<String, String> {
    serde_json::to_string(value).map_err(|e| e.to_string())
}

fn means(xs: &[nsfr_fva::McEstimate]) -> Vec<f64> {
    xs.iter().map(|e| e.mean).collect()
}

/// Expected NSFR and debt over time under the standard and pinned rules.
pub fn nsfr_profile_json(params: &str) -> Result<String, String> {
    let config = parse(params)?.config(Mode::NsfrProfile);
    let RunResults::NsfrProfile(p) = run(&config).map_err(|e| e.to_string())?.results else {
        unreachable!("mode is nsfr_profile")
    };
    // the swap has expired at the last point, where the ratio is meaningless
    let n = p.times.len() - 1;
    to_json(&Profile {
        times: p.times[..n].to_vec(),
        nsfr_standard: means(&p.standard_nsfr[..n]),
        nsfr_pinned: means(&p.pinned_nsfr[..n]),
        debt_standard: means(&p.standard_debt[..n]),
        debt_pinned: means(&p.pinned_debt[..n]),
    })
}

/// FVA and FCA of the one-year quote across starting OIS levels.
pub fn fva_sweep_json(params: &str, levels: &[f64]) -> Result<String, String> {
    let mut config = parse(params)?.config(Mode::SweepOis);
    config.sweep_ois.levels = levels.to_vec();
    let RunResults::SweepOis { rows } = run(&config).map_err(|e| e.to_string())?.results else {
        unreachable!("mode is sweep_ois")
    };
    let points: Vec<SweepPoint> = rows
        .iter()
        .map(|r| SweepPoint {
            r0: r.r0,
            fva_total: r.fva.fva_total,
            fva_se: r.fva.std_error.fva_total,
            fca: r.fva.fca_baseline,
        })
        .collect();
    to_json(&points)
}

/// Optimal debt maturity at each payment date against fixed rolling policies.
pub fn optimize_json(params: &str) -> Result<String, String> {
    let config = parse(params)?.config(Mode::Optimize);
    let RunResults::Optimize(o) = run(&config).map_err(|e| e.to_string())?.results else {
        unreachable!("mode is optimize")
    };
    to_json(&PolicyView {
        node_times: o.policy.iter().map(|s| s.time).collect(),
        tenors: o.policy.iter().map(|s| s.tenor.to_string()).collect(),
        optimal: o.optimal_cost.mean,
        optimal_se: o.optimal_cost.std_error,
        fixed: o.fixed_policies.iter().map(|r| (r.tenor.to_string(), r.cost.mean)).collect(),
        fca: o.fca.mean,
    })
}

#[wasm_bindgen]
pub fn nsfr_profile(params: &str) -> Result<String, JsValue> {
    nsfr_profile_json(params).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn fva_sweep(params: &str, levels: &[f64]) -> Result<String, JsValue> {
    fva_sweep_json(params, levels).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn optimize(params: &str) -> Result<String, JsValue> {
    optimize_json(params).map_err(|e| JsValue::from_str(&e))
}
