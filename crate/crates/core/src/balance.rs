//! NSFR balance sheet of the toy desk: regulatory capital and debt on the
//! funding side, the client swap and its collateralised hedge on the asset
//! side.
//!
//! ```text
//! ASF = 100% RegCap + alpha * D
//! RSF = 100% max(Net Derivatives - Net Collateral, 0) + 20% max(Derivative Liabilities, floor)
//! ```
//!
//! The two trades face different counterparties and do not net. With client
//! value `V`:
//!
//! * derivative assets are `V+` (client, unsecured) plus `V-` (hedge);
//! * variation margin received on the hedge, `V-`, offsets the hedge asset;
//! * derivative liabilities are `V-` (client) plus `V+` (hedge).
//!
//! so `RSF = V+ + 0.2 * max(|V|, floor)`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::stats::McEstimate;
use crate::swap::ExposureProfile;

/// Debt maturity in whole months.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Tenor(pub u32);

impl Tenor {
    pub const SIX_MONTHS: Tenor = Tenor(6);
    pub const ONE_YEAR: Tenor = Tenor(12);
    pub const TWO_YEARS: Tenor = Tenor(24);

    pub fn months(self) -> u32 {
        self.0
    }

    pub fn years(self) -> f64 {
        f64::from(self.0) / 12.0
    }
}

impl fmt::Display for Tenor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_multiple_of(12) {
            write!(f, "{}y", self.0 / 12)
        } else {
            write!(f, "{}m", self.0)
        }
    }
}

/// ASF and RSF weights for the rows of the NSFR table the desk touches.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WeightSchedule {
    pub reg_cap_asf_weight: f64,
    pub rsf_derivative_asset_weight: f64,
    pub rsf_collateral_offset_weight: f64,
    pub rsf_derivative_liability_weight: f64,
    /// ASF weight of debt with exactly one year to maturity.
    pub one_year_alpha: f64,
}

impl Default for WeightSchedule {
    fn default() -> Self {
        Self {
            reg_cap_asf_weight: 1.0,
            rsf_derivative_asset_weight: 1.0,
            rsf_collateral_offset_weight: 1.0,
            rsf_derivative_liability_weight: 0.2,
            one_year_alpha: 1.0,
        }
    }
}

impl WeightSchedule {
    /// ASF weight of debt of the given maturity: 50% for six months up to
    /// one year, 100% beyond. Shorter debt earns no stable funding and is
    /// rejected.
    pub fn debt_alpha(&self, tenor: Tenor) -> Result<f64> {
        match tenor.months() {
            m if m < 6 => Err(Error::param(
                "tenor",
                format!("{tenor} debt carries no available stable funding"),
            )),
            6..=11 => Ok(0.5),
            12 => Ok(self.one_year_alpha),
            _ => Ok(1.0),
        }
    }
}

/// Regulatory inputs shared by every path.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BalanceConfig {
    pub reg_cap: f64,
    /// Derivative liabilities below this amount are raised to it.
    pub liability_floor: f64,
    #[serde(default)]
    pub weights: WeightSchedule,
}

impl BalanceConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.reg_cap >= 0.0) || !self.reg_cap.is_finite() {
            return Err(Error::param("reg_cap", format!("must be >= 0, got {}", self.reg_cap)));
        }
        if !(self.liability_floor >= 0.0) || !self.liability_floor.is_finite() {
            return Err(Error::param(
                "liability_floor",
                format!("must be >= 0, got {}", self.liability_floor),
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RsfInputs {
    pub net_derivative_asset: f64,
    pub net_collateral: f64,
    pub derivative_liability: f64,
}

impl RsfInputs {
    pub fn from_exposure(exposure: &ExposureProfile, step: usize) -> Self {
        let client = exposure.client_value[step];
        let hedge = exposure.hedge_value[step];
        Self {
            net_derivative_asset: client.max(0.0) + hedge.max(0.0),
            net_collateral: exposure.received_collateral(step),
            derivative_liability: (-client).max(0.0) + (-hedge).max(0.0),
        }
    }
}

pub fn compute_rsf(inputs: &RsfInputs, config: &BalanceConfig) -> f64 {
    let w = &config.weights;
    let net = (inputs.net_derivative_asset - w.rsf_collateral_offset_weight * inputs.net_collateral)
        .max(0.0);
    let liabilities = inputs.derivative_liability.max(config.liability_floor);
    w.rsf_derivative_asset_weight * net + w.rsf_derivative_liability_weight * liabilities
}

pub fn compute_asf(reg_cap: f64, debt: f64, alpha: f64) -> f64 {
    reg_cap + alpha * debt
}

/// Debt that brings NSFR to exactly one, never negative.
pub fn required_debt(rsf: f64, reg_cap: f64, alpha: f64) -> Result<f64> {
    if !(alpha > 0.0) {
        return Err(Error::NonPositiveAlpha(alpha));
    }
    Ok(((rsf - reg_cap) / alpha).max(0.0))
}

/// Initial margin plus posted collateral.
pub fn standard_debt(exposure: &ExposureProfile, step: usize) -> f64 {
    exposure.initial_margin + exposure.posted_collateral[step]
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DebtRule {
    Standard,
    NsfrPinned,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BalanceSheetState {
    pub reg_cap: f64,
    pub net_derivative_asset: f64,
    pub net_collateral: f64,
    pub derivative_liability: f64,
    pub asf: f64,
    pub rsf: f64,
    pub nsfr: f64,
    /// Debt carried on the funding side under the chosen rule.
    pub debt: f64,
}

pub fn balance_state(
    exposure: &ExposureProfile,
    step: usize,
    rule: DebtRule,
    alpha: f64,
    config: &BalanceConfig,
) -> Result<BalanceSheetState> {
    let inputs = RsfInputs::from_exposure(exposure, step);
    let rsf = compute_rsf(&inputs, config);
    let reg_cap = config.reg_cap;
    let debt = match rule {
        DebtRule::Standard => standard_debt(exposure, step),
        DebtRule::NsfrPinned => required_debt(rsf, reg_cap * config.weights.reg_cap_asf_weight, alpha)?,
    };
    let asf = compute_asf(reg_cap * config.weights.reg_cap_asf_weight, debt, alpha);
    Ok(BalanceSheetState {
        reg_cap,
        net_derivative_asset: inputs.net_derivative_asset,
        net_collateral: inputs.net_collateral,
        derivative_liability: inputs.derivative_liability,
        asf,
        rsf,
        nsfr: asf / rsf,
        debt,
    })
}

/// Per-path debt series under the NSFR-pinning rule.
pub fn pinned_debt(
    exposures: &[ExposureProfile],
    alpha: f64,
    config: &BalanceConfig,
) -> Result<Vec<Vec<f64>>> {
    if !(alpha > 0.0) {
        return Err(Error::NonPositiveAlpha(alpha));
    }
    let reg_cap = config.reg_cap * config.weights.reg_cap_asf_weight;
    Ok(crate::map_indexed(exposures.len(), |p| {
        let e = &exposures[p];
        (0..e.len())
            .map(|k| {
                let rsf = compute_rsf(&RsfInputs::from_exposure(e, k), config);
                ((rsf - reg_cap) / alpha).max(0.0)
            })
            .collect()
    }))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HistogramSpec {
    pub buckets: usize,
    pub lower: f64,
    pub upper: f64,
}

impl Default for HistogramSpec {
    fn default() -> Self {
        Self {
            buckets: 50,
            lower: 0.0,
            upper: 3.0,
        }
    }
}

impl HistogramSpec {
    pub fn validate(&self) -> Result<()> {
        if self.buckets == 0 || !(self.upper > self.lower) {
            return Err(Error::param("histogram", "need buckets > 0 and upper > lower"));
        }
        Ok(())
    }

    /// Bucket of `x`; values at or above `upper` land in the overflow bucket
    /// `buckets`, values below `lower` in bucket 0.
    pub fn bucket(&self, x: f64) -> usize {
        if !(x < self.upper) {
            return self.buckets;
        }
        let width = (self.upper - self.lower) / self.buckets as f64;
        (((x - self.lower) / width).floor().max(0.0) as usize).min(self.buckets - 1)
    }

    pub fn lower_edge(&self, bucket: usize) -> f64 {
        self.lower + (self.upper - self.lower) * bucket as f64 / self.buckets as f64
    }
}

/// Per-step NSFR distribution, `counts[step][bucket]` with an overflow
/// bucket at the end of each row.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NsfrHistogram {
    pub spec: HistogramSpec,
    pub counts: Vec<Vec<u64>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct NsfrSeries {
    pub rule: DebtRule,
    pub alpha: f64,
    /// `states[path][step]`
    pub states: Vec<Vec<BalanceSheetState>>,
}

pub fn nsfr_series(
    exposures: &[ExposureProfile],
    rule: DebtRule,
    alpha: f64,
    config: &BalanceConfig,
) -> Result<NsfrSeries> {
    config.validate()?;
    if rule == DebtRule::NsfrPinned && !(alpha > 0.0) {
        return Err(Error::NonPositiveAlpha(alpha));
    }
    if let Some(first) = exposures.first() {
        if exposures.iter().any(|e| e.len() != first.len()) {
            return Err(Error::ShapeMismatch("exposure profiles differ in length".into()));
        }
    }
    let states = crate::map_indexed(exposures.len(), |p| {
        let e = &exposures[p];
        (0..e.len())
            .map(|k| balance_state(e, k, rule, alpha, config))
            .collect::<Result<Vec<_>>>()
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;
    Ok(NsfrSeries { rule, alpha, states })
}

impl NsfrSeries {
    pub fn n_steps(&self) -> usize {
        self.states.first().map_or(0, Vec::len)
    }

    fn expected(&self, field: impl Fn(&BalanceSheetState) -> f64) -> Vec<McEstimate> {
        let mut column = Vec::with_capacity(self.states.len());
        (0..self.n_steps())
            .map(|k| {
                column.clear();
                column.extend(self.states.iter().map(|path| field(&path[k])));
                McEstimate::from_samples(&column)
            })
            .collect()
    }

    pub fn expected_nsfr(&self) -> Vec<McEstimate> {
        self.expected(|s| s.nsfr)
    }

    pub fn expected_debt(&self) -> Vec<McEstimate> {
        self.expected(|s| s.debt)
    }

    pub fn histogram(&self, spec: &HistogramSpec) -> Result<NsfrHistogram> {
        spec.validate()?;
        let mut counts = vec![vec![0u64; spec.buckets + 1]; self.n_steps()];
        for path in &self.states {
            for (k, state) in path.iter().enumerate() {
                counts[k][spec.bucket(state.nsfr)] += 1;
            }
        }
        Ok(NsfrHistogram {
            spec: spec.clone(),
            counts,
        })
    }
}
