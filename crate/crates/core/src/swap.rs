//! Client swap valuation by bond decomposition and the collateral / margin
//! series of its back-to-back hedge.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ratesim::{zero_coupon_bond_price, RatePath, TimeGrid, VasicekParams};

const TIME_TOL: f64 = 1e-9;

/// Fixed-for-floating swap terms. `pay_fixed` is the bank's side of the
/// client trade.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SwapSpec {
    pub notional: f64,
    pub fixed_rate: f64,
    pub maturity: f64,
    pub pay_fixed: bool,
    pub payment_frequency: u32,
}

impl Default for SwapSpec {
    fn default() -> Self {
        Self {
            notional: 100e6,
            fixed_rate: 0.02,
            maturity: 5.0,
            pay_fixed: true,
            payment_frequency: 2,
        }
    }
}

impl SwapSpec {
    pub fn accrual(&self) -> f64 {
        1.0 / f64::from(self.payment_frequency)
    }

    pub fn n_payments(&self) -> usize {
        (self.maturity * f64::from(self.payment_frequency)).round() as usize
    }

    pub fn payment_times(&self) -> impl Iterator<Item = f64> + '_ {
        (1..=self.n_payments()).map(move |k| k as f64 * self.accrual())
    }

    pub fn validate(&self, grid: &TimeGrid) -> Result<()> {
        if !(self.notional > 0.0) || !self.notional.is_finite() {
            return Err(Error::param("notional", format!("must be positive, got {}", self.notional)));
        }
        if !(self.maturity > 0.0) {
            return Err(Error::param("maturity", format!("must be positive, got {}", self.maturity)));
        }
        if !self.fixed_rate.is_finite() {
            return Err(Error::param("fixed_rate", "must be finite"));
        }
        if self.payment_frequency == 0 {
            return Err(Error::param("payment_frequency", "must be positive"));
        }
        let periods = self.maturity * f64::from(self.payment_frequency);
        if (periods - periods.round()).abs() > TIME_TOL {
            return Err(Error::param(
                "maturity",
                "must be a whole number of payment periods",
            ));
        }
        if self.maturity > grid.maturity() + TIME_TOL {
            return Err(Error::param("maturity", "extends past the simulation grid"));
        }
        let on_schedule = |t: f64| {
            grid.index_of(t)
                .is_some_and(|i| grid.payment_indices().binary_search(&i).is_ok())
        };
        if let Some(t) = self.payment_times().find(|&t| !on_schedule(t)) {
            return Err(Error::param(
                "payment_frequency",
                format!("swap payment at t={t} is not a grid payment date"),
            ));
        }
        Ok(())
    }

    fn sign(&self) -> f64 {
        if self.pay_fixed {
            1.0
        } else {
            -1.0
        }
    }
}

/// Mark-to-market value of the client swap to the bank at grid `step`.
///
/// The floating leg is worth notional plus the coupon fixed at the last
/// reset, discounted to the next payment; the fixed leg is a coupon bond.
/// Both use Vasicek bond prices at the path's current short rate.
pub fn value_swap(
    spec: &SwapSpec,
    params: &VasicekParams,
    path: &RatePath,
    grid: &TimeGrid,
    step: usize,
) -> Result<f64> {
    grid.check_index(step)?;
    let t = grid.time(step);
    if t > spec.maturity + TIME_TOL {
        return Err(Error::StepPastMaturity { step });
    }
    Ok(value_at(spec, params, path, grid, step))
}

fn value_at(
    spec: &SwapSpec,
    params: &VasicekParams,
    path: &RatePath,
    grid: &TimeGrid,
    step: usize,
) -> f64 {
    let t = grid.time(step);
    let r = path.rates[step];
    let accrual = spec.accrual();
    let n = spec.n_payments();
    // index of the first payment strictly after t
    let first = (1..=n).find(|&k| k as f64 * accrual > t + TIME_TOL);
    let Some(first) = first else {
        return 0.0;
    };

    let notional = spec.notional;
    let coupon = notional * spec.fixed_rate * accrual;
    let mut fixed_leg = 0.0;
    for k in first..=n {
        fixed_leg += coupon * zero_coupon_bond_price(params, r, k as f64 * accrual - t);
    }
    fixed_leg += notional * zero_coupon_bond_price(params, r, n as f64 * accrual - t);

    let next_payment = first as f64 * accrual;
    let reset_time = next_payment - accrual;
    let reset_rate = grid
        .index_of(reset_time)
        .map(|i| path.rates[i])
        .unwrap_or(r);
    let reset_growth = 1.0 / zero_coupon_bond_price(params, reset_rate, accrual);
    let float_leg = notional * reset_growth * zero_coupon_bond_price(params, r, next_payment - t);

    spec.sign() * (float_leg - fixed_leg)
}

/// Per-step values of the client trade and its collateralised hedge on one
/// path.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExposureProfile {
    pub client_value: Vec<f64>,
    pub hedge_value: Vec<f64>,
    /// Variation margin posted on the hedge, `max(client_value, 0)`.
    pub posted_collateral: Vec<f64>,
    pub initial_margin: f64,
}

impl ExposureProfile {
    pub fn len(&self) -> usize {
        self.client_value.len()
    }

    pub fn is_empty(&self) -> bool {
        self.client_value.is_empty()
    }

    /// Variation margin received on the hedge when the hedge is an asset.
    pub fn received_collateral(&self, step: usize) -> f64 {
        self.hedge_value[step].max(0.0)
    }
}

pub fn build_exposure(
    spec: &SwapSpec,
    params: &VasicekParams,
    path: &RatePath,
    grid: &TimeGrid,
    im_fraction: f64,
) -> Result<ExposureProfile> {
    if !(im_fraction >= 0.0) {
        return Err(Error::param("im_fraction", format!("must be >= 0, got {im_fraction}")));
    }
    if path.len() != grid.len() {
        return Err(Error::ShapeMismatch(format!(
            "path has {} points, grid has {}",
            path.len(),
            grid.len()
        )));
    }
    let client_value: Vec<f64> = (0..grid.len())
        .map(|k| {
            if grid.time(k) > spec.maturity + TIME_TOL {
                0.0
            } else {
                value_at(spec, params, path, grid, k)
            }
        })
        .collect();
    let hedge_value = client_value.iter().map(|v| -v).collect();
    let posted_collateral = client_value.iter().map(|v| v.max(0.0)).collect();
    Ok(ExposureProfile {
        client_value,
        hedge_value,
        posted_collateral,
        initial_margin: im_fraction * spec.notional,
    })
}

/// [`build_exposure`] over a set of paths.
pub fn build_exposures(
    spec: &SwapSpec,
    params: &VasicekParams,
    paths: &[RatePath],
    grid: &TimeGrid,
    im_fraction: f64,
) -> Result<Vec<ExposureProfile>> {
    spec.validate(grid)?;
    crate::map_indexed(paths.len(), |i| {
        build_exposure(spec, params, &paths[i], grid, im_fraction)
    })
    .into_iter()
    .collect()
}
