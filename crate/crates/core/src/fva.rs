//! Funding value adjustment consistent with a pinned NSFR.
//!
//! ```text
//! FVA  = FVA1 + FVA2
//! FVA1 = E[ sum_t  DF_B(t) * s_B  * D(t)              * dt ]
//! FVA2 = E[ sum_t  DF_B(t) * s~_B * max(C+(t) - D(t), 0) * dt ]
//! FCA  = E[ sum_t  DF_B(t) * s_B  * V+(t)             * dt ]
//! ```
//!
//! with `DF_B(t) = exp(-integral_0^t (r + s_B))`. All integrals use the
//! left-point rule on the simulation grid and stop at the swap maturity.

use serde::{Deserialize, Serialize};

use crate::balance::{pinned_debt, BalanceConfig, Tenor, WeightSchedule};
use crate::engine::{PricingConfig, Simulation};
use crate::error::{Error, Result};
use crate::ratesim::{RatePath, TimeGrid};
use crate::stats::McEstimate;
use crate::swap::ExposureProfile;

/// A debt maturity bucket with its funding spreads and ASF weight.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FundingQuote {
    pub tenor: Tenor,
    pub spread: f64,
    /// Spread paid on collateral not covered by the debt.
    pub shortfall_spread: f64,
    pub alpha: f64,
}

impl FundingQuote {
    /// Quote whose ASF weight follows the weight schedule and whose
    /// shortfall spread equals its funding spread.
    pub fn new(tenor: Tenor, spread: f64, weights: &WeightSchedule) -> Result<Self> {
        let quote = Self {
            tenor,
            spread,
            shortfall_spread: spread,
            alpha: weights.debt_alpha(tenor)?,
        };
        quote.validate()?;
        Ok(quote)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.spread >= 0.0) || !self.spread.is_finite() {
            return Err(Error::param("spread", format!("must be >= 0, got {}", self.spread)));
        }
        if !(self.shortfall_spread >= 0.0) || !self.shortfall_spread.is_finite() {
            return Err(Error::param(
                "shortfall_spread",
                format!("must be >= 0, got {}", self.shortfall_spread),
            ));
        }
        if !(self.alpha > 0.0 && self.alpha <= 1.0) {
            return Err(Error::NonPositiveAlpha(self.alpha));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ComponentErrors {
    pub fva1: f64,
    pub fva2: f64,
    pub fva_total: f64,
    pub fca: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FvaResult {
    pub fva1: f64,
    pub fva2: f64,
    pub fva_total: f64,
    pub fca_baseline: f64,
    pub n_paths: usize,
    pub std_error: ComponentErrors,
}

impl FvaResult {
    pub fn total_estimate(&self) -> McEstimate {
        McEstimate { mean: self.fva_total, std_error: self.std_error.fva_total }
    }

    pub fn fca_estimate(&self) -> McEstimate {
        McEstimate { mean: self.fca_baseline, std_error: self.std_error.fca }
    }
}

/// `sum_k discount[k] * spread * amount(k) * dt_k` over every interval of
/// the grid.
pub fn funding_integral(
    grid: &TimeGrid,
    discount: &[f64],
    spread: f64,
    amount: impl Fn(usize) -> f64,
) -> f64 {
    (0..grid.last_index()).fold(0.0, |acc, k| {
        acc + discount[k] * spread * amount(k) * grid.dt(k)
    })
}

fn check_series<S: AsRef<[f64]>>(what: &str, series: &[S], n_paths: usize, grid: &TimeGrid) -> Result<()> {
    if series.len() != n_paths {
        return Err(Error::ShapeMismatch(format!(
            "{what} has {} paths, expected {n_paths}",
            series.len()
        )));
    }
    if let Some(bad) = series.iter().position(|s| s.as_ref().len() != grid.len()) {
        return Err(Error::ShapeMismatch(format!(
            "{what} path {bad} has {} points, grid has {}",
            series[bad].as_ref().len(),
            grid.len()
        )));
    }
    Ok(())
}

fn check_paths(paths: &[RatePath], grid: &TimeGrid) -> Result<()> {
    if paths.is_empty() {
        return Err(Error::ShapeMismatch("no paths".into()));
    }
    if let Some(bad) = paths.iter().position(|p| p.len() != grid.len()) {
        return Err(Error::ShapeMismatch(format!(
            "path {bad} has {} points, grid has {}",
            paths[bad].len(),
            grid.len()
        )));
    }
    Ok(())
}

pub fn fva1<D>(paths: &[RatePath], grid: &TimeGrid, debt: &[D], quote: &FundingQuote) -> Result<McEstimate>
where
    D: AsRef<[f64]> + Sync,
{
    check_paths(paths, grid)?;
    check_series("debt", debt, paths.len(), grid)?;
    let samples = crate::map_indexed(paths.len(), |p| {
        let df = paths[p].discount_curve(grid, quote.spread);
        let d = debt[p].as_ref();
        funding_integral(grid, &df, quote.spread, |k| d[k])
    });
    Ok(McEstimate::from_samples(&samples))
}

/// FVA1 against supplied discount factors. Holding the discounting fixed
/// isolates the effect of the spread on the integrand.
pub fn fva1_at_discount<F, D>(discounts: &[F], grid: &TimeGrid, debt: &[D], spread: f64) -> Result<McEstimate>
where
    F: AsRef<[f64]> + Sync,
    D: AsRef<[f64]> + Sync,
{
    check_series("discount", discounts, discounts.len(), grid)?;
    check_series("debt", debt, discounts.len(), grid)?;
    let samples = crate::map_indexed(discounts.len(), |p| {
        let d = debt[p].as_ref();
        funding_integral(grid, discounts[p].as_ref(), spread, |k| d[k])
    });
    Ok(McEstimate::from_samples(&samples))
}

pub fn fva2<D, C>(
    paths: &[RatePath],
    grid: &TimeGrid,
    debt: &[D],
    collateral: &[C],
    quote: &FundingQuote,
) -> Result<McEstimate>
where
    D: AsRef<[f64]> + Sync,
    C: AsRef<[f64]> + Sync,
{
    check_paths(paths, grid)?;
    check_series("debt", debt, paths.len(), grid)?;
    check_series("collateral", collateral, paths.len(), grid)?;
    let samples = crate::map_indexed(paths.len(), |p| {
        let df = paths[p].discount_curve(grid, quote.spread);
        let (d, c) = (debt[p].as_ref(), collateral[p].as_ref());
        funding_integral(grid, &df, quote.shortfall_spread, |k| (c[k].max(0.0) - d[k]).max(0.0))
    });
    Ok(McEstimate::from_samples(&samples))
}

/// Funding cost of the positive exposure of the unsecured client trade.
pub fn fca(
    paths: &[RatePath],
    grid: &TimeGrid,
    exposures: &[ExposureProfile],
    quote: &FundingQuote,
) -> Result<McEstimate> {
    check_paths(paths, grid)?;
    let values: Vec<&[f64]> = exposures.iter().map(|e| e.client_value.as_slice()).collect();
    check_series("exposure", &values, paths.len(), grid)?;
    let samples = crate::map_indexed(paths.len(), |p| {
        let df = paths[p].discount_curve(grid, quote.spread);
        let v = values[p];
        funding_integral(grid, &df, quote.spread, |k| v[k].max(0.0))
    });
    Ok(McEstimate::from_samples(&samples))
}

/// Simulate, build exposures, pin NSFR with the quote's ASF weight and
/// price FVA1 + FVA2 alongside the FCA baseline.
pub fn price_all(config: &PricingConfig) -> Result<FvaResult> {
    config.balance.validate()?;
    config.quote.validate()?;
    let sim = config.simulate()?;
    price_simulation(&sim, &config.balance, &config.quote)
}

/// [`price_all`] on an existing simulation.
pub fn price_simulation(sim: &Simulation, balance: &BalanceConfig, quote: &FundingQuote) -> Result<FvaResult> {
    quote.validate()?;
    let grid = &sim.grid;
    check_paths(&sim.paths, grid)?;
    let debt = pinned_debt(&sim.exposures, quote.alpha, balance)?;

    // One pass per path gives all components and the per-path total.
    let per_path = crate::map_indexed(sim.n_paths(), |p| {
        let df = sim.paths[p].discount_curve(grid, quote.spread);
        let d = &debt[p];
        let e = &sim.exposures[p];
        let f1 = funding_integral(grid, &df, quote.spread, |k| d[k]);
        let f2 = funding_integral(grid, &df, quote.shortfall_spread, |k| {
            (e.posted_collateral[k].max(0.0) - d[k]).max(0.0)
        });
        let fca = funding_integral(grid, &df, quote.spread, |k| e.client_value[k].max(0.0));
        [f1, f2, f1 + f2, fca]
    });
    let column = |i: usize| -> McEstimate {
        let xs: Vec<f64> = per_path.iter().map(|row| row[i]).collect();
        McEstimate::from_samples(&xs)
    };
    let (f1, f2, total, fca) = (column(0), column(1), column(2), column(3));
    Ok(FvaResult {
        fva1: f1.mean,
        fva2: f2.mean,
        fva_total: f1.mean + f2.mean,
        fca_baseline: fca.mean,
        n_paths: sim.n_paths(),
        std_error: ComponentErrors {
            fva1: f1.std_error,
            fva2: f2.std_error,
            fva_total: total.std_error,
            fca: fca.std_error,
        },
    })
}
