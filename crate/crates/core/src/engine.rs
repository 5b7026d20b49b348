//! Shared Monte Carlo setup: one rate simulation and the swap exposures on
//! it, reused by pricing, NSFR profiling and the optimizer so that every
//! comparison runs on the same paths.

use serde::{Deserialize, Serialize};

use crate::balance::BalanceConfig;
use crate::error::{Error, Result};
use crate::fva::FundingQuote;
use crate::ratesim::{simulate_paths, RatePath, TimeGrid, VasicekParams};
use crate::swap::{build_exposures, ExposureProfile, SwapSpec};

/// Everything needed to run one FVA pricing.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PricingConfig {
    pub rates: VasicekParams,
    pub n_paths: usize,
    pub seed: u64,
    pub steps_per_year: u32,
    pub swap: SwapSpec,
    pub im_fraction: f64,
    pub balance: BalanceConfig,
    pub quote: FundingQuote,
}

impl PricingConfig {
    pub fn simulate(&self) -> Result<Simulation> {
        Simulation::new(
            &self.rates,
            &self.swap,
            self.im_fraction,
            self.steps_per_year,
            self.n_paths,
            self.seed,
        )
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Simulation {
    pub params: VasicekParams,
    pub grid: TimeGrid,
    pub paths: Vec<RatePath>,
    pub exposures: Vec<ExposureProfile>,
}

impl Simulation {
    pub fn new(
        params: &VasicekParams,
        swap: &SwapSpec,
        im_fraction: f64,
        steps_per_year: u32,
        n_paths: usize,
        seed: u64,
    ) -> Result<Self> {
        if swap.payment_frequency == 0 {
            return Err(Error::param("payment_frequency", "must be positive"));
        }
        let grid = TimeGrid::uniform(swap.maturity, steps_per_year, swap.payment_frequency)?;
        let paths = simulate_paths(params, &grid, n_paths, seed)?;
        let exposures = build_exposures(swap, params, &paths, &grid, im_fraction)?;
        Ok(Self {
            params: *params,
            grid,
            paths,
            exposures,
        })
    }

    pub fn n_paths(&self) -> usize {
        self.paths.len()
    }

    pub fn collateral(&self) -> Vec<&[f64]> {
        self.exposures
            .iter()
            .map(|e| e.posted_collateral.as_slice())
            .collect()
    }
}
