//! Monte Carlo funding value adjustment for a swap desk that keeps its Net
//! Stable Funding Ratio at one, and a shortest-path optimizer for the debt
//! maturity used to do so.
//!
//! The desk sells an uncollateralised interest rate swap to a client and
//! hedges it back-to-back with a collateralised interbank swap. Rates follow
//! a Vasicek model ([`ratesim`]), the swaps are valued by bond decomposition
//! ([`swap`]), the NSFR balance sheet decides how much debt is needed
//! ([`balance`]), and [`fva`] prices the resulting funding cost. The
//! [`optimizer`] picks the maturity of that debt at each payment date and
//! [`scenario`] drives config-file experiments.

// NaN has to fail every `!(x >= 0.0)` style check, so keep the negations.
#![allow(clippy::neg_cmp_op_on_partial_ord)]
#![cfg_attr(test, allow(clippy::field_reassign_with_default))]

pub mod balance;
pub mod engine;
pub mod error;
pub mod fva;
pub mod optimizer;
pub mod ratesim;
pub mod scenario;
pub mod stats;
pub mod swap;

pub use balance::{BalanceConfig, DebtRule, Tenor, WeightSchedule};
pub use engine::{PricingConfig, Simulation};
pub use error::{Error, Result};
pub use fva::{price_all, FundingQuote, FvaResult};
pub use optimizer::{brute_force, build_graph, solve, FundingPolicy, PolicyGraph};
pub use ratesim::{simulate_paths, RatePath, TimeGrid, VasicekParams};
pub use stats::McEstimate;
pub use swap::{ExposureProfile, SwapSpec};

/// Evaluate `f` on `0..n` and collect in index order. Runs on the rayon pool
/// when the `parallel` feature is on; the output never depends on it.
pub(crate) fn map_indexed<T, F>(n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        (0..n).into_par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        (0..n).map(f).collect()
    }
}
