use serde::{Deserialize, Serialize};

use crate::balance::{nsfr_series, DebtRule, NsfrHistogram, Tenor};
use crate::engine::Simulation;
use crate::error::Result;
use crate::fva::{price_simulation, FundingQuote, FvaResult};
use crate::optimizer::{build_graph_with_samples, solve, Arc};
use crate::stats::McEstimate;

use super::config::{Mode, ScenarioConfig};

/// Everything a run produced, with the config that produced it. Contains no
/// timing or host information, so equal configs give equal reports.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub config: ScenarioConfig,
    pub results: RunResults,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum RunResults {
    Price(PriceReport),
    SweepOis { rows: Vec<OisRow> },
    SweepSpread { rows: Vec<SpreadRow> },
    NsfrProfile(NsfrProfileReport),
    Optimize(OptimizeReport),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PriceReport {
    pub quote: FundingQuote,
    pub fva: FvaResult,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OisRow {
    pub r0: f64,
    pub fva: FvaResult,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpreadRow {
    pub spread: f64,
    pub alpha: f64,
    pub fva: FvaResult,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NsfrProfileReport {
    /// ASF weight used for the pinned debt.
    pub alpha: f64,
    pub times: Vec<f64>,
    pub standard_nsfr: Vec<McEstimate>,
    pub pinned_nsfr: Vec<McEstimate>,
    pub standard_debt: Vec<McEstimate>,
    pub pinned_debt: Vec<McEstimate>,
    /// Distribution of NSFR under the standard debt rule.
    pub histogram: NsfrHistogram,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolicyStep {
    pub node: usize,
    pub time: f64,
    pub tenor: Tenor,
    pub to: usize,
    pub cost: McEstimate,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FixedPolicyRow {
    pub tenor: Tenor,
    pub cost: McEstimate,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OptimizeReport {
    pub quotes: Vec<FundingQuote>,
    pub node_times: Vec<f64>,
    pub policy: Vec<PolicyStep>,
    pub optimal_cost: McEstimate,
    /// Rolling the same quote at every node, one row per quote.
    pub fixed_policies: Vec<FixedPolicyRow>,
    /// FCA baseline under the price quote.
    pub fca: McEstimate,
    /// `arcs[node][quote]`
    pub arcs: Vec<Vec<Arc>>,
}

impl ScenarioConfig {
    fn simulation_at(&self, r0: f64) -> Result<Simulation> {
        Simulation::new(
            &self.rates.params_at(r0),
            &self.swap.spec(),
            self.swap.im_fraction,
            self.rates.steps_per_year,
            self.rates.n_paths,
            self.rates.seed,
        )
    }

    pub fn simulation(&self) -> Result<Simulation> {
        self.simulation_at(self.rates.r0)
    }
}

/// Run the configured mode.
pub fn run(config: &ScenarioConfig) -> Result<RunReport> {
    config.validate()?;
    let balance = config.balance_config();
    let results = match config.mode {
        Mode::Price => {
            let quote = config.price_quote()?;
            let sim = config.simulation()?;
            let fva = price_simulation(&sim, &balance, &quote)?;
            RunResults::Price(PriceReport { quote, fva })
        }
        Mode::SweepOis => {
            // same seed at every level: common random numbers
            let quote = config.price_quote()?;
            let rows = config
                .sweep_ois
                .levels
                .iter()
                .map(|&r0| {
                    let sim = config.simulation_at(r0)?;
                    Ok(OisRow { r0, fva: price_simulation(&sim, &balance, &quote)? })
                })
                .collect::<Result<Vec<_>>>()?;
            RunResults::SweepOis { rows }
        }
        Mode::SweepSpread => {
            let sim = config.simulation()?;
            let rows = config
                .sweep_spread
                .spreads
                .iter()
                .map(|&spread| {
                    let quote = spread_quote(spread, config.sweep_spread.alpha_switch_spread);
                    Ok(SpreadRow {
                        spread,
                        alpha: quote.alpha,
                        fva: price_simulation(&sim, &balance, &quote)?,
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            RunResults::SweepSpread { rows }
        }
        Mode::NsfrProfile => RunResults::NsfrProfile(nsfr_profile(config)?),
        Mode::Optimize => RunResults::Optimize(optimize(config)?),
    };
    Ok(RunReport { config: config.clone(), results })
}

/// Spreads up to `switch` buy short debt at ASF weight 0.5, wider spreads buy
/// long debt at weight 1.0.
pub fn spread_quote(spread: f64, switch: f64) -> FundingQuote {
    let (tenor, alpha) = if spread <= switch {
        (Tenor::SIX_MONTHS, 0.5)
    } else {
        (Tenor::TWO_YEARS, 1.0)
    };
    FundingQuote { tenor, spread, shortfall_spread: spread, alpha }
}

fn nsfr_profile(config: &ScenarioConfig) -> Result<NsfrProfileReport> {
    let balance = config.balance_config();
    let quote = config.price_quote()?;
    let sim = config.simulation()?;
    let standard = nsfr_series(&sim.exposures, DebtRule::Standard, quote.alpha, &balance)?;
    let pinned = nsfr_series(&sim.exposures, DebtRule::NsfrPinned, quote.alpha, &balance)?;
    Ok(NsfrProfileReport {
        alpha: quote.alpha,
        times: sim.grid.times().to_vec(),
        standard_nsfr: standard.expected_nsfr(),
        pinned_nsfr: pinned.expected_nsfr(),
        standard_debt: standard.expected_debt(),
        pinned_debt: pinned.expected_debt(),
        histogram: standard.histogram(&config.histogram)?,
    })
}

fn optimize(config: &ScenarioConfig) -> Result<OptimizeReport> {
    let balance = config.balance_config();
    let quotes = config.funding_quotes()?;
    let sim = config.simulation()?;
    let (graph, samples) =
        build_graph_with_samples(&sim, &balance, &quotes, config.swap.payment_frequency)?;
    let best = solve(&graph)?;

    let payment_times: Vec<f64> = sim
        .grid
        .payment_indices()
        .iter()
        .map(|&k| sim.grid.time(k))
        .collect();
    let policy = best
        .decisions
        .iter()
        .map(|d| {
            let arc = graph.arcs[d.node][d.quote];
            PolicyStep {
                node: d.node,
                time: payment_times[d.node],
                tenor: quotes[d.quote].tenor,
                to: d.to,
                cost: McEstimate { mean: arc.cost, std_error: arc.std_error },
            }
        })
        .collect();
    let estimate = |decisions: &[crate::optimizer::Decision], total: f64| McEstimate {
        mean: total,
        std_error: samples.policy_estimate(decisions).std_error,
    };
    let optimal_cost = estimate(&best.decisions, best.total_cost);
    let fixed_policies = (0..quotes.len())
        .map(|q| {
            let fixed = graph.fixed_policy(q)?;
            Ok(FixedPolicyRow {
                tenor: quotes[q].tenor,
                cost: estimate(&fixed.decisions, fixed.total_cost),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let fca = price_simulation(&sim, &balance, &config.price_quote()?)?.fca_estimate();

    Ok(OptimizeReport {
        quotes,
        node_times: payment_times,
        policy,
        optimal_cost,
        fixed_policies,
        fca,
        arcs: graph.arcs,
    })
}
