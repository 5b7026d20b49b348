//! Debt-maturity selection as a shortest path over payment dates.
//!
//! Node `i` is the i-th payment date and node `N` the swap maturity. Funding
//! at node `i` with a quote of `d` periods moves to node `min(i + d, N)` and
//! costs the expected discounted FVA integrand over that interval, with the
//! debt re-pinned every grid step at the quote's ASF weight. The short rate
//! does not depend on the funding choice, so these expected arc costs can be
//! computed once on a common path set and the stochastic program reduces to
//! a deterministic shortest path:
//!
//! ```text
//! V_N = 0,   V_i = min_q { C(i, q) + V_{j(i, q)} }
//! ```
//!
//! Ties go to the longer maturity, then to the earlier quote.

use std::cmp::{Ordering, Reverse};

use serde::{Deserialize, Serialize};

use crate::balance::{pinned_debt, BalanceConfig};
use crate::engine::Simulation;
use crate::error::{Error, Result};
use crate::fva::FundingQuote;
use crate::stats::McEstimate;

/// Default ceiling on the number of sequences [`brute_force`] will visit.
pub const ENUMERATION_LIMIT: u128 = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Arc {
    pub quote: usize,
    pub to: usize,
    pub cost: f64,
    pub std_error: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolicyGraph {
    /// Duration of each quote in payment periods.
    pub durations: Vec<usize>,
    /// Outgoing arcs of every non-terminal node, one per quote.
    pub arcs: Vec<Vec<Arc>>,
}

impl PolicyGraph {
    /// Graph over `n_periods` payment periods with arc costs given as
    /// `costs[node][quote]`.
    pub fn from_costs(n_periods: usize, durations: &[usize], costs: &[Vec<f64>]) -> Result<Self> {
        if durations.is_empty() {
            return Err(Error::NoQuotes);
        }
        if let Some(q) = durations.iter().position(|&d| d == 0) {
            return Err(Error::ZeroDurationQuote(format!("#{q}")));
        }
        if costs.len() != n_periods || costs.iter().any(|row| row.len() != durations.len()) {
            return Err(Error::ShapeMismatch(format!(
                "expected {n_periods} x {} arc costs",
                durations.len()
            )));
        }
        let arcs = costs
            .iter()
            .enumerate()
            .map(|(i, row)| {
                row.iter()
                    .enumerate()
                    .map(|(q, &cost)| Arc {
                        quote: q,
                        to: (i + durations[q]).min(n_periods),
                        cost,
                        std_error: 0.0,
                    })
                    .collect()
            })
            .collect();
        Ok(Self {
            durations: durations.to_vec(),
            arcs,
        })
    }

    pub fn terminal(&self) -> usize {
        self.arcs.len()
    }

    pub fn arc(&self, node: usize, quote: usize) -> Option<&Arc> {
        self.arcs.get(node)?.iter().find(|a| a.quote == quote)
    }

    fn preference(&self, arc: &Arc) -> (usize, Reverse<usize>) {
        (self.durations[arc.quote], Reverse(arc.quote))
    }

    /// Cost of following `decisions`, accumulated from the terminal node
    /// backwards in the same order as the recursion.
    pub fn policy_cost(&self, decisions: &[Decision]) -> f64 {
        decisions
            .iter()
            .rev()
            .fold(0.0, |acc, d| self.arcs[d.node][d.quote].cost + acc)
    }

    /// The policy that funds with quote `quote` at every node.
    pub fn fixed_policy(&self, quote: usize) -> Result<FundingPolicy> {
        if quote >= self.durations.len() {
            return Err(Error::param("quote", format!("no quote #{quote}")));
        }
        let mut decisions = Vec::new();
        let mut node = 0;
        while node < self.terminal() {
            let arc = self.arcs[node][quote];
            decisions.push(Decision { node, quote, to: arc.to });
            node = arc.to;
        }
        Ok(FundingPolicy {
            total_cost: self.policy_cost(&decisions),
            decisions,
            node_values: Vec::new(),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Decision {
    pub node: usize,
    pub quote: usize,
    pub to: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FundingPolicy {
    pub decisions: Vec<Decision>,
    pub total_cost: f64,
    /// Optimal cost-to-go from every node; empty when not computed.
    pub node_values: Vec<f64>,
}

impl FundingPolicy {
    pub fn quotes(&self) -> Vec<usize> {
        self.decisions.iter().map(|d| d.quote).collect()
    }
}

/// Expected arc costs on the simulation's common paths.
pub fn build_graph(
    sim: &Simulation,
    balance: &BalanceConfig,
    quotes: &[FundingQuote],
    payments_per_year: u32,
) -> Result<PolicyGraph> {
    build_graph_with_samples(sim, balance, quotes, payments_per_year).map(|(g, _)| g)
}

/// Per-path arc costs, kept so a policy's cost gets a standard error.
#[derive(Debug, Clone, PartialEq)]
pub struct ArcSamples {
    n_periods: usize,
    /// `per_path[p][quote * n_periods + node]`
    per_path: Vec<Vec<f64>>,
}

impl ArcSamples {
    /// Monte Carlo estimate of a policy's total cost from path-wise sums.
    pub fn policy_estimate(&self, decisions: &[Decision]) -> McEstimate {
        let totals: Vec<f64> = self
            .per_path
            .iter()
            .map(|row| {
                decisions
                    .iter()
                    .rev()
                    .fold(0.0, |acc, d| row[d.quote * self.n_periods + d.node] + acc)
            })
            .collect();
        McEstimate::from_samples(&totals)
    }
}

/// [`build_graph`] plus the per-path samples behind each arc mean.
pub fn build_graph_with_samples(
    sim: &Simulation,
    balance: &BalanceConfig,
    quotes: &[FundingQuote],
    payments_per_year: u32,
) -> Result<(PolicyGraph, ArcSamples)> {
    if quotes.is_empty() {
        return Err(Error::NoQuotes);
    }
    if payments_per_year == 0 || 12 % payments_per_year != 0 {
        return Err(Error::param("payment_frequency", "must divide 12"));
    }
    let period_months = 12 / payments_per_year;
    let durations = quotes
        .iter()
        .map(|q| {
            q.validate()?;
            let months = q.tenor.months();
            if months % period_months != 0 {
                return Err(Error::param(
                    "tenor",
                    format!("{} is not a whole number of {period_months}-month periods", q.tenor),
                ));
            }
            match (months / period_months) as usize {
                0 => Err(Error::ZeroDurationQuote(q.tenor.to_string())),
                d => Ok(d),
            }
        })
        .collect::<Result<Vec<_>>>()?;

    let grid = &sim.grid;
    let nodes = grid.payment_indices();
    let n_periods = grid.n_periods();
    let debts = quotes
        .iter()
        .map(|q| pinned_debt(&sim.exposures, q.alpha, balance))
        .collect::<Result<Vec<_>>>()?;

    // per path: arc integrals laid out as [quote][node]
    let per_path = crate::map_indexed(sim.n_paths(), |p| {
        let exposure = &sim.exposures[p];
        let mut out = Vec::with_capacity(quotes.len() * n_periods);
        for (q, quote) in quotes.iter().enumerate() {
            let df = sim.paths[p].discount_curve(grid, quote.spread);
            let debt = &debts[q][p];
            for i in 0..n_periods {
                let to = (i + durations[q]).min(n_periods);
                let cost = (nodes[i]..nodes[to]).fold(0.0, |acc, k| {
                    let d = debt[k];
                    let shortfall = (exposure.posted_collateral[k].max(0.0) - d).max(0.0);
                    let w = df[k] * grid.dt(k);
                    acc + w * quote.spread * d + w * quote.shortfall_spread * shortfall
                });
                out.push(cost);
            }
        }
        out
    });

    let mut column = Vec::with_capacity(per_path.len());
    let mut arcs = vec![Vec::with_capacity(quotes.len()); n_periods];
    for (q, &duration) in durations.iter().enumerate() {
        for (i, node_arcs) in arcs.iter_mut().enumerate() {
            column.clear();
            column.extend(per_path.iter().map(|row| row[q * n_periods + i]));
            let est = McEstimate::from_samples(&column);
            node_arcs.push(Arc {
                quote: q,
                to: (i + duration).min(n_periods),
                cost: est.mean,
                std_error: est.std_error,
            });
        }
    }
    Ok((PolicyGraph { durations, arcs }, ArcSamples { n_periods, per_path }))
}

/// Backward induction from the terminal node.
pub fn solve(graph: &PolicyGraph) -> Result<FundingPolicy> {
    let n = graph.terminal();
    let mut values = vec![f64::INFINITY; n + 1];
    let mut choice: Vec<Option<Arc>> = vec![None; n];
    values[n] = 0.0;
    for i in (0..n).rev() {
        for arc in &graph.arcs[i] {
            if arc.to <= i || arc.to > n {
                return Err(Error::ShapeMismatch(format!("arc {i} -> {} does not advance", arc.to)));
            }
            let candidate = arc.cost + values[arc.to];
            if !candidate.is_finite() {
                continue;
            }
            let better = match choice[i] {
                None => true,
                Some(best) => match candidate.partial_cmp(&values[i]) {
                    Some(Ordering::Less) => true,
                    Some(Ordering::Equal) => graph.preference(arc) > graph.preference(&best),
                    _ => false,
                },
            };
            if better {
                values[i] = candidate;
                choice[i] = Some(*arc);
            }
        }
    }
    if n > 0 && choice[0].is_none() {
        return Err(Error::UnreachableTerminal(n));
    }

    let mut decisions = Vec::new();
    let mut node = 0;
    while node < n {
        let arc = choice[node].ok_or(Error::UnreachableTerminal(n))?;
        decisions.push(Decision { node, quote: arc.quote, to: arc.to });
        node = arc.to;
    }
    Ok(FundingPolicy {
        total_cost: graph.policy_cost(&decisions),
        decisions,
        node_values: values,
    })
}

/// Number of distinct funding sequences from node 0 to the terminal.
pub fn count_policies(graph: &PolicyGraph) -> u128 {
    let n = graph.terminal();
    let mut ways = vec![0u128; n + 1];
    ways[n] = 1;
    for i in (0..n).rev() {
        ways[i] = graph.arcs[i]
            .iter()
            .fold(0u128, |acc, a| acc.saturating_add(ways[a.to]));
    }
    ways[0]
}

/// Exhaustive search over every funding sequence, with the same tie-break
/// as [`solve`] applied lexicographically along the sequence.
pub fn brute_force(graph: &PolicyGraph) -> Result<FundingPolicy> {
    brute_force_with_limit(graph, ENUMERATION_LIMIT)
}

pub fn brute_force_with_limit(graph: &PolicyGraph, limit: u128) -> Result<FundingPolicy> {
    let count = count_policies(graph);
    if count > limit {
        return Err(Error::EnumerationLimit { count, limit });
    }
    let n = graph.terminal();
    if n > 0 && count == 0 {
        return Err(Error::UnreachableTerminal(n));
    }

    let mut best: Option<(f64, Vec<Decision>)> = None;
    let mut current = Vec::new();
    enumerate(graph, 0, &mut current, &mut best);
    let (total_cost, decisions) = best.unwrap_or((0.0, Vec::new()));
    Ok(FundingPolicy {
        decisions,
        total_cost,
        node_values: Vec::new(),
    })
}

fn enumerate(
    graph: &PolicyGraph,
    node: usize,
    current: &mut Vec<Decision>,
    best: &mut Option<(f64, Vec<Decision>)>,
) {
    if node == graph.terminal() {
        let cost = graph.policy_cost(current);
        let replace = match best {
            None => true,
            Some((best_cost, best_seq)) => match cost.partial_cmp(best_cost) {
                Some(Ordering::Less) => true,
                Some(Ordering::Equal) => prefer_sequence(graph, current, best_seq),
                _ => false,
            },
        };
        if replace && cost.is_finite() {
            *best = Some((cost, current.clone()));
        }
        return;
    }
    for arc in &graph.arcs[node] {
        current.push(Decision { node, quote: arc.quote, to: arc.to });
        enumerate(graph, arc.to, current, best);
        current.pop();
    }
}

fn prefer_sequence(graph: &PolicyGraph, a: &[Decision], b: &[Decision]) -> bool {
    for (x, y) in a.iter().zip(b) {
        if x.quote != y.quote {
            let key = |d: &Decision| (graph.durations[d.quote], Reverse(d.quote));
            return key(x) > key(y);
        }
    }
    false
}
