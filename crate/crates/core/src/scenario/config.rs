use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::balance::{BalanceConfig, HistogramSpec, Tenor, WeightSchedule};
use crate::engine::PricingConfig;
use crate::error::{Error, Result};
use crate::fva::FundingQuote;
use crate::ratesim::VasicekParams;
use crate::swap::SwapSpec;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
#[cfg_attr(feature = "cli", derive(clap::ValueEnum), value(rename_all = "snake_case"))]
pub enum Mode {
    #[default]
    Price,
    SweepOis,
    SweepSpread,
    NsfrProfile,
    Optimize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RatesConfig {
    pub r0: f64,
    pub mean_reversion: f64,
    /// Defaults to `r0` when absent, including across an OIS sweep.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub long_run_mean: Option<f64>,
    pub volatility: f64,
    pub n_paths: usize,
    pub seed: u64,
    pub steps_per_year: u32,
}

impl RatesConfig {
    pub fn params_at(&self, r0: f64) -> VasicekParams {
        VasicekParams {
            r0,
            mean_reversion: self.mean_reversion,
            long_run_mean: self.long_run_mean.unwrap_or(r0),
            volatility: self.volatility,
        }
    }

    pub fn params(&self) -> VasicekParams {
        self.params_at(self.r0)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SwapConfig {
    pub notional: f64,
    pub fixed_rate: f64,
    pub maturity: f64,
    pub pay_fixed: bool,
    pub payment_frequency: u32,
    pub im_fraction: f64,
}

impl SwapConfig {
    pub fn spec(&self) -> SwapSpec {
        SwapSpec {
            notional: self.notional,
            fixed_rate: self.fixed_rate,
            maturity: self.maturity,
            pay_fixed: self.pay_fixed,
            payment_frequency: self.payment_frequency,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BalanceSection {
    pub reg_cap: f64,
    pub liability_floor: f64,
    /// ASF weight of exactly one-year debt, 0.5 or 1.0.
    pub one_year_alpha: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuoteConfig {
    pub tenor_months: u32,
    pub spread: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub shortfall_spread: Option<f64>,
    /// Overrides the ASF weight implied by the tenor.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PriceSection {
    /// Tenor of the quote used by `price`, `sweep_ois` and `nsfr_profile`.
    pub quote_months: u32,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepOisSection {
    pub levels: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSpreadSection {
    pub spreads: Vec<f64>,
    /// Spreads up to this level fund at ASF weight 0.5, above it at 1.0.
    pub alpha_switch_spread: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub schema_version: u32,
    pub mode: Mode,
    pub rates: RatesConfig,
    pub swap: SwapConfig,
    pub balance: BalanceSection,
    #[serde(default)]
    pub quotes: Vec<QuoteConfig>,
    pub price: PriceSection,
    pub sweep_ois: SweepOisSection,
    pub sweep_spread: SweepSpreadSection,
    #[serde(default)]
    pub histogram: HistogramSpec,
}

impl Default for ScenarioConfig {
    fn default() -> Self {
        let notional = 100e6;
        Self {
            schema_version: SCHEMA_VERSION,
            mode: Mode::Price,
            rates: RatesConfig {
                r0: 0.01,
                mean_reversion: 0.5,
                long_run_mean: None,
                volatility: 0.01,
                n_paths: 10_000,
                seed: 20_180_101,
                steps_per_year: 12,
            },
            swap: SwapConfig {
                notional,
                fixed_rate: 0.02,
                maturity: 5.0,
                pay_fixed: true,
                payment_frequency: 2,
                im_fraction: 0.0025,
            },
            balance: BalanceSection {
                reg_cap: 0.0025 * notional,
                liability_floor: 10_000.0,
                one_year_alpha: 1.0,
            },
            quotes: vec![
                QuoteConfig { tenor_months: 6, spread: 0.005, shortfall_spread: None, alpha: None },
                QuoteConfig { tenor_months: 12, spread: 0.0051, shortfall_spread: None, alpha: None },
                QuoteConfig { tenor_months: 24, spread: 0.0052, shortfall_spread: None, alpha: None },
            ],
            price: PriceSection { quote_months: 12 },
            sweep_ois: SweepOisSection { levels: vec![0.005, 0.01, 0.015] },
            sweep_spread: SweepSpreadSection {
                spreads: vec![0.003, 0.004, 0.005, 0.006, 0.007, 0.008],
                alpha_switch_spread: 0.005,
            },
            histogram: HistogramSpec::default(),
        }
    }
}

fn is_alpha(x: f64) -> bool {
    x == 0.5 || x == 1.0
}

impl ScenarioConfig {
    pub fn from_toml_str(text: &str) -> Result<Self> {
        let config: Self = toml::from_str(text)?;
        config.validate()?;
        Ok(config)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::from_toml_str(&text)
    }

    pub fn to_toml_string(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::Serialize(e.to_string()))
    }

    pub fn weights(&self) -> WeightSchedule {
        WeightSchedule {
            one_year_alpha: self.balance.one_year_alpha,
            ..WeightSchedule::default()
        }
    }

    pub fn balance_config(&self) -> BalanceConfig {
        BalanceConfig {
            reg_cap: self.balance.reg_cap,
            liability_floor: self.balance.liability_floor,
            weights: self.weights(),
        }
    }

    pub fn funding_quotes(&self) -> Result<Vec<FundingQuote>> {
        let weights = self.weights();
        self.quotes
            .iter()
            .enumerate()
            .map(|(i, q)| {
                let field = |name: &str| format!("quotes[{i}].{name}");
                let tenor = Tenor(q.tenor_months);
                let alpha = match q.alpha {
                    Some(a) => a,
                    None => weights
                        .debt_alpha(tenor)
                        .map_err(|e| Error::config(field("tenor_months"), e.to_string()))?,
                };
                let quote = FundingQuote {
                    tenor,
                    spread: q.spread,
                    shortfall_spread: q.shortfall_spread.unwrap_or(q.spread),
                    alpha,
                };
                quote
                    .validate()
                    .map_err(|e| Error::config(field("spread"), e.to_string()))?;
                Ok(quote)
            })
            .collect()
    }

    /// The quote selected by `price.quote_months`.
    pub fn price_quote(&self) -> Result<FundingQuote> {
        let quotes = self.funding_quotes()?;
        quotes
            .into_iter()
            .find(|q| q.tenor.months() == self.price.quote_months)
            .ok_or_else(|| {
                Error::config(
                    "price.quote_months",
                    format!("no quote with tenor_months = {}", self.price.quote_months),
                )
            })
    }

    pub fn pricing_config(&self) -> Result<PricingConfig> {
        Ok(PricingConfig {
            rates: self.rates.params(),
            n_paths: self.rates.n_paths,
            seed: self.rates.seed,
            steps_per_year: self.rates.steps_per_year,
            swap: self.swap.spec(),
            im_fraction: self.swap.im_fraction,
            balance: self.balance_config(),
            quote: self.price_quote()?,
        })
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |field: &str, reason: String| Err(Error::config(field, reason));
        if self.schema_version != SCHEMA_VERSION {
            return bad(
                "schema_version",
                format!("unsupported version {}, expected {SCHEMA_VERSION}", self.schema_version),
            );
        }

        let r = &self.rates;
        for (name, v) in [
            ("rates.r0", r.r0),
            ("rates.mean_reversion", r.mean_reversion),
            ("rates.volatility", r.volatility),
            ("rates.long_run_mean", r.long_run_mean.unwrap_or(0.0)),
        ] {
            if !v.is_finite() {
                return bad(name, "must be finite".into());
            }
        }
        if r.mean_reversion < 0.0 {
            return bad("rates.mean_reversion", format!("must be >= 0, got {}", r.mean_reversion));
        }
        if r.volatility < 0.0 {
            return bad("rates.volatility", format!("must be >= 0, got {}", r.volatility));
        }
        if r.n_paths == 0 {
            return bad("rates.n_paths", "must be at least 1".into());
        }

        let s = &self.swap;
        if !(s.notional > 0.0) || !s.notional.is_finite() {
            return bad("swap.notional", format!("must be positive, got {}", s.notional));
        }
        if !(s.maturity > 0.0) || !s.maturity.is_finite() {
            return bad("swap.maturity", format!("must be positive, got {}", s.maturity));
        }
        if !s.fixed_rate.is_finite() {
            return bad("swap.fixed_rate", "must be finite".into());
        }
        if s.payment_frequency == 0 || 12 % s.payment_frequency != 0 {
            return bad(
                "swap.payment_frequency",
                format!("must divide 12, got {}", s.payment_frequency),
            );
        }
        if r.steps_per_year == 0 || !r.steps_per_year.is_multiple_of(s.payment_frequency) {
            return bad(
                "rates.steps_per_year",
                format!(
                    "must be a positive multiple of swap.payment_frequency ({}), got {}",
                    s.payment_frequency, r.steps_per_year
                ),
            );
        }
        let periods = s.maturity * f64::from(s.payment_frequency);
        if (periods - periods.round()).abs() > 1e-9 {
            return bad("swap.maturity", "must be a whole number of payment periods".into());
        }
        if !(s.im_fraction >= 0.0) {
            return bad("swap.im_fraction", format!("must be >= 0, got {}", s.im_fraction));
        }

        let b = &self.balance;
        if !(b.reg_cap >= 0.0) || !b.reg_cap.is_finite() {
            return bad("balance.reg_cap", format!("must be >= 0, got {}", b.reg_cap));
        }
        if !(b.liability_floor >= 0.0) || !b.liability_floor.is_finite() {
            return bad("balance.liability_floor", format!("must be >= 0, got {}", b.liability_floor));
        }
        if !is_alpha(b.one_year_alpha) {
            return bad(
                "balance.one_year_alpha",
                format!("must be 0.5 or 1.0, got {}", b.one_year_alpha),
            );
        }

        let period_months = 12 / s.payment_frequency;
        for (i, q) in self.quotes.iter().enumerate() {
            let field = |name: &str| format!("quotes[{i}].{name}");
            if q.tenor_months == 0 || q.tenor_months % period_months != 0 {
                return bad(
                    &field("tenor_months"),
                    format!(
                        "must be a positive multiple of the {period_months}-month payment period, got {}",
                        q.tenor_months
                    ),
                );
            }
            if !(q.spread >= 0.0) || !q.spread.is_finite() {
                return bad(&field("spread"), format!("must be >= 0, got {}", q.spread));
            }
            if let Some(x) = q.shortfall_spread {
                if !(x >= 0.0) || !x.is_finite() {
                    return bad(&field("shortfall_spread"), format!("must be >= 0, got {x}"));
                }
            }
            if let Some(a) = q.alpha {
                if !is_alpha(a) {
                    return bad(&field("alpha"), format!("must be 0.5 or 1.0, got {a}"));
                }
            }
        }
        self.funding_quotes()?;

        if let Some(x) = self.sweep_spread.spreads.iter().find(|x| !(**x >= 0.0)) {
            return bad("sweep_spread.spreads", format!("spreads must be >= 0, got {x}"));
        }
        if !(self.sweep_spread.alpha_switch_spread >= 0.0) {
            return bad("sweep_spread.alpha_switch_spread", "must be >= 0".into());
        }
        if let Some(x) = self.sweep_ois.levels.iter().find(|x| !x.is_finite()) {
            return bad("sweep_ois.levels", format!("levels must be finite, got {x}"));
        }
        self.histogram
            .validate()
            .map_err(|e| Error::config("histogram", e.to_string()))?;

        match self.mode {
            Mode::Price | Mode::SweepOis | Mode::NsfrProfile => {
                self.price_quote()?;
            }
            Mode::Optimize => {
                if self.quotes.is_empty() {
                    return bad("quotes", "optimize mode needs at least one quote".into());
                }
                self.price_quote()?;
            }
            Mode::SweepSpread => {}
        }
        match self.mode {
            Mode::SweepOis if self.sweep_ois.levels.is_empty() => {
                bad("sweep_ois.levels", "sweep_ois mode needs at least one level".into())
            }
            Mode::SweepSpread if self.sweep_spread.spreads.is_empty() => {
                bad("sweep_spread.spreads", "sweep_spread mode needs at least one spread".into())
            }
            _ => Ok(()),
        }
    }
}
