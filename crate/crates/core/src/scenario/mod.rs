//! Config-file driven experiments: load a TOML scenario, run one mode, and
//! write the report as text, CSV or JSON.

mod config;
mod emit;
mod run;

pub use config::{
    BalanceSection, Mode, PriceSection, QuoteConfig, RatesConfig, ScenarioConfig, SwapConfig,
    SweepOisSection, SweepSpreadSection, SCHEMA_VERSION,
};
pub use emit::{emit, render_csv, render_json, render_text, Format};
pub use run::{
    run, spread_quote, FixedPolicyRow, NsfrProfileReport, OisRow, OptimizeReport, PolicyStep,
    PriceReport, RunReport, RunResults, SpreadRow,
};
