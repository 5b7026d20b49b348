use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fva::FvaResult;

use super::run::{RunReport, RunResults};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
#[cfg_attr(feature = "cli", derive(clap::ValueEnum))]
pub enum Format {
    #[default]
    Text,
    Csv,
    Json,
}

pub fn render_json(report: &RunReport) -> Result<String> {
    let mut s = serde_json::to_string_pretty(report).map_err(|e| Error::Serialize(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

fn millions(x: f64) -> f64 {
    x / 1e6
}

fn fva_header(out: &mut String) {
    let _ = writeln!(
        out,
        "{:>12} {:>12} {:>12} {:>12} {:>12} {:>12}",
        "fva1", "fva2", "fva_total", "se_total", "fca", "se_fca"
    );
}

fn fva_line(out: &mut String, f: &FvaResult) {
    let _ = writeln!(
        out,
        "{:>12.6} {:>12.6} {:>12.6} {:>12.6} {:>12.6} {:>12.6}",
        millions(f.fva1),
        millions(f.fva2),
        millions(f.fva_total),
        millions(f.std_error.fva_total),
        millions(f.fca_baseline),
        millions(f.std_error.fca),
    );
}

/// Human-readable summary. Money is in millions of the notional currency.
pub fn render_text(report: &RunReport) -> String {
    let c = &report.config;
    let mut out = String::new();
    let _ = writeln!(
        out,
        "paths {}  seed {}  r0 {}  a {}  sigma {}  notional {}",
        c.rates.n_paths, c.rates.seed, c.rates.r0, c.rates.mean_reversion, c.rates.volatility, c.swap.notional
    );
    match &report.results {
        RunResults::Price(p) => {
            let _ = writeln!(
                out,
                "quote {} spread {} alpha {}  (millions)",
                p.quote.tenor, p.quote.spread, p.quote.alpha
            );
            fva_header(&mut out);
            fva_line(&mut out, &p.fva);
        }
        RunResults::SweepOis { rows } => {
            let _ = writeln!(out, "OIS sweep (millions)");
            let _ = write!(out, "{:>8} ", "r0");
            fva_header(&mut out);
            for row in rows {
                let _ = write!(out, "{:>8.4} ", row.r0);
                fva_line(&mut out, &row.fva);
            }
        }
        RunResults::SweepSpread { rows } => {
            let _ = writeln!(out, "spread sweep (millions)");
            let _ = write!(out, "{:>8} {:>5} ", "spread", "alpha");
            fva_header(&mut out);
            for row in rows {
                let _ = write!(out, "{:>8.4} {:>5.1} ", row.spread, row.alpha);
                fva_line(&mut out, &row.fva);
            }
        }
        RunResults::NsfrProfile(p) => {
            let _ = writeln!(out, "NSFR profile, pinned at alpha {}  (debt in millions)", p.alpha);
            let _ = writeln!(
                out,
                "{:>8} {:>10} {:>10} {:>12} {:>12}",
                "t", "nsfr_std", "nsfr_pin", "debt_std", "debt_pin"
            );
            for k in 0..p.times.len() {
                let _ = writeln!(
                    out,
                    "{:>8.4} {:>10.4} {:>10.4} {:>12.6} {:>12.6}",
                    p.times[k],
                    p.standard_nsfr[k].mean,
                    p.pinned_nsfr[k].mean,
                    millions(p.standard_debt[k].mean),
                    millions(p.pinned_debt[k].mean),
                );
            }
        }
        RunResults::Optimize(o) => {
            let _ = writeln!(out, "optimal funding policy (millions)");
            let _ = writeln!(out, "{:>5} {:>8} {:>6} {:>12} {:>12}", "node", "t", "tenor", "arc_cost", "se");
            for s in &o.policy {
                let _ = writeln!(
                    out,
                    "{:>5} {:>8.4} {:>6} {:>12.6} {:>12.6}",
                    s.node,
                    s.time,
                    s.tenor.to_string(),
                    millions(s.cost.mean),
                    millions(s.cost.std_error)
                );
            }
            let _ = writeln!(
                out,
                "optimal {:.6} (se {:.6})",
                millions(o.optimal_cost.mean),
                millions(o.optimal_cost.std_error)
            );
            for row in &o.fixed_policies {
                let _ = writeln!(
                    out,
                    "fixed {:>4} {:.6} (se {:.6})",
                    row.tenor.to_string(),
                    millions(row.cost.mean),
                    millions(row.cost.std_error)
                );
            }
            let _ = writeln!(out, "fca {:.6} (se {:.6})", millions(o.fca.mean), millions(o.fca.std_error));
        }
    }
    out
}

fn fva_fields(f: &FvaResult) -> Vec<String> {
    [
        f.fva1,
        f.fva2,
        f.fva_total,
        f.fca_baseline,
        f.std_error.fva1,
        f.std_error.fva2,
        f.std_error.fva_total,
        f.std_error.fca,
    ]
    .iter()
    .map(f64::to_string)
    .collect()
}

const FVA_COLUMNS: [&str; 8] = [
    "fva1", "fva2", "fva_total", "fca", "se_fva1", "se_fva2", "se_fva_total", "se_fca",
];

struct Table {
    name: &'static str,
    writer: csv::Writer<Vec<u8>>,
}

impl Table {
    fn new<I, S>(name: &'static str, header: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<[u8]>,
    {
        let mut writer = csv::Writer::from_writer(Vec::new());
        writer.write_record(header)?;
        Ok(Self { name, writer })
    }

    fn row<I, S>(&mut self, fields: I) -> Result<()>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<[u8]>,
    {
        Ok(self.writer.write_record(fields)?)
    }

    fn finish(self) -> Result<(String, String)> {
        let bytes = self
            .writer
            .into_inner()
            .map_err(|e| Error::Serialize(e.to_string()))?;
        let text = String::from_utf8(bytes).map_err(|e| Error::Serialize(e.to_string()))?;
        Ok((format!("{}.csv", self.name), text))
    }
}

/// CSV tables as `(file name, contents)`, each with a header row.
pub fn render_csv(report: &RunReport) -> Result<Vec<(String, String)>> {
    let mut tables = Vec::new();
    match &report.results {
        RunResults::Price(p) => {
            let mut t = Table::new("price", ["tenor", "spread", "alpha"].into_iter().chain(FVA_COLUMNS))?;
            let mut fields = vec![p.quote.tenor.to_string(), p.quote.spread.to_string(), p.quote.alpha.to_string()];
            fields.extend(fva_fields(&p.fva));
            t.row(fields)?;
            tables.push(t.finish()?);
        }
        RunResults::SweepOis { rows } => {
            let mut t = Table::new("sweep_ois", ["r0"].into_iter().chain(FVA_COLUMNS))?;
            for row in rows {
                let mut fields = vec![row.r0.to_string()];
                fields.extend(fva_fields(&row.fva));
                t.row(fields)?;
            }
            tables.push(t.finish()?);
        }
        RunResults::SweepSpread { rows } => {
            let mut t = Table::new("sweep_spread", ["spread", "alpha"].into_iter().chain(FVA_COLUMNS))?;
            for row in rows {
                let mut fields = vec![row.spread.to_string(), row.alpha.to_string()];
                fields.extend(fva_fields(&row.fva));
                t.row(fields)?;
            }
            tables.push(t.finish()?);
        }
        RunResults::NsfrProfile(p) => {
            let mut t = Table::new(
                "nsfr_profile",
                [
                    "time", "nsfr_standard", "se_nsfr_standard", "nsfr_pinned", "se_nsfr_pinned",
                    "debt_standard", "se_debt_standard", "debt_pinned", "se_debt_pinned",
                ],
            )?;
            for k in 0..p.times.len() {
                t.row(
                    [
                        p.times[k],
                        p.standard_nsfr[k].mean,
                        p.standard_nsfr[k].std_error,
                        p.pinned_nsfr[k].mean,
                        p.pinned_nsfr[k].std_error,
                        p.standard_debt[k].mean,
                        p.standard_debt[k].std_error,
                        p.pinned_debt[k].mean,
                        p.pinned_debt[k].std_error,
                    ]
                    .map(|x| x.to_string()),
                )?;
            }
            tables.push(t.finish()?);

            // bucket == buckets is the overflow bucket
            let mut h = Table::new("nsfr_histogram", ["time", "bucket", "count"])?;
            for (k, counts) in p.histogram.counts.iter().enumerate() {
                for (b, n) in counts.iter().enumerate() {
                    h.row([p.times[k].to_string(), b.to_string(), n.to_string()])?;
                }
            }
            tables.push(h.finish()?);
        }
        RunResults::Optimize(o) => {
            let mut t = Table::new("optimize_policy", ["node", "time", "tenor", "to", "cost", "se_cost"])?;
            for s in &o.policy {
                t.row([
                    s.node.to_string(),
                    s.time.to_string(),
                    s.tenor.to_string(),
                    s.to.to_string(),
                    s.cost.mean.to_string(),
                    s.cost.std_error.to_string(),
                ])?;
            }
            tables.push(t.finish()?);

            let mut t = Table::new("optimize_summary", ["policy", "cost", "se_cost"])?;
            t.row(["optimal".to_string(), o.optimal_cost.mean.to_string(), o.optimal_cost.std_error.to_string()])?;
            for row in &o.fixed_policies {
                t.row([
                    format!("fixed_{}", row.tenor),
                    row.cost.mean.to_string(),
                    row.cost.std_error.to_string(),
                ])?;
            }
            t.row(["fca".to_string(), o.fca.mean.to_string(), o.fca.std_error.to_string()])?;
            tables.push(t.finish()?);
        }
    }
    Ok(tables)
}

/// Write the report in `format` plus the config echo `config.toml` into
/// `dir`, returning the files written.
pub fn emit(report: &RunReport, format: Format, dir: &Path) -> Result<Vec<PathBuf>> {
    std::fs::create_dir_all(dir)?;
    let mut files = vec![("config.toml".to_string(), report.config.to_toml_string()?)];
    match format {
        Format::Text => files.push(("report.txt".into(), render_text(report))),
        Format::Json => files.push(("report.json".into(), render_json(report)?)),
        Format::Csv => files.extend(render_csv(report)?),
    }
    files
        .into_iter()
        .map(|(name, contents)| {
            let path = dir.join(name);
            std::fs::write(&path, contents)?;
            Ok(path)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scenario::{run, Mode, ScenarioConfig};

    fn report(mode: Mode) -> RunReport {
        let mut c = ScenarioConfig::default();
        c.mode = mode;
        c.rates.n_paths = 32;
        run(&c).unwrap()
    }

    #[test]
    fn histogram_csv_shape() {
        let r = report(Mode::NsfrProfile);
        let tables = render_csv(&r).unwrap();
        let (name, text) = &tables[1];
        assert_eq!(name, "nsfr_histogram.csv");
        let steps = 61;
        let buckets = r.config.histogram.buckets + 1;
        assert_eq!(text.lines().count(), 1 + steps * buckets);
        assert_eq!(text.lines().next().unwrap(), "time,bucket,count");
    }

    #[test]
    fn json_round_trips() {
        for mode in [Mode::Price, Mode::Optimize] {
            let r = report(mode);
            let text = render_json(&r).unwrap();
            let back: RunReport = serde_json::from_str(&text).unwrap();
            assert_eq!(back, r);
        }
    }

    #[test]
    fn emit_writes_config_echo() {
        let dir = tempfile::tempdir().unwrap();
        let r = report(Mode::SweepSpread);
        let files = emit(&r, Format::Csv, dir.path()).unwrap();
        assert_eq!(files.len(), 2);
        let echoed = ScenarioConfig::load(dir.path().join("config.toml")).unwrap();
        assert_eq!(echoed, r.config);
        let rows = std::fs::read_to_string(dir.path().join("sweep_spread.csv")).unwrap();
        assert_eq!(rows.lines().count(), 1 + r.config.sweep_spread.spreads.len());
    }

    #[test]
    fn text_mentions_every_fixed_policy() {
        let text = render_text(&report(Mode::Optimize));
        assert!(text.contains("fixed   6m"));
        assert!(text.contains("fixed   2y"));
    }
}
