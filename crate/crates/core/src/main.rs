use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};
use nsfr_fva::scenario::{emit, render_csv, render_json, render_text, run, Format, Mode, ScenarioConfig};

#[derive(Parser)]
#[command(name = "nsfr-fva", version, about = "FVA pricing under an NSFR-pinned balance sheet")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a scenario file.
    Run {
        config: PathBuf,
        /// Override the mode in the file.
        #[arg(long, value_enum)]
        mode: Option<Mode>,
        #[arg(long)]
        seed: Option<u64>,
        /// Override the number of Monte Carlo paths.
        #[arg(long)]
        paths: Option<usize>,
        /// Write results and the config echo here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
        /// Report timing and written files on stderr.
        #[arg(short, long, action = clap::ArgAction::Count)]
        verbose: u8,
    },
    /// Print the default scenario, or write it to a file.
    Init { path: Option<PathBuf> },
}

fn main() -> ExitCode {
    match execute(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}

fn execute(cli: Cli) -> nsfr_fva::Result<()> {
    match cli.command {
        Command::Init { path } => {
            let text = ScenarioConfig::default().to_toml_string()?;
            match path {
                Some(p) => std::fs::write(p, text)?,
                None => print!("{text}"),
            }
        }
        Command::Run { config, mode, seed, paths, out, format, verbose } => {
            let mut scenario = ScenarioConfig::load(&config)?;
            if let Some(m) = mode {
                scenario.mode = m;
            }
            if let Some(s) = seed {
                scenario.rates.seed = s;
            }
            if let Some(n) = paths {
                scenario.rates.n_paths = n;
            }
            let start = Instant::now();
            let report = run(&scenario)?;
            if verbose > 0 {
                eprintln!("{:?} run on {} paths in {:.3?}", scenario.mode, scenario.rates.n_paths, start.elapsed());
            }
            match out {
                Some(dir) => {
                    for f in emit(&report, format, &dir)? {
                        if verbose > 0 {
                            eprintln!("wrote {}", f.display());
                        }
                    }
                }
                None => match format {
                    Format::Text => print!("{}", render_text(&report)),
                    Format::Json => print!("{}", render_json(&report)?),
                    Format::Csv => {
                        for (name, table) in render_csv(&report)? {
                            println!("# {name}");
                            print!("{table}");
                        }
                    }
                },
            }
        }
    }
    Ok(())
}
