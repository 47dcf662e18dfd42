use std::fs::File;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};
use rayon::prelude::*;

use stsmc::harness::metrics::Metrics;
use stsmc::harness::{run_scenario, ControllerKind, HarnessConfig, Trace, CATALOG};

#[derive(Parser)]
#[command(version, about = "Buck-converter sliding-mode experiment runner")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run catalog scenarios and write one CSV trace per run plus metrics.csv.
    Run {
        /// Scenario name, or `all`.
        #[arg(long, default_value = "all")]
        scenario: String,
        /// proposed, fosmflc, classical_smc, or `all`.
        #[arg(long, default_value = "proposed")]
        controller: String,
        /// TOML config; the built-in default when omitted.
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        out: PathBuf,
    },
    /// List the built-in scenarios.
    ListScenarios,
    /// Recompute metrics from a trace CSV.
    Metrics {
        #[arg(long)]
        trace: PathBuf,
    },
    /// Print the built-in default config.
    DefaultConfig,
}

fn main() {
    if let Err(err) = run(Cli::parse()) {
        eprintln!("error: {err:#}");
        std::process::exit(1);
    }
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Run {
            scenario,
            controller,
            config,
            out,
        } => run_catalog(&scenario, &controller, config.as_deref(), &out),
        Command::ListScenarios => {
            for entry in CATALOG {
                println!("{:<16} {}", entry.name, entry.description);
            }
            Ok(())
        }
        Command::Metrics { trace } => {
            let tr = Trace::read_csv(&trace)?;
            let reference = tr.reference().context("empty trace")?;
            let metrics = Metrics::from_trace(&tr, reference, tr.first_disturbance());
            let stdout = io::stdout();
            let mut out = stdout.lock();
            writeln!(out, "{}", Metrics::COLUMNS.join(","))?;
            writeln!(out, "{}", metrics.csv_fields().join(","))?;
            Ok(())
        }
        Command::DefaultConfig => {
            print!("{}", stsmc::harness::config::DEFAULT_CONFIG);
            Ok(())
        }
    }
}

fn run_catalog(scenario: &str, controller: &str, config: Option<&Path>, out: &Path) -> Result<()> {
    let cfg = match config {
        Some(path) => HarnessConfig::load(path)?,
        None => HarnessConfig::default(),
    };
    let scenarios: Vec<&str> = if scenario == "all" {
        CATALOG.iter().map(|e| e.name).collect()
    } else {
        vec![scenario]
    };
    let controllers: Vec<ControllerKind> = if controller == "all" {
        ControllerKind::ALL.to_vec()
    } else {
        vec![controller.parse()?]
    };
    if out.as_os_str().is_empty() {
        bail!("--out must name a directory");
    }
    std::fs::create_dir_all(out).with_context(|| format!("creating {}", out.display()))?;

    let mut jobs = Vec::new();
    for name in &scenarios {
        for &kind in &controllers {
            jobs.push(cfg.scenario(name, kind)?);
        }
    }

    let results: Vec<(String, ControllerKind, Metrics)> = jobs
        .par_iter()
        .map(|sc| -> Result<_> {
            let trace = run_scenario(sc)
                .with_context(|| format!("scenario {} / {}", sc.name, sc.controller.kind()))?;
            let path = out.join(format!("{}_{}.csv", sc.name, sc.controller.kind()));
            trace.write_csv(&path)?;
            let metrics = Metrics::from_trace(&trace, sc.vref, sc.event_time());
            Ok((sc.name.clone(), sc.controller.kind(), metrics))
        })
        .collect::<Result<_>>()?;

    let summary = out.join("metrics.csv");
    let mut file =
        File::create(&summary).with_context(|| format!("creating {}", summary.display()))?;
    let header = format!("scenario,controller,{}", Metrics::COLUMNS.join(","));
    writeln!(file, "{header}")?;
    println!("{header}");
    for (name, kind, metrics) in results {
        let line = format!("{name},{kind},{}", metrics.csv_fields().join(","));
        writeln!(file, "{line}")?;
        println!("{line}");
    }
    Ok(())
}
