//! `crouzeix-lab`: batch runner for the functional-calculus experiments.

mod config;
mod experiments;
mod output;
mod plot;
mod spec;
mod summary;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};
use crouzeix_core::{Error, Result};
use rayon::prelude::*;

use config::{Experiment, RunArgs, RunConfig};
use experiments::{run_seed, SeedRun};

const EXIT_FAIL: u8 = 1;
const EXIT_INPUT: u8 = 2;
const EXIT_NUMERICAL: u8 = 3;

#[derive(Parser, Debug)]
#[command(
    name = "crouzeix-lab",
    version,
    about = "Matrix-scale checks of spectral-set inequalities, dilations and cb norms",
    after_help = "Shorthand: `crouzeix-lab <experiment> [flags]` is `crouzeix-lab run --experiment <experiment> [flags]`.\n\
                  Experiments: range, cp-check, basic-bound, xtx, okubo-ando, block-lemma, projection,\n\
                  dilate, cb, singleton, shift-norm, equiv, suite-all.\n\
                  Exit status: 0 all pass, 1 some report fails, 2 input error, 3 numerical error."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run an experiment over a range of seeds.
    Run(RunArgs),
    /// Aggregate the reports under a directory into a table and summary.csv.
    Summary { dir: PathBuf },
}

fn code_for(e: &Error) -> u8 {
    if e.is_input_error() {
        EXIT_INPUT
    } else {
        EXIT_NUMERICAL
    }
}

fn timestamp() -> String {
    chrono::Utc::now().format("%Y%m%dT%H%M%S%.3fZ").to_string()
}

/// Runs every seed; input errors abort before anything is written.
fn execute(cfg: &RunConfig, stamp: &str) -> Result<u8> {
    let results: Vec<(u64, Result<SeedRun>)> = cfg
        .seeds
        .par_iter()
        .map(|&seed| {
            let start = Instant::now();
            let r = run_seed(cfg, seed).map(|mut run| {
                run.report.runtime_ms = start.elapsed().as_secs_f64() * 1e3;
                run
            });
            (seed, r)
        })
        .collect();
    if let Some((seed, Err(e))) = results.iter().find(|(_, r)| matches!(r, Err(e) if e.is_input_error())) {
        eprintln!("{}: seed {seed}: {e}", cfg.experiment.name());
        return Ok(code_for(e));
    }
    let mut runs = Vec::new();
    let mut errors = Vec::new();
    for (seed, r) in results {
        match r {
            Ok(run) => runs.push(run),
            Err(e) => {
                eprintln!("{}: seed {seed}: {e}", cfg.experiment.name());
                errors.push((seed, e.to_string()));
            }
        }
    }
    let table = output::write_run(cfg, &runs, stamp, &errors)?;
    print!("{table}");
    Ok(if !errors.is_empty() {
        EXIT_NUMERICAL
    } else if runs.iter().any(|r| !r.report.pass) {
        EXIT_FAIL
    } else {
        0
    })
}

fn run(args: &RunArgs) -> Result<u8> {
    let cfg = RunConfig::resolve(args)?;
    let stamp = timestamp();
    if cfg.experiment != Experiment::SuiteAll {
        return execute(&cfg, &stamp);
    }
    let mut worst = 0u8;
    for exp in Experiment::SUITE {
        let code = execute(&cfg.for_suite(exp), &stamp)?;
        // input and numerical errors outrank failures
        worst = match (worst, code) {
            (EXIT_INPUT, _) | (_, EXIT_INPUT) => EXIT_INPUT,
            (EXIT_NUMERICAL, _) | (_, EXIT_NUMERICAL) => EXIT_NUMERICAL,
            (a, b) => a.max(b),
        };
    }
    let reports = summary::load_reports(&cfg.out)?;
    let rows = summary::aggregate(&reports);
    summary::write_csv(&rows, &cfg.out.join("summary.csv"))?;
    Ok(worst)
}

fn summarize(dir: &PathBuf) -> Result<u8> {
    let reports = summary::load_reports(dir)?;
    let rows = summary::aggregate(&reports);
    summary::write_csv(&rows, &dir.join("summary.csv"))?;
    print!("{}", summary::table(&rows));
    Ok(0)
}

/// `crouzeix-lab <experiment> ...` becomes `crouzeix-lab run --experiment <experiment> ...`.
fn expand_shorthand(mut argv: Vec<String>) -> Vec<String> {
    if argv.len() > 1 && Experiment::from_name(&argv[1]).is_some() {
        let name = argv.remove(1);
        argv.splice(1..1, ["run".to_string(), "--experiment".to_string(), name]);
    }
    argv
}

fn main() -> ExitCode {
    let cli = Cli::parse_from(expand_shorthand(std::env::args().collect()));
    let result = match &cli.command {
        Command::Run(args) => run(args),
        Command::Summary { dir } => summarize(dir),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(code_for(&e))
        }
    }
}
