//! Writes a finished run to `OUT/<experiment>/`.

use std::path::{Path, PathBuf};

use crouzeix_core::report::{digest, ExperimentReport};
use crouzeix_core::Result;
use rayon::prelude::*;
use serde_json::json;

use crate::config::RunConfig;
use crate::experiments::SeedRun;
use crate::plot;
use crate::summary::{aggregate, table, write_csv};

pub fn experiment_dir(cfg: &RunConfig) -> PathBuf {
    cfg.out.join(cfg.experiment.name())
}

/// Reports first, then pair files and plots, then the summary and manifest.
/// Returns the summary table.
pub fn write_run(cfg: &RunConfig, runs: &[SeedRun], stamp: &str, errors: &[(u64, String)]) -> Result<String> {
    let dir = experiment_dir(cfg);
    std::fs::create_dir_all(&dir)?;
    let mut files = Vec::new();
    for run in runs {
        let name = format!("{stamp}-{}.json", run.report.seed);
        std::fs::write(dir.join(&name), run.report.to_json())?;
        files.push(json!({
            "file": name,
            "seed": run.report.seed,
            "pass": run.report.pass,
            "runtime_ms": run.report.runtime_ms,
        }));
    }
    for run in runs {
        if let Some(pair) = &run.pair {
            pair.write(&dir, &format!("{stamp}-{}.pair", run.report.seed))?;
        }
    }
    if cfg.plots {
        runs.par_iter()
            .filter_map(|run| run.plot.as_ref().map(|(t, d)| (run, t, d)))
            .map(|(run, t, d)| {
                let svg = plot::render(&run.report, t, d)?;
                std::fs::write(dir.join(format!("{stamp}-{}.svg", run.report.seed)), svg)?;
                Ok(())
            })
            .collect::<Result<Vec<()>>>()?;
    }
    let reports: Vec<ExperimentReport> = runs.iter().map(|r| r.report.clone()).collect();
    let rows = aggregate(&reports);
    write_csv(&rows, &dir.join("summary.csv"))?;
    write_manifest(cfg, &dir, stamp, files, errors)?;
    Ok(table(&rows))
}

fn write_manifest(
    cfg: &RunConfig,
    dir: &Path,
    stamp: &str,
    files: Vec<serde_json::Value>,
    errors: &[(u64, String)],
) -> Result<()> {
    let config = serde_json::to_value(cfg)?;
    let manifest = json!({
        "tool": env!("CARGO_PKG_NAME"),
        "version": env!("CARGO_PKG_VERSION"),
        "experiment": cfg.experiment.name(),
        "started": stamp,
        "config_digest": digest(&config),
        "config": config,
        "reports": files,
        "errors": errors.iter().map(|(s, e)| json!({"seed": s, "error": e})).collect::<Vec<_>>(),
    });
    std::fs::write(dir.join("manifest.json"), serde_json::to_string_pretty(&manifest)?)?;
    Ok(())
}
