//! Aggregation of report directories.

use std::path::{Path, PathBuf};

use crouzeix_core::report::{ExperimentReport, Outcome, SCHEMA_VERSION};
use crouzeix_core::{Error, Result};
use serde::Serialize;
use serde_json::Value;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Row {
    pub experiment: String,
    pub reports: usize,
    pub pass: usize,
    pub fail: usize,
    /// Reports whose hypothesis did not apply (vacuous, hypothesis-violated, contrapositive).
    pub other: usize,
    pub margin_min: Option<f64>,
    pub margin_median: Option<f64>,
    pub margin_max: Option<f64>,
}

fn median(sorted: &[f64]) -> Option<f64> {
    let n = sorted.len();
    match n {
        0 => None,
        _ if n % 2 == 1 => Some(sorted[n / 2]),
        _ => Some(0.5 * (sorted[n / 2 - 1] + sorted[n / 2])),
    }
}

/// One row per experiment, sorted by name; margins over checked reports only.
pub fn aggregate(reports: &[ExperimentReport]) -> Vec<Row> {
    let mut sorted: Vec<&ExperimentReport> = reports.iter().collect();
    sorted.sort_by(|a, b| (&a.experiment, a.seed).cmp(&(&b.experiment, b.seed)));
    let mut rows: Vec<Row> = Vec::new();
    for group in sorted.chunk_by(|a, b| a.experiment == b.experiment) {
        let checked: Vec<&&ExperimentReport> = group
            .iter()
            .filter(|r| matches!(r.outcome, Outcome::Pass | Outcome::Fail))
            .collect();
        let mut margins: Vec<f64> = checked.iter().map(|r| r.margin).collect();
        margins.sort_by(f64::total_cmp);
        rows.push(Row {
            experiment: group[0].experiment.clone(),
            reports: group.len(),
            pass: group.iter().filter(|r| r.pass).count(),
            fail: group.iter().filter(|r| !r.pass).count(),
            other: group.len() - checked.len(),
            margin_min: margins.first().copied(),
            margin_median: median(&margins),
            margin_max: margins.last().copied(),
        });
    }
    rows
}

fn collect_json(dir: &Path, out: &mut Vec<PathBuf>) -> Result<()> {
    let mut entries: Vec<PathBuf> = std::fs::read_dir(dir)?.map(|e| e.map(|e| e.path())).collect::<std::io::Result<_>>()?;
    entries.sort();
    for p in entries {
        if p.is_dir() {
            collect_json(&p, out)?;
        } else if p.extension().is_some_and(|e| e == "json") {
            out.push(p);
        }
    }
    Ok(())
}

/// Every report under `dir`; other JSON files (manifests, matrices) are skipped.
pub fn load_reports(dir: &Path) -> Result<Vec<ExperimentReport>> {
    if !dir.is_dir() {
        return Err(Error::Input(format!("{} is not a directory", dir.display())));
    }
    let mut files = Vec::new();
    collect_json(dir, &mut files)?;
    let mut reports = Vec::new();
    for f in files {
        let text = std::fs::read_to_string(&f)?;
        let Ok(v) = serde_json::from_str::<Value>(&text) else {
            continue;
        };
        if v.get("experiment").is_none() || v.get("schema").is_none() {
            continue;
        }
        let schema = v["schema"].as_u64();
        if schema != Some(SCHEMA_VERSION as u64) {
            return Err(Error::Input(format!(
                "{}: report schema {} differs from supported version {SCHEMA_VERSION}",
                f.display(),
                v["schema"]
            )));
        }
        reports.push(ExperimentReport::from_json(&text).map_err(|e| Error::Input(format!("{}: {e}", f.display())))?);
    }
    Ok(reports)
}

pub fn write_csv(rows: &[Row], path: &Path) -> Result<()> {
    let mut w = csv::Writer::from_path(path).map_err(|e| Error::Input(format!("{}: {e}", path.display())))?;
    if rows.is_empty() {
        w.write_record(["experiment", "reports", "pass", "fail", "other", "margin_min", "margin_median", "margin_max"])
            .map_err(|e| Error::Input(e.to_string()))?;
    }
    for r in rows {
        w.serialize(r).map_err(|e| Error::Input(e.to_string()))?;
    }
    w.flush()?;
    Ok(())
}

pub fn table(rows: &[Row]) -> String {
    let f = |x: Option<f64>| x.map(|v| format!("{v:.3e}")).unwrap_or_else(|| "-".into());
    let mut s = format!(
        "{:<12} {:>7} {:>9} {:>5} {:>6} {:>11} {:>11} {:>11}\n",
        "experiment", "reports", "pass", "fail", "other", "min", "median", "max"
    );
    for r in rows {
        s.push_str(&format!(
            "{:<12} {:>7} {:>9} {:>5} {:>6} {:>11} {:>11} {:>11}\n",
            r.experiment,
            r.reports,
            format!("{}/{}", r.pass, r.reports),
            r.fail,
            r.other,
            f(r.margin_min),
            f(r.margin_median),
            f(r.margin_max)
        ));
    }
    s
}
