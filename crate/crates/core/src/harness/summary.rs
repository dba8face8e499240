use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::experiment::{ResultSet, RunStatus};
use crate::error::{Error, Result};
use crate::stats::{convergence_speed, rank_report, RankTable, TestReport};

pub const SUMMARY_FILE: &str = "summary.json";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CellSummary {
    pub function: String,
    pub algorithm: String,
    pub runs: usize,
    pub failed_runs: usize,
    /// CS of the pointwise mean curve (the headline metric).
    pub mean_curve_cs: Option<usize>,
    /// Mean of per-run CS over the runs that converged.
    pub mean_run_cs: Option<f64>,
    pub converged_runs: usize,
    pub mean_final_fitness: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub tolerance: f64,
    pub table: RankTable,
    pub cells: Vec<CellSummary>,
}

/// Mean curve per cell, CS at `eps_tol`, ranked across algorithms. A cell
/// with any failed run is a Fail entry.
pub fn summarize(results: &ResultSet, eps_tol: f64) -> Result<Summary> {
    let m = &results.manifest;
    if m.functions.is_empty() || m.config.algorithms.is_empty() || m.runs.is_empty() {
        return Err(Error::invalid("result set is empty"));
    }
    let algorithms: Vec<String> = m.config.algorithms.iter().map(|a| a.id.clone()).collect();
    let mut metric = Vec::new();
    let mut cells = Vec::new();
    for f in &m.functions {
        let mut row = Vec::new();
        for a in &algorithms {
            let entries: Vec<_> = m.runs.iter().filter(|r| r.function == f.label && &r.algorithm == a).collect();
            let failed_runs = entries.iter().filter(|r| r.status == RunStatus::Failed).count();
            let curves: Vec<&Vec<f64>> = entries
                .iter()
                .filter_map(|r| results.curves.get(&(r.function.clone(), r.algorithm.clone(), r.run)))
                .collect();
            let mut cell = CellSummary {
                function: f.label.clone(),
                algorithm: a.clone(),
                runs: entries.len(),
                failed_runs,
                mean_curve_cs: None,
                mean_run_cs: None,
                converged_runs: 0,
                mean_final_fitness: None,
            };
            let complete = failed_runs == 0 && !curves.is_empty() && curves.len() == entries.len();
            if complete {
                let len = curves.iter().map(|c| c.len()).min().unwrap_or(0);
                if len < 2 {
                    return Err(Error::invalid(format!("empty curve in cell {}/{a}", f.label)));
                }
                let k = curves.len() as f64;
                let mean: Vec<f64> = (0..len).map(|g| curves.iter().map(|c| c[g]).sum::<f64>() / k).collect();
                // entry 0 is the initialized swarm; CS counts iterations 1..=G
                cell.mean_curve_cs = convergence_speed(&mean[1..], f.z_star, eps_tol)?.cs;
                cell.mean_final_fitness = mean.last().copied();
                let per_run: Vec<usize> = curves
                    .iter()
                    .map(|c| convergence_speed(&c[1..len], f.z_star, eps_tol).map(|o| o.cs))
                    .collect::<Result<Vec<_>>>()?
                    .into_iter()
                    .flatten()
                    .collect();
                cell.converged_runs = per_run.len();
                if !per_run.is_empty() {
                    cell.mean_run_cs = Some(per_run.iter().sum::<usize>() as f64 / per_run.len() as f64);
                }
            }
            row.push(cell.mean_curve_cs.map(|v| v as f64));
            cells.push(cell);
        }
        metric.push(row);
    }
    let functions = m.functions.iter().map(|f| f.label.clone()).collect();
    Ok(Summary {
        tolerance: eps_tol,
        table: RankTable::new(functions, algorithms, metric)?,
        cells,
    })
}

/// One tolerance's summary with its test report, or the reason the test
/// statistic is unavailable.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ToleranceReport {
    pub summary: Summary,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub report: Option<TestReport>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub report_error: Option<String>,
}

impl ToleranceReport {
    pub fn build(results: &ResultSet, eps_tol: f64, alpha: f64) -> Result<Self> {
        let summary = summarize(results, eps_tol)?;
        let (report, report_error) = if summary.table.m() >= 2 && summary.table.k() >= 2 {
            match rank_report(&summary.table, alpha) {
                Ok(r) => (Some(r), None),
                Err(Error::DegenerateStatistic(msg)) => (None, Some(msg)),
                Err(e) => return Err(e),
            }
        } else {
            (None, Some("the test needs at least two functions and two algorithms".into()))
        };
        Ok(ToleranceReport { summary, report, report_error })
    }

    pub fn render_text(&self) -> String {
        let mut out = format!("eps_tol = {}\n", self.summary.tolerance);
        out.push_str(&self.summary.table.render_text(self.report.as_ref()));
        if let Some(e) = &self.report_error {
            out.push_str(&format!("Friedman test unavailable: {e}\n"));
        }
        out
    }
}

pub fn write_summary(path: impl AsRef<Path>, reports: &[ToleranceReport]) -> Result<()> {
    let path = path.as_ref();
    let json = serde_json::to_string_pretty(reports).expect("summary serializes");
    fs::write(path, json + "\n").map_err(|e| Error::io(path, e))
}

pub fn read_summary(path: impl AsRef<Path>) -> Result<Vec<ToleranceReport>> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    serde_json::from_str(&text).map_err(|e| Error::Parse {
        path: path.to_path_buf(),
        message: e.to_string(),
    })
}
