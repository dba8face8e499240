use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::objectives::relative_error;

/// Convergence speed: first 1-based iteration whose relative error is
/// strictly below the tolerance, or `None` (Fail).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceOutcome {
    pub cs: Option<usize>,
    pub tolerance: f64,
}

impl ConvergenceOutcome {
    pub fn is_fail(&self) -> bool {
        self.cs.is_none()
    }
}

pub fn convergence_speed(curve: &[f64], z_star: f64, eps_tol: f64) -> Result<ConvergenceOutcome> {
    if curve.is_empty() {
        return Err(Error::invalid("convergence curve is empty"));
    }
    let mut cs = None;
    for (g, &f) in curve.iter().enumerate() {
        if relative_error(f, z_star)? < eps_tol {
            cs = Some(g + 1);
            break;
        }
    }
    Ok(ConvergenceOutcome { cs, tolerance: eps_tol })
}

fn compare(a: Option<f64>, b: Option<f64>) -> Ordering {
    match (a, b) {
        (Some(x), Some(y)) => x.total_cmp(&y),
        (Some(_), None) => Ordering::Less,
        (None, Some(_)) => Ordering::Greater,
        (None, None) => Ordering::Equal,
    }
}

/// Average ranks (1 = best, lower value is better). `None` is a failure:
/// worse than any value, tied with other failures.
pub fn ranks_with_ties(row: &[Option<f64>]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..row.len()).collect();
    order.sort_by(|&a, &b| compare(row[a], row[b]));
    let mut ranks = vec![0.0; row.len()];
    let mut start = 0;
    while start < order.len() {
        let mut end = start + 1;
        while end < order.len() && compare(row[order[start]], row[order[end]]) == Ordering::Equal {
            end += 1;
        }
        // positions start+1 ..= end share their mean
        let rank = (start + 1 + end) as f64 / 2.0;
        for &idx in &order[start..end] {
            ranks[idx] = rank;
        }
        start = end;
    }
    ranks
}

/// Functions × algorithms table of a lower-is-better metric (CS or time)
/// with per-row ranks and column-average ranks.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankTable {
    pub functions: Vec<String>,
    pub algorithms: Vec<String>,
    /// `None` marks a failure.
    pub metric: Vec<Vec<Option<f64>>>,
    pub ranks: Vec<Vec<f64>>,
    pub avg_ranks: Vec<f64>,
}

impl RankTable {
    pub fn new(functions: Vec<String>, algorithms: Vec<String>, metric: Vec<Vec<Option<f64>>>) -> Result<Self> {
        let k = algorithms.len();
        if metric.is_empty() || k == 0 {
            return Err(Error::invalid("rank table needs at least one function and one algorithm"));
        }
        if functions.len() != metric.len() {
            return Err(Error::invalid(format!(
                "{} function labels for {} rows",
                functions.len(),
                metric.len()
            )));
        }
        if let Some((i, row)) = metric.iter().enumerate().find(|(_, r)| r.len() != k) {
            return Err(Error::invalid(format!("row {i} has {} entries, expected {k}", row.len())));
        }
        let ranks: Vec<Vec<f64>> = metric.iter().map(|r| ranks_with_ties(r)).collect();
        let m = ranks.len() as f64;
        let avg_ranks = (0..k).map(|j| ranks.iter().map(|r| r[j]).sum::<f64>() / m).collect();
        Ok(Self { functions, algorithms, metric, ranks, avg_ranks })
    }

    pub fn m(&self) -> usize {
        self.metric.len()
    }

    pub fn k(&self) -> usize {
        self.algorithms.len()
    }
}
