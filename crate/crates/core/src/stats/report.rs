use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::{f_critical, friedman_modified, nemenyi_cd, RankTable};
use crate::error::{Error, Result};

/// Friedman/Nemenyi outcome for one rank table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TestReport {
    pub alpha: f64,
    pub m: usize,
    pub k: usize,
    pub chi_f: f64,
    pub tau_f: f64,
    pub tau_critical: f64,
    pub significant: bool,
    /// Absent when the q table does not cover `(k, alpha)`.
    pub cd: Option<f64>,
    pub pairwise_significant: Option<Vec<Vec<bool>>>,
}

pub fn rank_report(table: &RankTable, alpha: f64) -> Result<TestReport> {
    let (m, k) = (table.m(), table.k());
    let stat = friedman_modified(&table.avg_ranks, m, k).map_err(|e| match e {
        Error::DegenerateStatistic(msg) => Error::DegenerateStatistic(format!(
            "{msg} (m={m}, k={k}, average ranks {:?})",
            table.avg_ranks
        )),
        other => other,
    })?;
    let tau_critical = f_critical(alpha, (k - 1) as u32, ((k - 1) * (m - 1)) as u32)?;
    let cd = nemenyi_cd(k, m, alpha).ok();
    let pairwise_significant = cd.map(|cd| {
        (0..k)
            .map(|i| {
                (0..k)
                    .map(|j| i != j && (table.avg_ranks[i] - table.avg_ranks[j]).abs() >= cd)
                    .collect()
            })
            .collect()
    });
    Ok(TestReport {
        alpha,
        m,
        k,
        chi_f: stat.chi_f,
        tau_f: stat.tau_f,
        tau_critical,
        significant: stat.tau_f > tau_critical,
        cd,
        pairwise_significant,
    })
}

fn format_metric(v: Option<f64>) -> String {
    match v {
        None => "-".to_string(),
        Some(x) if x.fract() == 0.0 && x.abs() < 1e15 => format!("{}", x as i64),
        Some(x) => format!("{x:.3}"),
    }
}

fn format_rank(r: f64) -> String {
    if r.fract() == 0.0 {
        format!("{}", r as i64)
    } else {
        format!("{r}")
    }
}

impl RankTable {
    /// Cells as `value(rank)` with `-` for failures.
    pub fn cell(&self, i: usize, j: usize) -> String {
        format!("{}({})", format_metric(self.metric[i][j]), format_rank(self.ranks[i][j]))
    }

    /// Aligned text table with AvgR and optional τ_F footer rows.
    pub fn render_text(&self, report: Option<&TestReport>) -> String {
        let mut rows: Vec<Vec<String>> = Vec::new();
        let mut header = vec!["Function".to_string()];
        header.extend(self.algorithms.iter().cloned());
        rows.push(header);
        for (i, f) in self.functions.iter().enumerate() {
            let mut row = vec![f.clone()];
            row.extend((0..self.k()).map(|j| self.cell(i, j)));
            rows.push(row);
        }
        let mut avg = vec!["AvgR".to_string()];
        avg.extend(self.avg_ranks.iter().map(|r| format!("{r:.2}")));
        rows.push(avg);
        if let Some(rep) = report {
            rows.push(vec!["tau_F".to_string(), format!("{:.3}", rep.tau_f)]);
        }
        let widths: Vec<usize> = (0..rows[0].len())
            .map(|c| rows.iter().filter_map(|r| r.get(c)).map(|s| s.chars().count()).max().unwrap_or(0))
            .collect();
        let mut out = String::new();
        for row in &rows {
            let line: Vec<String> = row.iter().enumerate().map(|(c, s)| format!("{s:<w$}", w = widths[c])).collect();
            let _ = writeln!(out, "{}", line.join("  ").trim_end());
        }
        if let Some(rep) = report {
            let _ = writeln!(
                out,
                "chi_F^2 = {:.3}, tau_c(alpha={}) = {:.3}, significant = {}",
                rep.chi_f, rep.alpha, rep.tau_critical, rep.significant
            );
            if let Some(cd) = rep.cd {
                let _ = writeln!(out, "Nemenyi CD = {cd:.3}");
            }
        }
        out
    }

    /// Comma-separated version of [`RankTable::render_text`].
    pub fn render_csv(&self, report: Option<&TestReport>) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "function,{}", self.algorithms.join(","));
        for (i, f) in self.functions.iter().enumerate() {
            let cells: Vec<String> = (0..self.k()).map(|j| self.cell(i, j)).collect();
            let _ = writeln!(out, "{f},{}", cells.join(","));
        }
        let avg: Vec<String> = self.avg_ranks.iter().map(|r| format!("{r}")).collect();
        let _ = writeln!(out, "AvgR,{}", avg.join(","));
        if let Some(rep) = report {
            let _ = writeln!(out, "tau_F,{}", rep.tau_f);
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_column(pairs: &[(Option<f64>, Option<f64>)]) -> RankTable {
        RankTable::new(
            (0..pairs.len()).map(|i| format!("F{}", i + 1)).collect(),
            vec!["Rand".into(), "HSS".into()],
            pairs.iter().map(|&(a, b)| vec![a, b]).collect(),
        )
        .unwrap()
    }

    #[test]
    fn nonsignificant_two_way() {
        // 6 wins for column 0, 9 for column 1: avg ranks (1.6, 1.4)
        let mut pairs = vec![(Some(1.0), Some(2.0)); 6];
        pairs.extend(vec![(Some(2.0), Some(1.0)); 9]);
        let t = two_column(&pairs);
        assert_eq!(t.avg_ranks, vec![1.6, 1.4]);
        let rep = rank_report(&t, 0.05).unwrap();
        assert!((rep.tau_f - 0.583).abs() < 1e-3);
        assert!((rep.tau_critical - 4.600).abs() < 5e-3);
        assert!(!rep.significant);
    }

    #[test]
    fn significant_two_way() {
        // 14 wins for column 1, one of them against a failure: ranks 29/15, 16/15
        let mut pairs = vec![(Some(2.0), Some(1.0)); 13];
        pairs.push((None, Some(2472.0)));
        pairs.push((Some(1.0), Some(2.0)));
        let t = two_column(&pairs);
        let rep = rank_report(&t, 0.05).unwrap();
        assert!((rep.tau_f - 42.25).abs() < 1e-9);
        assert!(rep.significant);
        let text = t.render_text(Some(&rep));
        assert!(text.contains("-(2)"));
        assert!(text.contains("2472(1)"));
        assert!(text.contains("AvgR"));
        assert!(text.contains("42.250"));
    }

    #[test]
    fn five_way_cd_and_pairs() {
        let metric: Vec<Vec<Option<f64>>> = (0..15)
            .map(|i| (0..5).map(|j| Some(((j * 7 + i * 3) % 11) as f64)).collect())
            .collect();
        let t = RankTable::new((0..15).map(|i| i.to_string()).collect(), (0..5).map(|j| j.to_string()).collect(), metric).unwrap();
        let rep = rank_report(&t, 0.05).unwrap();
        assert!((rep.cd.unwrap() - 1.575).abs() < 1e-2);
        let pairs = rep.pairwise_significant.unwrap();
        for (i, row) in pairs.iter().enumerate() {
            assert!(!row[i]);
            for (j, &cell) in row.iter().enumerate() {
                assert_eq!(cell, pairs[j][i]);
            }
        }
    }

    #[test]
    fn degenerate_has_context() {
        let t = two_column(&[(Some(1.0), Some(2.0)), (Some(1.0), Some(2.0))]);
        let err = rank_report(&t, 0.05).unwrap_err();
        assert!(err.to_string().contains("m=2"));
    }

    #[test]
    fn csv_layout() {
        let t = two_column(&[(Some(1515.0), Some(1281.0))]);
        let csv = t.render_csv(None);
        assert_eq!(csv, "function,Rand,HSS\nF1,1515(2),1281(1)\nAvgR,2,1\n");
    }
}
