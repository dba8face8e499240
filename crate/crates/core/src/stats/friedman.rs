use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FriedmanStatistic {
    pub chi_f: f64,
    pub tau_f: f64,
}

/// Modified (Iman–Davenport) Friedman statistic from average ranks over `m`
/// problems and `k` algorithms.
pub fn friedman_modified(avg_ranks: &[f64], m: usize, k: usize) -> Result<FriedmanStatistic> {
    if m < 2 || k < 2 {
        return Err(Error::invalid(format!("Friedman test needs m >= 2 and k >= 2, got m={m}, k={k}")));
    }
    if avg_ranks.len() != k {
        return Err(Error::invalid(format!("{} average ranks for k={k}", avg_ranks.len())));
    }
    let (mf, kf) = (m as f64, k as f64);
    let sum_sq: f64 = avg_ranks.iter().map(|r| r * r).sum();
    let chi_f = 12.0 * mf / (kf * (kf + 1.0)) * (sum_sq - kf * (kf + 1.0).powi(2) / 4.0);
    let denom = mf * (kf - 1.0) - chi_f;
    if denom.abs() < 1e-12 {
        return Err(Error::DegenerateStatistic(format!(
            "m(k-1) equals chi_F^2 = {chi_f}: every problem ranks the algorithms identically"
        )));
    }
    Ok(FriedmanStatistic {
        chi_f,
        tau_f: (mf - 1.0) * chi_f / denom,
    })
}

/// Two-tailed Nemenyi `q` values at alpha = 0.05 for k = 2..=10.
pub const NEMENYI_Q_005: [f64; 9] = [1.960, 2.343, 2.569, 2.728, 2.850, 2.949, 3.031, 3.102, 3.164];

pub fn nemenyi_q(k: usize, alpha: f64) -> Result<f64> {
    if (alpha - 0.05).abs() > 1e-12 || !(2..=10).contains(&k) {
        return Err(Error::invalid(format!(
            "Nemenyi q is tabulated only for alpha=0.05 and k in 2..=10 (got alpha={alpha}, k={k})"
        )));
    }
    Ok(NEMENYI_Q_005[k - 2])
}

/// `CD = q_alpha * sqrt(k(k+1) / (6m))`.
pub fn nemenyi_cd(k: usize, m: usize, alpha: f64) -> Result<f64> {
    if m == 0 {
        return Err(Error::invalid("Nemenyi CD needs m >= 1"));
    }
    let q = nemenyi_q(k, alpha)?;
    Ok(q * ((k * (k + 1)) as f64 / (6.0 * m as f64)).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn friedman_examples() {
        let s = friedman_modified(&[1.60, 1.40], 15, 2).unwrap();
        assert!((s.chi_f - 0.600).abs() < 1e-9);
        assert!((s.tau_f - 0.583).abs() < 1e-3);
        let z = friedman_modified(&[1.5, 1.5], 7, 2).unwrap();
        assert_eq!((z.chi_f, z.tau_f), (0.0, 0.0));
        let s = friedman_modified(&[1.9333, 1.0667], 15, 2).unwrap();
        assert!((s.tau_f - 42.24).abs() < 0.05);
        let exact = friedman_modified(&[29.0 / 15.0, 16.0 / 15.0], 15, 2).unwrap();
        assert!((exact.tau_f - 42.25).abs() < 1e-9);
    }

    #[test]
    fn friedman_degenerate_and_invalid() {
        assert!(matches!(
            friedman_modified(&[2.0, 1.0], 10, 2),
            Err(Error::DegenerateStatistic(_))
        ));
        assert!(friedman_modified(&[1.5, 1.5], 1, 2).is_err());
        assert!(friedman_modified(&[1.0, 2.0, 3.0], 5, 2).is_err());
    }

    #[test]
    fn nemenyi_examples() {
        assert!((nemenyi_cd(5, 15, 0.05).unwrap() - 1.575).abs() < 1e-2);
        assert!((nemenyi_cd(5, 19, 0.05).unwrap() - 1.399).abs() < 1e-2);
        assert!((nemenyi_cd(5, 10, 0.05).unwrap() - 1.929).abs() < 1e-2);
        assert!(nemenyi_cd(11, 10, 0.05).is_err());
        assert!(nemenyi_cd(5, 10, 0.1).is_err());
    }
}
