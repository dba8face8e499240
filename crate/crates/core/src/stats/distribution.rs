//! F distribution via the regularized incomplete beta function.

use crate::error::{Error, Result};

const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

/// Natural log of the gamma function for `x > 0` (Lanczos, g = 7).
pub fn ln_gamma(x: f64) -> f64 {
    if x < 0.5 {
        let pi = std::f64::consts::PI;
        return (pi / (pi * x).sin()).ln() - ln_gamma(1.0 - x);
    }
    let x = x - 1.0;
    let t = x + 7.5;
    let mut sum = LANCZOS[0];
    for (k, c) in LANCZOS.iter().enumerate().skip(1) {
        sum += c / (x + k as f64);
    }
    0.5 * (2.0 * std::f64::consts::PI).ln() + (x + 0.5) * t.ln() - t + sum.ln()
}

/// Continued fraction for the incomplete beta (modified Lentz).
fn beta_cf(a: f64, b: f64, x: f64) -> Result<f64> {
    const TINY: f64 = 1e-300;
    let (qab, qap, qam) = (a + b, a + 1.0, a - 1.0);
    let mut c = 1.0;
    let mut d = 1.0 - qab * x / qap;
    if d.abs() < TINY {
        d = TINY;
    }
    d = 1.0 / d;
    let mut h = d;
    for m in 1..=10_000 {
        let m = m as f64;
        let m2 = 2.0 * m;
        let aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if d.abs() < TINY {
            d = TINY;
        }
        c = 1.0 + aa / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        h *= d * c;
        let aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if d.abs() < TINY {
            d = TINY;
        }
        c = 1.0 + aa / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        let del = d * c;
        h *= del;
        if (del - 1.0).abs() < 1e-15 {
            return Ok(h);
        }
    }
    Err(Error::Numeric(format!(
        "incomplete beta continued fraction did not converge (a={a}, b={b}, x={x})"
    )))
}

/// `I_x(a, b)`.
pub fn regularized_beta(x: f64, a: f64, b: f64) -> Result<f64> {
    if !(a > 0.0 && b > 0.0) {
        return Err(Error::invalid(format!("beta parameters must be positive, got a={a}, b={b}")));
    }
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::invalid(format!("incomplete beta argument {x} outside [0, 1]")));
    }
    if x == 0.0 || x == 1.0 {
        return Ok(x);
    }
    let ln_front = ln_gamma(a + b) - ln_gamma(a) - ln_gamma(b) + a * x.ln() + b * (1.0 - x).ln();
    let front = ln_front.exp();
    if x < (a + 1.0) / (a + b + 2.0) {
        Ok(front * beta_cf(a, b, x)? / a)
    } else {
        Ok(1.0 - front * beta_cf(b, a, 1.0 - x)? / b)
    }
}

/// CDF of the F distribution with `(df1, df2)` degrees of freedom.
pub fn f_cdf(f: f64, df1: f64, df2: f64) -> Result<f64> {
    if f <= 0.0 {
        return Ok(0.0);
    }
    regularized_beta(df1 * f / (df1 * f + df2), df1 / 2.0, df2 / 2.0)
}

/// Upper `alpha` critical value of `F(df1, df2)`, by bisection to 1e-6.
pub fn f_critical(alpha: f64, df1: u32, df2: u32) -> Result<f64> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::invalid(format!("alpha must lie in (0, 1), got {alpha}")));
    }
    if df1 == 0 || df2 == 0 {
        return Err(Error::invalid(format!(
            "degrees of freedom must be at least 1, got ({df1}, {df2})"
        )));
    }
    let (d1, d2) = (df1 as f64, df2 as f64);
    let target = 1.0 - alpha;
    let mut lo = 0.0;
    let mut hi = 1.0;
    while f_cdf(hi, d1, d2)? < target {
        lo = hi;
        hi *= 2.0;
        if hi > 1e12 {
            return Err(Error::Numeric(format!(
                "could not bracket the F({df1}, {df2}) quantile at alpha={alpha}"
            )));
        }
    }
    for _ in 0..200 {
        if hi - lo < 1e-9 {
            return Ok(0.5 * (lo + hi));
        }
        let mid = 0.5 * (lo + hi);
        if f_cdf(mid, d1, d2)? < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Err(Error::Numeric(format!(
        "F({df1}, {df2}) quantile bisection stalled in [{lo}, {hi}] at alpha={alpha}"
    )))
}

#[cfg(test)]
mod tests {
    use super::*;
    use statrs::distribution::{ContinuousCDF, FisherSnedecor};

    #[test]
    fn ln_gamma_values() {
        assert!((ln_gamma(1.0)).abs() < 1e-13);
        assert!((ln_gamma(5.0) - 24f64.ln()).abs() < 1e-12);
        assert!((ln_gamma(0.5) - std::f64::consts::PI.sqrt().ln()).abs() < 1e-12);
    }

    #[test]
    fn beta_edge_cases() {
        assert_eq!(regularized_beta(0.0, 2.0, 3.0).unwrap(), 0.0);
        assert_eq!(regularized_beta(1.0, 2.0, 3.0).unwrap(), 1.0);
        // I_x(1, 1) = x
        assert!((regularized_beta(0.3, 1.0, 1.0).unwrap() - 0.3).abs() < 1e-14);
        assert!(regularized_beta(1.5, 1.0, 1.0).is_err());
        assert!(regularized_beta(0.5, 0.0, 1.0).is_err());
    }

    #[test]
    fn critical_values() {
        assert!((f_critical(0.05, 1, 14).unwrap() - 4.600).abs() < 5e-3);
        assert!((f_critical(0.05, 4, 56).unwrap() - 2.537).abs() < 5e-3);
        assert!((f_critical(0.05, 4, 36).unwrap() - 2.634).abs() < 5e-3);
    }

    #[test]
    fn matches_statrs() {
        for &(d1, d2) in &[(1u32, 14u32), (4, 56), (4, 36), (2, 5), (9, 200), (1, 1)] {
            let reference = FisherSnedecor::new(d1 as f64, d2 as f64).unwrap();
            for &alpha in &[0.01, 0.05, 0.1, 0.5] {
                let ours = f_critical(alpha, d1, d2).unwrap();
                let theirs = reference.inverse_cdf(1.0 - alpha);
                assert!((ours - theirs).abs() < 1e-5 * theirs.max(1.0), "{d1},{d2},{alpha}: {ours} vs {theirs}");
            }
            for &f in &[0.1, 1.0, 3.0, 10.0] {
                let ours = f_cdf(f, d1 as f64, d2 as f64).unwrap();
                assert!((ours - reference.cdf(f)).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn rejects_bad_arguments() {
        assert!(f_critical(0.0, 1, 1).is_err());
        assert!(f_critical(1.0, 1, 1).is_err());
        assert!(f_critical(0.05, 0, 3).is_err());
    }
}
