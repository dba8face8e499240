//! Base landscapes, each normalized so its global minimum 0 sits at the
//! origin.

use std::f64::consts::{E, PI};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BaseFunction {
    Sphere,
    Zakharov,
    Rosenbrock,
    Rastrigin,
    ExpandedSchafferF6,
    LunacekBiRastrigin,
    NonContinuousRastrigin,
    Levy,
    Ackley,
    Griewank,
    BentCigar,
    HgBat,
    HighConditionedElliptic,
    Discus,
    Katsuura,
    ModifiedSchwefel,
    SchafferF7,
    ExpandedGriewankRosenbrock,
}

impl BaseFunction {
    pub const ALL: [BaseFunction; 18] = [
        BaseFunction::Sphere,
        BaseFunction::Zakharov,
        BaseFunction::Rosenbrock,
        BaseFunction::Rastrigin,
        BaseFunction::ExpandedSchafferF6,
        BaseFunction::LunacekBiRastrigin,
        BaseFunction::NonContinuousRastrigin,
        BaseFunction::Levy,
        BaseFunction::Ackley,
        BaseFunction::Griewank,
        BaseFunction::BentCigar,
        BaseFunction::HgBat,
        BaseFunction::HighConditionedElliptic,
        BaseFunction::Discus,
        BaseFunction::Katsuura,
        BaseFunction::ModifiedSchwefel,
        BaseFunction::SchafferF7,
        BaseFunction::ExpandedGriewankRosenbrock,
    ];

    pub fn name(self) -> &'static str {
        match self {
            BaseFunction::Sphere => "sphere",
            BaseFunction::Zakharov => "zakharov",
            BaseFunction::Rosenbrock => "rosenbrock",
            BaseFunction::Rastrigin => "rastrigin",
            BaseFunction::ExpandedSchafferF6 => "expanded_schaffer_f6",
            BaseFunction::LunacekBiRastrigin => "lunacek_bi_rastrigin",
            BaseFunction::NonContinuousRastrigin => "non_continuous_rastrigin",
            BaseFunction::Levy => "levy",
            BaseFunction::Ackley => "ackley",
            BaseFunction::Griewank => "griewank",
            BaseFunction::BentCigar => "bent_cigar",
            BaseFunction::HgBat => "hgbat",
            BaseFunction::HighConditionedElliptic => "high_conditioned_elliptic",
            BaseFunction::Discus => "discus",
            BaseFunction::Katsuura => "katsuura",
            BaseFunction::ModifiedSchwefel => "modified_schwefel",
            BaseFunction::SchafferF7 => "schaffer_f7",
            BaseFunction::ExpandedGriewankRosenbrock => "expanded_griewank_rosenbrock",
        }
    }

    pub fn from_name(name: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|b| b.name() == name)
            .ok_or_else(|| Error::invalid(format!("unknown base function '{name}'")))
    }

    /// Factor applied to the shifted, rotated input so that the
    /// `[-100, 100]` box maps onto the function's customary domain.
    pub fn input_scale(self) -> f64 {
        match self {
            BaseFunction::Rosenbrock => 2.048 / 100.0,
            BaseFunction::Rastrigin | BaseFunction::NonContinuousRastrigin => 5.12 / 100.0,
            BaseFunction::LunacekBiRastrigin => 10.0 / 100.0,
            BaseFunction::Griewank => 600.0 / 100.0,
            BaseFunction::HgBat
            | BaseFunction::Katsuura
            | BaseFunction::ExpandedGriewankRosenbrock => 5.0 / 100.0,
            BaseFunction::ModifiedSchwefel => 1000.0 / 100.0,
            _ => 1.0,
        }
    }

    pub fn min_dim(self) -> usize {
        match self {
            BaseFunction::SchafferF7 => 2,
            _ => 1,
        }
    }

    /// Nonnegative everywhere, so a shifted instance never drops below its bias.
    pub fn is_nonnegative(self) -> bool {
        // Schwefel's normalization is exact only to rounding at the optimum.
        !matches!(self, BaseFunction::ModifiedSchwefel)
    }

    pub(crate) fn eval_unchecked(self, z: &[f64]) -> f64 {
        match self {
            BaseFunction::Sphere => z.iter().map(|v| v * v).sum(),
            BaseFunction::Zakharov => zakharov(z),
            BaseFunction::Rosenbrock => rosenbrock_recentered(z),
            BaseFunction::Rastrigin => rastrigin(z.iter().copied()),
            BaseFunction::ExpandedSchafferF6 => expanded_schaffer_f6(z),
            BaseFunction::LunacekBiRastrigin => lunacek_bi_rastrigin(z),
            BaseFunction::NonContinuousRastrigin => rastrigin(
                z.iter()
                    .map(|&v| if v.abs() <= 0.5 { v } else { (2.0 * v).round() / 2.0 }),
            ),
            BaseFunction::Levy => levy(z),
            BaseFunction::Ackley => ackley(z),
            BaseFunction::Griewank => griewank(z),
            BaseFunction::BentCigar => z[0] * z[0] + 1e6 * z[1..].iter().map(|v| v * v).sum::<f64>(),
            BaseFunction::HgBat => hgbat(z),
            BaseFunction::HighConditionedElliptic => elliptic(z),
            BaseFunction::Discus => 1e6 * z[0] * z[0] + z[1..].iter().map(|v| v * v).sum::<f64>(),
            BaseFunction::Katsuura => katsuura(z),
            BaseFunction::ModifiedSchwefel => modified_schwefel(z),
            BaseFunction::SchafferF7 => schaffer_f7(z),
            BaseFunction::ExpandedGriewankRosenbrock => expanded_griewank_rosenbrock(z),
        }
    }
}

impl std::fmt::Display for BaseFunction {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// Evaluates a base function on an already shifted/rotated/scaled input.
pub fn eval_base(base: BaseFunction, z: &[f64]) -> Result<f64> {
    if z.len() < base.min_dim() {
        return Err(Error::invalid(format!(
            "{base} needs at least {} dimensions, got {}",
            base.min_dim(),
            z.len()
        )));
    }
    if let Some(v) = z.iter().find(|v| !v.is_finite()) {
        return Err(Error::invalid(format!("non-finite input {v} to {base}")));
    }
    Ok(base.eval_unchecked(z))
}

fn zakharov(z: &[f64]) -> f64 {
    let (sq, lin) = z
        .iter()
        .enumerate()
        .fold((0.0, 0.0), |(sq, lin), (i, &v)| {
            (sq + v * v, lin + 0.5 * (i + 1) as f64 * v)
        });
    sq + lin.powi(2) + lin.powi(4)
}

/// Classic Rosenbrock, minimum 0 at `(1, ..., 1)`.
pub fn rosenbrock_classic(x: &[f64]) -> f64 {
    x.windows(2)
        .map(|w| 100.0 * (w[0] * w[0] - w[1]).powi(2) + (w[0] - 1.0).powi(2))
        .sum()
}

fn rosenbrock_recentered(z: &[f64]) -> f64 {
    let shifted: Vec<f64> = z.iter().map(|v| v + 1.0).collect();
    rosenbrock_classic(&shifted)
}

fn rastrigin(z: impl Iterator<Item = f64>) -> f64 {
    z.map(|v| v * v - 10.0 * (2.0 * PI * v).cos() + 10.0).sum()
}

fn schaffer_pair(x: f64, y: f64) -> f64 {
    let r2 = x * x + y * y;
    0.5 + (r2.sqrt().sin().powi(2) - 0.5) / (1.0 + 0.001 * r2).powi(2)
}

fn expanded_schaffer_f6(z: &[f64]) -> f64 {
    let d = z.len();
    (0..d).map(|i| schaffer_pair(z[i], z[(i + 1) % d])).sum()
}

fn lunacek_bi_rastrigin(z: &[f64]) -> f64 {
    const MU0: f64 = 2.5;
    const DEPTH: f64 = 1.0;
    let d = z.len() as f64;
    let s = 1.0 - 1.0 / (2.0 * (d + 20.0).sqrt() - 8.2);
    let mu1 = -((MU0 * MU0 - DEPTH) / s).sqrt();
    let mut near = 0.0;
    let mut far = 0.0;
    let mut ripple = 0.0;
    for &v in z {
        let t = 2.0 * v;
        near += t * t;
        far += (t + MU0 - mu1).powi(2);
        ripple += 1.0 - (2.0 * PI * t).cos();
    }
    near.min(DEPTH * d + s * far) + 10.0 * ripple
}

fn levy(z: &[f64]) -> f64 {
    let w: Vec<f64> = z.iter().map(|v| 1.0 + v / 4.0).collect();
    let last = w[w.len() - 1];
    let head = (PI * w[0]).sin().powi(2);
    let middle: f64 = w[..w.len() - 1]
        .iter()
        .map(|wi| (wi - 1.0).powi(2) * (1.0 + 10.0 * (PI * wi + 1.0).sin().powi(2)))
        .sum();
    let tail = (last - 1.0).powi(2) * (1.0 + (2.0 * PI * last).sin().powi(2));
    head + middle + tail
}

fn ackley(z: &[f64]) -> f64 {
    let d = z.len() as f64;
    let sq = z.iter().map(|v| v * v).sum::<f64>() / d;
    let cs = z.iter().map(|v| (2.0 * PI * v).cos()).sum::<f64>() / d;
    // Grouped so that the origin evaluates to exactly 0.
    20.0 * (1.0 - (-0.2 * sq.sqrt()).exp()) + (E - cs.exp())
}

fn griewank(z: &[f64]) -> f64 {
    let sum = z.iter().map(|v| v * v).sum::<f64>() / 4000.0;
    let prod: f64 = z
        .iter()
        .enumerate()
        .map(|(i, v)| (v / ((i + 1) as f64).sqrt()).cos())
        .product();
    sum + (1.0 - prod)
}

fn hgbat(z: &[f64]) -> f64 {
    let d = z.len() as f64;
    let (r2, s) = z
        .iter()
        .map(|v| v - 1.0)
        .fold((0.0, 0.0), |(r2, s), v| (r2 + v * v, s + v));
    (r2 * r2 - s * s).abs().sqrt() + (0.5 * r2 + s) / d + 0.5
}

fn elliptic(z: &[f64]) -> f64 {
    let d = z.len();
    if d == 1 {
        return z[0] * z[0];
    }
    z.iter()
        .enumerate()
        .map(|(i, v)| 10f64.powf(6.0 * i as f64 / (d - 1) as f64) * v * v)
        .sum()
}

fn katsuura(z: &[f64]) -> f64 {
    let d = z.len() as f64;
    let exponent = 10.0 / d.powf(1.2);
    let mut prod = 1.0;
    for (i, &v) in z.iter().enumerate() {
        let mut acc = 0.0;
        for j in 1..=32 {
            let p = 2f64.powi(j);
            let t = p * v;
            acc += (t - t.round()).abs() / p;
        }
        prod *= (1.0 + (i + 1) as f64 * acc).powf(exponent);
    }
    let scale = 10.0 / (d * d);
    scale * prod - scale
}

const SCHWEFEL_OFFSET: f64 = 420.968_746_227_503_6;

fn schwefel_term(v: f64, d: f64) -> f64 {
    if v > 500.0 {
        let m = 500.0 - v % 500.0;
        m * m.abs().sqrt().sin() - (v - 500.0).powi(2) / (10_000.0 * d)
    } else if v < -500.0 {
        let m = v.abs() % 500.0 - 500.0;
        m * m.abs().sqrt().sin() - (v + 500.0).powi(2) / (10_000.0 * d)
    } else {
        v * v.abs().sqrt().sin()
    }
}

fn modified_schwefel(z: &[f64]) -> f64 {
    let d = z.len() as f64;
    let peak = schwefel_term(SCHWEFEL_OFFSET, d);
    z.iter()
        .map(|v| peak - schwefel_term(v + SCHWEFEL_OFFSET, d))
        .sum()
}

fn schaffer_f7(z: &[f64]) -> f64 {
    let pairs = z.len() - 1;
    let sum: f64 = z
        .windows(2)
        .map(|w| {
            let s = (w[0] * w[0] + w[1] * w[1]).sqrt();
            let r = s.sqrt();
            r + r * (50.0 * s.powf(0.2)).sin().powi(2)
        })
        .sum();
    (sum / pairs as f64).powi(2)
}

fn expanded_griewank_rosenbrock(z: &[f64]) -> f64 {
    let d = z.len();
    (0..d)
        .map(|i| {
            let a = z[i] + 1.0;
            let b = z[(i + 1) % d] + 1.0;
            let t = 100.0 * (a * a - b).powi(2) + (a - 1.0).powi(2);
            t * t / 4000.0 - t.cos() + 1.0
        })
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_base_vanishes_at_origin() {
        for base in BaseFunction::ALL {
            for d in [base.min_dim(), 2, 10, 30] {
                let v = eval_base(base, &vec![0.0; d]).unwrap();
                assert!(v.abs() < 1e-12, "{base} in {d}D gives {v}");
            }
        }
    }

    #[test]
    fn exact_zero_for_the_headline_bases() {
        for base in [BaseFunction::Rastrigin, BaseFunction::Ackley, BaseFunction::Zakharov] {
            assert_eq!(eval_base(base, &[0.0; 10]).unwrap(), 0.0, "{base}");
        }
    }

    #[test]
    fn rosenbrock_forms() {
        assert_eq!(rosenbrock_classic(&[1.0; 6]), 0.0);
        assert_eq!(eval_base(BaseFunction::Rosenbrock, &[0.0; 6]).unwrap(), 0.0);
        // Classic form at the origin: sum of (0 - 1)^2 over d - 1 terms.
        assert_eq!(rosenbrock_classic(&[0.0; 4]), 3.0);
    }

    #[test]
    fn known_values() {
        assert_eq!(eval_base(BaseFunction::Zakharov, &[1.0, 1.0]).unwrap(), 2.0 + 2.25 + 5.0625);
        assert!((eval_base(BaseFunction::Rastrigin, &[1.0]).unwrap() - 1.0).abs() < 1e-12);
        assert_eq!(eval_base(BaseFunction::BentCigar, &[1.0, 1.0]).unwrap(), 1.0 + 1e6);
        assert_eq!(eval_base(BaseFunction::Discus, &[1.0, 1.0]).unwrap(), 1e6 + 1.0);
        assert_eq!(
            eval_base(BaseFunction::HighConditionedElliptic, &[1.0, 1.0]).unwrap(),
            1.0 + 1e6
        );
        // Ackley at (1, 1): 20 (1 - e^{-0.2}) + e - e^{1}.
        let a = eval_base(BaseFunction::Ackley, &[1.0, 1.0]).unwrap();
        assert!((a - 20.0 * (1.0 - (-0.2f64).exp())).abs() < 1e-12);
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(eval_base(BaseFunction::Rastrigin, &[f64::NAN]).is_err());
        assert!(eval_base(BaseFunction::Ackley, &[f64::INFINITY, 0.0]).is_err());
        assert!(eval_base(BaseFunction::SchafferF7, &[0.0]).is_err());
    }

    #[test]
    fn names_round_trip() {
        for base in BaseFunction::ALL {
            assert_eq!(BaseFunction::from_name(base.name()).unwrap(), base);
        }
        assert!(BaseFunction::from_name("weierstrass").is_err());
    }
}
