//! PSO and CLPSO engines whose update-path randomness comes entirely from an
//! [`EpsilonStream`](crate::stream::EpsilonStream).

mod clpso;
mod pso;
mod run;
mod space;
mod state;

pub use clpso::{assign_exemplars, clpso_pc, clpso_step, init_clpso, ClpsoCoefficients};
pub use pso::{pso_step, PsoCoefficients};
pub use run::{run_optimizer, EngineSettings, OptimizerConfig, RunRecord};
pub use space::{SearchSpace, DEFAULT_VELOCITY_FRACTION};
pub use state::{init_swarm, ClpsoExtras, SwarmState};

use serde::{Deserialize, Serialize};

/// Anything that maps a point to a fitness value (lower is better).
pub trait Objective: Sync {
    fn evaluate(&self, x: &[f64]) -> f64;
}

impl<F> Objective for F
where
    F: Fn(&[f64]) -> f64 + Sync,
{
    fn evaluate(&self, x: &[f64]) -> f64 {
        self(x)
    }
}

/// `start + (end - start) * g / (G - 1)`, clamped to the segment.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LinearSchedule {
    pub start: f64,
    pub end: f64,
}

impl LinearSchedule {
    pub const fn new(start: f64, end: f64) -> Self {
        LinearSchedule { start, end }
    }

    pub const fn constant(value: f64) -> Self {
        LinearSchedule {
            start: value,
            end: value,
        }
    }

    /// Value at zero-based iteration `g` of a `horizon`-iteration run.
    pub fn at(&self, g: usize, horizon: usize) -> f64 {
        if horizon <= 1 {
            return self.start;
        }
        let t = (g as f64 / (horizon - 1) as f64).clamp(0.0, 1.0);
        self.start + (self.end - self.start) * t
    }
}

/// Inertia and acceleration schedules for PSO.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PsoSchedule {
    pub omega: LinearSchedule,
    pub c1: LinearSchedule,
    pub c2: LinearSchedule,
}

impl Default for PsoSchedule {
    fn default() -> Self {
        PsoSchedule {
            omega: LinearSchedule::new(0.9, 0.4),
            c1: LinearSchedule::new(2.5, 0.5),
            c2: LinearSchedule::new(0.5, 2.5),
        }
    }
}

impl PsoSchedule {
    pub fn at(&self, g: usize, horizon: usize) -> PsoCoefficients {
        PsoCoefficients {
            omega: self.omega.at(g, horizon),
            c1: self.c1.at(g, horizon),
            c2: self.c2.at(g, horizon),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ClpsoSchedule {
    pub omega: LinearSchedule,
    pub c: f64,
    /// Iterations without pbest improvement before a particle's exemplars
    /// are reassigned.
    pub refresh_gap: usize,
}

impl Default for ClpsoSchedule {
    fn default() -> Self {
        ClpsoSchedule {
            omega: LinearSchedule::new(0.9, 0.2),
            c: 1.49445,
            refresh_gap: 7,
        }
    }
}

impl ClpsoSchedule {
    pub fn at(&self, g: usize, horizon: usize) -> ClpsoCoefficients {
        ClpsoCoefficients {
            omega: self.omega.at(g, horizon),
            c: self.c,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn linear_schedule_endpoints() {
        let s = LinearSchedule::new(0.9, 0.4);
        assert_eq!(s.at(0, 100), 0.9);
        assert_eq!(s.at(99, 100), 0.4);
        assert_eq!(s.at(500, 100), 0.4);
        assert!((s.at(50, 101) - 0.65).abs() < 1e-15);
        assert_eq!(s.at(3, 1), 0.9);
    }

    #[test]
    fn default_coefficients() {
        let p = PsoSchedule::default().at(0, 10);
        assert_eq!((p.omega, p.c1, p.c2), (0.9, 2.5, 0.5));
        let p = PsoSchedule::default().at(9, 10);
        assert_eq!((p.omega, p.c1, p.c2), (0.4, 0.5, 2.5));
        let c = ClpsoSchedule::default();
        assert_eq!((c.c, c.refresh_gap), (1.49445, 7));
        assert!((c.at(9, 10).omega - 0.2).abs() < 1e-15);
    }
}
