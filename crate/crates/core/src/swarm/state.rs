use ndarray::{Array1, Array2, ArrayView2, Zip};

use super::{Objective, SearchSpace};
use crate::error::{Error, Result};

/// Per-particle CLPSO bookkeeping.
#[derive(Debug, Clone, PartialEq)]
pub struct ClpsoExtras {
    /// `exemplars[[i, d]]` is the particle whose pbest guides particle `i`
    /// in dimension `d`.
    pub exemplars: Array2<usize>,
    /// Consecutive evaluated iterations without pbest improvement.
    pub stagnation: Vec<usize>,
    /// Learning probability of each particle.
    pub pc: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SwarmState {
    pub positions: Array2<f64>,
    pub velocities: Array2<f64>,
    pub pbest_pos: Array2<f64>,
    pub pbest_fit: Array1<f64>,
    pub gbest_pos: Array1<f64>,
    pub gbest_fit: f64,
    /// Completed update steps.
    pub iteration: usize,
    pub evaluations: usize,
    pub clpso: Option<ClpsoExtras>,
}

impl SwarmState {
    pub fn n_particles(&self) -> usize {
        self.positions.nrows()
    }

    pub fn dim(&self) -> usize {
        self.positions.ncols()
    }

    /// Replaces pbests that strictly improved, then the gbest from the
    /// updated pbests. `fitness[i] == None` marks an unevaluated particle.
    pub(crate) fn commit_bests(&mut self, fitness: &[Option<f64>]) -> Vec<bool> {
        let improved: Vec<bool> = fitness
            .iter()
            .enumerate()
            .map(|(i, f)| matches!(f, Some(f) if *f < self.pbest_fit[i]))
            .collect();
        for (i, _) in improved.iter().enumerate().filter(|(_, &b)| b) {
            self.pbest_fit[i] = fitness[i].expect("improved implies evaluated");
            self.pbest_pos.row_mut(i).assign(&self.positions.row(i));
        }
        if let Some(best) = argmin(self.pbest_fit.as_slice().expect("contiguous")) {
            if self.pbest_fit[best] < self.gbest_fit {
                self.gbest_fit = self.pbest_fit[best];
                self.gbest_pos.assign(&self.pbest_pos.row(best));
            }
        }
        improved
    }
}

/// Index of the first minimum.
pub(crate) fn argmin(values: &[f64]) -> Option<usize> {
    let mut best: Option<usize> = None;
    for (i, &v) in values.iter().enumerate() {
        if best.is_none_or(|b| v < values[b]) {
            best = Some(i);
        }
    }
    best
}

pub(crate) fn evaluate(
    objective: &dyn Objective,
    x: &[f64],
    iteration: usize,
    particle: usize,
) -> Result<f64> {
    let value = objective.evaluate(x);
    if value.is_finite() {
        Ok(value)
    } else {
        Err(Error::NonFiniteFitness {
            iteration,
            particle,
            position: x.to_vec(),
            value,
        })
    }
}

pub(crate) fn check_block(name: &str, block: ArrayView2<'_, f64>, n: usize, d: usize) -> Result<()> {
    if block.dim() != (n, d) {
        return Err(Error::invalid(format!(
            "{name} block is {:?}, expected ({n}, {d})",
            block.dim()
        )));
    }
    Ok(())
}

/// Initial positions `a + eps_pos * (b - a)` and velocities
/// `v_min + eps_vel * (v_max - v_min)`; every particle's pbest is its
/// starting point.
pub fn init_swarm(
    eps_pos: ArrayView2<'_, f64>,
    eps_vel: ArrayView2<'_, f64>,
    space: &SearchSpace,
    objective: &dyn Objective,
) -> Result<SwarmState> {
    let (n, d) = eps_pos.dim();
    if n == 0 {
        return Err(Error::invalid("swarm needs at least one particle"));
    }
    if d != space.dim() {
        return Err(Error::invalid(format!(
            "position block has {d} columns, search space has {}",
            space.dim()
        )));
    }
    check_block("velocity", eps_vel, n, d)?;

    let mut positions = Array2::zeros((n, d));
    let mut velocities = Array2::zeros((n, d));
    for j in 0..d {
        let (a, b) = (space.lower[j], space.upper[j]);
        let (vlo, vhi) = (space.velocity_min[j], space.velocity_max[j]);
        Zip::from(positions.column_mut(j))
            .and(eps_pos.column(j))
            .for_each(|x, &e| *x = a + e * (b - a));
        Zip::from(velocities.column_mut(j))
            .and(eps_vel.column(j))
            .for_each(|v, &e| *v = vlo + e * (vhi - vlo));
    }

    let mut fitness = Array1::zeros(n);
    for (i, row) in positions.rows().into_iter().enumerate() {
        fitness[i] = evaluate(objective, row.as_slice().expect("contiguous"), 0, i)?;
    }
    let best = argmin(fitness.as_slice().expect("contiguous")).expect("n > 0");
    Ok(SwarmState {
        pbest_pos: positions.clone(),
        gbest_pos: positions.row(best).to_owned(),
        gbest_fit: fitness[best],
        pbest_fit: fitness,
        positions,
        velocities,
        iteration: 0,
        evaluations: n,
        clpso: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::Array2;

    fn sphere(x: &[f64]) -> f64 {
        x.iter().map(|v| v * v).sum()
    }

    #[test]
    fn endpoints_of_the_map() {
        let space = SearchSpace::new(vec![-1.0, 2.0], vec![1.0, 6.0], 0.25).unwrap();
        let zeros = Array2::zeros((3, 2));
        let s = init_swarm(zeros.view(), zeros.view(), &space, &sphere).unwrap();
        for row in s.positions.rows() {
            assert_eq!(row.to_vec(), vec![-1.0, 2.0]);
        }
        for row in s.velocities.rows() {
            assert_eq!(row.to_vec(), vec![-0.5, -1.0]);
        }

        let half = Array2::from_elem((3, 2), 0.5);
        let s = init_swarm(half.view(), half.view(), &space, &sphere).unwrap();
        assert_eq!(s.positions.row(0).to_vec(), vec![0.0, 4.0]);
        assert_eq!(s.velocities.row(0).to_vec(), vec![0.0, 0.0]);

        let ones = Array2::from_elem((1, 2), 1.0 - f64::EPSILON / 2.0);
        let s = init_swarm(ones.view(), ones.view(), &space, &sphere).unwrap();
        assert!((s.positions[[0, 0]] - 1.0).abs() < 1e-12);
        assert!((s.positions[[0, 1]] - 6.0).abs() < 1e-12);
    }

    #[test]
    fn bests_after_init() {
        let space = SearchSpace::cube(1, -1.0, 1.0).unwrap();
        let eps = Array2::from_shape_vec((3, 1), vec![0.9, 0.45, 0.1]).unwrap();
        let s = init_swarm(eps.view(), eps.view(), &space, &sphere).unwrap();
        assert_eq!(s.pbest_pos, s.positions);
        assert_eq!(s.gbest_pos.to_vec(), vec![s.positions[[1, 0]]]);
        assert_eq!(s.gbest_fit, s.pbest_fit[1]);
        assert_eq!(s.evaluations, 3);
    }

    #[test]
    fn non_finite_fitness_names_the_particle() {
        let space = SearchSpace::cube(1, -1.0, 1.0).unwrap();
        let eps = Array2::from_shape_vec((2, 1), vec![0.75, 0.5]).unwrap();
        let bad = |x: &[f64]| if x[0] == 0.0 { f64::NAN } else { 1.0 };
        match init_swarm(eps.view(), eps.view(), &space, &bad) {
            Err(Error::NonFiniteFitness { particle, iteration, .. }) => {
                assert_eq!((particle, iteration), (1, 0))
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn argmin_prefers_first() {
        assert_eq!(argmin(&[3.0, 1.0, 1.0]), Some(1));
        assert_eq!(argmin(&[]), None);
    }
}
