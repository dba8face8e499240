use ndarray::ArrayView2;
use serde::{Deserialize, Serialize};

use super::state::{check_block, evaluate};
use super::{Objective, SearchSpace, SwarmState};
use crate::error::Result;

/// Inertia and acceleration values for one PSO update.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PsoCoefficients {
    pub omega: f64,
    pub c1: f64,
    pub c2: f64,
}

/// One synchronous PSO iteration:
///
/// ```text
/// v <- omega v + c1 e1 o (pbest - x) + c2 e2 o (gbest - x),  clamped to [v_min, v_max]
/// x <- x + v,                                               clipped to [a, b]
/// ```
///
/// All `N` particles move with the previous iteration's gbest; pbests and the
/// gbest are updated after every particle has been evaluated.
pub fn pso_step(
    state: &mut SwarmState,
    coeffs: PsoCoefficients,
    eps_cognitive: ArrayView2<'_, f64>,
    eps_social: ArrayView2<'_, f64>,
    space: &SearchSpace,
    objective: &dyn Objective,
) -> Result<()> {
    let (n, d) = state.positions.dim();
    check_block("cognitive", eps_cognitive, n, d)?;
    check_block("social", eps_social, n, d)?;
    let PsoCoefficients { omega, c1, c2 } = coeffs;
    let iteration = state.iteration + 1;

    let mut fitness = Vec::with_capacity(n);
    for i in 0..n {
        for j in 0..d {
            let x = state.positions[[i, j]];
            let v = omega * state.velocities[[i, j]]
                + c1 * eps_cognitive[[i, j]] * (state.pbest_pos[[i, j]] - x)
                + c2 * eps_social[[i, j]] * (state.gbest_pos[j] - x);
            let v = v.clamp(space.velocity_min[j], space.velocity_max[j]);
            state.velocities[[i, j]] = v;
            state.positions[[i, j]] = (x + v).clamp(space.lower[j], space.upper[j]);
        }
        let row = state.positions.row(i);
        fitness.push(Some(evaluate(
            objective,
            row.as_slice().expect("contiguous"),
            iteration,
            i,
        )?));
    }
    state.evaluations += n;
    state.commit_bests(&fitness);
    state.iteration = iteration;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::swarm::init_swarm;
    use ndarray::{array, Array2};

    fn sphere(x: &[f64]) -> f64 {
        x.iter().map(|v| v * v).sum()
    }

    fn one_particle(x: f64, v: f64, pbest: f64, gbest: f64) -> SwarmState {
        let space = SearchSpace::cube(1, -10.0, 10.0).unwrap();
        let eps = Array2::from_elem((1, 1), 0.5);
        let mut s = init_swarm(eps.view(), eps.view(), &space, &sphere).unwrap();
        s.positions[[0, 0]] = x;
        s.velocities[[0, 0]] = v;
        s.pbest_pos[[0, 0]] = pbest;
        s.pbest_fit[0] = sphere(&[pbest]);
        s.gbest_pos[0] = gbest;
        s.gbest_fit = sphere(&[gbest]);
        s
    }

    #[test]
    fn hand_evaluated_update() {
        let space = SearchSpace::cube(1, -10.0, 10.0).unwrap();
        let mut s = one_particle(0.0, 0.1, 0.2, 0.4);
        let half = array![[0.5]];
        let coeffs = PsoCoefficients { omega: 0.5, c1: 2.0, c2: 2.0 };
        pso_step(&mut s, coeffs, half.view(), half.view(), &space, &sphere).unwrap();
        assert!((s.velocities[[0, 0]] - 0.65).abs() < 1e-12);
        assert!((s.positions[[0, 0]] - 0.65).abs() < 1e-12);
        assert_eq!(s.iteration, 1);
    }

    #[test]
    fn velocity_clamp_and_position_clip() {
        let space = SearchSpace::new(vec![0.0], vec![1.0], 0.2).unwrap();
        let mut s = one_particle(0.9, 0.0, 0.9, 0.9);
        s.gbest_pos[0] = 5.0;
        let one = array![[1.0]];
        let coeffs = PsoCoefficients { omega: 0.0, c1: 0.0, c2: 2.0 };
        pso_step(&mut s, coeffs, one.view(), one.view(), &space, &sphere).unwrap();
        assert_eq!(s.velocities[[0, 0]], 0.2);
        assert_eq!(s.positions[[0, 0]], 1.0);
    }

    #[test]
    fn degenerate_coefficients_freeze_the_swarm() {
        let space = SearchSpace::cube(1, -10.0, 10.0).unwrap();
        let mut s = one_particle(1.5, 0.3, 0.2, 0.4);
        let e = array![[0.7]];
        let zero = PsoCoefficients { omega: 0.0, c1: 0.0, c2: 0.0 };
        pso_step(&mut s, zero, e.view(), e.view(), &space, &sphere).unwrap();
        assert_eq!(s.velocities[[0, 0]], 0.0);
        assert_eq!(s.positions[[0, 0]], 1.5);
    }

    #[test]
    fn pure_inertia_at_the_attractors() {
        let space = SearchSpace::cube(1, -10.0, 10.0).unwrap();
        let mut s = one_particle(0.4, 0.3, 0.4, 0.4);
        let e = array![[0.9]];
        let coeffs = PsoCoefficients { omega: 0.7, c1: 2.0, c2: 2.0 };
        pso_step(&mut s, coeffs, e.view(), e.view(), &space, &sphere).unwrap();
        assert!((s.velocities[[0, 0]] - 0.21).abs() < 1e-15);
    }

    #[test]
    fn bests_update_synchronously() {
        // Particle 0 reaches the optimum this step; particle 1 must still be
        // pulled toward the previous gbest.
        let space = SearchSpace::new(vec![-10.0], vec![10.0], 1.0).unwrap();
        let eps = array![[0.55], [0.75]];
        let mut s = init_swarm(eps.view(), eps.view(), &space, &sphere).unwrap();
        assert_eq!(s.gbest_pos[0], 1.0);
        s.velocities = array![[-1.0], [0.0]];
        let zero = array![[0.0], [0.0]];
        let social = array![[1.0], [1.0]];
        let coeffs = PsoCoefficients { omega: 1.0, c1: 0.0, c2: 1.0 };
        pso_step(&mut s, coeffs, zero.view(), social.view(), &space, &sphere).unwrap();
        assert_eq!(s.positions[[0, 0]], 0.0);
        assert_eq!(s.positions[[1, 0]], 1.0);
        assert_eq!(s.gbest_fit, 0.0);
        assert_eq!(s.evaluations, 4);
    }

    #[test]
    fn equal_fitness_keeps_incumbent() {
        let space = SearchSpace::cube(1, -10.0, 10.0).unwrap();
        let mut s = one_particle(-0.4, 0.0, 0.4, 0.4);
        let z = array![[0.0]];
        let coeffs = PsoCoefficients { omega: 0.0, c1: 0.0, c2: 0.0 };
        pso_step(&mut s, coeffs, z.view(), z.view(), &space, &sphere).unwrap();
        assert_eq!(s.pbest_pos[[0, 0]], 0.4);
        assert_eq!(s.gbest_pos[0], 0.4);
    }

    #[test]
    fn rejects_misshaped_blocks() {
        let space = SearchSpace::cube(1, -10.0, 10.0).unwrap();
        let mut s = one_particle(0.0, 0.0, 0.0, 0.0);
        let wrong = Array2::zeros((2, 1));
        let ok = Array2::zeros((1, 1));
        let c = PsoCoefficients { omega: 0.5, c1: 1.0, c2: 1.0 };
        assert!(pso_step(&mut s, c, wrong.view(), ok.view(), &space, &sphere).is_err());
    }
}
