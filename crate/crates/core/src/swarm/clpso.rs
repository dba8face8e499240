use ndarray::{Array2, ArrayView2};
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::state::{check_block, evaluate};
use super::{ClpsoExtras, Objective, SearchSpace, SwarmState};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClpsoCoefficients {
    pub omega: f64,
    pub c: f64,
}

/// Learning probability of particle `i` (1-based) in a swarm of `n`:
/// `0.05 + 0.45 (exp(10 (i - 1) / (n - 1)) - 1) / (exp(10) - 1)`.
pub fn clpso_pc(i: usize, n: usize) -> Result<f64> {
    if n < 2 {
        return Err(Error::invalid(format!("CLPSO needs at least 2 particles, got {n}")));
    }
    if !(1..=n).contains(&i) {
        return Err(Error::invalid(format!("particle {i} outside 1..={n}")));
    }
    let t = 10.0 * (i - 1) as f64 / (n - 1) as f64;
    Ok(0.05 + 0.45 * t.exp_m1() / 10f64.exp_m1())
}

/// Binary tournament between two distinct particles other than `i`.
fn tournament<R: Rng + ?Sized>(pbest_fit: &[f64], i: usize, rng: &mut R) -> usize {
    let n = pbest_fit.len();
    // Draw from the n - 1 others, then from the remaining n - 2.
    let skip = |k: usize, excluded: &[usize]| {
        let mut k = k;
        let mut sorted = excluded.to_vec();
        sorted.sort_unstable();
        for e in sorted {
            if k >= e {
                k += 1;
            }
        }
        k
    };
    let a = skip(rng.random_range(0..n - 1), &[i]);
    let b = skip(rng.random_range(0..n - 2), &[i, a]);
    if pbest_fit[b] < pbest_fit[a] {
        b
    } else {
        a
    }
}

/// Per-dimension exemplar indices for particle `i` (0-based).
///
/// Each dimension learns from a tournament winner with probability `pc_i`
/// and from the particle itself otherwise. If no dimension learned from
/// another particle, one uniformly chosen dimension is forced to.
pub fn assign_exemplars<R: Rng + ?Sized>(
    state: &SwarmState,
    i: usize,
    pc_i: f64,
    rng: &mut R,
) -> Result<Vec<usize>> {
    let n = state.n_particles();
    if n < 3 {
        return Err(Error::invalid(format!(
            "exemplar tournaments need at least 3 particles, got {n}"
        )));
    }
    let fit = state.pbest_fit.as_slice().expect("contiguous");
    let d = state.dim();
    let mut exemplar = vec![i; d];
    for slot in exemplar.iter_mut() {
        if rng.random::<f64>() < pc_i {
            *slot = tournament(fit, i, rng);
        }
    }
    if exemplar.iter().all(|&e| e == i) {
        let forced = rng.random_range(0..d);
        exemplar[forced] = tournament(fit, i, rng);
    }
    Ok(exemplar)
}

/// Attaches CLPSO bookkeeping to a freshly initialized swarm: learning
/// probabilities, initial exemplars, zeroed stagnation counters.
pub fn init_clpso<R: Rng + ?Sized>(state: &mut SwarmState, rng: &mut R) -> Result<()> {
    let n = state.n_particles();
    let pc = (1..=n).map(|i| clpso_pc(i, n)).collect::<Result<Vec<_>>>()?;
    let mut exemplars = Array2::zeros((n, state.dim()));
    for (i, &pc_i) in pc.iter().enumerate() {
        let row = assign_exemplars(state, i, pc_i, rng)?;
        exemplars.row_mut(i).assign(&ndarray::Array1::from(row));
    }
    state.clpso = Some(ClpsoExtras {
        exemplars,
        stagnation: vec![0; n],
        pc,
    });
    Ok(())
}

/// One synchronous CLPSO iteration.
///
/// Particles whose stagnation counter reached `refresh_gap` first get new
/// exemplars. Then `v <- omega v + c e o (p_exemplar - x)` (clamped) and
/// `x <- x + v`. Positions are not clipped; a particle outside the box is not
/// evaluated and neither its pbest nor its counter changes.
pub fn clpso_step<R: Rng + ?Sized>(
    state: &mut SwarmState,
    coeffs: ClpsoCoefficients,
    eps_learning: ArrayView2<'_, f64>,
    space: &SearchSpace,
    objective: &dyn Objective,
    refresh_gap: usize,
    rng: &mut R,
) -> Result<()> {
    let (n, d) = state.positions.dim();
    check_block("learning", eps_learning, n, d)?;
    if refresh_gap == 0 {
        return Err(Error::invalid("refresh_gap must be at least 1"));
    }
    let mut extras = state
        .clpso
        .take()
        .ok_or_else(|| Error::invalid("CLPSO step on a swarm without exemplars"))?;
    let iteration = state.iteration + 1;

    for i in 0..n {
        if extras.stagnation[i] >= refresh_gap {
            let row = assign_exemplars(state, i, extras.pc[i], rng)?;
            extras.exemplars.row_mut(i).assign(&ndarray::Array1::from(row));
            extras.stagnation[i] = 0;
        }
    }

    let ClpsoCoefficients { omega, c } = coeffs;
    let mut fitness = vec![None; n];
    for i in 0..n {
        for j in 0..d {
            let guide = state.pbest_pos[[extras.exemplars[[i, j]], j]];
            let x = state.positions[[i, j]];
            let v = omega * state.velocities[[i, j]] + c * eps_learning[[i, j]] * (guide - x);
            let v = v.clamp(space.velocity_min[j], space.velocity_max[j]);
            state.velocities[[i, j]] = v;
            state.positions[[i, j]] = x + v;
        }
        let row = state.positions.row(i);
        let x = row.as_slice().expect("contiguous");
        if space.contains(x) {
            fitness[i] = Some(evaluate(objective, x, iteration, i)?);
            state.evaluations += 1;
        }
    }

    let improved = state.commit_bests(&fitness);
    for i in 0..n {
        if improved[i] {
            extras.stagnation[i] = 0;
        } else if fitness[i].is_some() {
            extras.stagnation[i] += 1;
        }
    }
    state.clpso = Some(extras);
    state.iteration = iteration;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::swarm::init_swarm;
    use ndarray::{array, Array2};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn sphere(x: &[f64]) -> f64 {
        x.iter().map(|v| v * v).sum()
    }

    fn swarm(n: usize, d: usize, seed: u64) -> SwarmState {
        let space = SearchSpace::cube(d, -5.0, 5.0).unwrap();
        let eps = crate::lds::random_uniform(n, d, seed).into_points();
        init_swarm(eps.view(), eps.view(), &space, &sphere).unwrap()
    }

    #[test]
    fn pc_endpoints_and_monotonicity() {
        assert!((clpso_pc(1, 40).unwrap() - 0.05).abs() < 1e-15);
        assert!((clpso_pc(40, 40).unwrap() - 0.5).abs() < 1e-15);
        let pcs: Vec<f64> = (1..=40).map(|i| clpso_pc(i, 40).unwrap()).collect();
        assert!(pcs.windows(2).all(|w| w[0] < w[1]));
        assert!(clpso_pc(1, 1).is_err());
        assert!(clpso_pc(0, 5).is_err());
    }

    #[test]
    fn never_learning_forces_one_dimension() {
        let s = swarm(6, 8, 1);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for i in 0..6 {
            let ex = assign_exemplars(&s, i, 0.0, &mut rng).unwrap();
            assert_eq!(ex.iter().filter(|&&e| e != i).count(), 1);
        }
    }

    #[test]
    fn always_learning_uses_others() {
        let s = swarm(6, 8, 1);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for i in 0..6 {
            let ex = assign_exemplars(&s, i, 1.0, &mut rng).unwrap();
            assert!(ex.iter().all(|&e| e != i && e < 6));
        }
    }

    #[test]
    fn fitter_particle_wins_tournament() {
        // Three particles: the only two candidates for particle 0 are 1 and 2.
        let mut s = swarm(3, 4, 2);
        s.pbest_fit = array![0.0, 3.0, 5.0];
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        for _ in 0..50 {
            let ex = assign_exemplars(&s, 0, 1.0, &mut rng).unwrap();
            assert!(ex.iter().all(|&e| e == 1));
        }
    }

    #[test]
    fn tournament_participants_are_distinct_others() {
        let fit: Vec<f64> = (0..7).map(|k| k as f64).collect();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..2000 {
            let i = rng.random_range(0..7);
            let w = tournament(&fit, i, &mut rng);
            assert_ne!(w, i);
            // With distinct opponents the winner is never the worst other.
            let worst_other = if i == 6 { 5 } else { 6 };
            assert_ne!(w, worst_other);
        }
    }

    #[test]
    fn too_small_swarm() {
        let s = swarm(2, 3, 1);
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        assert!(assign_exemplars(&s, 0, 0.5, &mut rng).is_err());
    }

    fn single_guided(x: f64, guide: f64) -> (SwarmState, SearchSpace) {
        let space = SearchSpace::new(vec![-1.0], vec![1.0], 1.0).unwrap();
        let eps = array![[0.5], [0.5], [0.5]];
        let mut s = init_swarm(eps.view(), eps.view(), &space, &sphere).unwrap();
        s.positions[[0, 0]] = x;
        s.velocities[[0, 0]] = 0.0;
        s.pbest_pos[[1, 0]] = guide;
        s.clpso = Some(ClpsoExtras {
            exemplars: array![[1], [1], [0]],
            stagnation: vec![0; 3],
            pc: vec![0.05, 0.275, 0.5],
        });
        (s, space)
    }

    #[test]
    fn hand_evaluated_update() {
        let (mut s, space) = single_guided(0.2, 0.8);
        let eps = array![[0.5], [0.0], [0.0]];
        let coeffs = ClpsoCoefficients { omega: 0.5, c: 1.49445 };
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        clpso_step(&mut s, coeffs, eps.view(), &space, &sphere, 7, &mut rng).unwrap();
        assert!((s.velocities[[0, 0]] - 0.448335).abs() < 1e-12);
        assert!((s.positions[[0, 0]] - 0.648335).abs() < 1e-12);
    }

    #[test]
    fn direct_jump_to_exemplar() {
        let (mut s, space) = single_guided(-0.3, 0.6);
        let eps = array![[1.0], [0.0], [0.0]];
        let coeffs = ClpsoCoefficients { omega: 0.0, c: 1.0 };
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        clpso_step(&mut s, coeffs, eps.view(), &space, &sphere, 7, &mut rng).unwrap();
        assert!((s.positions[[0, 0]] - 0.6).abs() < 1e-15);
    }

    #[test]
    fn self_guided_at_pbest_is_pure_inertia() {
        let (mut s, space) = single_guided(0.2, 0.8);
        s.clpso.as_mut().unwrap().exemplars[[0, 0]] = 0;
        s.pbest_pos[[0, 0]] = 0.2;
        s.velocities[[0, 0]] = 0.1;
        let eps = array![[0.9], [0.0], [0.0]];
        let coeffs = ClpsoCoefficients { omega: 0.6, c: 1.49445 };
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        clpso_step(&mut s, coeffs, eps.view(), &space, &sphere, 7, &mut rng).unwrap();
        assert!((s.velocities[[0, 0]] - 0.06).abs() < 1e-15);
    }

    #[test]
    fn out_of_bounds_particles_are_not_evaluated() {
        let (mut s, space) = single_guided(0.9, 0.8);
        s.velocities[[0, 0]] = 1.0;
        let before = s.pbest_pos[[0, 0]];
        let evals = s.evaluations;
        let eps = Array2::zeros((3, 1));
        let coeffs = ClpsoCoefficients { omega: 1.0, c: 1.0 };
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        clpso_step(&mut s, coeffs, eps.view(), &space, &sphere, 7, &mut rng).unwrap();
        assert!(s.positions[[0, 0]] > 1.0);
        assert_eq!(s.pbest_pos[[0, 0]], before);
        assert_eq!(s.evaluations, evals + 2);
        assert_eq!(s.clpso.as_ref().unwrap().stagnation[0], 0);
    }

    #[test]
    fn stagnation_triggers_refresh() {
        let mut s = swarm(5, 3, 9);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        init_clpso(&mut s, &mut rng).unwrap();
        let space = SearchSpace::cube(3, -5.0, 5.0).unwrap();
        // Zero velocity and zero learning vector: nobody moves, nobody improves.
        s.velocities.fill(0.0);
        let eps = Array2::zeros((5, 3));
        let coeffs = ClpsoCoefficients { omega: 0.0, c: 1.0 };
        for _ in 0..3 {
            clpso_step(&mut s, coeffs, eps.view(), &space, &sphere, 3, &mut rng).unwrap();
        }
        assert_eq!(s.clpso.as_ref().unwrap().stagnation, vec![3; 5]);
        clpso_step(&mut s, coeffs, eps.view(), &space, &sphere, 3, &mut rng).unwrap();
        assert_eq!(s.clpso.as_ref().unwrap().stagnation, vec![1; 5]);
    }
}
