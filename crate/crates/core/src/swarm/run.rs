use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{
    clpso_step, init_clpso, init_swarm, pso_step, ClpsoSchedule, Objective, PsoSchedule,
    SearchSpace, SwarmState,
};
use crate::error::{Error, Result};
use crate::stream::{BlockRole, EpsilonStream, StreamProvenance, SwarmMode};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "engine", rename_all = "snake_case")]
pub enum EngineSettings {
    Pso(PsoSchedule),
    Clpso(ClpsoSchedule),
}

impl EngineSettings {
    pub fn mode(&self) -> SwarmMode {
        match self {
            EngineSettings::Pso(_) => SwarmMode::Pso,
            EngineSettings::Clpso(_) => SwarmMode::Clpso,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OptimizerConfig {
    pub engine: EngineSettings,
    pub horizon: usize,
    pub space: SearchSpace,
}

/// Outcome of one optimizer run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    /// `curve[g]` is the gbest fitness after `g` iterations; `curve[0]` is
    /// the post-initialization value.
    pub curve: Vec<f64>,
    pub evaluations: usize,
    pub wall_time_secs: f64,
    pub aux_seed: u64,
    pub stream: StreamProvenance,
}

/// Runs `config.horizon` iterations, drawing every update-path random
/// vector from `stream`. `aux_seed` drives CLPSO's exemplar bookkeeping and
/// is unused by PSO.
pub fn run_optimizer(
    config: &OptimizerConfig,
    objective: &dyn Objective,
    stream: &EpsilonStream,
    aux_seed: u64,
) -> Result<RunRecord> {
    let mode = config.engine.mode();
    if stream.mode() != mode {
        return Err(Error::invalid(format!(
            "{mode:?} engine cannot consume a {:?} stream",
            stream.mode()
        )));
    }
    if stream.horizon() < config.horizon {
        return Err(Error::invalid(format!(
            "stream covers {} iterations, run needs {}",
            stream.horizon(),
            config.horizon
        )));
    }
    if stream.dim() != config.space.dim() {
        return Err(Error::invalid(format!(
            "stream dimension {} does not match search space dimension {}",
            stream.dim(),
            config.space.dim()
        )));
    }
    if mode == SwarmMode::Clpso && stream.n_particles() < 3 {
        return Err(Error::invalid("CLPSO needs at least 3 particles"));
    }

    let started = Instant::now();
    let eps_pos = stream.stream_block(BlockRole::InitPosition)?;
    let eps_vel = stream.stream_block(BlockRole::InitVelocity)?;
    let mut state: SwarmState =
        init_swarm(eps_pos.view(), eps_vel.view(), &config.space, objective)?;
    let mut curve = Vec::with_capacity(config.horizon + 1);
    curve.push(state.gbest_fit);

    let horizon = config.horizon;
    match &config.engine {
        EngineSettings::Pso(schedule) => {
            for g in 1..=horizon {
                let cognitive = stream.stream_block(BlockRole::Cognitive(g))?;
                let social = stream.stream_block(BlockRole::Social(g))?;
                pso_step(
                    &mut state,
                    schedule.at(g - 1, horizon),
                    cognitive.view(),
                    social.view(),
                    &config.space,
                    objective,
                )?;
                curve.push(state.gbest_fit);
            }
        }
        EngineSettings::Clpso(schedule) => {
            let mut rng = ChaCha8Rng::seed_from_u64(aux_seed);
            init_clpso(&mut state, &mut rng)?;
            for g in 1..=horizon {
                let learning = stream.stream_block(BlockRole::Learning(g))?;
                clpso_step(
                    &mut state,
                    schedule.at(g - 1, horizon),
                    learning.view(),
                    &config.space,
                    objective,
                    schedule.refresh_gap,
                    &mut rng,
                )?;
                curve.push(state.gbest_fit);
            }
        }
    }

    Ok(RunRecord {
        curve,
        evaluations: state.evaluations,
        wall_time_secs: started.elapsed().as_secs_f64(),
        aux_seed,
        stream: stream.provenance().clone(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lds::{generate_halton, Generator, GeneratorId};
    use crate::stream::{build_stream_combined, build_stream_direct, build_stream_random};

    fn sphere(x: &[f64]) -> f64 {
        x.iter().map(|v| v * v).sum()
    }

    fn pso_config(d: usize, horizon: usize) -> OptimizerConfig {
        OptimizerConfig {
            engine: EngineSettings::Pso(PsoSchedule::default()),
            horizon,
            space: SearchSpace::cube(d, -5.0, 5.0).unwrap(),
        }
    }

    fn clpso_config(d: usize, horizon: usize) -> OptimizerConfig {
        OptimizerConfig {
            engine: EngineSettings::Clpso(ClpsoSchedule::default()),
            horizon,
            space: SearchSpace::cube(d, -5.0, 5.0).unwrap(),
        }
    }

    #[test]
    fn zero_horizon_curve() {
        let stream = build_stream_random(5, 2, 0, SwarmMode::Pso, 1);
        let rec = run_optimizer(&pso_config(2, 0), &sphere, &stream, 0).unwrap();
        assert_eq!(rec.curve.len(), 1);
        assert_eq!(rec.evaluations, 5);
    }

    #[test]
    fn sphere_improves_for_every_construction() {
        let cfg = pso_config(2, 200);
        let halton = Generator::new(GeneratorId::ScrambledHalton, 4);
        let seed = generate_halton(40, 2, Some(7), 1).unwrap();
        let streams = [
            build_stream_random(40, 2, 200, SwarmMode::Pso, 3),
            build_stream_direct(halton, 40, 2, 200, SwarmMode::Pso).unwrap(),
            build_stream_combined(&seed, 2, 200, SwarmMode::Pso, 11).unwrap(),
        ];
        for stream in &streams {
            let rec = run_optimizer(&cfg, &sphere, stream, 0).unwrap();
            assert_eq!(rec.curve.len(), 201);
            assert!(rec.curve[200] < rec.curve[0]);
            assert!(rec.curve.windows(2).all(|w| w[1] <= w[0]));
        }
    }

    #[test]
    fn every_block_is_read_once() {
        let pso = build_stream_random(6, 3, 25, SwarmMode::Pso, 1);
        run_optimizer(&pso_config(3, 25), &sphere, &pso, 0).unwrap();
        assert_eq!(pso.read_counts(), vec![1; 52]);

        let cl = build_stream_random(6, 3, 25, SwarmMode::Clpso, 1);
        run_optimizer(&clpso_config(3, 25), &sphere, &cl, 9).unwrap();
        assert_eq!(cl.read_counts(), vec![1; 27]);
    }

    #[test]
    fn deterministic_curves() {
        let cfg = clpso_config(4, 60);
        let a = build_stream_random(10, 4, 60, SwarmMode::Clpso, 5);
        let b = build_stream_random(10, 4, 60, SwarmMode::Clpso, 5);
        let ra = run_optimizer(&cfg, &sphere, &a, 77).unwrap();
        let rb = run_optimizer(&cfg, &sphere, &b, 77).unwrap();
        assert_eq!(ra.curve, rb.curve);
        let rc = run_optimizer(&cfg, &sphere, &a, 78).unwrap();
        assert_ne!(ra.curve, rc.curve);
    }

    #[test]
    fn mismatches_fail_before_evaluation() {
        let calls = std::sync::atomic::AtomicUsize::new(0);
        let counting = |x: &[f64]| {
            calls.fetch_add(1, std::sync::atomic::Ordering::Relaxed);
            sphere(x)
        };
        let clpso_stream = build_stream_random(5, 2, 10, SwarmMode::Clpso, 1);
        assert!(run_optimizer(&pso_config(2, 10), &counting, &clpso_stream, 0).is_err());
        let short = build_stream_random(5, 2, 5, SwarmMode::Pso, 1);
        assert!(run_optimizer(&pso_config(2, 10), &counting, &short, 0).is_err());
        let wide = build_stream_random(5, 3, 10, SwarmMode::Pso, 1);
        assert!(run_optimizer(&pso_config(2, 10), &counting, &wide, 0).is_err());
        assert_eq!(calls.load(std::sync::atomic::Ordering::Relaxed), 0);
    }

    #[test]
    fn divergence_is_reported_with_context() {
        let stream = build_stream_random(4, 1, 10, SwarmMode::Pso, 2);
        let blowup = |x: &[f64]| if x[0] > 0.0 { f64::INFINITY } else { x[0] * x[0] };
        let err = run_optimizer(&pso_config(1, 10), &blowup, &stream, 0).unwrap_err();
        assert!(matches!(err, Error::NonFiniteFitness { .. }), "{err}");
    }
}
