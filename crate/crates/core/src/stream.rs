//! The expanded-dimensional sample set consumed by one optimizer run.
//!
//! A run of `G` iterations draws every random vector it needs from a single
//! `N`-point sample set whose dimension grows with `G`. The set is split into
//! `D`-column blocks, each addressed by the role it plays in the update:
//!
//! | mode  | blocks   | layout                                              |
//! |-------|----------|-----------------------------------------------------|
//! | PSO   | `2G + 2` | init position, init velocity, (cognitive, social) x G |
//! | CLPSO | `G + 2`  | init position, init velocity, learning x G          |
//!
//! Blocks are materialized on demand from pure functions of the block index,
//! so a stream for `G = 7500` costs `O(N * D)` memory per block in use.

use std::sync::atomic::{AtomicU32, Ordering};
use std::sync::Arc;

use ndarray::{s, Array2};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lds::{Generator, GeneratorId, PointSet};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SwarmMode {
    Pso,
    Clpso,
}

impl SwarmMode {
    pub fn block_count(self, horizon: usize) -> usize {
        match self {
            SwarmMode::Pso => 2 * horizon + 2,
            SwarmMode::Clpso => horizon + 2,
        }
    }
}

/// How the expanded-dimensional set is produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Construction {
    /// Independent uniform blocks (the unmodified optimizers).
    Random,
    /// One low-discrepancy set generated directly in the full dimension (LDSEDS1).
    #[serde(alias = "direct", alias = "ldseds1")]
    DirectLds,
    /// Row-permuted copies of a `D`-dimensional seed set (LDSEDS2).
    #[serde(alias = "combined", alias = "ldseds2")]
    CombinedLds,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BlockRole {
    InitPosition,
    InitVelocity,
    Cognitive(usize),
    Social(usize),
    Learning(usize),
}

/// Source of the per-block permutations of a combined stream.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum PermutationPlan {
    /// Block `b` uses a uniform permutation drawn from stream `b` of a
    /// generator keyed by the seed.
    Seeded(u64),
    /// Every block is an unpermuted copy of the seed set.
    Identity,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StreamProvenance {
    pub construction: Construction,
    pub generator: GeneratorId,
    pub generator_seed: u64,
    pub start_index: u64,
    pub permutation: Option<PermutationPlan>,
}

#[derive(Debug)]
enum Source {
    Direct(Generator),
    Combined {
        seed_set: Arc<Array2<f64>>,
        plan: PermutationPlan,
    },
}

/// Uniform random permutation of `0..length` by Fisher-Yates.
pub fn random_permutation<R: Rng + ?Sized>(length: usize, rng: &mut R) -> Vec<usize> {
    let mut perm: Vec<usize> = (0..length).collect();
    for i in (1..length).rev() {
        let j = rng.random_range(0..=i);
        perm.swap(i, j);
    }
    perm
}

#[derive(Debug)]
pub struct EpsilonStream {
    mode: SwarmMode,
    n_particles: usize,
    dim: usize,
    horizon: usize,
    source: Source,
    provenance: StreamProvenance,
    reads: Vec<AtomicU32>,
}

impl EpsilonStream {
    fn new(
        mode: SwarmMode,
        n_particles: usize,
        dim: usize,
        horizon: usize,
        source: Source,
        provenance: StreamProvenance,
    ) -> Self {
        let reads = (0..mode.block_count(horizon))
            .map(|_| AtomicU32::new(0))
            .collect();
        EpsilonStream {
            mode,
            n_particles,
            dim,
            horizon,
            source,
            provenance,
            reads,
        }
    }

    pub fn mode(&self) -> SwarmMode {
        self.mode
    }

    pub fn n_particles(&self) -> usize {
        self.n_particles
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn horizon(&self) -> usize {
        self.horizon
    }

    pub fn construction(&self) -> Construction {
        self.provenance.construction
    }

    pub fn provenance(&self) -> &StreamProvenance {
        &self.provenance
    }

    pub fn block_count(&self) -> usize {
        self.mode.block_count(self.horizon)
    }

    /// Position of `role` in the block list.
    pub fn block_index(&self, role: BlockRole) -> Result<usize> {
        let in_range = |g: usize| {
            if (1..=self.horizon).contains(&g) {
                Ok(g)
            } else {
                Err(Error::invalid(format!(
                    "{role:?} outside iterations 1..={}",
                    self.horizon
                )))
            }
        };
        match (role, self.mode) {
            (BlockRole::InitPosition, _) => Ok(0),
            (BlockRole::InitVelocity, _) => Ok(1),
            (BlockRole::Cognitive(g), SwarmMode::Pso) => Ok(2 * in_range(g)?),
            (BlockRole::Social(g), SwarmMode::Pso) => Ok(2 * in_range(g)? + 1),
            (BlockRole::Learning(g), SwarmMode::Clpso) => Ok(in_range(g)? + 1),
            (role, mode) => Err(Error::invalid(format!(
                "{role:?} is not a block of a {mode:?} stream"
            ))),
        }
    }

    /// The block serving `role`; every call is counted in [`Self::read_counts`].
    pub fn stream_block(&self, role: BlockRole) -> Result<Array2<f64>> {
        let index = self.block_index(role)?;
        self.reads[index].fetch_add(1, Ordering::Relaxed);
        Ok(self.materialize(index))
    }

    /// Block by raw index, without touching the read counters.
    pub fn block_at(&self, index: usize) -> Result<Array2<f64>> {
        if index >= self.block_count() {
            return Err(Error::invalid(format!(
                "block {index} out of range (stream has {})",
                self.block_count()
            )));
        }
        Ok(self.materialize(index))
    }

    fn materialize(&self, index: usize) -> Array2<f64> {
        match &self.source {
            Source::Direct(generator) => {
                generator.columns(self.n_particles, index * self.dim, self.dim)
            }
            Source::Combined { seed_set, plan } => match (index, plan) {
                (0, _) | (_, PermutationPlan::Identity) => (**seed_set).clone(),
                (b, PermutationPlan::Seeded(seed)) => {
                    let perm = block_permutation(*seed, b, self.dim);
                    let mut out = Array2::zeros((self.n_particles, self.dim));
                    for (j, &src) in perm.iter().enumerate() {
                        out.column_mut(j).assign(&seed_set.column(src));
                    }
                    out
                }
            },
        }
    }

    /// The permutation applied to the seed set's dimensions in block `index`
    /// (`None` for direct streams).
    pub fn block_permutation(&self, index: usize) -> Option<Vec<usize>> {
        match &self.source {
            Source::Direct(_) => None,
            Source::Combined { plan, .. } => Some(match (index, plan) {
                (0, _) | (_, PermutationPlan::Identity) => (0..self.dim).collect(),
                (b, PermutationPlan::Seeded(seed)) => block_permutation(*seed, b, self.dim),
            }),
        }
    }

    /// All blocks side by side: the `N x (blocks * D)` sample set itself.
    pub fn flatten(&self) -> Array2<f64> {
        let mut out = Array2::zeros((self.n_particles, self.block_count() * self.dim));
        for b in 0..self.block_count() {
            out.slice_mut(s![.., b * self.dim..(b + 1) * self.dim])
                .assign(&self.materialize(b));
        }
        out
    }

    /// How many times each block was served through [`Self::stream_block`].
    pub fn read_counts(&self) -> Vec<u32> {
        self.reads.iter().map(|r| r.load(Ordering::Relaxed)).collect()
    }
}

fn block_permutation(seed: u64, block: usize, dim: usize) -> Vec<usize> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(block as u64);
    random_permutation(dim, &mut rng)
}

/// LDSEDS1: one generator call in the full `(blocks * d)`-dimensional space.
pub fn build_stream_direct(
    generator: Generator,
    n: usize,
    d: usize,
    horizon: usize,
    mode: SwarmMode,
) -> Result<EpsilonStream> {
    let total = mode.block_count(horizon) * d;
    generator.check_dim(total).map_err(|_| {
        Error::invalid(format!(
            "{mode:?} stream with G = {horizon}, D = {d} needs {total} dimensions; {} supports at most {}",
            generator.id,
            generator.id.max_dim().unwrap_or(usize::MAX)
        ))
    })?;
    let construction = if generator.id == GeneratorId::Uniform {
        Construction::Random
    } else {
        Construction::DirectLds
    };
    let provenance = StreamProvenance {
        construction,
        generator: generator.id,
        generator_seed: generator.seed,
        start_index: generator.start_index,
        permutation: None,
    };
    Ok(EpsilonStream::new(
        mode,
        n,
        d,
        horizon,
        Source::Direct(generator),
        provenance,
    ))
}

/// Independent uniform blocks, identical to a direct stream over the
/// uniform generator with the same seed.
pub fn build_stream_random(
    n: usize,
    d: usize,
    horizon: usize,
    mode: SwarmMode,
    seed: u64,
) -> EpsilonStream {
    build_stream_direct(
        Generator::new(GeneratorId::Uniform, seed).with_start_index(0),
        n,
        d,
        horizon,
        mode,
    )
    .expect("uniform generator has no dimension limit")
}

/// LDSEDS2: block 0 is the seed set, block `b >= 1` permutes its dimensions
/// with an independent seeded permutation.
///
/// `seed_set` holds one particle per row, so a dimension of the seed set is a
/// column here.
pub fn build_stream_combined(
    seed_set: &PointSet,
    d: usize,
    horizon: usize,
    mode: SwarmMode,
    permutation_seed: u64,
) -> Result<EpsilonStream> {
    build_stream_combined_with_plan(
        seed_set,
        d,
        horizon,
        mode,
        PermutationPlan::Seeded(permutation_seed),
    )
}

pub fn build_stream_combined_with_plan(
    seed_set: &PointSet,
    d: usize,
    horizon: usize,
    mode: SwarmMode,
    plan: PermutationPlan,
) -> Result<EpsilonStream> {
    if seed_set.dim() != d {
        return Err(Error::invalid(format!(
            "seed set has {} dimensions, stream requested {d}",
            seed_set.dim()
        )));
    }
    let provenance = StreamProvenance {
        construction: Construction::CombinedLds,
        generator: seed_set.generator(),
        generator_seed: seed_set.seed(),
        start_index: seed_set.start_index(),
        permutation: Some(plan),
    };
    Ok(EpsilonStream::new(
        mode,
        seed_set.n(),
        d,
        horizon,
        Source::Combined {
            seed_set: Arc::new(seed_set.points().as_standard_layout().into_owned()),
            plan,
        },
        provenance,
    ))
}
