//! Point sets in the unit hypercube and their dispersion.
//!
//! All generators are column-addressable: coordinate `(i, j)` of a set is a
//! pure function of the generator parameters, the row index and the column
//! index. The expanded-dimensional stream relies on this to materialize one
//! block of columns at a time.

mod dispersion;
mod halton;
mod hua_wang;
mod io;
mod primes;
mod sobol;
mod sobol_table;
mod uniform;

use ndarray::{Array2, ArrayView2};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use dispersion::{dispersion_exact_1d, dispersion_mc, dispersion_refined, DispersionEstimate, MAX_VERTEX_DIM};
pub use halton::{generate_halton, generate_halton_with_permutations, halton_digit_permutation, radical_inverse};
pub use hua_wang::generate_hua_wang;
pub use io::{read_point_file, write_points, parse_points};
pub use primes::{nth_prime, MAX_PRIME_DIMENSIONS};
pub use sobol::{generate_sobol, MAX_SOBOL_DIMENSIONS};
pub use uniform::random_uniform;

/// Provenance tag for a [`PointSet`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GeneratorId {
    Halton,
    ScrambledHalton,
    Sobol,
    HuaWang,
    Uniform,
    External,
}

impl GeneratorId {
    pub fn as_str(self) -> &'static str {
        match self {
            GeneratorId::Halton => "halton",
            GeneratorId::ScrambledHalton => "scrambled_halton",
            GeneratorId::Sobol => "sobol",
            GeneratorId::HuaWang => "hua_wang",
            GeneratorId::Uniform => "uniform",
            GeneratorId::External => "external",
        }
    }

    /// Largest dimension the generator can produce, `None` when unbounded.
    pub fn max_dim(self) -> Option<usize> {
        match self {
            GeneratorId::Halton | GeneratorId::ScrambledHalton | GeneratorId::HuaWang => {
                Some(MAX_PRIME_DIMENSIONS)
            }
            GeneratorId::Sobol => Some(MAX_SOBOL_DIMENSIONS),
            GeneratorId::Uniform | GeneratorId::External => None,
        }
    }
}

impl std::fmt::Display for GeneratorId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for GeneratorId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "halton" => GeneratorId::Halton,
            "scrambled_halton" | "hss" => GeneratorId::ScrambledHalton,
            "sobol" => GeneratorId::Sobol,
            "hua_wang" | "hws" => GeneratorId::HuaWang,
            "uniform" | "rand" => GeneratorId::Uniform,
            "external" => GeneratorId::External,
            other => return Err(Error::invalid(format!("unknown generator '{other}'"))),
        })
    }
}

/// A fully parameterized generator: enough to reproduce any coordinate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Generator {
    pub id: GeneratorId,
    pub seed: u64,
    pub start_index: u64,
}

impl Generator {
    pub fn new(id: GeneratorId, seed: u64) -> Self {
        Generator {
            id,
            seed,
            start_index: 1,
        }
    }

    pub fn with_start_index(mut self, start_index: u64) -> Self {
        self.start_index = start_index;
        self
    }

    pub(crate) fn check_dim(&self, d: usize) -> Result<()> {
        if self.id == GeneratorId::External {
            return Err(Error::invalid(
                "external point sets are loaded from files, not generated",
            ));
        }
        match self.id.max_dim() {
            Some(max) if d > max => Err(Error::invalid(format!(
                "{} supports at most {max} dimensions, requested {d}",
                self.id
            ))),
            _ => Ok(()),
        }
    }

    /// Columns `first..first + count` of the `n`-point set, as an `n x count` matrix.
    ///
    /// The caller is responsible for `first + count` being within [`GeneratorId::max_dim`].
    pub(crate) fn columns(&self, n: usize, first: usize, count: usize) -> Array2<f64> {
        match self.id {
            GeneratorId::Halton => halton::columns(n, first, count, self.start_index, None),
            GeneratorId::ScrambledHalton => {
                halton::columns(n, first, count, self.start_index, Some(self.seed))
            }
            GeneratorId::Sobol => sobol::columns(n, first, count, self.start_index),
            GeneratorId::HuaWang => hua_wang::columns(n, first, count, self.start_index),
            GeneratorId::Uniform => uniform::columns(n, first, count, self.seed),
            GeneratorId::External => unreachable!("external sets are never generated"),
        }
    }

    pub fn generate(&self, n: usize, d: usize) -> Result<PointSet> {
        self.check_dim(d)?;
        Ok(PointSet {
            points: self.columns(n, 0, d),
            generator: self.id,
            seed: self.seed,
            start_index: self.start_index,
        })
    }
}

/// An `N x D` sample matrix in `[0, 1)^D` with its provenance.
#[derive(Debug, Clone, PartialEq)]
pub struct PointSet {
    points: Array2<f64>,
    generator: GeneratorId,
    seed: u64,
    start_index: u64,
}

impl PointSet {
    /// Wraps an externally produced matrix after validating the range.
    pub fn external(points: Array2<f64>) -> Result<Self> {
        if let Some(((i, j), v)) = points
            .indexed_iter()
            .find(|(_, v)| !(0.0..1.0).contains(*v))
        {
            return Err(Error::invalid(format!(
                "coordinate ({i}, {j}) = {v} lies outside [0, 1)"
            )));
        }
        Ok(PointSet {
            points,
            generator: GeneratorId::External,
            seed: 0,
            start_index: 0,
        })
    }

    pub(crate) fn from_parts(
        points: Array2<f64>,
        generator: GeneratorId,
        seed: u64,
        start_index: u64,
    ) -> Self {
        PointSet {
            points,
            generator,
            seed,
            start_index,
        }
    }

    pub fn n(&self) -> usize {
        self.points.nrows()
    }

    pub fn dim(&self) -> usize {
        self.points.ncols()
    }

    pub fn points(&self) -> ArrayView2<'_, f64> {
        self.points.view()
    }

    pub fn into_points(self) -> Array2<f64> {
        self.points
    }

    pub fn generator(&self) -> GeneratorId {
        self.generator
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn start_index(&self) -> u64 {
        self.start_index
    }
}
