//! Low-discrepancy sampling in the expanded dimensional space (LDSEDS) for
//! particle swarm optimizers.
//!
//! Every random number a PSO or CLPSO run consumes is laid out as one sample
//! set in a high-dimensional unit cube. Filling that set with a
//! low-discrepancy construction instead of independent uniforms lowers its
//! dispersion, which tightens the per-iteration error bound of the swarm.
//!
//! The crate is split along the pipeline:
//!
//! * [`lds`]: point-set generators (Halton, scrambled Halton, Sobol',
//!   Hua-Wang good points, uniform) and dispersion estimators.
//! * [`stream`]: the expanded-dimensional sample set, served to the engines
//!   as role-addressed `N x D` blocks.
//! * [`swarm`]: PSO and CLPSO engines driven entirely by a stream.
//! * [`objectives`]: shifted/rotated/hybrid/composition benchmark functions.
//! * [`stats`]: convergence speed, tied ranks, modified Friedman test,
//!   F critical values and the Nemenyi critical difference.
//! * [`harness`]: declarative experiments, seed fan-out, persistence and
//!   report rendering.

pub mod error;
pub mod harness;
pub mod lds;
pub mod objectives;
pub mod stats;
pub mod stream;
pub mod swarm;

pub use error::{Error, Result};
