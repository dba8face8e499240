use serde::{Deserialize, Serialize};

use super::config::SamplerSpec;
use crate::error::{Error, Result};
use crate::lds::{dispersion_mc, dispersion_refined, DispersionEstimate};
use crate::stream::{build_stream_combined, build_stream_direct, build_stream_random, Construction, SwarmMode};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DispersionRow {
    pub sampler: SamplerSpec,
    pub stream_seed: u64,
    pub permutation_seed: u64,
    /// Dimension of the flattened expanded set.
    pub total_dim: usize,
    pub estimate: DispersionEstimate,
}

/// Monte Carlo dispersion of each sampler's flattened `N x (blocks * D)`
/// expanded set with horizon `g`, all sharing one probe set. With `refine`
/// the probes are polished by [`dispersion_refined`].
#[allow(clippy::too_many_arguments)]
pub fn dispersion_report(
    samplers: &[SamplerSpec],
    n: usize,
    d: usize,
    g: usize,
    mode: SwarmMode,
    probe_count: usize,
    probe_seed: u64,
    stream_seed: u64,
    permutation_seed: u64,
    refine: bool,
) -> Result<Vec<DispersionRow>> {
    samplers
        .iter()
        .map(|s| {
            let stream = match s.construction {
                Construction::Random => build_stream_random(n, d, g, mode, stream_seed),
                Construction::DirectLds => {
                    let generator = s
                        .generator_with_seed(stream_seed)
                        .ok_or_else(|| Error::invalid("direct construction needs a generator"))?;
                    build_stream_direct(generator, n, d, g, mode)?
                }
                Construction::CombinedLds => {
                    let seed_set = match s.load_seed_set()? {
                        Some(set) => set,
                        None => s
                            .generator_with_seed(stream_seed)
                            .ok_or_else(|| Error::invalid("combined construction needs a generator"))?
                            .generate(n, d)?,
                    };
                    build_stream_combined(&seed_set, d, g, mode, permutation_seed)?
                }
            };
            let flat = stream.flatten();
            let estimate = if refine {
                dispersion_refined(flat.view(), probe_count, probe_seed)?
            } else {
                dispersion_mc(flat.view(), probe_count, probe_seed)?
            };
            Ok(DispersionRow {
                sampler: s.clone(),
                stream_seed,
                permutation_seed,
                total_dim: flat.ncols(),
                estimate,
            })
        })
        .collect()
}
