use ndarray::ArrayView2;
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::uniform::unit_from_bits;
use crate::error::{Error, Result};

/// Covering radius `sup_x min_i |x - p_i|` of a point set in the unit cube,
/// exact or estimated from a finite probe set.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DispersionEstimate {
    pub value: f64,
    pub probe_count: usize,
    pub probe_seed: u64,
    pub exact: bool,
    /// Probes were polished by local ascent (see [`dispersion_refined`]).
    #[serde(default)]
    pub refined: bool,
}

/// Exact dispersion of a set on `[0, 1]`: the larger of the two boundary
/// gaps and half the widest interior gap.
pub fn dispersion_exact_1d(points: &[f64]) -> Result<DispersionEstimate> {
    if points.is_empty() {
        return Err(Error::invalid("dispersion of an empty point set"));
    }
    let mut sorted = points.to_vec();
    sorted.sort_by(f64::total_cmp);
    let left = sorted[0];
    let right = 1.0 - sorted[sorted.len() - 1];
    let half_gap = sorted
        .windows(2)
        .map(|w| 0.5 * (w[1] - w[0]))
        .fold(0.0, f64::max);
    Ok(DispersionEstimate {
        value: left.max(right).max(half_gap),
        probe_count: 0,
        probe_seed: 0,
        exact: true,
        refined: false,
    })
}

const PROBE_CHUNK: usize = 1024;

/// Monte Carlo lower estimate of the dispersion: the largest nearest-point
/// distance over `probe_count` seeded uniform probes.
///
/// Probes depend only on `(probe_seed, dimension)`, so two point sets of the
/// same dimension are always measured against the same probes.
pub fn dispersion_mc(
    points: ArrayView2<'_, f64>,
    probe_count: usize,
    probe_seed: u64,
) -> Result<DispersionEstimate> {
    if probe_count == 0 {
        return Err(Error::invalid("probe_count must be at least 1"));
    }
    if points.nrows() == 0 {
        return Err(Error::invalid("dispersion of an empty point set"));
    }
    let d = points.ncols();
    if d == 0 {
        return Err(Error::invalid("dispersion of a zero-dimensional point set"));
    }
    let contiguous = points.as_standard_layout();
    let flat = contiguous.as_slice().expect("standard layout");
    let rows: Vec<&[f64]> = flat.chunks_exact(d).collect();

    let chunks = probe_count.div_ceil(PROBE_CHUNK);
    let max_sq = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = ChaCha8Rng::seed_from_u64(probe_seed);
            rng.set_stream(c as u64);
            let count = PROBE_CHUNK.min(probe_count - c * PROBE_CHUNK);
            let mut probe = vec![0.0; d];
            let mut best = 0.0f64;
            for _ in 0..count {
                for x in probe.iter_mut() {
                    *x = unit_from_bits(rng.next_u64());
                }
                let mut nearest = f64::INFINITY;
                for row in &rows {
                    let dist: f64 = row
                        .iter()
                        .zip(&probe)
                        .map(|(a, b)| (a - b) * (a - b))
                        .sum();
                    if dist < nearest {
                        nearest = dist;
                        // This probe can no longer raise the maximum.
                        if nearest <= best {
                            break;
                        }
                    }
                }
                best = best.max(nearest);
            }
            best
        })
        .reduce(|| 0.0, f64::max);

    Ok(DispersionEstimate {
        value: max_sq.sqrt(),
        probe_count,
        probe_seed,
        exact: false,
        refined: false,
    })
}

fn nearest_sq(rows: &[&[f64]], y: &[f64]) -> (f64, usize) {
    let mut best = (f64::INFINITY, 0);
    for (k, row) in rows.iter().enumerate() {
        let dist: f64 = row.iter().zip(y).map(|(a, b)| (a - b) * (a - b)).sum();
        if dist < best.0 {
            best = (dist, k);
        }
    }
    best
}

/// Projected ascent of `y -> min_i |y - p_i|` inside the cube; returns the
/// best squared distance seen.
fn ascend(rows: &[&[f64]], mut y: Vec<f64>) -> f64 {
    let (mut best, _) = nearest_sq(rows, &y);
    let mut step = 0.05;
    for _ in 0..ASCENT_STEPS {
        let (dist, k) = nearest_sq(rows, &y);
        best = best.max(dist);
        let norm = dist.sqrt();
        if norm == 0.0 {
            break;
        }
        for (yj, pj) in y.iter_mut().zip(rows[k]) {
            *yj = (*yj + step * (*yj - pj) / norm).clamp(0.0, 1.0);
        }
        step *= 0.98;
    }
    best.max(nearest_sq(rows, &y).0)
}

const ASCENT_STEPS: usize = 200;
const ASCENT_STARTS: usize = 32;
/// Cube vertices are added as probes up to this dimension.
pub const MAX_VERTEX_DIM: usize = 16;

/// Sharper lower estimate than [`dispersion_mc`] in moderate dimension.
///
/// Candidates are the same seeded probes plus, for `d <= 16`, every vertex
/// of the cube (in higher dimension the farthest points cluster at the
/// vertices, which uniform probes almost never reach). The best candidates of
/// each kind are then pushed uphill on the nearest-point distance. Every
/// evaluated location is a point of the cube, so the result never exceeds
/// the true dispersion and never falls below `dispersion_mc` with the same
/// probes.
pub fn dispersion_refined(
    points: ArrayView2<'_, f64>,
    probe_count: usize,
    probe_seed: u64,
) -> Result<DispersionEstimate> {
    let base = dispersion_mc(points, probe_count, probe_seed)?;
    let d = points.ncols();
    let contiguous = points.as_standard_layout();
    let flat = contiguous.as_slice().expect("standard layout");
    let rows: Vec<&[f64]> = flat.chunks_exact(d).collect();

    let top = |scored: Vec<(f64, Vec<f64>)>| -> Vec<Vec<f64>> {
        let mut scored = scored;
        scored.sort_by(|a, b| b.0.total_cmp(&a.0));
        scored.into_iter().take(ASCENT_STARTS).map(|s| s.1).collect()
    };

    let mut starts = Vec::new();
    // Re-draw the probes exactly as dispersion_mc does.
    let chunks = probe_count.div_ceil(PROBE_CHUNK);
    let probes: Vec<(f64, Vec<f64>)> = (0..chunks)
        .into_par_iter()
        .flat_map_iter(|c| {
            let mut rng = ChaCha8Rng::seed_from_u64(probe_seed);
            rng.set_stream(c as u64);
            let count = PROBE_CHUNK.min(probe_count - c * PROBE_CHUNK);
            let rows = &rows;
            (0..count)
                .map(move |_| {
                    let y: Vec<f64> = (0..d).map(|_| unit_from_bits(rng.next_u64())).collect();
                    (nearest_sq(rows, &y).0, y)
                })
                .collect::<Vec<_>>()
        })
        .collect();
    starts.extend(top(probes));
    let mut best_sq = base.value * base.value;
    if d <= MAX_VERTEX_DIM {
        let vertices: Vec<(f64, Vec<f64>)> = (0u64..1 << d)
            .into_par_iter()
            .map(|mask| {
                let y: Vec<f64> = (0..d).map(|j| ((mask >> j) & 1) as f64).collect();
                (nearest_sq(&rows, &y).0, y)
            })
            .collect();
        best_sq = vertices.iter().map(|v| v.0).fold(best_sq, f64::max);
        starts.extend(top(vertices));
    }
    best_sq = starts
        .into_par_iter()
        .map(|y| ascend(&rows, y))
        .reduce(|| 0.0, f64::max)
        .max(best_sq);

    Ok(DispersionEstimate {
        value: best_sq.sqrt(),
        probe_count,
        probe_seed,
        exact: false,
        refined: true,
    })
}
