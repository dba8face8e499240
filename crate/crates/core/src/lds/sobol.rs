use std::sync::OnceLock;

use ndarray::Array2;

use super::sobol_table::{SOBOL_DIMENSIONS, SOBOL_TABLE};
use super::{Generator, GeneratorId, PointSet};
use crate::error::Result;

/// Dimensions covered by the embedded direction-number table.
pub const MAX_SOBOL_DIMENSIONS: usize = SOBOL_DIMENSIONS;

const BITS: usize = 32;
const SCALE: f64 = 1.0 / (1u64 << BITS) as f64;

type Directions = [u32; BITS];

fn directions() -> &'static [Directions] {
    static DIRECTIONS: OnceLock<Vec<Directions>> = OnceLock::new();
    DIRECTIONS.get_or_init(|| SOBOL_TABLE.iter().map(|&(poly, m)| expand(poly, m)).collect())
}

/// Direction integers `v_1..v_32`, `v[k]` handling bit `k` of the index.
fn expand(poly: u32, m: &[u32]) -> Directions {
    let mut v = [0u32; BITS];
    let degree = (32 - poly.leading_zeros()).saturating_sub(1) as usize;
    if degree == 0 {
        for (k, vk) in v.iter_mut().enumerate() {
            *vk = 1 << (BITS - 1 - k);
        }
        return v;
    }
    for k in 0..degree {
        v[k] = m[k] << (BITS - 1 - k);
    }
    let interior = (poly >> 1) & ((1 << (degree - 1)) - 1);
    for k in degree..BITS {
        let mut next = v[k - degree] ^ (v[k - degree] >> degree);
        for l in 1..degree {
            if (interior >> (degree - 1 - l)) & 1 == 1 {
                next ^= v[k - l];
            }
        }
        v[k] = next;
    }
    v
}

fn point(dirs: &Directions, index: u64) -> f64 {
    let mut x = 0u32;
    let mut rest = index;
    let mut bit = 0;
    while rest > 0 {
        if rest & 1 == 1 {
            x ^= dirs[bit];
        }
        rest >>= 1;
        bit += 1;
    }
    x as f64 * SCALE
}

pub(super) fn columns(n: usize, first: usize, count: usize, start_index: u64) -> Array2<f64> {
    assert!(
        start_index + n as u64 <= 1 << BITS,
        "Sobol' indices are limited to 2^32"
    );
    let dirs = directions();
    let mut out = Array2::zeros((n, count));
    for ((i, c), x) in out.indexed_iter_mut() {
        *x = point(&dirs[first + c], start_index + i as u64);
    }
    out
}

/// Unscrambled Sobol' points in natural (not Gray-code) order, indices
/// `start_index .. start_index + n`.
pub fn generate_sobol(n: usize, d: usize, start_index: u64) -> Result<PointSet> {
    if start_index + n as u64 > 1 << BITS {
        return Err(crate::Error::invalid("Sobol' indices are limited to 2^32"));
    }
    Generator::new(GeneratorId::Sobol, 0)
        .with_start_index(start_index)
        .generate(n, d)
}
