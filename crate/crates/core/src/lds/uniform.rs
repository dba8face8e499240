use ndarray::Array2;
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Generator, GeneratorId, PointSet};

#[inline]
pub(crate) fn unit_from_bits(bits: u64) -> f64 {
    (bits >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

// Counter-based layout: row i reads ChaCha stream i, column j is the j-th
// 64-bit word of that stream. Any column range is addressable directly.
pub(super) fn columns(n: usize, first: usize, count: usize, seed: u64) -> Array2<f64> {
    let mut out = Array2::zeros((n, count));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for (i, mut row) in out.rows_mut().into_iter().enumerate() {
        rng.set_stream(i as u64);
        rng.set_word_pos(2 * first as u128);
        for x in row.iter_mut() {
            *x = unit_from_bits(rng.next_u64());
        }
    }
    out
}

/// `n x d` independent uniforms on `[0, 1)`, a pure function of `seed`.
pub fn random_uniform(n: usize, d: usize, seed: u64) -> PointSet {
    Generator::new(GeneratorId::Uniform, seed)
        .with_start_index(0)
        .generate(n, d)
        .expect("uniform generator has no dimension limit")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic_and_seed_sensitive() {
        let a = random_uniform(20, 7, 11);
        let b = random_uniform(20, 7, 11);
        let c = random_uniform(20, 7, 12);
        assert_eq!(a, b);
        assert_ne!(a.points(), c.points());
        assert!(a.points().iter().all(|x| (0.0..1.0).contains(x)));
    }

    #[test]
    fn column_slices_agree_with_full_matrix() {
        let full = columns(9, 0, 12, 5);
        let tail = columns(9, 7, 5, 5);
        assert_eq!(full.slice(ndarray::s![.., 7..]), tail);
    }
}
