use ndarray::Array2;

use super::{primes::nth_prime, Generator, GeneratorId, PointSet};
use crate::error::Result;

// Square-root good-point set: x_ij = frac(i * frac(sqrt(p_j))).
pub(super) fn columns(n: usize, first: usize, count: usize, start_index: u64) -> Array2<f64> {
    let mut out = Array2::zeros((n, count));
    for (c, mut col) in out.columns_mut().into_iter().enumerate() {
        let gamma = (nth_prime(first + c) as f64).sqrt().fract();
        for (i, x) in col.iter_mut().enumerate() {
            *x = ((start_index + i as u64) as f64 * gamma).fract();
        }
    }
    out
}

/// Hua-Wang good points `frac(i * frac(sqrt(p_j)))` for `i` in
/// `start_index .. start_index + n` and the first `d` primes `p_j`.
pub fn generate_hua_wang(n: usize, d: usize, start_index: u64) -> Result<PointSet> {
    Generator::new(GeneratorId::HuaWang, 0)
        .with_start_index(start_index)
        .generate(n, d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn square_root_two() {
        let ps = generate_hua_wang(2, 1, 1).unwrap();
        assert_abs_diff_eq!(ps.points()[[0, 0]], 0.41421356237309515, epsilon = 1e-12);
        assert_abs_diff_eq!(ps.points()[[1, 0]], 0.8284271247461903, epsilon = 1e-12);
    }

    #[test]
    fn range() {
        let ps = generate_hua_wang(500, 30, 1).unwrap();
        assert!(ps.points().iter().all(|x| (0.0..1.0).contains(x)));
    }
}
