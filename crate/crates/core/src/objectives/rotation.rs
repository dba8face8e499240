use ndarray::Array2;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

/// Seeded random orthogonal matrix: Gram-Schmidt QR of a Gaussian matrix,
/// columns signed so that `R` has a positive diagonal.
pub fn make_rotation(d: usize, seed: u64) -> Array2<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut q: Array2<f64> =
        Array2::from_shape_simple_fn((d, d), || StandardNormal.sample(&mut rng));
    for j in 0..d {
        // Two passes of modified Gram-Schmidt keep orthogonality at rounding level.
        for _ in 0..2 {
            for k in 0..j {
                let proj = q.column(j).dot(&q.column(k));
                let qk = q.column(k).to_owned();
                q.column_mut(j).scaled_add(-proj, &qk);
            }
        }
        let norm = q.column(j).dot(&q.column(j)).sqrt();
        q.column_mut(j).mapv_inplace(|v| v / norm);
    }
    q
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn max_gram_error(m: &Array2<f64>) -> f64 {
        let g = m.t().dot(m);
        g.indexed_iter()
            .map(|((i, j), &v)| (v - if i == j { 1.0 } else { 0.0 }).abs())
            .fold(0.0, f64::max)
    }

    #[test]
    fn one_dimension() {
        let m = make_rotation(1, 3);
        assert_eq!(m[[0, 0]].abs(), 1.0);
    }

    #[test]
    fn deterministic() {
        assert_eq!(make_rotation(7, 1), make_rotation(7, 1));
        assert_ne!(make_rotation(7, 1), make_rotation(7, 2));
    }

    proptest! {
        #[test]
        fn orthogonal(seed in any::<u64>(), d in 1usize..40) {
            let m = make_rotation(d, seed);
            prop_assert!(max_gram_error(&m) < 1e-10);
        }

        #[test]
        fn preserves_norm(seed in any::<u64>(), x in proptest::collection::vec(-100.0f64..100.0, 10)) {
            let m = make_rotation(10, seed);
            let v = ndarray::Array1::from(x);
            let rv = m.dot(&v);
            prop_assert!((rv.dot(&rv).sqrt() - v.dot(&v).sqrt()).abs() < 1e-9);
        }
    }
}
