use ndarray::Array2;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{primes::nth_prime, Generator, GeneratorId, PointSet};
use crate::error::{Error, Result};
use crate::stream::random_permutation;

/// Digit-reversed radical inverse of `index` in `base`, with an optional
/// digit permutation applied to every digit.
///
/// The permutation must be a bijection on `0..base` that fixes 0, so the
/// expansion of a finite index stays finite.
pub fn radical_inverse(index: u64, base: u32, digit_permutation: Option<&[u32]>) -> Result<f64> {
    if base < 2 {
        return Err(Error::invalid(format!("radical inverse base must be >= 2, got {base}")));
    }
    if let Some(perm) = digit_permutation {
        validate_permutation(perm, base)?;
    }
    Ok(radical_inverse_unchecked(index, base, digit_permutation))
}

fn validate_permutation(perm: &[u32], base: u32) -> Result<()> {
    if perm.len() != base as usize {
        return Err(Error::invalid(format!(
            "digit permutation has length {}, expected {base}",
            perm.len()
        )));
    }
    if perm[0] != 0 {
        return Err(Error::invalid("digit permutation must fix 0"));
    }
    let mut seen = vec![false; perm.len()];
    for &d in perm {
        if d >= base || std::mem::replace(&mut seen[d as usize], true) {
            return Err(Error::invalid("digit permutation is not a bijection"));
        }
    }
    Ok(())
}

pub(crate) fn radical_inverse_unchecked(mut index: u64, base: u32, perm: Option<&[u32]>) -> f64 {
    let b = base as u64;
    let inv_base = 1.0 / base as f64;
    let mut scale = inv_base;
    let mut value = 0.0;
    while index > 0 {
        let digit = (index % b) as usize;
        let digit = perm.map_or(digit as u32, |p| p[digit]);
        value += digit as f64 * scale;
        scale *= inv_base;
        index /= b;
    }
    value
}

/// Seeded digit permutation for the `dim`-th Halton base: a uniform random
/// permutation of the nonzero digits, with 0 fixed.
pub fn halton_digit_permutation(seed: u64, dim: usize) -> Vec<u32> {
    let base = nth_prime(dim);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(dim as u64);
    let mut perm = Vec::with_capacity(base as usize);
    perm.push(0);
    perm.extend(
        random_permutation(base as usize - 1, &mut rng)
            .into_iter()
            .map(|d| d as u32 + 1),
    );
    perm
}

pub(super) fn columns(
    n: usize,
    first: usize,
    count: usize,
    start_index: u64,
    scramble_seed: Option<u64>,
) -> Array2<f64> {
    let mut out = Array2::zeros((n, count));
    for (c, mut col) in out.columns_mut().into_iter().enumerate() {
        let dim = first + c;
        let base = nth_prime(dim);
        let perm = scramble_seed.map(|s| halton_digit_permutation(s, dim));
        for (i, x) in col.iter_mut().enumerate() {
            *x = radical_inverse_unchecked(start_index + i as u64, base, perm.as_deref());
        }
    }
    out
}

/// Halton points `start_index .. start_index + n` in the first `d` prime
/// bases; scrambled with seeded digit permutations when `scramble_seed` is
/// given.
pub fn generate_halton(
    n: usize,
    d: usize,
    scramble_seed: Option<u64>,
    start_index: u64,
) -> Result<PointSet> {
    let (id, seed) = match scramble_seed {
        Some(s) => (GeneratorId::ScrambledHalton, s),
        None => (GeneratorId::Halton, 0),
    };
    Generator::new(id, seed)
        .with_start_index(start_index)
        .generate(n, d)
}

/// Halton points with caller-supplied digit permutations, one per dimension.
pub fn generate_halton_with_permutations(
    n: usize,
    permutations: &[Vec<u32>],
    start_index: u64,
) -> Result<PointSet> {
    let d = permutations.len();
    Generator::new(GeneratorId::ScrambledHalton, 0).check_dim(d)?;
    for (j, perm) in permutations.iter().enumerate() {
        validate_permutation(perm, nth_prime(j))?;
    }
    let mut out = Array2::zeros((n, d));
    for ((i, j), x) in out.indexed_iter_mut() {
        *x = radical_inverse_unchecked(start_index + i as u64, nth_prime(j), Some(&permutations[j]));
    }
    Ok(PointSet::from_parts(out, GeneratorId::ScrambledHalton, 0, start_index))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn radical_inverse_examples() {
        assert_eq!(radical_inverse(0, 2, None).unwrap(), 0.0);
        assert_eq!(radical_inverse(3, 2, None).unwrap(), 0.75);
        assert_abs_diff_eq!(radical_inverse(5, 3, None).unwrap(), 7.0 / 9.0, epsilon = 1e-15);
        let identity = [0, 1, 2];
        assert_abs_diff_eq!(
            radical_inverse(5, 3, Some(&identity)).unwrap(),
            7.0 / 9.0,
            epsilon = 1e-15
        );
    }

    #[test]
    fn radical_inverse_rejects_bad_input() {
        assert!(matches!(radical_inverse(1, 1, None), Err(Error::InvalidArgument(_))));
        assert!(radical_inverse(1, 3, Some(&[1, 0, 2])).is_err());
        assert!(radical_inverse(1, 3, Some(&[0, 1, 1])).is_err());
        assert!(radical_inverse(1, 3, Some(&[0, 1])).is_err());
    }

    #[test]
    fn permuted_digits() {
        // 5 = 12 in base 3; digits swapped 1 <-> 2 gives 0.12 = 1/3 + 2/9.
        let swap = [0, 2, 1];
        assert_abs_diff_eq!(
            radical_inverse(5, 3, Some(&swap)).unwrap(),
            1.0 / 3.0 + 2.0 / 9.0,
            epsilon = 1e-15
        );
    }

    #[test]
    fn unscrambled_rows() {
        let ps = generate_halton(3, 2, None, 1).unwrap();
        let expected = [[0.5, 1.0 / 3.0], [0.25, 2.0 / 3.0], [0.75, 1.0 / 9.0]];
        for (i, row) in expected.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                assert_abs_diff_eq!(ps.points()[[i, j]], v, epsilon = 1e-15);
            }
        }
        assert_eq!(ps.generator(), GeneratorId::Halton);
    }

    #[test]
    fn identity_permutations_reproduce_plain_halton() {
        let perms: Vec<Vec<u32>> = (0..5).map(|j| (0..nth_prime(j)).collect()).collect();
        let scrambled = generate_halton_with_permutations(50, &perms, 1).unwrap();
        let plain = generate_halton(50, 5, None, 1).unwrap();
        assert_eq!(scrambled.points(), plain.points());
    }

    #[test]
    fn digit_permutations_fix_zero() {
        for dim in [0, 1, 7, 100] {
            let p = halton_digit_permutation(42, dim);
            assert_eq!(p[0], 0);
            validate_permutation(&p, nth_prime(dim)).unwrap();
        }
        assert_ne!(halton_digit_permutation(1, 20), halton_digit_permutation(2, 20));
    }

    #[test]
    fn dimension_limit() {
        let err = generate_halton(4, 2001, None, 1).unwrap_err();
        assert!(err.to_string().contains("2000"), "{err}");
        assert!(generate_halton(4, 2000, Some(3), 1).is_ok());
    }
}
