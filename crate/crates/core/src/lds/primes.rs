use std::sync::OnceLock;

/// Number of primes in the embedded table; one prime base per dimension.
pub const MAX_PRIME_DIMENSIONS: usize = 2000;

// The 2000th prime is 17389.
const SIEVE_LIMIT: usize = 17_390;

fn table() -> &'static [u32] {
    static PRIMES: OnceLock<Vec<u32>> = OnceLock::new();
    PRIMES.get_or_init(|| {
        let mut composite = vec![false; SIEVE_LIMIT];
        let mut primes = Vec::with_capacity(MAX_PRIME_DIMENSIONS);
        for p in 2..SIEVE_LIMIT {
            if composite[p] {
                continue;
            }
            primes.push(p as u32);
            let mut q = p * p;
            while q < SIEVE_LIMIT {
                composite[q] = true;
                q += p;
            }
        }
        primes.truncate(MAX_PRIME_DIMENSIONS);
        debug_assert_eq!(primes.len(), MAX_PRIME_DIMENSIONS);
        primes
    })
}

/// The `j`-th prime, zero-based (`nth_prime(0) == 2`).
///
/// # Panics
///
/// Panics when `j >= MAX_PRIME_DIMENSIONS`.
pub fn nth_prime(j: usize) -> u32 {
    table()[j]
}
