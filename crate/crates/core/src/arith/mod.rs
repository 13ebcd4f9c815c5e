//! Exact integer arithmetic: primality, factorization, residue symbols,
//! modular roots and sums of two squares.

mod primes;
mod profile;
mod residues;
mod squares;

pub use primes::{
    factor_u64, is_prime, mul_mod, pow_mod, prime_divisors, primes_below, valuation, FactorConfig,
};
pub use profile::{classify, factorize, factorize_with, DClass, Family, FactorProfile};
pub use residues::{
    jacobi, poly_has_root_mod, power_residue_solvable, quartic_roots_mod, reduce, sqrt_mod,
    SCAN_LIMIT,
};
pub(crate) use residues::legendre;
pub use squares::{cornacchia, cornacchia_two_squares};

/// Exact integer square root of a nonnegative i128, if it is a perfect square.
pub fn exact_sqrt(n: i128) -> Option<i128> {
    if n < 0 {
        return None;
    }
    let r = n.isqrt();
    (r * r == n).then_some(r)
}
