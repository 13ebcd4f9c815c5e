use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_integer::Integer;

use crate::error::{Error, Result};

#[inline]
pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Witnesses that make Miller-Rabin deterministic for every n < 2^64.
const MR_WITNESSES_U64: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
const MR_ROUNDS_WIDE: usize = 64;

fn strong_probable_prime(n: u64, d: u64, r: u32, a: u64) -> bool {
    let mut x = pow_mod(a, d, n);
    if x == 1 || x == n - 1 {
        return true;
    }
    for _ in 1..r {
        x = mul_mod(x, x, n);
        if x == n - 1 {
            return true;
        }
    }
    false
}

fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &p in &MR_WITNESSES_U64 {
        if n % p == 0 {
            return n == p;
        }
    }
    let r = (n - 1).trailing_zeros();
    let d = (n - 1) >> r;
    MR_WITNESSES_U64
        .iter()
        .all(|&a| strong_probable_prime(n, d, r, a))
}

/// Primality test. Deterministic below 2^64; above that, 64 Miller-Rabin rounds
/// with the first 64 primes as bases (error below 2^-128).
pub fn is_prime(n: u128) -> bool {
    if let Ok(small) = u64::try_from(n) {
        return is_prime_u64(small);
    }
    if n % 2 == 0 {
        return false;
    }
    let big = BigUint::from(n);
    let one = BigUint::from(1u32);
    let minus_one = &big - &one;
    let r = (n - 1).trailing_zeros();
    let d = BigUint::from((n - 1) >> r);
    let bases = (2u64..).filter(|&b| is_prime_u64(b)).take(MR_ROUNDS_WIDE);
    'bases: for a in bases {
        let mut x = BigUint::from(a).modpow(&d, &big);
        if x == one || x == minus_one {
            continue;
        }
        for _ in 1..r {
            x = (&x * &x) % &big;
            if x == minus_one {
                continue 'bases;
            }
        }
        return false;
    }
    true
}

/// Knobs for [`factor_u64`]. Inputs stay at desk scale, so trial division does
/// most of the work and rho only ever meets products of two large primes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FactorConfig {
    /// Largest |n| accepted.
    pub bound: u64,
    pub trial_limit: u64,
    /// Iterations per rho attempt.
    pub rho_iterations: u64,
    /// Number of polynomial constants x^2 + c tried, c = 1, 2, ...
    pub rho_attempts: u64,
}

impl Default for FactorConfig {
    fn default() -> Self {
        FactorConfig {
            bound: 1_000_000_000_000,
            trial_limit: 100_000,
            rho_iterations: 1 << 20,
            rho_attempts: 32,
        }
    }
}

/// Brent's variant of Pollard rho on x -> x^2 + c, started at x0 = 2.
fn rho_brent(n: u64, c: u64, budget: u64) -> Option<u64> {
    const BATCH: u64 = 128;
    let step = |x: u64| (mul_mod(x, x, n) + c) % n;
    let (mut y, mut r, mut q) = (2u64, 1u64, 1u64);
    let mut spent = 0u64;
    let mut x;
    let mut ys;
    loop {
        x = y;
        for _ in 0..r {
            y = step(y);
        }
        let mut k = 0;
        loop {
            ys = y;
            let m = BATCH.min(r - k);
            for _ in 0..m {
                y = step(y);
                q = mul_mod(q, x.abs_diff(y), n);
            }
            let g = q.gcd(&n);
            k += m;
            spent += m;
            if g != 1 {
                if g != n {
                    return Some(g);
                }
                // Batch overshot: replay one step at a time from the saved point.
                loop {
                    ys = step(ys);
                    let g = x.abs_diff(ys).gcd(&n);
                    if g != 1 {
                        return (g != n).then_some(g);
                    }
                }
            }
            if k >= r || spent >= budget {
                break;
            }
        }
        if spent >= budget {
            return None;
        }
        r *= 2;
    }
}

fn split_cofactor(n: u64, cfg: &FactorConfig, out: &mut BTreeMap<u64, u32>) -> Result<()> {
    if n == 1 {
        return Ok(());
    }
    if is_prime_u64(n) {
        *out.entry(n).or_insert(0) += 1;
        return Ok(());
    }
    let root = n.isqrt();
    if root * root == n {
        split_cofactor(root, cfg, out)?;
        return split_cofactor(root, cfg, out);
    }
    for c in 1..=cfg.rho_attempts {
        if let Some(d) = rho_brent(n, c, cfg.rho_iterations) {
            split_cofactor(d, cfg, out)?;
            return split_cofactor(n / d, cfg, out);
        }
    }
    Err(Error::FactorizationIncomplete(n))
}

/// Complete factorization of a positive integer: prime -> exponent.
pub fn factor_u64(n: u64, cfg: &FactorConfig) -> Result<BTreeMap<u64, u32>> {
    if n == 0 {
        return Err(Error::ZeroInput);
    }
    if n > cfg.bound {
        return Err(Error::OutOfRange {
            value: n as i128,
            bound: cfg.bound,
        });
    }
    let mut out = BTreeMap::new();
    let mut m = n;
    let mut push = |p: u64, m: &mut u64| {
        let mut e = 0;
        while *m % p == 0 {
            *m /= p;
            e += 1;
        }
        if e > 0 {
            out.insert(p, e);
        }
    };
    push(2, &mut m);
    let mut p = 3;
    while p <= cfg.trial_limit && p * p <= m {
        push(p, &mut m);
        p += 2;
    }
    if m > 1 && m < p * p {
        out.insert(m, 1);
        m = 1;
    }
    split_cofactor(m, cfg, &mut out)?;
    Ok(out)
}

/// Distinct prime divisors of a nonzero integer, ascending.
pub fn prime_divisors(n: i128) -> Result<Vec<u64>> {
    let m = u64::try_from(n.unsigned_abs()).map_err(|_| Error::Overflow("prime_divisors"))?;
    let cfg = FactorConfig {
        bound: u64::MAX,
        ..FactorConfig::default()
    };
    Ok(factor_u64(m, &cfg)?.into_keys().collect())
}

/// p-adic valuation of a nonzero integer.
pub fn valuation(mut n: i128, p: u64) -> u32 {
    debug_assert!(n != 0);
    let p = p as i128;
    let mut v = 0;
    while n % p == 0 {
        n /= p;
        v += 1;
    }
    v
}

/// Odd primes below `limit`.
pub fn primes_below(limit: u64) -> Vec<u64> {
    let n = limit as usize;
    if n < 3 {
        return Vec::new();
    }
    let mut composite = vec![false; n];
    let mut out = vec![2];
    let mut i = 3;
    while i < n {
        if !composite[i] {
            out.push(i as u64);
            let mut j = i * i;
            while j < n {
                composite[j] = true;
                j += 2 * i;
            }
        }
        i += 2;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lucas_lehmer(p: u32) -> bool {
        let m: u128 = (1u128 << p) - 1;
        let mut s: u128 = 4;
        for _ in 0..p - 2 {
            let sq = BigUint::from(s) * BigUint::from(s);
            let r = (sq + BigUint::from(m) - BigUint::from(2u32)) % BigUint::from(m);
            s = r.try_into().unwrap();
        }
        s == 0
    }

    #[test]
    fn small_cases() {
        assert!(!is_prime(0));
        assert!(!is_prime(1));
        assert!(is_prime(2));
        assert!(is_prime(17));
        assert!(!is_prime(561));
        assert!(!is_prime(3_215_031_751));
    }

    #[test]
    fn mersenne_61() {
        let m = (1u128 << 61) - 1;
        assert!(lucas_lehmer(61));
        assert!((3..1_000_000u128).step_by(2).all(|d| m % d != 0));
        assert!(is_prime(m));
        assert!(!is_prime((1u128 << 59) - 1));
    }

    #[test]
    fn wide_primality() {
        // 2^89 - 1 and 2^107 - 1 are Mersenne primes; 2^67 - 1 is not.
        assert!(is_prime((1u128 << 89) - 1));
        assert!(is_prime((1u128 << 107) - 1));
        assert!(!is_prime((1u128 << 67) - 1));
        assert!(!is_prime(((1u128 << 61) - 1) * 1_000_003));
    }

    #[test]
    fn agrees_with_sieve() {
        let sieve = primes_below(100_000);
        let by_test: Vec<u64> = (0..100_000u64).filter(|&n| is_prime(n as u128)).collect();
        assert_eq!(sieve, by_test);
    }

    #[test]
    fn factor_examples() {
        let cfg = FactorConfig::default();
        assert_eq!(factor_u64(33, &cfg).unwrap(), BTreeMap::from([(3, 1), (11, 1)]));
        assert_eq!(factor_u64(1_000_003, &cfg).unwrap(), BTreeMap::from([(1_000_003, 1)]));
        let semiprime = 999_983u64 * 1_000_003;
        assert_eq!(
            factor_u64(semiprime, &cfg).unwrap(),
            BTreeMap::from([(999_983, 1), (1_000_003, 1)])
        );
        let square = 999_983u64 * 999_983;
        assert_eq!(factor_u64(square, &cfg).unwrap(), BTreeMap::from([(999_983, 2)]));
        assert_eq!(factor_u64(0, &cfg), Err(Error::ZeroInput));
        assert!(matches!(
            factor_u64(cfg.bound + 1, &cfg),
            Err(Error::OutOfRange { .. })
        ));
    }

    #[test]
    fn starved_rho_reports_incomplete() {
        let cfg = FactorConfig {
            trial_limit: 10,
            rho_iterations: 1,
            rho_attempts: 1,
            ..FactorConfig::default()
        };
        let n = 999_983u64 * 1_000_003;
        assert_eq!(factor_u64(n, &cfg), Err(Error::FactorizationIncomplete(n)));
    }
}
