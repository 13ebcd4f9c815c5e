//! Representations by x^2 + d y^2 via Cornacchia's algorithm.

use num_integer::Integer;

use super::primes::{factor_u64, is_prime, FactorConfig};
use super::residues::sqrt_mod;

fn inv_mod(a: u128, m: u128) -> Option<u128> {
    let g = (a as i128).extended_gcd(&(m as i128));
    (g.gcd == 1).then(|| g.x.rem_euclid(m as i128) as u128)
}

/// All t in [0, m) with t^2 = -1 (mod m), or empty when none exist.
fn sqrts_of_minus_one(m: u64) -> Vec<u64> {
    let factors = match factor_u64(m, &FactorConfig { bound: u64::MAX, ..Default::default() }) {
        Ok(f) => f,
        Err(_) => return Vec::new(),
    };
    let mut roots: Vec<u128> = vec![0];
    let mut modulus: u128 = 1;
    for (&p, &e) in &factors {
        let pe = (p as u128).pow(e);
        let local: Vec<u128> = if p == 2 {
            if e > 1 {
                return Vec::new();
            }
            vec![1]
        } else {
            if p % 4 != 1 {
                return Vec::new();
            }
            let mut t = sqrt_mod(-1, p).ok().flatten().unwrap() as u128;
            let mut pk = p as u128;
            for _ in 1..e {
                pk *= p as u128;
                // t <- t - (t^2 + 1) / (2t)  (mod p^k)
                let f = (t * t + 1) % pk;
                let inv = inv_mod((2 * t) % pk, pk).unwrap();
                t = (t + pk - (f * inv) % pk) % pk;
            }
            vec![t, pe - t]
        };
        // CRT merge.
        let inv = inv_mod(modulus % pe, pe).unwrap_or(0);
        let mut merged = Vec::with_capacity(roots.len() * local.len());
        for &r in &roots {
            for &l in &local {
                let k = ((l + pe - r % pe) % pe) * inv % pe;
                merged.push(r + modulus * k);
            }
        }
        modulus *= pe;
        roots = merged;
    }
    let mut out: Vec<u64> = roots.into_iter().map(|r| (r % modulus) as u64).collect();
    out.sort_unstable();
    out.dedup();
    out
}

/// Primitive decomposition m = r^2 + s^2 with r >= s > 0 and gcd(r, s) = 1.
///
/// When m has several primitive decompositions the one with the largest `r`
/// is returned. For m = 2l with l an odd prime both components are odd.
pub fn cornacchia_two_squares(m: u64) -> Option<(u64, u64)> {
    if m < 2 {
        return None;
    }
    let mut best: Option<(u64, u64)> = None;
    for t in sqrts_of_minus_one(m) {
        if t > m / 2 {
            continue;
        }
        let (mut a, mut b) = (m, t);
        while (b as u128) * (b as u128) > m as u128 {
            (a, b) = (b, a % b);
        }
        let rest = m - b * b;
        let c = rest.isqrt();
        if c * c == rest && c > 0 && b > 0 && b.gcd(&c) == 1 {
            let pair = (b.max(c), b.min(c));
            if best.map_or(true, |cur| pair.0 > cur.0) {
                best = Some(pair);
            }
        }
    }
    best
}

/// Solve x^2 + d y^2 = p for a prime p not dividing d, returning x, y >= 0.
pub fn cornacchia(d: u64, p: u64) -> Option<(u64, u64)> {
    if d == 0 || p < 2 || d % p == 0 || !is_prime(p as u128) {
        return None;
    }
    if p == 2 {
        return (d == 1).then_some((1, 1));
    }
    let mut r0 = sqrt_mod(-(d as i128), p).ok().flatten()?;
    if r0 == 0 {
        return None;
    }
    if r0 <= p / 2 {
        r0 = p - r0;
    }
    let (mut a, mut b) = (p, r0);
    let limit = p.isqrt();
    while b > limit {
        (a, b) = (b, a % b);
    }
    let rest = p - b * b;
    if rest % d != 0 {
        return None;
    }
    let y2 = rest / d;
    let y = y2.isqrt();
    (y * y == y2).then_some((b, y))
}
