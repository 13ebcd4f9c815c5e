//! Residue symbols, modular square roots and root tests for polynomials mod p.

use num_integer::Integer;

use super::primes::{is_prime, mul_mod, pow_mod};
use crate::error::{Error, Result};

/// Reduce a signed integer into `[0, m)`.
#[inline]
pub fn reduce(a: i128, m: u64) -> u64 {
    a.rem_euclid(m as i128) as u64
}

/// Jacobi symbol (a/n) for odd n >= 1.
pub fn jacobi(a: i128, n: u64) -> Result<i8> {
    if n % 2 == 0 {
        return Err(Error::EvenModulus(n));
    }
    let mut a = reduce(a, n);
    let mut n = n;
    let mut sign = 1i8;
    while a != 0 {
        let tz = a.trailing_zeros();
        a >>= tz;
        if tz % 2 == 1 && matches!(n % 8, 3 | 5) {
            sign = -sign;
        }
        if a % 4 == 3 && n % 4 == 3 {
            sign = -sign;
        }
        std::mem::swap(&mut a, &mut n);
        a %= n;
    }
    Ok(if n == 1 { sign } else { 0 })
}

/// Legendre symbol, for callers that already know `p` is an odd prime.
pub(crate) fn legendre(a: i128, p: u64) -> i8 {
    jacobi(a, p).expect("odd prime modulus")
}

fn require_odd_prime(p: u64) -> Result<()> {
    if p % 2 == 0 || !is_prime(p as u128) {
        return Err(Error::CompositeModulus(p));
    }
    Ok(())
}

/// Square root of `a` modulo an odd prime (Tonelli-Shanks), normalised to
/// `0 <= r <= (p-1)/2`.
pub fn sqrt_mod(a: i128, p: u64) -> Result<Option<u64>> {
    require_odd_prime(p)?;
    let a = reduce(a, p);
    if a == 0 {
        return Ok(Some(0));
    }
    if legendre(a as i128, p) != 1 {
        return Ok(None);
    }
    let root = if p % 4 == 3 {
        pow_mod(a, (p + 1) / 4, p)
    } else {
        let s = (p - 1).trailing_zeros();
        let q = (p - 1) >> s;
        let z = (2..p).find(|&z| legendre(z as i128, p) == -1).unwrap();
        let mut m = s;
        let mut c = pow_mod(z, q, p);
        let mut t = pow_mod(a, q, p);
        let mut r = pow_mod(a, (q + 1) / 2, p);
        while t != 1 {
            let mut i = 0;
            let mut t2 = t;
            while t2 != 1 {
                t2 = mul_mod(t2, t2, p);
                i += 1;
            }
            let b = pow_mod(c, 1 << (m - i - 1), p);
            m = i;
            c = mul_mod(b, b, p);
            t = mul_mod(t, c, p);
            r = mul_mod(r, b, p);
        }
        r
    };
    Ok(Some(root.min(p - root)))
}

/// Whether x^k = a (mod p) has a solution, for p an odd prime not dividing a.
pub fn power_residue_solvable(a: i128, k: u64, p: u64) -> Result<bool> {
    require_odd_prime(p)?;
    if k == 0 {
        return Err(Error::BadInput("exponent must be positive".into()));
    }
    let a = reduce(a, p);
    if a == 0 {
        return Err(Error::BadInput(format!("{p} divides the residue")));
    }
    let g = k.gcd(&(p - 1));
    Ok(pow_mod(a, (p - 1) / g, p) == 1)
}

/// Horner evaluation of sum c_i x^i mod p.
fn eval_mod(coeffs: &[i64], x: u64, p: u64) -> u64 {
    coeffs
        .iter()
        .rev()
        .fold(0, |acc, &c| (mul_mod(acc, x, p) + reduce(c as i128, p)) % p)
}

/// Primes below this are scanned directly; above it the root test goes
/// through gcd(f, x^p - x).
pub const SCAN_LIMIT: u64 = 1_000_000;

/// Whether the quartic sum c_i x^i (coefficients ascending) has a root mod p.
pub fn quartic_roots_mod(coeffs: &[i64; 5], p: u64) -> Result<bool> {
    require_odd_prime(p)?;
    if p < SCAN_LIMIT {
        Ok((0..p).any(|x| eval_mod(coeffs, x, p) == 0))
    } else {
        Ok(poly_has_root_mod(coeffs, p))
    }
}

/// Dense polynomials over F_p, coefficients ascending, no trailing zeros.
mod fp_poly {
    use super::super::primes::{mul_mod, pow_mod};

    pub type Poly = Vec<u64>;

    pub fn trim(mut a: Poly) -> Poly {
        while a.last() == Some(&0) {
            a.pop();
        }
        a
    }

    pub fn rem(a: &[u64], b: &[u64], p: u64) -> Poly {
        let mut r = a.to_vec();
        let lead_inv = pow_mod(*b.last().unwrap(), p - 2, p);
        while r.len() >= b.len() {
            let top = *r.last().unwrap();
            if top != 0 {
                let factor = mul_mod(top, lead_inv, p);
                let shift = r.len() - b.len();
                for (i, &bi) in b.iter().enumerate() {
                    let sub = mul_mod(factor, bi, p);
                    r[shift + i] = (r[shift + i] + p - sub) % p;
                }
            }
            r.pop();
        }
        trim(r)
    }

    pub fn mul_rem(a: &[u64], b: &[u64], m: &[u64], p: u64) -> Poly {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![0u64; a.len() + b.len() - 1];
        for (i, &ai) in a.iter().enumerate() {
            if ai == 0 {
                continue;
            }
            for (j, &bj) in b.iter().enumerate() {
                out[i + j] = (out[i + j] + mul_mod(ai, bj, p)) % p;
            }
        }
        rem(&trim(out), m, p)
    }

    pub fn gcd(mut a: Poly, mut b: Poly, p: u64) -> Poly {
        while !b.is_empty() {
            let r = rem(&a, &b, p);
            a = b;
            b = r;
        }
        a
    }
}

/// Whether sum c_i x^i has a root mod the prime p, via deg gcd(f, x^p - x) > 0.
pub fn poly_has_root_mod(coeffs: &[i64], p: u64) -> bool {
    let f = fp_poly::trim(coeffs.iter().map(|&c| reduce(c as i128, p)).collect());
    match f.len() {
        0 => return true,
        1 => return false,
        _ => {}
    }
    if p == 2 {
        return eval_mod(coeffs, 0, 2) == 0 || eval_mod(coeffs, 1, 2) == 0;
    }
    // x^p mod f by square-and-multiply.
    let x = fp_poly::rem(&[0, 1], &f, p);
    let mut acc: fp_poly::Poly = fp_poly::rem(&[1], &f, p);
    let mut base = x.clone();
    let mut e = p;
    while e > 0 {
        if e & 1 == 1 {
            acc = fp_poly::mul_rem(&acc, &base, &f, p);
        }
        base = fp_poly::mul_rem(&base, &base, &f, p);
        e >>= 1;
    }
    // acc - x
    let mut diff = acc;
    if diff.len() < 2 {
        diff.resize(2, 0);
    }
    diff[1] = (diff[1] + p - 1) % p;
    let diff = fp_poly::trim(diff);
    if diff.is_empty() {
        return true;
    }
    fp_poly::gcd(f, diff, p).len() > 1
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::primes::primes_below;

    #[test]
    fn jacobi_examples() {
        assert_eq!(jacobi(2, 17), Ok(1));
        assert_eq!(jacobi(-1, 5), Ok(1));
        assert_eq!(jacobi(17, 3), Ok(-1));
        assert_eq!(jacobi(0, 1), Ok(1));
        assert_eq!(jacobi(6, 9), Ok(0));
        assert_eq!(jacobi(3, 4), Err(Error::EvenModulus(4)));
    }

    #[test]
    fn sqrt_examples() {
        assert_eq!(sqrt_mod(2, 17), Ok(Some(6)));
        assert_eq!(sqrt_mod(0, 7), Ok(Some(0)));
        assert_eq!(sqrt_mod(3, 7), Ok(None));
        assert_eq!(sqrt_mod(3, 15), Err(Error::CompositeModulus(15)));
    }

    #[test]
    fn power_residue_examples() {
        assert_eq!(power_residue_solvable(2, 4, 73), Ok(true));
        assert_eq!(power_residue_solvable(2, 4, 17), Ok(false));
        assert_eq!(power_residue_solvable(5, 1, 101), Ok(true));
        assert!(matches!(power_residue_solvable(17, 4, 17), Err(Error::BadInput(_))));
    }

    #[test]
    fn power_residue_matches_scan() {
        for &p in primes_below(500).iter().skip(1) {
            for k in 2..=4u64 {
                let mut hit = vec![false; p as usize];
                for x in 1..p {
                    hit[pow_mod(x, k, p) as usize] = true;
                }
                for a in 1..p {
                    assert_eq!(
                        power_residue_solvable(a as i128, k, p).unwrap(),
                        hit[a as usize],
                        "a={a} k={k} p={p}"
                    );
                }
            }
        }
    }

    #[test]
    fn quartic_scan_examples() {
        let theta = [2, 0, -12, 0, 1];
        // Brute force over residues, written out independently of eval_mod.
        let brute = |p: i64| (0..p).any(|x| (x.pow(4) - 12 * x * x + 2).rem_euclid(p) == 0);
        assert_eq!(quartic_roots_mod(&theta, 31).unwrap(), brute(31));
        assert_eq!(quartic_roots_mod(&theta, 7).unwrap(), brute(7));
        assert_eq!(quartic_roots_mod(&[0, 0, 0, 0, 1], 101), Ok(true));
    }

    #[test]
    fn gcd_root_test_matches_scan() {
        let polys: [&[i64]; 5] = [
            &[2, 0, -12, 0, 1],
            &[-2, 0, 0, 0, 1],
            &[-2, 0, 0, 1],
            &[1, 0, 1],
            &[3, 1, 0, 5, 7, 1],
        ];
        for &p in primes_below(2_000).iter().skip(1) {
            for f in polys {
                let scan = (0..p).any(|x| eval_mod(f, x, p) == 0);
                assert_eq!(poly_has_root_mod(f, p), scan, "f={f:?} p={p}");
            }
        }
    }

    #[test]
    fn large_prime_path() {
        // p = 1_000_003 is above the scan limit; x^4 = 0 always has a root.
        assert_eq!(quartic_roots_mod(&[0, 0, 0, 0, 1], 1_000_003), Ok(true));
        let p = 1_000_033;
        let expected = (0..p).any(|x| eval_mod(&[2, 0, -12, 0, 1], x, p) == 0);
        assert_eq!(quartic_roots_mod(&[2, 0, -12, 0, 1], p), Ok(expected));
    }
}
