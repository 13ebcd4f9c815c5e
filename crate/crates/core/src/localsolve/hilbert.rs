use num_rational::Ratio;

use super::Place;
use crate::arith::{legendre, prime_divisors, valuation};
use crate::error::{Error, Result};

/// A nonzero rational and an integer in the same square class.
fn square_class_rep(q: Ratio<i64>) -> Result<i128> {
    if *q.numer() == 0 {
        return Err(Error::ZeroArgument);
    }
    Ok(*q.numer() as i128 * *q.denom() as i128)
}

fn split(n: i128, p: u64) -> (u32, i128) {
    let v = valuation(n, p);
    (v, n / (p as i128).pow(v))
}

fn hilbert_int(a: i128, b: i128, place: Place) -> i8 {
    match place {
        Place::Infinity => {
            if a < 0 && b < 0 {
                -1
            } else {
                1
            }
        }
        Place::Prime(2) => {
            let (alpha, u) = split(a, 2);
            let (beta, v) = split(b, 2);
            let eps = |w: i128| (w.rem_euclid(4) == 3) as u32;
            let omega = |w: i128| matches!(w.rem_euclid(8), 3 | 5) as u32;
            let exp = eps(u) * eps(v) + alpha * omega(v) + beta * omega(u);
            if exp % 2 == 0 {
                1
            } else {
                -1
            }
        }
        Place::Prime(p) => {
            let (alpha, u) = split(a, p);
            let (beta, v) = split(b, p);
            let mut s = 1i8;
            if alpha % 2 == 1 && beta % 2 == 1 && p % 4 == 3 {
                s = -s;
            }
            if beta % 2 == 1 {
                s *= legendre(u, p);
            }
            if alpha % 2 == 1 {
                s *= legendre(v, p);
            }
            s
        }
    }
}

/// The Hilbert symbol (a, b) over the completion of Q at `place`.
pub fn hilbert_symbol(a: Ratio<i64>, b: Ratio<i64>, place: Place) -> Result<i8> {
    let (a, b) = (square_class_rep(a)?, square_class_rep(b)?);
    if let Place::Prime(p) = place {
        if !crate::arith::is_prime(p as u128) {
            return Err(Error::NotPrime(p));
        }
    }
    Ok(hilbert_int(a, b, place))
}

/// Product of (a, b)_v over every place where it can be nontrivial: the real
/// place, 2, and the odd primes dividing a or b. Reciprocity says this is +1.
pub fn hilbert_product(a: Ratio<i64>, b: Ratio<i64>) -> Result<i8> {
    let (a, b) = (square_class_rep(a)?, square_class_rep(b)?);
    let mut primes = prime_divisors(a)?;
    primes.extend(prime_divisors(b)?);
    primes.push(2);
    primes.sort_unstable();
    primes.dedup();
    let finite: i8 = primes
        .into_iter()
        .map(|p| hilbert_int(a, b, Place::Prime(p)))
        .product();
    Ok(finite * hilbert_int(a, b, Place::Infinity))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn h(a: i64, b: i64, place: Place) -> i8 {
        hilbert_symbol(a.into(), b.into(), place).unwrap()
    }

    /// (a, b)_p by looking for a primitive zero of a x^2 + b y^2 - z^2 mod p^k,
    /// which settles the symbol once k exceeds the valuations involved.
    fn brute(a: i64, b: i64, p: u64) -> i8 {
        let k = if p == 2 { 3 } else { 1 } + 2 * (valuation(a as i128, p) + valuation(b as i128, p));
        // Reduce a and b to valuation 0 or 1 to keep the modulus small.
        let red = |w: i64| {
            let (v, u) = split(w as i128, p);
            u * (p as i128).pow(v % 2)
        };
        let (a, b) = (red(a), red(b));
        let k = k.min(if p == 2 { 5 } else { 3 });
        let m = (p as i128).pow(k);
        let pi = p as i128;
        let mut any_square = vec![false; m as usize];
        let mut unit_square = vec![false; m as usize];
        for z in 0..m {
            let r = (z * z % m) as usize;
            any_square[r] = true;
            if z % pi != 0 {
                unit_square[r] = true;
            }
        }
        for x in 0..m {
            for y in 0..m {
                let r = (a * x * x + b * y * y).rem_euclid(m) as usize;
                let xy_primitive = x % pi != 0 || y % pi != 0;
                if (xy_primitive && any_square[r]) || unit_square[r] {
                    return 1;
                }
            }
        }
        -1
    }

    #[test]
    fn examples() {
        assert_eq!(h(2, 5, Place::Prime(2)), -1);
        assert_eq!(h(3, 5, Place::Prime(3)), -1);
        assert_eq!(h(3, 5, Place::Prime(7)), 1);
        assert_eq!(h(-1, -1, Place::Infinity), -1);
        assert_eq!(h(-1, -1, Place::Prime(2)), -1);
        assert_eq!(hilbert_product(3.into(), 5.into()), Ok(1));
        assert_eq!(hilbert_product((-1).into(), (-1).into()), Ok(1));
        assert_eq!(hilbert_product(1.into(), 12345.into()), Ok(1));
        assert_eq!(hilbert_symbol(0.into(), 1.into(), Place::Infinity), Err(Error::ZeroArgument));
        assert_eq!(hilbert_symbol(1.into(), 1.into(), Place::Prime(9)), Err(Error::NotPrime(9)));
    }

    #[test]
    fn rational_arguments_use_square_class() {
        let half = Ratio::new(1, 2);
        for place in [Place::Infinity, Place::Prime(2), Place::Prime(3), Place::Prime(5)] {
            assert_eq!(
                hilbert_symbol(half, 5.into(), place),
                hilbert_symbol(2.into(), 5.into(), place)
            );
        }
    }

    #[test]
    fn formula_matches_conic_search() {
        for p in [2u64, 3, 5, 7] {
            for a in [-12i64, -7, -6, -5, -3, -2, -1, 1, 2, 3, 5, 6, 7, 10, 14] {
                for b in [-10i64, -5, -3, -2, -1, 1, 2, 3, 7, 15] {
                    assert_eq!(h(a, b, Place::Prime(p)), brute(a, b, p), "({a},{b})_{p}");
                }
            }
        }
    }
}
