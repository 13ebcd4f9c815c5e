//! Ground truth engines that do not depend on any criterion: exhaustive
//! search for definite forms, divisor pairs for split forms, a bounded search
//! over norms, and a harness comparing them with the criteria.

mod decision;
mod norm;
mod sweep;

pub use decision::{Certificate, Character, Decision, Status};
pub use norm::{norm_form_search, norm_table, NormBasis, NormTable, SQRT_BASIS_DISCRIMINANT};
pub use sweep::{consistency_sweep, Mismatch, OracleChoice, Rejection, SweepReport};

use crate::arith::{exact_sqrt, factor_u64, FactorConfig};
use crate::error::{Error, Result};
use crate::localsolve::QuadEquation;

/// Most y values [`definite_search`] will visit.
pub const DEFINITE_BUDGET: i128 = 100_000_000;

/// Exhaustive search on a definite conic. y runs over the interval where the
/// x-discriminant (b y + e)^2 - 4a(c y^2 + f y + g - n) is nonnegative; the
/// witness has the least |y|, then y >= 0, then x >= 0.
pub fn definite_search(eq: &QuadEquation) -> Result<Decision> {
    if eq.disc() >= 0 {
        return Err(Error::IndefiniteForm);
    }
    let [a, b, c, e, f, _] = eq.coeffs().map(|v| v as i128);
    let h = eq.constant();
    // x-discriminant as a quadratic in y: A y^2 + B y + C with A < 0.
    let qa = b * b - 4 * a * c;
    let qb = 2 * b * e - 4 * a * f;
    let qc = e * e - 4 * a * h;
    let delta = |y: i128| -> Option<i128> {
        qa.checked_mul(y)?.checked_mul(y)?.checked_add(qb.checked_mul(y)?)?.checked_add(qc)
    };
    // Real roots of the y-quadratic, widened so rounding cannot lose a point.
    let disc_y = (qb as f64).powi(2) - 4.0 * qa as f64 * qc as f64;
    let root = disc_y.max(0.0).sqrt();
    let r1 = (-(qb as f64) + root) / (2.0 * qa as f64);
    let r2 = (-(qb as f64) - root) / (2.0 * qa as f64);
    let lo = r1.min(r2).floor() as i128 - 2;
    let hi = r1.max(r2).ceil() as i128 + 2;
    if hi - lo > DEFINITE_BUDGET {
        return Err(Error::SearchExhausted(format!("{} values of y", hi - lo)));
    }
    let mut ys: Vec<i128> = (lo..=hi).collect();
    ys.sort_by_key(|&y| (y.abs(), y < 0));
    for y in ys {
        let Some(dy) = delta(y) else { return Err(Error::Overflow("definite_search")) };
        let Some(s) = exact_sqrt(dy) else { continue };
        let lin = b * y + e;
        let mut xs = [(-lin + s), (-lin - s)]
            .into_iter()
            .filter(|num| num % (2 * a) == 0)
            .map(|num| num / (2 * a))
            .collect::<Vec<_>>();
        xs.sort_by_key(|&x| (x < 0, x.abs()));
        if let Some(&x) = xs.first() {
            return Decision::with_point(eq, x, y);
        }
    }
    Ok(Decision::unsolvable())
}

fn divisors(m: u64) -> Result<Vec<u64>> {
    let mut divs = vec![1u64];
    for (p, e) in factor_u64(m, &FactorConfig::default())? {
        let current = divs.clone();
        let mut pk = 1u64;
        for _ in 0..e {
            pk *= p;
            divs.extend(current.iter().map(|d| d * pk));
        }
    }
    divs.sort_unstable();
    Ok(divs)
}

/// Decide x^2 - k^2 y^2 = n by factoring n = u v with x = (u + v)/2 and
/// k y = (v - u)/2. The witness has the least y >= 0, then x >= 0.
pub fn split_form_decide(k: u64, n: i64) -> Result<Decision> {
    if n == 0 {
        return Err(Error::ZeroInput);
    }
    if k == 0 {
        return Err(Error::BadInput("k must be positive".into()));
    }
    let eq = QuadEquation::pell((k as i64).checked_mul(k as i64).ok_or(Error::Overflow("k^2"))?, n)?;
    let (k, n) = (k as i128, n as i128);
    let mut best: Option<(i128, i128)> = None;
    for d in divisors(n.unsigned_abs() as u64)? {
        for u in [d as i128, -(d as i128)] {
            let v = n / u;
            if (u - v) % 2 != 0 || (v - u) % (2 * k) != 0 {
                continue;
            }
            let (x, y) = ((u + v) / 2, ((v - u) / (2 * k)).abs());
            let x = x.abs();
            if best.is_none_or(|(bx, by)| (y, x) < (by, bx)) {
                best = Some((x, y));
            }
        }
    }
    match best {
        Some((x, y)) => Decision::with_point(&eq, x, y),
        None => Ok(Decision::unsolvable()),
    }
}
