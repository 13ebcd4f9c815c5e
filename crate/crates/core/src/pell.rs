//! Continued fractions of quadratic irrationals and the equations
//! x^2 - d y^2 = n.

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::arith::exact_sqrt;
use crate::error::{Error, Result};
use crate::localsolve::QuadEquation;
use crate::oracle::Decision;

/// sqrt(d) = [a0; period...] with the minimal period.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ContinuedFraction {
    pub a0: u64,
    pub period: Vec<u64>,
}

impl ContinuedFraction {
    pub fn period_len(&self) -> usize {
        self.period.len()
    }

    /// Partial quotient a_k for any k >= 0.
    pub fn term(&self, k: usize) -> u64 {
        if k == 0 {
            self.a0
        } else {
            self.period[(k - 1) % self.period.len()]
        }
    }

    /// Convergents (p_k, q_k) for k = 0..count.
    pub fn convergents(&self, count: usize) -> Vec<(BigInt, BigInt)> {
        let (mut p0, mut p1) = (BigInt::one(), BigInt::from(self.a0));
        let (mut q0, mut q1) = (BigInt::zero(), BigInt::one());
        let mut out = Vec::with_capacity(count);
        for k in 0..count {
            if k > 0 {
                let a = BigInt::from(self.term(k));
                let p2 = &a * &p1 + &p0;
                let q2 = &a * &q1 + &q0;
                (p0, p1) = (p1, p2);
                (q0, q1) = (q1, q2);
            }
            out.push((p1.clone(), q1.clone()));
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PellData {
    pub d: u64,
    pub cf: ContinuedFraction,
    /// Fundamental solution of t^2 - d u^2 = 1.
    pub t: BigInt,
    pub u: BigInt,
    /// Smallest solution of x^2 - d y^2 = -1, when one exists.
    pub negative: Option<(BigInt, BigInt)>,
}

impl PellData {
    pub fn new(d: u64) -> Result<Self> {
        let cf = continued_fraction(d)?;
        let len = cf.period_len();
        let conv = cf.convergents(2 * len);
        let (negative, (t, u)) = if len % 2 == 0 {
            (None, conv[len - 1].clone())
        } else {
            (Some(conv[len - 1].clone()), conv[2 * len - 1].clone())
        };
        Ok(PellData { d, cf, t, u, negative })
    }
}

/// Expansion of sqrt(d) by the (P, Q) recurrence.
pub fn continued_fraction(d: u64) -> Result<ContinuedFraction> {
    let a0 = d.isqrt();
    if d < 2 || a0 * a0 == d {
        return Err(Error::SquareInput(d));
    }
    let (d, a0w) = (d as u128, a0 as u128);
    let (mut p, mut q) = (0u128, 1u128);
    let mut a = a0w;
    let mut period = Vec::new();
    loop {
        p = a * q - p;
        q = (d - p * p) / q;
        a = (a0w + p) / q;
        period.push(a as u64);
        if q == 1 {
            break;
        }
    }
    Ok(ContinuedFraction { a0, period })
}

pub fn fundamental_solution(d: u64) -> Result<(BigInt, BigInt)> {
    let data = PellData::new(d)?;
    Ok((data.t, data.u))
}

/// The smallest solution of x^2 - d y^2 = -1, if any.
pub fn negative_pell_solvable(d: u64) -> Result<Option<(BigInt, BigInt)>> {
    Ok(PellData::new(d)?.negative)
}

/// Largest y that a class-fundamental solution of x^2 - d y^2 = n can have:
/// u sqrt(n / (2(t+1))) for n > 0 and u sqrt(-n / (2(t-1))) for n < 0.
pub fn representation_bound(data: &PellData, n: i64) -> BigInt {
    let shift = if n > 0 { BigInt::one() } else { -BigInt::one() };
    let num = &data.u * &data.u * BigInt::from(n.unsigned_abs());
    let den = BigInt::from(2) * (&data.t + shift);
    (num / den).sqrt() + 1
}

/// Most y values [`represent`] will scan before switching strategy.
pub const SCAN_BUDGET: u64 = 50_000_000;

/// Decide x^2 - d y^2 = n. The witness is the solution with the least y >= 0,
/// then x >= 0.
pub fn represent(d: u64, n: i64) -> Result<Decision> {
    if n == 0 {
        return Err(Error::ZeroInput);
    }
    let data = PellData::new(d)?;
    let eq = QuadEquation::pell(d as i64, n)?;
    let bound = representation_bound(&data, n);
    if let Some(ymax) = bound.to_u64().filter(|&b| b <= SCAN_BUDGET) {
        let (d, n) = (d as i128, n as i128);
        for y in 0..=ymax as i128 {
            if let Some(x) = exact_sqrt(n + d * y * y) {
                return Decision::with_point(&eq, x, y);
            }
        }
        return Ok(Decision::unsolvable());
    }
    if (n.unsigned_abs() as u128).pow(2) < d as u128 {
        return represent_small(&data, &eq, n);
    }
    Err(Error::SearchExhausted(format!(
        "x^2 - {d}y^2 = {n}: representation bound {bound} exceeds the scan budget"
    )))
}

/// For |n| < sqrt(d) every primitive solution with y > 0 is a convergent of
/// sqrt(d), so two periods of convergents cover every class.
fn represent_small(data: &PellData, eq: &QuadEquation, n: i64) -> Result<Decision> {
    let n_abs = n.unsigned_abs();
    if n > 0 {
        if let Some(x) = exact_sqrt(n as i128) {
            return Decision::with_point(eq, x, 0);
        }
    }
    let conv = data.cf.convergents(2 * data.cf.period_len());
    let d = BigInt::from(data.d);
    let mut best: Option<(BigInt, BigInt)> = None;
    let mut g = 1u64;
    while g * g <= n_abs {
        if n_abs % (g * g) == 0 {
            let target = BigInt::from(n / (g * g) as i64);
            if let Some((p, q)) = conv.iter().find(|(p, q)| p * p - &d * q * q == target) {
                let cand = (p * g, q * g);
                if best.as_ref().is_none_or(|b| cand.1 < b.1) {
                    best = Some(cand);
                }
            }
        }
        g += 1;
    }
    match best {
        Some((x, y)) => {
            let overflow = || Error::Overflow("witness");
            Decision::with_point(eq, x.to_i128().ok_or_else(overflow)?, y.to_i128().ok_or_else(overflow)?)
        }
        None => Ok(Decision::unsolvable()),
    }
}

/// Every solution of x^2 - d y^2 = n with 0 <= y <= bound, up to overall sign.
fn solutions_below(d: u64, n: i64, bound: &BigInt) -> Result<Vec<(BigInt, BigInt)>> {
    let ymax = bound
        .to_u64()
        .filter(|&b| b <= SCAN_BUDGET)
        .ok_or_else(|| Error::SearchExhausted(format!("representation bound {bound}")))?;
    let (dd, nn) = (d as i128, n as i128);
    let mut out = Vec::new();
    for y in 0..=ymax as i128 {
        if let Some(x) = exact_sqrt(nn + dd * y * y) {
            out.push((BigInt::from(x), BigInt::from(y)));
            if x != 0 && y != 0 {
                out.push((BigInt::from(-x), BigInt::from(y)));
            }
        }
    }
    Ok(out)
}

/// Solutions of x^2 - d y^2 = n: each class representative, then its images
/// under successive powers of the fundamental unit, generation by generation.
pub fn orbit_enumerate(d: u64, n: i64, count: usize) -> Result<Vec<(BigInt, BigInt)>> {
    if n == 0 {
        return Err(Error::ZeroInput);
    }
    let data = PellData::new(d)?;
    let big_d = BigInt::from(d);
    let big_n = BigInt::from(n).abs();
    let same_class = |a: &(BigInt, BigInt), b: &(BigInt, BigInt)| {
        let s = &a.0 * &b.0 - &big_d * &a.1 * &b.1;
        let t = &a.0 * &b.1 - &b.0 * &a.1;
        (s % &big_n).is_zero() && (t % &big_n).is_zero()
    };
    let mut reps: Vec<(BigInt, BigInt)> = Vec::new();
    // Candidates arrive in increasing y with x >= 0 first.
    for sol in solutions_below(d, n, &representation_bound(&data, n))? {
        let neg = (-&sol.0, -&sol.1);
        if !reps.iter().any(|r| same_class(r, &sol) || same_class(r, &neg)) {
            reps.push(sol);
        }
    }
    if reps.is_empty() {
        return Err(Error::NoWitness);
    }
    let mut out = Vec::with_capacity(count);
    let mut current = reps;
    while out.len() < count {
        for s in &current {
            if out.len() == count {
                break;
            }
            out.push(s.clone());
        }
        current = current
            .iter()
            .map(|(x, y)| (&data.t * x + &big_d * &data.u * y, &data.u * x + &data.t * y))
            .collect();
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pair(a: i64, b: i64) -> (BigInt, BigInt) {
        (a.into(), b.into())
    }

    #[test]
    fn expansions() {
        let cf = continued_fraction(2).unwrap();
        assert_eq!((cf.a0, cf.period.clone()), (1, vec![2]));
        let cf = continued_fraction(34).unwrap();
        assert_eq!((cf.a0, cf.period.clone()), (5, vec![1, 4, 1, 10]));
        let cf = continued_fraction(82).unwrap();
        assert_eq!((cf.a0, cf.period.clone()), (9, vec![18]));
        assert_eq!(continued_fraction(49), Err(Error::SquareInput(49)));
        assert_eq!(continued_fraction(1), Err(Error::SquareInput(1)));
    }

    #[test]
    fn fundamental_examples() {
        assert_eq!(fundamental_solution(2).unwrap(), pair(3, 2));
        assert_eq!(fundamental_solution(34).unwrap(), pair(35, 6));
        assert_eq!(fundamental_solution(82).unwrap(), pair(163, 18));
        let (t, u) = fundamental_solution(61).unwrap();
        assert_eq!(t, BigInt::from(1_766_319_049u64));
        assert_eq!(u, BigInt::from(226_153_980u64));
    }

    #[test]
    fn negative_examples() {
        assert_eq!(negative_pell_solvable(2).unwrap(), Some(pair(1, 1)));
        assert_eq!(negative_pell_solvable(34).unwrap(), None);
        assert_eq!(negative_pell_solvable(82).unwrap(), Some(pair(9, 1)));
    }

    #[test]
    fn represent_examples() {
        assert_eq!(represent(34, 2).unwrap().witness, Some(vec![6, 1]));
        assert_eq!(represent(34, -1).unwrap(), Decision::unsolvable());
        assert_eq!(represent(34, 33).unwrap().witness, Some(vec![13, 2]));
        assert_eq!(represent(61, -1).unwrap().witness, Some(vec![29718, 3805]));
        assert_eq!(represent(34, 0), Err(Error::ZeroInput));
    }

    #[test]
    fn small_n_uses_convergents() {
        // The period of sqrt(10007) is long and its fundamental unit has 30
        // digits, far past any y-scan; n^2 < d goes through convergents.
        let d = 10_007u64;
        let mut hits = 0;
        for n in (-99i64..=99).filter(|&n| n != 0) {
            let dec = represent(d, n).unwrap();
            if let Some(w) = &dec.witness {
                let (x, y) = (BigInt::from(w[0]), BigInt::from(w[1]));
                assert_eq!(&x * &x - BigInt::from(d) * &y * &y, BigInt::from(n), "n={n}");
                hits += 1;
            }
        }
        assert!(hits > 2);
        assert!(represent(d, 1).unwrap().is_solvable());
        // 10007 = 3 mod 4
        assert!(represent(d, -1).unwrap().is_unsolvable());
    }

    #[test]
    fn orbits() {
        let o = orbit_enumerate(2, 1, 3).unwrap();
        assert_eq!(o, vec![pair(1, 0), pair(3, 2), pair(17, 12)]);
        let o = orbit_enumerate(34, 2, 2).unwrap();
        assert_eq!(o[0], pair(6, 1));
        for (x, y) in &o {
            assert_eq!(x * x - BigInt::from(34) * y * y, BigInt::from(2));
        }
        assert_eq!(o[1], pair(414, 71));
        assert_eq!(orbit_enumerate(34, -1, 1), Err(Error::NoWitness));
    }

    #[test]
    fn orbit_classes_are_distinct() {
        // x^2 - 34y^2 = 33 has the classes of (13, 2) and (-13, 2) distinct.
        let o = orbit_enumerate(34, 33, 4).unwrap();
        for (x, y) in &o {
            assert_eq!(x * x - BigInt::from(34) * y * y, BigInt::from(33));
        }
        assert_eq!(o[0], pair(13, 2));
    }
}
