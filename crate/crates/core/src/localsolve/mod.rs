//! Local solvability of affine binary quadratics over Z_p and R, Hilbert
//! symbols, and the finite set of places that need checking.

mod conic;
mod hilbert;

pub use conic::{Place, QuadEquation};
pub use hilbert::{hilbert_product, hilbert_symbol};

use serde::Serialize;

use crate::arith::{is_prime, prime_divisors, valuation};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum LocalWitness {
    /// (x, y) mod p^precision.
    Residue { x: i128, y: i128 },
    Real { x: f64, y: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LocalReport {
    pub place: Place,
    pub solvable: bool,
    /// The witness satisfies the equation mod p^k; 0 at the real place.
    pub witness_precision: u32,
    pub witness: Option<LocalWitness>,
}

impl LocalReport {
    fn unsolvable(place: Place) -> Self {
        LocalReport {
            place,
            solvable: false,
            witness_precision: 0,
            witness: None,
        }
    }
}

/// Upper bound on residue classes visited by one p-adic search.
const NODE_BUDGET: usize = 4_000_000;

fn vp(n: i128, p: u64) -> u32 {
    if n == 0 {
        u32::MAX
    } else {
        valuation(n, p)
    }
}

fn inverse_mod(a: i128, m: i128) -> Option<i128> {
    let (mut r0, mut r1) = (a.rem_euclid(m), m);
    let (mut s0, mut s1) = (1i128, 0i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
    }
    (r0 == 1).then(|| s0.rem_euclid(m))
}

/// Divide the coefficients (constant term g - n included) by their common
/// power of p; returns the new conic and the exponent removed.
fn strip_content(eq: &QuadEquation, p: u64) -> Result<(QuadEquation, u32)> {
    let [a, b, c, e, f, _] = eq.coeffs();
    let h = eq.constant();
    let m = [a as i128, b as i128, c as i128, e as i128, f as i128, h]
        .into_iter()
        .map(|v| vp(v, p))
        .min()
        .unwrap();
    if m == 0 {
        return Ok((*eq, 0));
    }
    let q = (p as i128).pow(m);
    let shrink = |v: i64| v / q as i64;
    let h = i64::try_from(h / q).map_err(|_| Error::Overflow("constant term"))?;
    let [a, b, c, e, f] = [a, b, c, e, f].map(shrink);
    Ok((QuadEquation::new([a, b, c, e, f, h], 0)?, m))
}

fn mulm(a: u128, b: u128, p: u128) -> u128 {
    a * b % p
}

/// a * b mod m for 0 <= a, b < m, any m that fits in i128.
fn mul_mod_wide(a: i128, b: i128, m: i128) -> i128 {
    use num_bigint::BigInt;
    use num_traits::ToPrimitive;
    let r = BigInt::from(a) * BigInt::from(b) % BigInt::from(m);
    r.to_i128().unwrap()
}

/// Roots (i, j) in [0, p)^2 of al i^2 + be ij + ga j^2 + de i + ep j + ze
/// mod p, at most `max` of them, in a fixed order. Coefficients must already
/// be reduced mod p.
fn bivariate_roots(coef: [u128; 6], p: u64, max: usize) -> Vec<(u64, u64)> {
    let [al, be, ga, de, ep, ze] = coef;
    let pw = p as u128;
    let value = |i: u128, j: u128| {
        (mulm(mulm(al, i, pw), i, pw)
            + mulm(mulm(be, i, pw), j, pw)
            + mulm(mulm(ga, j, pw), j, pw)
            + mulm(de, i, pw)
            + mulm(ep, j, pw)
            + ze)
            % pw
    };
    let mut out = Vec::new();
    if p < 64 {
        for i in 0..pw {
            for j in 0..pw {
                if value(i, j) == 0 && out.len() < max {
                    out.push((i as u64, j as u64));
                }
            }
        }
        return out;
    }
    let inv = |v: u128| inverse_mod(v as i128, pw as i128).unwrap() as u128;
    // Solve along whichever variable appears squared.
    let swap = ga == 0 && al != 0;
    let (al, ga, de, ep) = if swap { (ga, al, ep, de) } else { (al, ga, de, ep) };
    for i in 0..pw {
        // ga j^2 + lin j + cst
        let lin = (mulm(be, i, pw) + ep) % pw;
        let cst = (mulm(mulm(al, i, pw), i, pw) + mulm(de, i, pw) + ze) % pw;
        let mut js: Vec<u128> = Vec::new();
        if ga != 0 {
            let disc = (mulm(lin, lin, pw) + pw * 4 - mulm(mulm(4, ga, pw), cst, pw)) % pw;
            if let Some(r) = crate::arith::sqrt_mod(disc as i128, p).unwrap() {
                let two_ga = inv(mulm(2, ga, pw));
                for root in [r as u128, (pw - r as u128) % pw] {
                    js.push(mulm((pw - lin + root) % pw, two_ga, pw));
                }
            }
        } else if lin != 0 {
            js.push(mulm((pw - cst) % pw, inv(lin), pw));
        } else if cst == 0 {
            js.extend(0..pw);
        }
        js.sort_unstable();
        js.dedup();
        for j in js {
            out.push(if swap { (j as u64, i as u64) } else { (i as u64, j as u64) });
        }
        if out.len() >= max {
            out.truncate(max);
            break;
        }
    }
    out
}

/// Residue classes one level below (x, y) mod p^k: the (i, j) mod p with
/// F(x + i p^k, y + j p^k) = 0 mod p^(k+1). Requires F(x, y) = 0 mod p^k.
fn children(eq: &QuadEquation, p: u64, x: i128, y: i128, pk: i128) -> Option<Vec<(u64, u64)>> {
    let [a, b, c, _, _, _] = eq.coeffs().map(|v| v as i128);
    let pi = p as i128;
    let f = eq.eval(x, y)? / pk;
    let (gx, gy) = eq.gradient(x, y)?;
    let r = |v: i128| v.rem_euclid(pi) as u128;
    // F(x + i pk, y + j pk) / pk = F/pk + i gx + j gy + pk (a i^2 + b ij + c j^2)
    let q = r(pk);
    let pw = p as u128;
    let coef = [mulm(q, r(a), pw), mulm(q, r(b), pw), mulm(q, r(c), pw), r(gx), r(gy), r(f)];
    Some(bivariate_roots(coef, p, usize::MAX))
}

/// BigInt check that F(x, y) = 0 mod p^k.
fn holds_mod(eq: &QuadEquation, x: i128, y: i128, p: u64, k: u32) -> bool {
    use num_bigint::BigInt;
    let [a, b, c, e, f, _] = eq.coeffs().map(BigInt::from);
    let (x, y) = (BigInt::from(x), BigInt::from(y));
    let value = &a * &x * &x + &b * &x * &y + &c * &y * &y + &e * &x + &f * &y + BigInt::from(eq.constant());
    let m = BigInt::from(p).pow(k);
    (value % m) == BigInt::from(0)
}

/// Odd p not dividing the discriminant: move the origin to the (p-integral)
/// center, where F = Q(X, Y) + F(center) with Q unimodular. Such a Q is
/// universal when isotropic mod p and otherwise represents exactly the
/// elements of even valuation.
fn zp_unimodular(eq: &QuadEquation, p: u64) -> Result<LocalReport> {
    let place = Place::Prime(p);
    let det = eq.det();
    let [a, b, c, _, _, _] = eq.coeffs().map(|v| v as i128);
    let (xn, yn, den) = eq.center();
    // F(center) = det / (2 den)
    let v = if det == 0 { 0 } else { vp(det, p) };
    let s = v / 2;
    let isotropic = crate::arith::jacobi(eq.disc() as i128, p)? == 1;
    if det != 0 && v % 2 == 1 && !isotropic {
        return Ok(LocalReport::unsolvable(place));
    }
    let k = if det == 0 { 1 } else { 2 * s + 1 };
    let overflow = || Error::Overflow("p-adic precision");
    let pi = p as i128;
    let m = pi.checked_pow(k).ok_or_else(overflow)?;
    let inv_den = inverse_mod(den, m).ok_or_else(overflow)?;
    let cx = mul_mod_wide(xn.rem_euclid(m), inv_den, m);
    let cy = mul_mod_wide(yn.rem_euclid(m), inv_den, m);
    let (x, y) = if det == 0 {
        (cx, cy)
    } else {
        // Q(X, Y) = u mod p with u = -F(center) / p^(2s); u = 0 in the
        // isotropic odd-valuation case, where any nonzero isotropic vector does.
        let ps2 = pi.pow(2 * s);
        let two_den = 2 * den;
        let u = if v % 2 == 1 {
            0
        } else {
            let num = (-(det / ps2)).rem_euclid(pi);
            mul_mod_wide(num, inverse_mod(two_den, pi).unwrap(), pi)
        };
        let r = |t: i128| t.rem_euclid(pi) as u128;
        let target = (p as u128 - u as u128) % p as u128;
        // At most two roots share i = 0, so three include a nonzero one.
        let (xx, yy) = bivariate_roots([r(a), r(b), r(c), 0, 0, target], p, 3)
            .into_iter()
            .find(|&(i, j)| (i, j) != (0, 0))
            .expect("a unimodular binary form represents every unit and is isotropic when disc is a square");
        let ps = pi.pow(s);
        ((cx + ps * xx as i128).rem_euclid(m), (cy + ps * yy as i128).rem_euclid(m))
    };
    debug_assert!(holds_mod(eq, x, y, p, k));
    if !holds_mod(eq, x, y, p, k) {
        return Err(Error::WitnessMismatch { witness: vec![x, y] });
    }
    Ok(LocalReport {
        place,
        solvable: true,
        witness_precision: k,
        witness: Some(LocalWitness::Residue { x, y }),
    })
}

/// Decide whether the conic has a point in Z_p x Z_p.
///
/// For odd p not dividing the discriminant the answer is read off the
/// valuation of F at the center. Otherwise residue classes (x, y) mod p^k
/// with F = 0 mod p^k are refined depth first. A class is certified once some
/// representative has v(F) > 2t, where t is the smaller valuation of the two
/// partial derivatives (multivariate Hensel). For a nondegenerate conic any
/// class surviving to depth 2 v_p(det) + 1 is certified, so the search is a
/// complete decision. A line pair whose center is not p-integral has no such
/// bound; if the search runs out of depth there the result is
/// `DegenerateDiscriminant`.
pub fn zp_solvable(eq: &QuadEquation, p: u64) -> Result<LocalReport> {
    if !is_prime(p as u128) {
        return Err(Error::NotPrime(p));
    }
    let (reduced, shift) = strip_content(eq, p)?;
    let mut report = if p != 2 && reduced.disc() as i128 % p as i128 != 0 {
        zp_unimodular(&reduced, p)?
    } else {
        zp_search(&reduced, p)?
    };
    report.witness_precision += shift;
    Ok(report)
}

fn zp_search(eq: &QuadEquation, p: u64) -> Result<LocalReport> {
    let place = Place::Prime(p);
    let det = eq.det();
    let cap = if det != 0 {
        2 * vp(det, p) + 1
    } else {
        let (xn, yn, den) = eq.center();
        let vd = vp(den, p);
        if vp(xn, p) >= vd && vp(yn, p) >= vd {
            // The center is p-integral and lies on the conic.
            let k = 2 * vp(4 * eq.disc() as i128, p) + 1;
            let g = (p as i128).pow(vd);
            let m = (p as i128).checked_pow(k).ok_or(Error::Overflow("p-adic precision"))?;
            let inv = inverse_mod(den / g, m).ok_or(Error::DegenerateDiscriminant { p })?;
            let x = mul_mod_wide((xn / g).rem_euclid(m), inv, m);
            let y = mul_mod_wide((yn / g).rem_euclid(m), inv, m);
            return Ok(LocalReport {
                place,
                solvable: true,
                witness_precision: k,
                witness: Some(LocalWitness::Residue { x, y }),
            });
        }
        4 * vp(4 * eq.disc() as i128, p) + 4
    };

    let overflow = || Error::Overflow("p-adic search");
    let pi = p as i128;
    let mut unresolved = false;
    let mut visited = 0usize;
    // (x, y, k, p^k), all with F(x, y) = 0 mod p^k.
    let mut stack: Vec<(i128, i128, u32, i128)> = Vec::new();
    let push_children = |stack: &mut Vec<_>, x: i128, y: i128, k: u32, pk: i128| -> Result<()> {
        let next = pk.checked_mul(pi).ok_or_else(overflow)?;
        let kids = children(eq, p, x, y, pk).ok_or_else(overflow)?;
        for &(i, j) in kids.iter().rev() {
            stack.push((x + i as i128 * pk, y + j as i128 * pk, k + 1, next));
        }
        Ok(())
    };
    push_children(&mut stack, 0, 0, 0, 1)?;
    while let Some((x, y, k, pk)) = stack.pop() {
        visited += 1;
        if visited > NODE_BUDGET {
            return Err(Error::DegenerateDiscriminant { p });
        }
        let value = eq.eval(x, y).ok_or_else(overflow)?;
        if value == 0 {
            return Ok(LocalReport {
                place,
                solvable: true,
                witness_precision: cap.max(k),
                witness: Some(LocalWitness::Residue { x, y }),
            });
        }
        let (gx, gy) = eq.gradient(x, y).ok_or_else(overflow)?;
        let t = vp(gx, p).min(vp(gy, p));
        let v = vp(value, p);
        if t != u32::MAX && v > 2 * t {
            return Ok(LocalReport {
                place,
                solvable: true,
                witness_precision: v,
                witness: Some(LocalWitness::Residue { x, y }),
            });
        }
        if k >= cap {
            unresolved = true;
            continue;
        }
        push_children(&mut stack, x, y, k, pk)?;
    }
    if unresolved {
        return Err(Error::DegenerateDiscriminant { p });
    }
    Ok(LocalReport::unsolvable(place))
}

/// Decide whether the conic has a real point.
pub fn real_solvable(eq: &QuadEquation) -> LocalReport {
    let [a, b, c, e, f, _] = eq.coeffs().map(|v| v as f64);
    let h = eq.constant() as f64;
    let place = Place::Infinity;
    let report = |x: f64, y: f64| LocalReport {
        place,
        solvable: true,
        witness_precision: 0,
        witness: Some(LocalWitness::Real { x, y }),
    };
    if eq.disc() > 0 {
        // Indefinite quadratic part: the conic always has real points.
        if a != 0.0 {
            let mut y = 0.0f64;
            let mut step = 1.0f64;
            loop {
                for cand in [y, -y] {
                    let lin = b * cand + e;
                    let disc_x = lin * lin - 4.0 * a * (c * cand * cand + f * cand + h);
                    if disc_x >= 0.0 {
                        return report((-lin + disc_x.sqrt()) / (2.0 * a), cand);
                    }
                }
                y += step;
                step *= 2.0;
            }
        }
        // a = 0, so b != 0: x (b y + e) = -(c y^2 + f y + h).
        let y = if e == 0.0 { 1.0 } else { (-e / b) + 1.0 };
        let x = -(c * y * y + f * y + h) / (b * y + e);
        return report(x, y);
    }
    // Definite: the minimum (or maximum) value sits at the center and equals
    // det / (2 (4ac - b^2)); a point exists iff a * det <= 0.
    let det = eq.det();
    if (eq.coeffs()[0] as i128).signum() * det.signum() > 0 {
        return LocalReport::unsolvable(place);
    }
    let (xn, yn, den) = eq.center();
    let (cx, cy) = (xn as f64 / den as f64, yn as f64 / den as f64);
    let min_value = det as f64 / (2.0 * den as f64);
    let w = (-min_value / a).max(0.0).sqrt();
    report(cx + w, cy)
}

/// Places where solvability is not automatic: the real place, 2, the primes
/// dividing the discriminant and those dividing the determinant of the
/// projective conic. Away from these, a smooth conic with good reduction has
/// F_p-points off the line at infinity and Hensel lifts them.
pub fn bad_places(eq: &QuadEquation) -> Result<Vec<Place>> {
    let mut primes = vec![2u64];
    primes.extend(prime_divisors(eq.disc() as i128)?);
    let det = eq.det();
    if det != 0 {
        primes.extend(prime_divisors(det)?);
    }
    primes.sort_unstable();
    primes.dedup();
    let mut places = vec![Place::Infinity];
    places.extend(primes.into_iter().map(Place::Prime));
    Ok(places)
}

/// One report per place in [`bad_places`].
pub fn everywhere_locally_solvable(eq: &QuadEquation) -> Result<Vec<LocalReport>> {
    bad_places(eq)?
        .into_iter()
        .map(|place| match place {
            Place::Infinity => Ok(real_solvable(eq)),
            Place::Prime(p) => zp_solvable(eq, p),
        })
        .collect()
}

/// First place without a local point, if any.
pub fn first_local_failure(eq: &QuadEquation) -> Result<Option<Place>> {
    Ok(everywhere_locally_solvable(eq)?
        .into_iter()
        .find(|r| !r.solvable)
        .map(|r| r.place))
}
