use crate::arith::{
    classify, cornacchia, factorize, is_prime, jacobi, poly_has_root_mod, DClass, Family,
    FactorConfig, factor_u64,
};
use crate::error::{Error, Result};
use crate::localsolve::{first_local_failure, Place, QuadEquation};
use crate::oracle::{definite_search, Character, Decision};

use super::ring_class::RingClassTable;

fn check_prime_l(d: u64, l: u64) -> Result<()> {
    if l % 2 == 0 || !is_prime(l as u128) {
        return Err(Error::BadInput(format!("{l} is not an odd prime")));
    }
    if d % l == 0 {
        return Err(Error::BadInput(format!("{l} divides {d}")));
    }
    Ok(())
}

/// Local conditions for l = x^2 + d y^2: l splits in Q(sqrt(-d)), (l/q) = 1
/// for every odd q | d, and a congruence on l depending on d mod 8.
pub fn local_conditions_x2_plus_dy2_prime(d: u64, l: u64) -> Result<bool> {
    if d == 0 {
        return Err(Error::BadInput("d must be positive".into()));
    }
    check_prime_l(d, l)?;
    if jacobi(-(d as i128), l)? != 1 {
        return Ok(false);
    }
    for q in factor_u64(d, &FactorConfig::default())?.into_keys() {
        if q != 2 && jacobi(l as i128, q)? != 1 {
            return Ok(false);
        }
    }
    let ok = if d % 2 == 1 {
        l % 4 == 1 || l % 4 == d % 4
    } else if d % 4 == 2 {
        l % 8 == 1 || l % 8 == (d + 1) % 8
    } else if d % 8 == 4 {
        l % 4 == 1
    } else {
        l % 8 == 1
    };
    Ok(ok)
}

/// Decide l = x^2 + d y^2 for a prime l: the local conditions plus a root of
/// the ring class polynomial mod l.
pub fn decide_x2_plus_dy2_prime(d: u64, l: u64, table: &RingClassTable) -> Result<Decision> {
    let entry = table.get(d).ok_or(Error::UnsupportedDiscriminant(d))?;
    let eq = QuadEquation::new([1, 0, d as i64, 0, 0, 0], l as i64)?;
    if !local_conditions_x2_plus_dy2_prime(d, l)? {
        return Ok(match first_local_failure(&eq)? {
            Some(place) => Decision::local_failure(place),
            None => Decision::unsolvable(),
        });
    }
    if !poly_has_root_mod(&entry.poly, l) {
        return Ok(Decision::obstructed(Character::KL, -1));
    }
    match cornacchia(d, l) {
        Some((x, y)) => Decision::with_point(&eq, x as i128, y as i128),
        // The table entry does not generate the ring class field.
        None => Err(Error::WitnessMismatch { witness: vec![] }),
    }
}

/// Local solvability of x^2 + 16(2y+1)^2 = n in closed form: p = 1 mod 4
/// for every odd prime with odd exponent, and 2^s || n with s = 0 and
/// n = 1 mod 8, or s = 2 and n/4 = 5 mod 8, or s in {4, 5}.
pub fn gauss64_locally_solvable(n: i64) -> Result<bool> {
    Ok(gauss64_local_failure(n)?.is_none())
}

/// First place, in `bad_places` order, where the conic has no local point.
///
/// Over Z_2 the equation is x^2 + 16z^2 = n with z a unit, which needs
/// n/2^s = 1 mod 4 when s is 4 or 5; the odd primes supply that congruence
/// exactly when none of them fails, but the 2-adic place fails on its own.
pub fn gauss64_local_failure(n: i64) -> Result<Option<Place>> {
    if n <= 0 {
        return Err(Error::NonPositive);
    }
    let profile = factorize(n)?;
    let s = profile.s1;
    let odd = n >> s;
    let two_ok = match s {
        0 => n % 8 == 1,
        2 => odd % 8 == 5,
        4 | 5 => odd % 4 == 1,
        _ => false,
    };
    if !two_ok {
        return Ok(Some(Place::Prime(2)));
    }
    Ok(profile
        .odd_primes
        .iter()
        .find(|(&p, &e)| e % 2 == 1 && p % 4 == 3)
        .map(|(&p, _)| Place::Prime(p)))
}

/// The verdict on x^2 + 64y^2 + 64y + 16 = n alone, without a witness.
pub fn gauss64_criterion(n: i64) -> Result<Decision> {
    if let Some(place) = gauss64_local_failure(n)? {
        return Ok(Decision::local_failure(place));
    }
    let profile = classify(factorize(n)?, Family::Gauss64)?;
    let solvable = profile.s1 != 0
        || profile.has_class(DClass::D1)
        || profile.exponent_sum(DClass::D2) % 2 == 1;
    Ok(if solvable {
        Decision::solvable()
    } else {
        Decision::obstructed(Character::KL, -1)
    })
}

/// Decide x^2 + 64y^2 + 64y + 16 = n for n >= 1, with a witness when
/// solvable.
pub fn decide_gauss64(n: i64) -> Result<Decision> {
    let verdict = gauss64_criterion(n)?;
    if !verdict.is_solvable() {
        return Ok(verdict);
    }
    let witness = definite_search(&QuadEquation::gauss64(n))?;
    if !witness.is_solvable() {
        return Err(Error::SearchExhausted(format!("no point on gauss64 n = {n}")));
    }
    Ok(witness)
}
