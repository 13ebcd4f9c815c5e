use std::collections::BTreeMap;

use num_bigint::BigInt;
use serde::Serialize;

use crate::arith::{
    classify, cornacchia_two_squares, exact_sqrt, factorize, is_prime, jacobi, DClass, Family,
    FactorProfile,
};
use crate::error::{Error, Result};
use crate::localsolve::{first_local_failure, Place, QuadEquation};
use crate::oracle::{Character, Decision};
use crate::pell::{negative_pell_solvable, represent};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum EpsteinRedei {
    /// x^2 - 2l y^2 = -1 has no integer solution.
    Unsolvable,
    /// The test makes no claim.
    Inapplicable,
}

/// For a prime l = 1 mod 8 with 2l = r^2 + s^2 and s = +-3 mod 8, the negative
/// Pell equation for 2l is unsolvable.
pub fn epstein_redei(l: u64) -> Result<EpsteinRedei> {
    if !is_prime(l as u128) {
        return Err(Error::NotPrime(l));
    }
    if l % 8 != 1 {
        return Ok(EpsteinRedei::Inapplicable);
    }
    let (_, s) = cornacchia_two_squares(2 * l).expect("2l is a sum of two squares");
    Ok(if matches!(s % 8, 3 | 5) {
        EpsteinRedei::Unsolvable
    } else {
        EpsteinRedei::Inapplicable
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ThetaData {
    pub l: u64,
    pub cornacchia: (u64, u64),
    /// Primitive positive solution of x0^2 - 2l y0^2 = 2 z0^2.
    pub aux: (u64, u64, u64),
    /// x^4 - 2 x0 x^2 + 2 z0^2, coefficients from the constant term up.
    pub theta_poly: [i64; 5],
}

/// Default cap on y0 in [`theta_data`]. A solution with y0 = 1 always
/// exists, since 2l is a norm from Z[sqrt 2] when l = 1 mod 8.
pub const THETA_Y_BOUND: u64 = 1000;

pub fn theta_data(l: u64) -> Result<ThetaData> {
    theta_data_with_bound(l, THETA_Y_BOUND)
}

/// Search y0 = 1, 2, ... and, for each, x0 upward from sqrt(2l) y0; the first
/// primitive hit wins. For fixed y0 the least x0 of any orbit under the unit
/// 3 + 2 sqrt 2 is at most 2 y0 sqrt(l).
pub fn theta_data_with_bound(l: u64, max_y0: u64) -> Result<ThetaData> {
    if !is_prime(l as u128) {
        return Err(Error::NotPrime(l));
    }
    if l % 8 != 1 {
        return Err(Error::BadInput(format!("{l} is not 1 mod 8")));
    }
    let cornacchia = cornacchia_two_squares(2 * l).expect("2l is a sum of two squares");
    let two_l = 2 * l as i128;
    for y0 in 1..=max_y0 as i128 {
        let lo = (two_l * y0 * y0).isqrt();
        let hi = 2 * y0 * (l as i128).isqrt() + 2 * y0;
        for x0 in lo.max(1)..=hi {
            let diff = x0 * x0 - two_l * y0 * y0;
            if diff < 0 || diff % 2 != 0 {
                continue;
            }
            let Some(z0) = exact_sqrt(diff / 2) else { continue };
            if num_integer::gcd(num_integer::gcd(x0, y0), z0) != 1 {
                continue;
            }
            let (x0, y0, z0) = (x0 as u64, y0 as u64, z0 as u64);
            return Ok(ThetaData {
                l,
                cornacchia,
                aux: (x0, y0, z0),
                theta_poly: [2 * (z0 * z0) as i64, 0, -2 * x0 as i64, 0, 1],
            });
        }
    }
    Err(Error::SearchExhausted(format!("no auxiliary solution for l = {l} with y0 <= {max_y0}")))
}

fn d34_profile(n: i64) -> Result<FactorProfile> {
    if n == 0 {
        return Err(Error::ZeroInput);
    }
    classify(factorize(n)?, Family::D34)
}

/// First place where condition (1) fails: n1 = +-1 mod 8 at 2, (n1/17) = 1
/// at 17, (34/p) = 1 at each p with odd exponent.
fn condition_one_failure(profile: &FactorProfile) -> Option<Place> {
    let n1 = profile.n1 as i128;
    let mut failures = Vec::new();
    if !matches!(n1.rem_euclid(8), 1 | 7) {
        failures.push(2);
    }
    if jacobi(n1, 17).unwrap() != 1 {
        failures.push(17);
    }
    for (&p, &e) in &profile.odd_primes {
        if e % 2 == 1 && jacobi(34, p).unwrap() != 1 {
            failures.push(p);
        }
    }
    failures.into_iter().min().map(Place::Prime)
}

/// Whether n1 = 1 or -9 mod 16 (as opposed to -1 or 9).
fn plus_case(n1: i64) -> bool {
    matches!(n1.rem_euclid(16), 1 | 7)
}

/// Local solvability of x^2 - 34y^2 = n in closed form.
pub fn d34_locally_solvable(n: i64) -> Result<bool> {
    Ok(condition_one_failure(&d34_profile(n)?).is_none())
}

/// The closed form decides whether some place fails; the place reported is
/// the first one in `bad_places` order where the p-adic search finds no point,
/// which can differ from the first condition the closed form trips over.
fn failing_place(n: i64, hint: Place) -> Result<Place> {
    Ok(first_local_failure(&QuadEquation::pell(34, n)?)?.unwrap_or(hint))
}

/// First place where x^2 - 34y^2 = n has no local point.
pub fn d34_local_failure(n: i64) -> Result<Option<Place>> {
    match condition_one_failure(&d34_profile(n)?) {
        Some(hint) => failing_place(n, hint).map(Some),
        None => Ok(None),
    }
}

/// The verdict on x^2 - 34y^2 = n alone, without a witness.
pub fn d34_criterion(n: i64) -> Result<Decision> {
    let profile = d34_profile(n)?;
    if let Some(hint) = condition_one_failure(&profile) {
        return Ok(Decision::local_failure(failing_place(n, hint)?));
    }
    let solvable = profile.has_class(DClass::D1) || {
        let d4 = profile.exponent_sum(DClass::D4) % 2;
        let s2 = profile.special_exponent(17) % 2;
        let target = if plus_case(profile.n1) { s2 } else { 1 - s2 };
        d4 == target
    };
    Ok(if solvable {
        Decision::solvable()
    } else {
        Decision::obstructed(Character::Theta, -1)
    })
}

/// Decide x^2 - 34y^2 = n, with a witness when solvable.
pub fn decide_d34(n: i64) -> Result<Decision> {
    let verdict = d34_criterion(n)?;
    if !verdict.is_solvable() {
        return Ok(verdict);
    }
    let dec = represent(34, n)?;
    if !dec.is_solvable() {
        return Err(Error::SearchExhausted(format!("no point on x^2 - 34y^2 = {n}")));
    }
    Ok(dec)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ProfileEntry {
    pub place: Place,
    pub character: Character,
    pub value: i8,
    /// The sign can be flipped by another choice of local point.
    pub free_sign: bool,
    /// Valuation a_i of x + y sqrt(34) at the prime above p inert in Theta.
    pub exponent: Option<u32>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CharacterProfile {
    pub n: i64,
    pub entries: Vec<ProfileEntry>,
    /// Some choice of free signs makes every character's product trivial.
    pub combinable: bool,
}

/// Most free signs searched exhaustively.
pub const FREE_SIGN_LIMIT: usize = 64;

fn legendre_pow(a: i128, p: u64, e: u32) -> i8 {
    let s = jacobi(a, p).unwrap();
    if e % 2 == 0 {
        1
    } else {
        s
    }
}

/// Local values of the characters of H = Q(sqrt 2, sqrt 17) and of
/// Theta = E(sqrt(6 - sqrt 34)) over E = Q(sqrt 34) at the places that can
/// contribute, for a local point family on x^2 - 34y^2 = n.
///
/// `local_choice` fixes a_i for D1 primes (default 0).
pub fn character_profile_d34(
    n: i64,
    local_choice: Option<&BTreeMap<u64, u32>>,
) -> Result<CharacterProfile> {
    let profile = d34_profile(n)?;
    if let Some(hint) = condition_one_failure(&profile) {
        return Err(Error::LocallyUnsolvable(failing_place(n, hint)?));
    }
    if let Some(choice) = local_choice {
        for (&p, &a) in choice {
            match profile.classes.get(&p) {
                Some(DClass::D1) if a <= profile.odd_primes[&p] => {}
                Some(DClass::D1) => {
                    return Err(Error::BadInput(format!("a_{p} = {a} exceeds the exponent of {p}")))
                }
                _ => return Err(Error::BadInput(format!("{p} is not in D1"))),
            }
        }
    }
    let sign = |k: u32| if k % 2 == 0 { 1i8 } else { -1 };
    let mut entries = Vec::new();
    let mut d2_product = 1i8;
    for (&p, &e) in &profile.odd_primes {
        let place = Place::Prime(p);
        let fixed = |character, value| ProfileEntry {
            place,
            character,
            value,
            free_sign: false,
            exponent: None,
        };
        match profile.classes[&p] {
            DClass::D1 => {
                let a = local_choice.and_then(|c| c.get(&p).copied()).unwrap_or(0);
                entries.push(fixed(Character::H, sign(e)));
                entries.push(ProfileEntry {
                    place,
                    character: Character::Theta,
                    value: sign(a),
                    free_sign: true,
                    exponent: Some(a),
                });
            }
            DClass::D2 => {
                let v = legendre_pow(2, p, e / 2);
                d2_product *= v;
                entries.push(fixed(Character::Theta, v));
            }
            DClass::D3 => entries.push(fixed(Character::Theta, 1)),
            DClass::D4 => entries.push(fixed(Character::Theta, sign(e))),
            DClass::Unclassified => unreachable!("d34 classes partition D(n)"),
        }
    }
    let s2 = profile.special_exponent(17);
    if s2 > 0 {
        entries.push(ProfileEntry {
            place: Place::Prime(17),
            character: Character::Theta,
            value: sign(s2),
            free_sign: false,
            exponent: None,
        });
    }
    let two = if plus_case(profile.n1) { d2_product } else { -d2_product };
    entries.push(ProfileEntry {
        place: Place::Prime(2),
        character: Character::Theta,
        value: two,
        free_sign: false,
        exponent: None,
    });
    entries.sort_by_key(|e| (e.place, e.character));
    let combinable = combinable(&entries)?;
    Ok(CharacterProfile { n, entries, combinable })
}

/// Try every assignment of the free signs.
fn combinable(entries: &[ProfileEntry]) -> Result<bool> {
    let free: Vec<usize> = (0..entries.len()).filter(|&i| entries[i].free_sign).collect();
    if free.len() > FREE_SIGN_LIMIT {
        return Err(Error::BadInput(format!("{} free signs", free.len())));
    }
    let product = |ch: Character, flips: u128| {
        entries
            .iter()
            .enumerate()
            .filter(|(_, e)| e.character == ch)
            .map(|(i, e)| {
                let flipped = free.iter().position(|&j| j == i).is_some_and(|k| flips >> k & 1 == 1);
                if flipped {
                    -e.value
                } else {
                    e.value
                }
            })
            .product::<i8>()
    };
    let mut flips = 0u128;
    loop {
        if product(Character::H, flips) == 1 && product(Character::Theta, flips) == 1 {
            return Ok(true);
        }
        flips += 1;
        if flips >> free.len() != 0 {
            return Ok(false);
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GaussMethod {
    /// x^2 - d y^2 = -1 is solvable; the witness is attached.
    ViaNegativePell(BigInt, BigInt),
    /// x^2 - d y^2 = -1 has no point over Z_p at this place.
    ViaLocalFailure(Place),
    NotApplicable,
}

/// Whether genus theory alone settles x^2 - d y^2 = n.
pub fn gauss_method_applicable(d: u64) -> Result<GaussMethod> {
    if let Some((x, y)) = negative_pell_solvable(d)? {
        return Ok(GaussMethod::ViaNegativePell(x, y));
    }
    let d = i64::try_from(d).map_err(|_| Error::Overflow("d"))?;
    Ok(match first_local_failure(&QuadEquation::pell(d, -1)?)? {
        Some(place) => GaussMethod::ViaLocalFailure(place),
        None => GaussMethod::NotApplicable,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::Status;

    #[test]
    fn epstein_redei_examples() {
        assert_eq!(epstein_redei(17), Ok(EpsteinRedei::Unsolvable));
        assert_eq!(epstein_redei(41), Ok(EpsteinRedei::Inapplicable));
        assert_eq!(epstein_redei(73), Ok(EpsteinRedei::Unsolvable));
        assert_eq!(epstein_redei(7), Ok(EpsteinRedei::Inapplicable));
        assert_eq!(epstein_redei(15), Err(Error::NotPrime(15)));
    }

    #[test]
    fn theta_examples() {
        let t = theta_data(17).unwrap();
        assert_eq!(t.aux, (6, 1, 1));
        assert_eq!(t.theta_poly, [2, 0, -12, 0, 1]);
        assert_eq!(t.cornacchia, (5, 3));
        let t = theta_data(73).unwrap();
        assert_eq!((t.aux, t.theta_poly), ((14, 1, 5), [50, 0, -28, 0, 1]));
        let t = theta_data(41).unwrap();
        assert_eq!((t.aux, t.theta_poly), ((10, 1, 3), [18, 0, -20, 0, 1]));
        assert!(matches!(theta_data(13), Err(Error::BadInput(_))));
        assert!(matches!(theta_data_with_bound(17, 0), Err(Error::SearchExhausted(_))));
    }

    #[test]
    fn theta_poly_vanishes_on_generator() {
        // w = x0 - y0 sqrt(2l) satisfies w^2 - 2 x0 w + 2 z0^2 = 0, so
        // sqrt(w) is a root of the quartic. Work in Z[sqrt(2l)] as pairs.
        for l in [17u64, 41, 73, 89, 97, 113, 137, 193] {
            let t = theta_data(l).unwrap();
            let (x0, y0, z0) = (t.aux.0 as i128, t.aux.1 as i128, t.aux.2 as i128);
            let m = 2 * l as i128;
            let (wr, ws) = (x0, -y0);
            let (sq_r, sq_s) = (wr * wr + m * ws * ws, 2 * wr * ws);
            assert_eq!((sq_r - 2 * x0 * wr + 2 * z0 * z0, sq_s - 2 * x0 * ws), (0, 0), "l={l}");
            let (r, s) = t.cornacchia;
            assert_eq!(r * r + s * s, 2 * l);
        }
    }

    #[test]
    fn d34_examples() {
        assert_eq!(decide_d34(2).unwrap().witness, Some(vec![6, 1]));
        assert_eq!(decide_d34(-1).unwrap(), Decision::obstructed(Character::Theta, -1));
        assert_eq!(decide_d34(33).unwrap().witness, Some(vec![13, 2]));
        assert_eq!(decide_d34(0), Err(Error::ZeroInput));
        assert_eq!(
            decide_d34(3).unwrap().status,
            Status::LocallyUnsolvable(Place::Prime(2))
        );
    }

    #[test]
    fn condition_one_is_local_solvability() {
        for n in (-800i64..=800).filter(|&n| n != 0) {
            let eq = QuadEquation::pell(34, n).unwrap();
            let local = first_local_failure(&eq).unwrap();
            assert_eq!(d34_locally_solvable(n).unwrap(), local.is_none(), "n={n}");
            assert_eq!(d34_local_failure(n).unwrap(), local, "n={n}");
        }
    }

    #[test]
    fn profile_examples() {
        let p = character_profile_d34(-1, None).unwrap();
        assert_eq!(
            p.entries,
            vec![ProfileEntry {
                place: Place::Prime(2),
                character: Character::Theta,
                value: -1,
                free_sign: false,
                exponent: None
            }]
        );
        assert!(!p.combinable);

        let p = character_profile_d34(2, None).unwrap();
        assert!(p.entries.iter().all(|e| e.value == 1));
        assert!(p.combinable);

        let p = character_profile_d34(33, None).unwrap();
        let free: Vec<_> = p.entries.iter().filter(|e| e.free_sign).collect();
        assert_eq!(free.len(), 2);
        assert!(free.iter().all(|e| e.exponent.is_some() && e.character == Character::Theta));
        assert!(p.combinable);

        assert_eq!(
            character_profile_d34(3, None),
            Err(Error::LocallyUnsolvable(Place::Prime(2)))
        );
    }

    #[test]
    fn profile_local_choice() {
        let choice = BTreeMap::from([(3, 1)]);
        let p = character_profile_d34(33, Some(&choice)).unwrap();
        let e3 = p.entries.iter().find(|e| e.place == Place::Prime(3) && e.character == Character::Theta).unwrap();
        assert_eq!((e3.value, e3.exponent), (-1, Some(1)));
        assert!(p.combinable);
        let bad = BTreeMap::from([(3, 2)]);
        assert!(matches!(character_profile_d34(33, Some(&bad)), Err(Error::BadInput(_))));
        let bad = BTreeMap::from([(5, 0)]);
        assert!(matches!(character_profile_d34(33, Some(&bad)), Err(Error::BadInput(_))));
    }

    #[test]
    fn gauss_method_examples() {
        assert_eq!(
            gauss_method_applicable(2).unwrap(),
            GaussMethod::ViaNegativePell(1.into(), 1.into())
        );
        assert_eq!(
            gauss_method_applicable(6).unwrap(),
            GaussMethod::ViaLocalFailure(Place::Prime(2))
        );
        assert_eq!(gauss_method_applicable(34).unwrap(), GaussMethod::NotApplicable);
        assert_eq!(gauss_method_applicable(16), Err(Error::SquareInput(16)));
    }
}
