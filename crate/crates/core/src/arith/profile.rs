use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use super::primes::{factor_u64, FactorConfig};
use super::residues::{legendre, power_residue_solvable, quartic_roots_mod};
use crate::error::{Error, Result};

/// Equation families with a worked decision procedure.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    /// x^2 + 64y^2 + 64y + 16 = n
    Gauss64,
    /// x^2 - 34y^2 = n
    D34,
    /// N_{E/Q}(x) = n over E = Q(sqrt 5, sqrt 34)
    Multinorm534,
}

impl Family {
    pub fn name(self) -> &'static str {
        match self {
            Family::Gauss64 => "gauss64",
            Family::D34 => "d34",
            Family::Multinorm534 => "multinorm534",
        }
    }

    /// Odd primes split off from D(n) before classification.
    fn special_primes(self) -> &'static [u64] {
        match self {
            Family::Gauss64 => &[],
            Family::D34 | Family::Multinorm534 => &[17],
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "gauss64" => Ok(Family::Gauss64),
            "d34" => Ok(Family::D34),
            "multinorm534" => Ok(Family::Multinorm534),
            other => Err(Error::UnknownFamily(other.to_string())),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum DClass {
    D1,
    D2,
    D3,
    D4,
    Unclassified,
}

/// n = (-1)^s0 * 2^s1 * prod(special) * prod(odd_primes), plus the D-set
/// labels of the odd primes once [`classify`] has run.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FactorProfile {
    pub n: i64,
    pub s0: u32,
    pub s1: u32,
    pub special: BTreeMap<u64, u32>,
    pub odd_primes: BTreeMap<u64, u32>,
    pub classes: BTreeMap<u64, DClass>,
    pub n1: i64,
}

impl FactorProfile {
    /// Exponent of a special prime (0 when absent).
    pub fn special_exponent(&self, p: u64) -> u32 {
        self.special.get(&p).copied().unwrap_or(0)
    }

    pub fn primes_in(&self, class: DClass) -> impl Iterator<Item = (u64, u32)> + '_ {
        self.classes
            .iter()
            .filter(move |(_, &c)| c == class)
            .map(|(&p, _)| (p, self.odd_primes[&p]))
    }

    pub fn has_class(&self, class: DClass) -> bool {
        self.classes.values().any(|&c| c == class)
    }

    /// Sum of exponents over one D-set.
    pub fn exponent_sum(&self, class: DClass) -> u32 {
        self.primes_in(class).map(|(_, e)| e).sum()
    }

    /// Recompose n from the stored factorization.
    pub fn recompose(&self) -> i128 {
        let mut acc: i128 = if self.s0 == 1 { -1 } else { 1 };
        acc *= 1i128 << self.s1;
        for (&p, &e) in self.special.iter().chain(self.odd_primes.iter()) {
            acc *= (p as i128).pow(e);
        }
        acc
    }
}

pub fn factorize(n: i64) -> Result<FactorProfile> {
    factorize_with(n, &FactorConfig::default())
}

/// Complete factorization of a nonzero integer, without D-set labels.
pub fn factorize_with(n: i64, cfg: &FactorConfig) -> Result<FactorProfile> {
    if n == 0 {
        return Err(Error::ZeroInput);
    }
    let mut odd_primes = factor_u64(n.unsigned_abs(), cfg)?;
    let s1 = odd_primes.remove(&2).unwrap_or(0);
    Ok(FactorProfile {
        n,
        s0: u32::from(n < 0),
        s1,
        special: BTreeMap::new(),
        odd_primes,
        classes: BTreeMap::new(),
        n1: n.signum(),
    })
}

fn classify_gauss64(p: u64) -> DClass {
    match p % 8 {
        // (-1/p) = 1, (2/p) = -1
        5 => DClass::D1,
        // (-1/p) = (2/p) = 1 and 2 is not a fourth power
        1 if !power_residue_solvable(2, 4, p).unwrap() => DClass::D2,
        _ => DClass::Unclassified,
    }
}

const THETA_17: [i64; 5] = [2, 0, -12, 0, 1];

fn classify_d34(p: u64) -> DClass {
    let two = legendre(2, p);
    let seventeen = legendre(17, p);
    match (two, seventeen) {
        (-1, -1) => DClass::D1,
        (1, 1) => {
            if quartic_roots_mod(&THETA_17, p).unwrap() {
                DClass::D3
            } else {
                DClass::D4
            }
        }
        _ => DClass::D2,
    }
}

/// Label every odd prime of `profile` with its D-set for `family` and compute n1.
///
/// The family's special primes (17 for the d34 and multinorm families) are
/// moved from `odd_primes` into `special` first; they never receive a label.
pub fn classify(mut profile: FactorProfile, family: Family) -> Result<FactorProfile> {
    if family == Family::Gauss64 && profile.n <= 0 {
        return Err(Error::NonPositive);
    }
    // Undo an earlier classification so the call is idempotent.
    for (p, e) in std::mem::take(&mut profile.special) {
        profile.odd_primes.insert(p, e);
    }
    for &p in family.special_primes() {
        if let Some(e) = profile.odd_primes.remove(&p) {
            profile.special.insert(p, e);
        }
    }
    profile.classes = profile
        .odd_primes
        .keys()
        .map(|&p| {
            let class = match family {
                Family::Gauss64 => classify_gauss64(p),
                Family::D34 | Family::Multinorm534 => classify_d34(p),
            };
            (p, class)
        })
        .collect();
    let mut n1: i64 = if profile.s0 == 1 { -1 } else { 1 };
    if family != Family::Gauss64 {
        for (&p, &e) in &profile.odd_primes {
            if profile.classes[&p] != DClass::D2 {
                n1 *= (p as i64).pow(e);
            }
        }
    }
    profile.n1 = n1;
    Ok(profile)
}
