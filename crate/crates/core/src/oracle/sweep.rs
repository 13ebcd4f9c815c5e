use std::ops::RangeInclusive;

use rayon::prelude::*;
use serde::Serialize;

use crate::arith::Family;
use crate::criteria::{d34_criterion, decide_multinorm_5_34, gauss64_criterion};
use crate::error::{Error, Result};
use crate::localsolve::QuadEquation;
use crate::pell::represent;

use super::{definite_search, norm_table, Decision, NormBasis, Status};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum OracleChoice {
    /// Exhaustive search on x^2 + 64y^2 + 64y + 16 = n.
    DefiniteSearch,
    /// Bounded y-scan on x^2 - 34y^2 = n.
    PellRepresent,
    /// Bounded search over norms; only a hit is evidence.
    NormSearch { bound: u32 },
}

impl OracleChoice {
    pub fn default_for(family: Family) -> Self {
        match family {
            Family::Gauss64 => OracleChoice::DefiniteSearch,
            Family::D34 => OracleChoice::PellRepresent,
            Family::Multinorm534 => OracleChoice::NormSearch { bound: 12 },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Mismatch {
    pub n: i64,
    pub criterion: Status,
    pub oracle: Status,
}

/// An input the criterion or the oracle refused.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Rejection {
    pub n: i64,
    pub error: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SweepReport {
    pub family: Family,
    pub oracle: OracleChoice,
    pub tested: u64,
    pub agreements: u64,
    pub mismatches: u64,
    pub first_mismatch: Option<Mismatch>,
    pub rejected: Vec<Rejection>,
}

enum Outcome {
    Agree,
    Disagree(Mismatch),
    Rejected(Rejection),
}

fn compare(n: i64, criterion: Result<Decision>, oracle: Result<Decision>, one_sided: bool) -> Outcome {
    let (c, o) = match (criterion, oracle) {
        (Ok(c), Ok(o)) => (c, o),
        (Err(e), _) | (_, Err(e)) => {
            return Outcome::Rejected(Rejection { n, error: e.to_string() })
        }
    };
    let agree = if one_sided {
        !o.is_solvable() || c.is_solvable()
    } else {
        o.is_solvable() == c.is_solvable()
    };
    if agree {
        Outcome::Agree
    } else {
        Outcome::Disagree(Mismatch {
            n,
            criterion: c.status,
            oracle: o.status,
        })
    }
}

/// Run a criterion and an independent oracle on every n in `range` and
/// compare the verdicts. For the norm search only a found witness counts, so
/// the comparison is one-sided. Inputs either side refuses are listed in
/// `rejected` and the sweep continues. `workers = 0` uses every core; the
/// report does not depend on it.
pub fn consistency_sweep(
    family: Family,
    range: RangeInclusive<i64>,
    oracle: OracleChoice,
    workers: usize,
) -> Result<SweepReport> {
    let valid = matches!(
        (family, oracle),
        (Family::Gauss64, OracleChoice::DefiniteSearch)
            | (Family::D34, OracleChoice::PellRepresent)
            | (Family::Multinorm534, OracleChoice::NormSearch { .. })
    );
    if !valid {
        return Err(Error::BadInput(format!("oracle {oracle:?} does not apply to {family}")));
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::BadInput(e.to_string()))?;
    let ns: Vec<i64> = range.collect();
    let outcomes: Vec<Outcome> = pool.install(|| match oracle {
        OracleChoice::DefiniteSearch => ns
            .par_iter()
            .map(|&n| {
                let search = if n > 0 {
                    definite_search(&QuadEquation::gauss64(n))
                } else {
                    Err(Error::NonPositive)
                };
                compare(n, gauss64_criterion(n), search, false)
            })
            .collect(),
        OracleChoice::PellRepresent => ns
            .par_iter()
            .map(|&n| compare(n, d34_criterion(n), represent(34, n), false))
            .collect(),
        OracleChoice::NormSearch { bound } => {
            let max_abs = ns.iter().map(|n| n.unsigned_abs()).max().unwrap_or(0);
            let basis = NormBasis::default();
            let table = norm_table(&basis, bound, max_abs);
            ns.par_iter()
                .map(|&n| {
                    let found = match (n, table.get(&n)) {
                        (0, _) => Err(Error::ZeroInput),
                        (_, Some(x)) => Decision::solvable_checked(
                            x.iter().map(|&v| v as i128).collect(),
                            |_| basis.norm(x) == n as i128,
                        ),
                        (_, None) => Ok(Decision::unknown()),
                    };
                    compare(n, decide_multinorm_5_34(n, None), found, true)
                })
                .collect()
        }
    });
    let mut report = SweepReport {
        family,
        oracle,
        tested: 0,
        agreements: 0,
        mismatches: 0,
        first_mismatch: None,
        rejected: Vec::new(),
    };
    for outcome in outcomes {
        match outcome {
            Outcome::Agree => {
                report.tested += 1;
                report.agreements += 1;
            }
            Outcome::Disagree(m) => {
                report.tested += 1;
                report.mismatches += 1;
                report.first_mismatch.get_or_insert(m);
            }
            Outcome::Rejected(r) => report.rejected.push(r),
        }
    }
    Ok(report)
}
