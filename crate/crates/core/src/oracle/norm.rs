use std::cmp::Reverse;
use std::collections::BTreeMap;

use rayon::prelude::*;

use crate::error::{Error, Result};

use super::Decision;

/// Discriminant of the Q-basis {1, sqrt 5, sqrt 34, sqrt 170}: the trace form
/// is diag(4, 20, 136, 680).
pub const SQRT_BASIS_DISCRIMINANT: i128 = 4 * 20 * 136 * 680;

/// Four elements of E = Q(sqrt 5, sqrt 34), each given by integers
/// (u1, u2, u3, u4) standing for (u1 + u2 sqrt 5 + u3 sqrt 34 + u4 sqrt 170)/2.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NormBasis {
    rows: [[i64; 4]; 4],
}

impl Default for NormBasis {
    /// {1, w, sqrt 34, sqrt 34 w} with w = (1 + sqrt 5)/2.
    fn default() -> Self {
        NormBasis {
            rows: [[2, 0, 0, 0], [1, 1, 0, 0], [0, 0, 2, 0], [0, 0, 1, 1]],
        }
    }
}

/// (c, d) with (2 beta)^2-norm down to Q(sqrt 34) equal to c + d sqrt 34,
/// where 2 beta = U + V sqrt 5, U = u1 + u3 sqrt 34, V = u2 + u4 sqrt 34.
fn relative_norm(u: [i128; 4]) -> (i128, i128) {
    let [u1, u2, u3, u4] = u;
    let c = u1 * u1 + 34 * u3 * u3 - 5 * u2 * u2 - 170 * u4 * u4;
    let d = 2 * u1 * u3 - 10 * u2 * u4;
    (c, d)
}

/// Characteristic polynomial of (u1 + u2 sqrt 5 + u3 sqrt 34 + u4 sqrt 170)/2
/// over Q, as numerators over the common denominator 16, constant term first
/// (leading coefficient 16).
pub fn char_poly_times_16(u: [i64; 4]) -> [i128; 5] {
    let u = u.map(i128::from);
    let (c, d) = relative_norm(u);
    let (u1, u3) = (u[0], u[2]);
    [
        c * c - 34 * d * d,
        -8 * (u1 * c - 34 * u3 * d),
        16 * (u1 * u1 - 34 * u3 * u3) + 8 * c,
        -32 * u1,
        16,
    ]
}

fn det4(m: [[i128; 4]; 4]) -> i128 {
    let minor = |skip: usize| -> i128 {
        let cols: Vec<usize> = (0..4).filter(|&c| c != skip).collect();
        let r = |i: usize, j: usize| m[i][cols[j]];
        r(1, 0) * (r(2, 1) * r(3, 2) - r(2, 2) * r(3, 1)) - r(1, 1) * (r(2, 0) * r(3, 2) - r(2, 2) * r(3, 0))
            + r(1, 2) * (r(2, 0) * r(3, 1) - r(2, 1) * r(3, 0))
    };
    (0..4).map(|j| if j % 2 == 0 { m[0][j] * minor(j) } else { -m[0][j] * minor(j) }).sum()
}

impl NormBasis {
    /// Rejects elements that are not algebraic integers (`BadBasis`) and
    /// dependent families (`BadInput`).
    pub fn new(rows: [[i64; 4]; 4]) -> Result<Self> {
        for (i, row) in rows.iter().enumerate() {
            if char_poly_times_16(*row).iter().any(|c| c % 16 != 0) {
                return Err(Error::BadBasis(i));
            }
        }
        let basis = NormBasis { rows };
        if basis.determinant() == 0 {
            return Err(Error::BadInput("basis elements are linearly dependent".into()));
        }
        Ok(basis)
    }

    pub fn rows(&self) -> [[i64; 4]; 4] {
        self.rows
    }

    /// Determinant of the coordinate matrix against {1, sqrt 5, sqrt 34,
    /// sqrt 170}, counting each coordinate in halves.
    fn determinant(&self) -> i128 {
        det4(self.rows.map(|r| r.map(i128::from)))
    }

    /// det(Tr(e_i e_j)). For a basis of the maximal order this equals the
    /// field discriminant 5 * 136 * 680 = 462400.
    pub fn discriminant(&self) -> i128 {
        let det = self.determinant();
        det * det * SQRT_BASIS_DISCRIMINANT / 256
    }

    /// 2 * sum x_i e_i in integer coordinates.
    fn doubled(&self, x: &[i64; 4]) -> [i128; 4] {
        let mut u = [0i128; 4];
        for (xi, row) in x.iter().zip(&self.rows) {
            for k in 0..4 {
                u[k] += *xi as i128 * row[k] as i128;
            }
        }
        u
    }

    /// Norm from E to Q of sum x_i e_i, computed exactly as the product of
    /// the relative norms down the tower E / Q(sqrt 34) / Q.
    pub fn norm(&self, x: &[i64; 4]) -> i128 {
        let (c, d) = relative_norm(self.doubled(x));
        (c * c - 34 * d * d) / 16
    }
}

/// Preference among witnesses: smaller sup norm, then smaller l1 norm, then
/// lexicographically larger (so 1 beats -1 and e_1 beats e_2).
fn witness_key(x: &[i64; 4]) -> (i64, i64, Reverse<[i64; 4]>) {
    let sup = x.iter().map(|v| v.abs()).max().unwrap();
    let l1 = x.iter().map(|v| v.abs()).sum();
    (sup, l1, Reverse(*x))
}

/// Calls `visit` on every vector with sup norm exactly r whose first
/// coordinate is x1.
fn shell_slice(r: i64, x1: i64, mut visit: impl FnMut([i64; 4])) {
    for x2 in -r..=r {
        for x3 in -r..=r {
            let on_shell = x1.abs() == r || x2.abs() == r || x3.abs() == r;
            if on_shell {
                for x4 in -r..=r {
                    visit([x1, x2, x3, x4]);
                }
            } else if r == 0 {
                visit([x1, x2, x3, 0]);
            } else {
                visit([x1, x2, x3, -r]);
                visit([x1, x2, x3, r]);
            }
        }
    }
}

/// Search sup-norm shells 0, 1, ..., bound for a vector of norm n.
/// One-sided: a miss is `UnknownWitness`, never a proof.
pub fn norm_form_search(basis: &NormBasis, n: i64, bound: u32) -> Result<Decision> {
    if n == 0 {
        return Err(Error::ZeroInput);
    }
    let target = n as i128;
    for r in 0..=bound as i64 {
        let hit = (-r..=r)
            .into_par_iter()
            .filter_map(|x1| {
                let mut best: Option<[i64; 4]> = None;
                shell_slice(r, x1, |x| {
                    if basis.norm(&x) == target && best.is_none_or(|b| witness_key(&x) < witness_key(&b)) {
                        best = Some(x);
                    }
                });
                best
            })
            .min_by_key(witness_key);
        if let Some(x) = hit {
            return Decision::solvable_checked(x.iter().map(|&v| v as i128).collect(), |w| {
                let w: [i64; 4] = std::array::from_fn(|i| w[i] as i64);
                basis.norm(&w) == target
            });
        }
    }
    Ok(Decision::unknown())
}

/// Preferred witness for every norm of absolute value at most `max_abs`
/// reached by a vector in the box of sup norm `bound`.
pub type NormTable = BTreeMap<i64, [i64; 4]>;

/// One pass over the whole box, so that many n can be checked at the cost of
/// a single search. Agrees with [`norm_form_search`] on every n it covers.
pub fn norm_table(basis: &NormBasis, bound: u32, max_abs: u64) -> NormTable {
    let r = bound as i64;
    let merge = |mut a: NormTable, b: NormTable| {
        for (n, x) in b {
            a.entry(n)
                .and_modify(|cur| {
                    if witness_key(&x) < witness_key(cur) {
                        *cur = x;
                    }
                })
                .or_insert(x);
        }
        a
    };
    (-r..=r)
        .into_par_iter()
        .flat_map_iter(|x1| (-r..=r).map(move |x2| (x1, x2)))
        .fold(NormTable::new, |mut table, (x1, x2)| {
            for x3 in -r..=r {
                for x4 in -r..=r {
                    let x = [x1, x2, x3, x4];
                    let n = basis.norm(&x);
                    if n != 0 && n.unsigned_abs() <= max_abs as u128 {
                        let n = n as i64;
                        match table.get(&n) {
                            Some(cur) if witness_key(cur) <= witness_key(&x) => {}
                            _ => {
                                table.insert(n, x);
                            }
                        }
                    }
                }
            }
            table
        })
        .reduce(NormTable::new, merge)
}
