use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// A place of Q: the real place or a finite prime.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Place {
    Infinity,
    Prime(u64),
}

impl fmt::Display for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Place::Infinity => f.write_str("inf"),
            Place::Prime(p) => write!(f, "{p}"),
        }
    }
}

impl Serialize for Place {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Place::Infinity => s.serialize_str("inf"),
            Place::Prime(p) => s.serialize_u64(*p),
        }
    }
}

impl FromStr for Place {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "inf" | "oo" | "infinity" => Ok(Place::Infinity),
            _ => s
                .parse::<u64>()
                .map(Place::Prime)
                .map_err(|_| Error::BadInput(format!("not a place: `{s}`"))),
        }
    }
}

/// The affine conic a x^2 + b xy + c y^2 + e x + f y + g = n.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct QuadEquation {
    a: i64,
    b: i64,
    c: i64,
    e: i64,
    f: i64,
    g: i64,
    n: i64,
    disc: i64,
}

impl QuadEquation {
    pub fn new(coeffs: [i64; 6], n: i64) -> Result<Self> {
        let [a, b, c, e, f, g] = coeffs;
        let disc = (b as i128) * (b as i128) - 4 * (a as i128) * (c as i128);
        if disc == 0 {
            return Err(Error::ZeroDiscriminant);
        }
        let disc = i64::try_from(disc).map_err(|_| Error::Overflow("discriminant"))?;
        Ok(QuadEquation { a, b, c, e, f, g, n, disc })
    }

    /// x^2 - d y^2 = n
    pub fn pell(d: i64, n: i64) -> Result<Self> {
        Self::new([1, 0, -d, 0, 0, 0], n)
    }

    /// x^2 + 64y^2 + 64y + 16 = n
    pub fn gauss64(n: i64) -> Self {
        Self::new([1, 0, 64, 0, 64, 16], n).unwrap()
    }

    pub fn coeffs(&self) -> [i64; 6] {
        [self.a, self.b, self.c, self.e, self.f, self.g]
    }

    pub fn rhs(&self) -> i64 {
        self.n
    }

    /// b^2 - 4ac
    pub fn disc(&self) -> i64 {
        self.disc
    }

    /// g - n, the constant term once the right side is moved over.
    pub fn constant(&self) -> i128 {
        self.g as i128 - self.n as i128
    }

    /// Left minus right side at (x, y), or None on overflow.
    pub fn eval(&self, x: i128, y: i128) -> Option<i128> {
        let (a, b, c, e, f) = (
            self.a as i128,
            self.b as i128,
            self.c as i128,
            self.e as i128,
            self.f as i128,
        );
        let xx = x.checked_mul(x)?.checked_mul(a)?;
        let xy = x.checked_mul(y)?.checked_mul(b)?;
        let yy = y.checked_mul(y)?.checked_mul(c)?;
        let lin = e.checked_mul(x)?.checked_add(f.checked_mul(y)?)?;
        xx.checked_add(xy)?
            .checked_add(yy)?
            .checked_add(lin)?
            .checked_add(self.constant())
    }

    /// (dF/dx, dF/dy) at (x, y).
    pub fn gradient(&self, x: i128, y: i128) -> Option<(i128, i128)> {
        let (a, b, c, e, f) = (
            self.a as i128,
            self.b as i128,
            self.c as i128,
            self.e as i128,
            self.f as i128,
        );
        let gx = (2 * a).checked_mul(x)?.checked_add(b.checked_mul(y)?)?.checked_add(e)?;
        let gy = b.checked_mul(x)?.checked_add((2 * c).checked_mul(y)?)?.checked_add(f)?;
        Some((gx, gy))
    }

    /// Determinant of the symmetric matrix [[2a,b,e],[b,2c,f],[e,f,2(g-n)]];
    /// zero exactly when the projective closure is a line pair.
    pub fn det(&self) -> i128 {
        let (a, b, c, e, f) = (
            self.a as i128,
            self.b as i128,
            self.c as i128,
            self.e as i128,
            self.f as i128,
        );
        let h = self.constant();
        2 * (4 * a * c - b * b) * h - 2 * (a * f * f - b * e * f + c * e * e)
    }

    /// Center of the conic as (x_num, y_num, den) with x = x_num/den.
    pub fn center(&self) -> (i128, i128, i128) {
        let (a, b, c, e, f) = (
            self.a as i128,
            self.b as i128,
            self.c as i128,
            self.e as i128,
            self.f as i128,
        );
        let den = 4 * a * c - b * b;
        (b * f - 2 * c * e, b * e - 2 * a * f, den)
    }

    pub fn satisfied_by(&self, x: i128, y: i128) -> bool {
        self.eval(x, y) == Some(0)
    }
}

impl fmt::Display for QuadEquation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms = [
            (self.a, "x^2"),
            (self.b, "xy"),
            (self.c, "y^2"),
            (self.e, "x"),
            (self.f, "y"),
            (self.g, ""),
        ];
        let mut first = true;
        for (k, mono) in terms {
            if k == 0 {
                continue;
            }
            let sign = if k < 0 { "-" } else if first { "" } else { "+" };
            let mag = k.unsigned_abs();
            let sep = if first { "" } else { " " };
            let body = if mag == 1 && !mono.is_empty() {
                mono.to_string()
            } else {
                format!("{mag}{mono}")
            };
            if first {
                write!(f, "{sign}{body}")?;
            } else {
                write!(f, "{sep}{sign} {body}")?;
            }
            first = false;
        }
        if first {
            f.write_str("0")?;
        }
        write!(f, " = {}", self.n)
    }
}
