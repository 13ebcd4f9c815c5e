use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::localsolve::{Place, QuadEquation};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Status {
    Solvable,
    Unsolvable,
    LocallyUnsolvable(Place),
    /// A one-sided search found nothing; the verdict stays open.
    UnknownWitness,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Status::Solvable => f.write_str("Solvable"),
            Status::Unsolvable => f.write_str("Unsolvable"),
            Status::LocallyUnsolvable(p) => write!(f, "LocallyUnsolvable({p})"),
            Status::UnknownWitness => f.write_str("UnknownWitness"),
        }
    }
}

/// Global characters that can obstruct a locally solvable equation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Character {
    /// Hilbert class field character.
    H,
    /// The quartic field Theta built from an auxiliary solution.
    Theta,
    /// Ring class field character of the order.
    #[serde(rename = "K_L")]
    KL,
}

impl fmt::Display for Character {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Character::H => "H",
            Character::Theta => "Theta",
            Character::KL => "K_L",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Certificate {
    pub character: Character,
    pub value: i8,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Decision {
    pub status: Status,
    pub witness: Option<Vec<i128>>,
    pub certificate: Option<Certificate>,
}

impl Decision {
    /// Solvable, with `witness` rechecked by `holds`.
    pub fn solvable_checked(witness: Vec<i128>, holds: impl FnOnce(&[i128]) -> bool) -> Result<Self> {
        if !holds(&witness) {
            return Err(Error::WitnessMismatch { witness });
        }
        Ok(Decision {
            status: Status::Solvable,
            witness: Some(witness),
            certificate: None,
        })
    }

    pub fn with_point(eq: &QuadEquation, x: i128, y: i128) -> Result<Self> {
        Self::solvable_checked(vec![x, y], |w| eq.satisfied_by(w[0], w[1]))
    }

    /// Solvable by a criterion, with no witness attached.
    pub fn solvable() -> Self {
        Self::bare(Status::Solvable)
    }

    pub fn unsolvable() -> Self {
        Self::bare(Status::Unsolvable)
    }

    pub fn obstructed(character: Character, value: i8) -> Self {
        Decision {
            certificate: Some(Certificate { character, value }),
            ..Self::unsolvable()
        }
    }

    pub fn local_failure(place: Place) -> Self {
        Self::bare(Status::LocallyUnsolvable(place))
    }

    pub fn unknown() -> Self {
        Self::bare(Status::UnknownWitness)
    }

    fn bare(status: Status) -> Self {
        Decision {
            status,
            witness: None,
            certificate: None,
        }
    }

    pub fn is_solvable(&self) -> bool {
        self.status == Status::Solvable
    }

    /// Unsolvable over Z, for either a global or a local reason.
    pub fn is_unsolvable(&self) -> bool {
        matches!(self.status, Status::Unsolvable | Status::LocallyUnsolvable(_))
    }
}
