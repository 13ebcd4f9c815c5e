use thiserror::Error;

use crate::localsolve::Place;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("input must be nonzero")]
    ZeroInput,
    #[error("input must be positive")]
    NonPositive,
    #[error("|{value}| exceeds the configured bound {bound}")]
    OutOfRange { value: i128, bound: u64 },
    #[error("cofactor {0} resisted trial division and Pollard rho")]
    FactorizationIncomplete(u64),
    #[error("Jacobi symbol needs an odd positive modulus, got {0}")]
    EvenModulus(u64),
    #[error("modulus {0} is not prime")]
    CompositeModulus(u64),
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("bad input: {0}")]
    BadInput(String),
    #[error("unknown family `{0}`")]
    UnknownFamily(String),
    #[error("Hilbert symbol arguments must be nonzero")]
    ZeroArgument,
    #[error("discriminant b^2-4ac vanishes")]
    ZeroDiscriminant,
    #[error("p-adic search at {p} exceeded its precision budget")]
    DegenerateDiscriminant { p: u64 },
    #[error("{0} is a perfect square")]
    SquareInput(u64),
    #[error("no solution to start the orbit from")]
    NoWitness,
    #[error("no ring class table entry for d = {0}")]
    UnsupportedDiscriminant(u64),
    #[error("bounded search exhausted: {0}")]
    SearchExhausted(String),
    #[error("no local solution at {0}")]
    LocallyUnsolvable(Place),
    #[error("quadratic part is not positive definite")]
    IndefiniteForm,
    #[error("basis element {0} is not an algebraic integer")]
    BadBasis(usize),
    #[error("witness {witness:?} does not satisfy the equation")]
    WitnessMismatch { witness: Vec<i128> },
    #[error("ring class table line {line}: {msg}")]
    TableParse { line: usize, msg: String },
    #[error("arithmetic overflow in {0}")]
    Overflow(&'static str),
}
