//! Exact decision procedures for integral solvability of binary quadratic
//! Diophantine equations and of a biquadratic norm equation, together with
//! brute-force oracles to check them against.

pub mod arith;
pub mod criteria;
pub mod error;
pub mod localsolve;
pub mod oracle;
pub mod pell;

pub use error::{Error, Result};
pub use localsolve::{Place, QuadEquation};
pub use oracle::{Decision, Status};
