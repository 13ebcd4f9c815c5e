//! Explicit solvability criteria: the ring class field test for primes
//! x^2 + d y^2, the x^2 + 64y^2 + 64y + 16 family, the x^2 - 34y^2 family
//! with its character tables, and norms from Q(sqrt 5, sqrt 34).

mod d34;
mod gauss;
mod multinorm;
mod ring_class;

pub use d34::{
    character_profile_d34, d34_criterion, d34_local_failure, d34_locally_solvable, decide_d34, epstein_redei, gauss_method_applicable,
    theta_data, theta_data_with_bound, CharacterProfile, EpsteinRedei, GaussMethod, ProfileEntry,
    ThetaData, FREE_SIGN_LIMIT, THETA_Y_BOUND,
};
pub use gauss::{
    decide_gauss64, decide_x2_plus_dy2_prime, gauss64_criterion, gauss64_local_failure, gauss64_locally_solvable,
    local_conditions_x2_plus_dy2_prime,
};
pub use multinorm::decide_multinorm_5_34;
pub use ring_class::{RingClassEntry, RingClassTable, TABLE_ENV};
