//! Checks that share no code path with the construction.

pub mod brute;
pub mod certify;
pub mod collapsed;
pub mod extension;
pub mod multivariate;

pub use brute::{brute_force_min_powers, BruteForce};
pub use certify::{
    verify_certificate, verify_text, CheckStatus, VerificationReport, DEFAULT_SEED, DEFAULT_TRIALS,
};
pub use collapsed::collapsed_identity_residual;
pub use extension::{QuadElement, QuadraticExtension};
pub use multivariate::{check_multivariate_identity, least_degree_with_roots};
