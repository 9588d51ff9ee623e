//! Parameter selection, certificate assembly and bound computation.

pub mod bounds;
pub mod certificate;
pub mod params;
pub mod primes;
pub mod pump;

pub use bounds::{compute_bounds, BoundReport};
pub use certificate::{
    build_certificate, parse_certificate, serialize, Absorption, NormalizedForm, NormalizedTerm,
    PowerTerm, WaringCertificate,
};
pub use params::{find_params, ConstructionParams, Route, SearchWindow};
pub use primes::{prime_search, theta, PrimeSearch};
pub use pump::{pump_base_power, pump_uniform_residue};
