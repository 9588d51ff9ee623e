//! Explicit certificates for Waring's problem in polynomial rings over fields
//! of positive characteristic.
//!
//! The crate builds identities of the form
//! `c_1 t + c_0 = sum_i c_i' y_i(t)^k'` over explicit finite fields, where the
//! number of summands is controlled by the digit sum of `k` in a suitable base,
//! and checks them independently.

pub mod cli;
pub mod construct;
pub mod digits;
pub mod error;
pub mod ff_core;
pub mod sparse_poly;
pub mod verify_oracle;

pub use error::{Error, ErrorClass, Result};
pub use ff_core::{make_field, FieldCtx, FieldElement, FieldOptions, KthRoot};
pub use sparse_poly::SparsePoly;
