//! Certified numerical verification of explicit inequalities for the
//! primes, the primorial and the Chebyshev theta function.
//!
//! Exact integer arithmetic is used wherever a comparison can be cleared of
//! denominators; everything else goes through outward-rounded intervals
//! ([`rigor::Interval`]) and yields a three-valued [`rigor::Verdict`].

// `!(x > 1.0)` is used on purpose so that NaN is rejected too
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod agm;
pub mod analytic;
pub mod catalog;
pub mod error;
pub mod fixed;
pub mod limit;
pub mod prime_core;
pub mod rigor;

pub use catalog::{evaluate, verify_range, InequalityId, VerificationReport};
pub use error::{Error, Result};
pub use prime_core::{PrimeTable, TableConfig};
pub use rigor::{certify_less, certify_less_eq, Interval, Verdict};
