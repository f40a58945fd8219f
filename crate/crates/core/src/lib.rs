//! Exact arithmetic for elliptic-curve families over Q(t).
//!
//! The crate computes reduction data and root numbers of one-parameter
//! families of elliptic curves, empirically estimates averages and
//! autocovariances of the resulting sign sequences, and carries the
//! supporting machinery: big-integer multiplicative functions, polynomial
//! factorization over Q, square-free censuses, quadratic-form class
//! numbers, trace sums over newforms, and descent-style point searches.
//!
//! Everything outside of logarithmic heights is exact: estimators are
//! rationals, memberships are integer sign tests, and no value is rounded
//! before display.

pub mod arith;
pub mod averaging;
pub mod builder;
pub mod descent;
pub mod exec;
pub mod fiber;
pub mod modform;
pub mod poly;
pub mod sieve;
pub mod surface;

/// Library version embedded into every report for reproducibility.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
