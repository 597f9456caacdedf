//! Exact enumeration of double Hurwitz numbers.
//!
//! The crate counts factorizations in the symmetric group (complex, monotone,
//! real, real monotone and real k-mixed), builds the real tropical covers they
//! induce, checks the correspondence between the two sides, and classifies and
//! constructs zigzag covers.

pub mod bridge;
pub mod cli;
pub mod error;
pub mod factorize;
pub mod permcore;
pub mod tropical;
pub mod zigzag;

pub use error::{HurwitzError, Result};

/// Exact real multiplicities in the default scalar type. The tropical
/// routines are generic over any `num_integer::Integer` (see
/// [`tropical::real_multiplicity_in`]); fibre counts are `u64`.
pub type Multiplicity = num_rational::Ratio<i64>;
