//! Factorizations in the symmetric group and the Hurwitz numbers counting them.

mod search;
mod star;
mod types;

pub use search::{
    count, count_with, count_with_fixed_start, enumerate, enumerate_with, gamma_sequence, infimum_number,
    search_fold, validate_factorization, Guide, InfimumMode, Leaf, SearchConfig, SearchLimits, Step, Unguided,
};
pub use star::{check_star_condition, monotonize, star_violation};
pub use types::{r_length, Factorization, FactorizationSpec, Sign, SignSequence, Transposition, Variant};

#[cfg(test)]
mod tests;
