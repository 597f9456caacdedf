//! Permutations, partitions and the action of inverting involutions on cycles.

mod involution;
mod partition;
mod permutation;

pub use involution::{classify_involution_action, shift_involution, InvertedCycle, InvolutionAction};
pub(crate) use involution::classify_unchecked;
pub use partition::Partition;
pub use permutation::{involutions, is_transitive, parse_cycles, permutations_of_type, Permutation, MAX_DEGREE};
