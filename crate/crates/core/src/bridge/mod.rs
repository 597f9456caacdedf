//! From factorizations to real tropical covers: the cover construction, the local
//! cut-join counts, fibres and the correspondence theorem.

mod construction;
mod cutjoin;
mod fibre;

pub use construction::{cover_from_factorization, monodromy_graph};
pub use cutjoin::{cut_join_multiplicity, CutJoinLocal, CutJoinOp, InvolutionKind, LocalEdge};
pub use fibre::{
    factorial, fibre_count, fibre_count_exhaustive, fibre_table, n_numbers, real_covers_with_splitting,
    verify_correspondence, verify_correspondence_with, CorrespondenceReport, MultiplicityConvention, NEntry, NMode,
    NNumbers, RhsTerm, TypeDescriptor,
};
