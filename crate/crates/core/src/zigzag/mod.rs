//! Zigzag covers: tail decompositions, classification by string search,
//! unique colourings, zigzag numbers and the explicit constructions.

mod build;
mod classify;

pub use build::{
    build_case_cover, build_component_chain, build_kmixed_cover, build_standard_universal, build_string_cover,
    chain_types, count_for_signs, tail_sequence, CaseCover, CaseFamily, ChainCover, ComponentType, KMixedCover,
    TailCase, TailExchange, TailSequence, TailSpec,
};
pub use classify::{
    classify, is_kmixed, tail_decomposition, truncate, unique_colouring, zigzag_number, zigzag_structures,
    Classification, KMixedWitness, Piece, StringShape, Tail, TailDecomposition, ZigzagClass, ZigzagComponent,
    ZigzagFamily, ZigzagNumber, ZigzagStructure, ZigzagTerm,
};

#[cfg(test)]
mod tests;
