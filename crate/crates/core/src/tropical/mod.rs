//! Monodromy graphs of tropical covers, their colourings and real multiplicities.

mod colouring;
mod cover;
mod enumerate;

pub use colouring::{
    check_colouring, enumerate_colourings, even_components, find_edge, inner_even_edges,
    real_multiplicity, real_multiplicity_in, vertex_sign, vertex_splitting, Colouring, EdgeColour, RealTropicalCover,
    SymmetricPair, SymmetryKind, SymmetrySets,
};
pub use cover::{canonicalize, cover_defects, validate_cover, CanonicalForm, Edge, Endpoint, TropicalCover};
pub use enumerate::{enumerate_covers, enumerate_covers_with};
