use serde::{Deserialize, Serialize};

use crate::error::{HurwitzError, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CutJoinOp {
    Cut,
    Join,
}

/// One edge at a cut or join vertex.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LocalEdge {
    Odd,
    Red,
    Blue,
    /// One of the two edges of an exchanged pair.
    Dotted,
}

/// Which involution the transposition has to be compatible with.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InvolutionKind {
    /// `γ∘(τσ)∘γ = (τσ)⁻¹`
    Gamma,
    /// `(γσ)∘(τσ)∘(γσ) = (τσ)⁻¹`
    GammaShifted,
}

/// A cut (one edge in, two out) or a join (two in, one out).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CutJoinLocal {
    pub operation: CutJoinOp,
    pub single: LocalEdge,
    pub pair: [LocalEdge; 2],
    /// The pair forms a symmetric cycle or fork.
    pub symmetric: bool,
    pub involution_kind: InvolutionKind,
}

/// Number of admissible transpositions realizing the local picture.
///
/// Cuts: odd → odd + X gives 1; X → X + X gives 2, or 1 for a symmetric
/// pair; X → odd + odd gives 2 (1); X → dotted pair gives 1. Joins: odd + X
/// → odd gives 2; X + X → X gives 4; odd + odd → X gives 1; a dotted pair
/// of weight `k` each → X gives `k`. Here X is red or blue throughout, and
/// the count does not depend on the involution kind. `weights` lists the
/// pair's weights (only the dotted join reads them).
pub fn cut_join_multiplicity(local: &CutJoinLocal, weights: &[u32]) -> Result<u64> {
    use LocalEdge::*;
    let mut pair = local.pair;
    pair.sort();
    let coloured = |e: LocalEdge| matches!(e, Red | Blue);
    let x = local.single;
    let halve = |n: u64| if local.symmetric { n / 2 } else { n };
    let value = match (local.operation, x, pair) {
        (CutJoinOp::Cut, Odd, [Odd, y]) if coloured(y) => Some(1),
        (CutJoinOp::Cut, x, [y, z]) if coloured(x) && y == x && z == x => Some(halve(2)),
        (CutJoinOp::Cut, x, [Odd, Odd]) if coloured(x) => Some(halve(2)),
        (CutJoinOp::Cut, x, [Dotted, Dotted]) if coloured(x) => Some(1),
        (CutJoinOp::Join, Odd, [Odd, y]) if coloured(y) => Some(2),
        (CutJoinOp::Join, x, [y, z]) if coloured(x) && y == x && z == x => Some(4),
        (CutJoinOp::Join, x, [Odd, Odd]) if coloured(x) => Some(1),
        (CutJoinOp::Join, x, [Dotted, Dotted]) if coloured(x) => match weights {
            [k, l] if k == l => Some(*k as u64),
            _ => None,
        },
        _ => None,
    };
    value.ok_or_else(|| {
        HurwitzError::Invariant(format!("{:?} {x:?} | {:?} with weights {weights:?} is not a local type", local.operation, local.pair))
    })
}
