use std::collections::BTreeMap;
use std::fmt;

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::FromPrimitive;
use serde::{Deserialize, Serialize};

use crate::error::{HurwitzError, Result};
use crate::factorize::{Sign, SignSequence};

use super::cover::{Endpoint, TropicalCover};

/// Drawing style of one edge in a real tropical cover.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EdgeColour {
    /// Odd weight, outside `I_ρ`.
    Black,
    Red,
    Blue,
    /// Part of a symmetric cycle or fork in `I_ρ`.
    Dotted,
}

impl EdgeColour {
    pub fn dot_name(self) -> &'static str {
        match self {
            EdgeColour::Black => "black",
            EdgeColour::Red => "red",
            EdgeColour::Blue => "blue",
            EdgeColour::Dotted => "dotted",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SymmetryKind {
    Cycle,
    OddFork,
    EvenFork,
}

/// A symmetric cycle or fork: two edges (indices into the sorted edge list)
/// with identical endpoints and weight.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct SymmetricPair {
    pub kind: SymmetryKind,
    pub edges: (usize, usize),
    pub weight: u32,
}

/// `CF(φ)` split into its cycles `C(φ)` and its forks.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SymmetrySets {
    pub symmetric_cycles: Vec<SymmetricPair>,
    pub symmetric_forks: Vec<SymmetricPair>,
}

impl SymmetrySets {
    pub fn of(c: &TropicalCover) -> Self {
        let edges = c.edges();
        let mut symmetric_cycles = Vec::new();
        let mut symmetric_forks = Vec::new();
        for i in 1..edges.len() {
            let (a, b) = (edges[i - 1], edges[i]);
            if a != b {
                continue;
            }
            let pair = |kind| SymmetricPair { kind, edges: (i - 1, i), weight: a.weight };
            if a.is_inner() {
                symmetric_cycles.push(pair(SymmetryKind::Cycle));
            } else if a.is_even() {
                symmetric_forks.push(pair(SymmetryKind::EvenFork));
            } else {
                symmetric_forks.push(pair(SymmetryKind::OddFork));
            }
        }
        SymmetrySets { symmetric_cycles, symmetric_forks }
    }

    /// `CF(φ)`, cycles first.
    pub fn cf(&self) -> Vec<SymmetricPair> {
        self.symmetric_cycles.iter().chain(&self.symmetric_forks).copied().collect()
    }
}

/// A colouring: the subset `I_ρ ⊆ CF(φ)` and one colour per edge (the colour
/// of its even component, `Black` for odd edges, `Dotted` inside `I_ρ`).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Colouring {
    #[serde(rename = "I_rho")]
    pub i_rho: Vec<(usize, usize)>,
    pub colours: Vec<EdgeColour>,
}

impl Colouring {
    /// Colours keyed by 1-based edge number, the JSON form.
    pub fn colour_map(&self) -> BTreeMap<String, EdgeColour> {
        self.colours.iter().enumerate().map(|(i, c)| ((i + 1).to_string(), *c)).collect()
    }
}

impl fmt::Display for Colouring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let letters: String = self
            .colours
            .iter()
            .map(|c| match c {
                EdgeColour::Black => 'k',
                EdgeColour::Red => 'r',
                EdgeColour::Blue => 'b',
                EdgeColour::Dotted => '.',
            })
            .collect();
        f.write_str(&letters)
    }
}

/// Even edges outside `I_ρ`, grouped into the components of the even subgraph.
/// Edges meet only at inner vertices (every end has its own leaf).
pub fn even_components(c: &TropicalCover, dotted: &[bool]) -> Vec<Vec<usize>> {
    let edges = c.edges();
    let live: Vec<usize> = (0..edges.len()).filter(|&i| edges[i].is_even() && !dotted[i]).collect();
    let mut comp: Vec<usize> = (0..live.len()).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut x = x;
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    for a in 0..live.len() {
        for b in a + 1..live.len() {
            let shared = edges[live[a]].vertices().any(|v| edges[live[b]].vertices().any(|w| w == v));
            if shared {
                let (ra, rb) = (find(&mut comp, a), find(&mut comp, b));
                comp[ra] = rb;
            }
        }
    }
    let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for a in 0..live.len() {
        let root = find(&mut comp, a);
        groups.entry(root).or_default().push(live[a]);
    }
    let mut out: Vec<Vec<usize>> = groups.into_values().collect();
    out.sort();
    out
}

/// Every colouring of the cover. Automorphisms only permute the two edges
/// of a symmetric pair, and both always carry the same colour (they are
/// either dotted together or meet in a common vertex), so distinct
/// colourings here are never isomorphic and no further dedup is needed.
pub fn enumerate_colourings(c: &TropicalCover) -> Vec<Colouring> {
    let cf = SymmetrySets::of(c).cf();
    let n = c.edges().len();
    let mut out = Vec::new();
    for mask in 0u32..(1 << cf.len()) {
        let chosen: Vec<SymmetricPair> = (0..cf.len()).filter(|k| mask >> k & 1 == 1).map(|k| cf[k]).collect();
        let mut dotted = vec![false; n];
        for p in &chosen {
            dotted[p.edges.0] = true;
            dotted[p.edges.1] = true;
        }
        let comps = even_components(c, &dotted);
        for choice in 0u64..(1 << comps.len()) {
            let mut colours: Vec<EdgeColour> = (0..n)
                .map(|i| if dotted[i] { EdgeColour::Dotted } else { EdgeColour::Black })
                .collect();
            for (k, comp) in comps.iter().enumerate() {
                let colour = if choice >> k & 1 == 1 { EdgeColour::Red } else { EdgeColour::Blue };
                for &i in comp {
                    colours[i] = colour;
                }
            }
            let mut i_rho: Vec<_> = chosen.iter().map(|p| p.edges).collect();
            // sorted, like every other producer of colourings
            i_rho.sort();
            out.push(Colouring { i_rho, colours });
        }
    }
    out.sort();
    out
}

/// Checks that `ρ` is a colouring of `c` in the sense of the definition:
/// dotted edges are exactly a union of `CF` pairs, odd edges are black and
/// each even component carries one colour.
pub fn check_colouring(c: &TropicalCover, rho: &Colouring) -> Result<()> {
    let edges = c.edges();
    if rho.colours.len() != edges.len() {
        return Err(HurwitzError::InvalidInput(format!(
            "colouring has {} entries for {} edges",
            rho.colours.len(),
            edges.len()
        )));
    }
    let cf = SymmetrySets::of(c).cf();
    let mut dotted = vec![false; edges.len()];
    for pair in &rho.i_rho {
        if !cf.iter().any(|p| p.edges == *pair) {
            return Err(HurwitzError::InvalidInput(format!("{pair:?} is not a symmetric cycle or fork")));
        }
        dotted[pair.0] = true;
        dotted[pair.1] = true;
    }
    for (i, e) in edges.iter().enumerate() {
        let ok = match rho.colours[i] {
            EdgeColour::Dotted => dotted[i],
            EdgeColour::Black => !dotted[i] && !e.is_even(),
            EdgeColour::Red | EdgeColour::Blue => !dotted[i] && e.is_even(),
        };
        if !ok {
            return Err(HurwitzError::InvalidInput(format!("edge {} cannot be {:?}", i + 1, rho.colours[i])));
        }
    }
    for comp in even_components(c, &dotted) {
        if comp.iter().any(|&i| rho.colours[i] != rho.colours[comp[0]]) {
            return Err(HurwitzError::InvalidInput("an even component carries two colours".into()));
        }
    }
    Ok(())
}

/// Sign of vertex `v`: the single edge on one side against the pair on the
/// other, read up to reflection.
pub fn vertex_sign(c: &TropicalCover, rho: &Colouring, v: usize) -> Result<Sign> {
    use EdgeColour::*;
    let (inc, out) = (c.incoming(v), c.outgoing(v));
    let (single, pair) = match (inc.len(), out.len()) {
        (1, 2) => (inc[0], [out[0], out[1]]),
        (2, 1) => (out[0], [inc[0], inc[1]]),
        _ => return Err(HurwitzError::Invariant(format!("vertex {} is not 3-valent", v + 1))),
    };
    let x = rho.colours[single];
    let mut p = [rho.colours[pair[0]], rho.colours[pair[1]]];
    p.sort();
    let positive = match (x, p) {
        (Black, [Black, Red]) => false,
        (Black, [Black, Blue]) => true,
        (Red | Blue, [Black, Black]) => x == Red,
        (Red, [Red, Red]) | (Red, [Dotted, Dotted]) => false,
        (Blue, [Blue, Blue]) | (Blue, [Dotted, Dotted]) => true,
        _ => {
            return Err(HurwitzError::Invariant(format!(
                "vertex {} has unclassifiable local colouring {x:?} | {:?}",
                v + 1,
                p
            )))
        }
    };
    Ok(if positive { Sign::Plus } else { Sign::Minus })
}

/// The splitting of the branch points induced by a colouring.
pub fn vertex_splitting(c: &TropicalCover, rho: &Colouring) -> Result<SignSequence> {
    (0..c.r()).map(|v| vertex_sign(c, rho, v)).collect::<Result<Vec<_>>>().map(SignSequence)
}

/// `|E(I_ρ)|`: inner even edges that are not dotted.
pub fn inner_even_edges(c: &TropicalCover, rho: &Colouring) -> usize {
    c.edges()
        .iter()
        .zip(&rho.colours)
        .filter(|(e, col)| e.is_inner() && e.is_even() && **col != EdgeColour::Dotted)
        .count()
}

/// `mult^ℝ(φ, ρ) = 2^{|E(I_ρ)| − |CF(φ)|} · ∏_{c ∈ I_ρ ∩ C(φ)} ω(c)` over any
/// integer type.
pub fn real_multiplicity_in<T>(c: &TropicalCover, rho: &Colouring) -> Ratio<T>
where
    T: Clone + Integer + FromPrimitive,
{
    let sets = SymmetrySets::of(c);
    let cf = sets.symmetric_cycles.len() + sets.symmetric_forks.len();
    let exponent = inner_even_edges(c, rho) as i64 - cf as i64;
    let two = T::one() + T::one();
    let power = num_traits::pow(two, exponent.unsigned_abs() as usize);
    let mut m = if exponent >= 0 { Ratio::from_integer(power) } else { Ratio::new(T::one(), power) };
    for cyc in &sets.symmetric_cycles {
        if rho.i_rho.contains(&cyc.edges) {
            m = m * Ratio::from_integer(T::from_u32(cyc.weight).expect("weight fits"));
        }
    }
    m
}

/// Exact real multiplicity in the default scalar type.
pub fn real_multiplicity(c: &TropicalCover, rho: &Colouring) -> crate::Multiplicity {
    real_multiplicity_in::<i64>(c, rho)
}

/// A tropical cover together with a colouring and the splitting it induces.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RealTropicalCover {
    pub cover: TropicalCover,
    pub colouring: Colouring,
    pub splitting: SignSequence,
}

impl RealTropicalCover {
    pub fn new(cover: TropicalCover, colouring: Colouring) -> Result<Self> {
        check_colouring(&cover, &colouring)?;
        let splitting = vertex_splitting(&cover, &colouring)?;
        Ok(RealTropicalCover { cover, colouring, splitting })
    }

    pub fn multiplicity(&self) -> crate::Multiplicity {
        real_multiplicity(&self.cover, &self.colouring)
    }

    /// Canonical form of the coloured cover: edges in canonical order with
    /// their colours. Automorphisms act trivially on colourings, so this is
    /// complete.
    pub fn canonical_form(&self) -> (super::CanonicalForm, Vec<EdgeColour>) {
        (self.cover.canonical_form(), self.colouring.colours.clone())
    }

    pub fn to_json(&self) -> serde_json::Value {
        let mut v = self.cover.to_json();
        v["colouring"] = serde_json::json!({
            "I_rho": self.colouring.i_rho.iter().map(|(a, b)| [a + 1, b + 1]).collect::<Vec<_>>(),
            "colours": self.colouring.colour_map(),
        });
        v["splitting"] = serde_json::json!(self.splitting.to_string());
        v
    }

    pub fn to_dot(&self) -> String {
        let names: Vec<&str> = self.colouring.colours.iter().map(|c| c.dot_name()).collect();
        self.cover.to_dot(Some(&names))
    }
}

/// Looks up the unique edge with the given endpoints and weight, if any.
pub fn find_edge(c: &TropicalCover, from: Endpoint, to: Endpoint, weight: u32) -> Option<usize> {
    c.edges().iter().position(|e| e.from == from && e.to == to && e.weight == weight)
}
