use std::collections::BTreeMap;

use rayon::prelude::*;

use num_rational::Ratio;
use serde::Serialize;

use crate::error::{HurwitzError, Result};
use crate::factorize::{count_with, search_fold, FactorizationSpec, Guide, SearchConfig, SignSequence, Step, Variant};
use crate::permcore::{Partition, Permutation};
use crate::tropical::{
    enumerate_colourings, enumerate_covers_with, real_multiplicity, vertex_splitting, EdgeColour, Endpoint,
    RealTropicalCover, SymmetryKind, SymmetrySets, TropicalCover,
};
use crate::Multiplicity;

use super::construction::Builder;

pub fn factorial(d: u32) -> u64 {
    (1..=d as u64).product()
}

type VertexProfile = (Vec<(Endpoint, u32, Option<EdgeColour>)>, Vec<(u32, Option<EdgeColour>)>);

/// Prunes the factorization search to branches whose partial cover construction
/// output agrees with a target coloured cover vertex by vertex.
struct TargetGuide {
    left: Vec<(u32, Option<EdgeColour>)>,
    vertices: Vec<VertexProfile>,
}

impl TargetGuide {
    fn new(rc: &RealTropicalCover) -> Self {
        let c = &rc.cover;
        let colour = |i: usize| Some(rc.colouring.colours[i]);
        let mut left: Vec<_> = (0..c.edges().len())
            .filter(|&i| c.edges()[i].from == Endpoint::Left)
            .map(|i| (c.edges()[i].weight, colour(i)))
            .collect();
        left.sort();
        let vertices = (0..c.r())
            .map(|v| {
                let mut inc: Vec<_> = c.incoming(v).into_iter().map(|i| (c.edges()[i].from, c.edges()[i].weight, colour(i))).collect();
                let mut out: Vec<_> = c.outgoing(v).into_iter().map(|i| (c.edges()[i].weight, colour(i))).collect();
                inc.sort();
                out.sort();
                (inc, out)
            })
            .collect();
        TargetGuide { left, vertices }
    }
}

impl Guide for TargetGuide {
    type State = Builder;

    fn root(&self, sigma1: &Permutation, gamma: Option<&Permutation>) -> Option<Builder> {
        let b = Builder::start(sigma1, gamma).ok()?;
        (b.left_ends() == self.left).then_some(b)
    }

    fn step(&self, state: &Builder, step: &Step<'_>) -> Option<Builder> {
        let mut b = state.clone();
        b.step(step.tau, step.pi, step.gamma.map(|g| (g, step.sign_changed))).ok()?;
        (b.last_vertex() == self.vertices[step.index]).then_some(b)
    }
}

/// Builds every leaf's cover, keeping the first construction failure.
struct RecordingGuide;

impl Guide for RecordingGuide {
    type State = std::result::Result<Builder, String>;

    fn root(&self, sigma1: &Permutation, gamma: Option<&Permutation>) -> Option<Self::State> {
        Some(Builder::start(sigma1, gamma).map_err(|e| e.to_string()))
    }

    fn step(&self, state: &Self::State, step: &Step<'_>) -> Option<Self::State> {
        Some(state.clone().and_then(|mut b| {
            b.step(step.tau, step.pi, step.gamma.map(|g| (g, step.sign_changed))).map_err(|e| e.to_string())?;
            Ok(b)
        }))
    }
}

fn spec_for(rc: &RealTropicalCover, variant: Variant) -> Result<FactorizationSpec> {
    if !matches!(variant, Variant::Real | Variant::RealMonotone | Variant::RealKMixed(_)) {
        return Err(HurwitzError::InvalidInput(format!("fibres are defined for real variants, not {variant}")));
    }
    FactorizationSpec::new(
        rc.cover.genus(),
        rc.cover.left_ends(),
        rc.cover.right_ends(),
        variant,
        Some(rc.splitting.clone()),
    )
}

/// Number of factorizations of `variant` (with the splitting of `rc` as
/// signs) that the cover construction maps to `rc`. The search is pruned vertex by
/// vertex against `rc`; [`fibre_count_exhaustive`] gives the same number by
/// mapping every factorization.
pub fn fibre_count(rc: &RealTropicalCover, variant: Variant, cfg: &SearchConfig) -> Result<u64> {
    let spec = spec_for(rc, variant)?;
    let guide = TargetGuide::new(rc);
    let parts = search_fold(&spec, None, cfg, &guide, || Ok(0u64), |acc: &mut Result<u64>, leaf| {
        if let Ok(n) = acc {
            match leaf.state.finish() {
                Ok(got) if got == *rc => *n += 1,
                Ok(got) => {
                    *acc = Err(HurwitzError::Invariant(format!(
                        "guided search reached {} instead of the target",
                        got.cover
                    )))
                }
                Err(e) => *acc = Err(e),
            }
        }
    })?;
    parts.into_iter().sum()
}

pub fn fibre_count_exhaustive(rc: &RealTropicalCover, variant: Variant, cfg: &SearchConfig) -> Result<u64> {
    let spec = spec_for(rc, variant)?;
    Ok(fibre_table(&spec, cfg)?.get(rc).copied().unwrap_or(0))
}

/// Partition of all factorizations of a real family (signs required) into
/// the fibres of the cover construction.
pub fn fibre_table(spec: &FactorizationSpec, cfg: &SearchConfig) -> Result<BTreeMap<RealTropicalCover, u64>> {
    if !spec.variant.is_real() {
        return Err(HurwitzError::InvalidInput("fibre tables need a real variant".into()));
    }
    type Acc = Result<BTreeMap<RealTropicalCover, u64>>;
    let parts = search_fold(&spec.clone(), None, cfg, &RecordingGuide, || Ok(BTreeMap::new()), |acc: &mut Acc, leaf| {
        let Ok(map) = acc else { return };
        match leaf.state.as_ref().map_err(|e| HurwitzError::Invariant(e.clone())).and_then(|b| b.finish()) {
            Ok(rc) if spec.signs.as_ref() != Some(&rc.splitting) => {
                *acc = Err(HurwitzError::Invariant(format!("cover splitting {} disagrees with the signs", rc.splitting)))
            }
            Ok(rc) => *map.entry(rc).or_insert(0) += 1,
            Err(e) => *acc = Err(e),
        }
    })?;
    let mut out = BTreeMap::new();
    for part in parts {
        for (rc, n) in part? {
            *out.entry(rc).or_insert(0) += n;
        }
    }
    Ok(out)
}

/// Which colourings count on the tropical side of the correspondence.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum MultiplicityConvention {
    /// `I_ρ` ranges over all of `CF(φ)`, even symmetric forks included.
    #[default]
    Standard,
    /// Even symmetric forks may not enter `I_ρ` and nothing compensates for
    /// it. Wrong on purpose; kept as a negative control.
    WithoutEvenForks,
}

#[derive(Clone, Debug, Serialize)]
pub struct TypeDescriptor {
    pub genus: u32,
    pub lambda: Partition,
    pub mu: Partition,
}

#[derive(Clone, Debug, Serialize)]
pub struct RhsTerm {
    pub cover_id: String,
    pub cover: String,
    pub colouring: String,
    #[serde(serialize_with = "ratio_string")]
    pub mult: Multiplicity,
    #[serde(serialize_with = "ratio_string")]
    pub contribution: Multiplicity,
}

#[derive(Clone, Debug, Serialize)]
pub struct CorrespondenceReport {
    #[serde(rename = "type")]
    pub kind: TypeDescriptor,
    pub signs: SignSequence,
    pub lhs: u64,
    #[serde(serialize_with = "ratio_string")]
    pub rhs: Multiplicity,
    pub rhs_terms: Vec<RhsTerm>,
    pub equal: bool,
}

fn ratio_string<S: serde::Serializer>(r: &Multiplicity, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&r.to_string())
}

/// Real tropical covers (all colourings of all covers) of a type whose
/// splitting is `signs`.
pub fn real_covers_with_splitting(
    g: u32,
    lambda: &Partition,
    mu: &Partition,
    signs: &SignSequence,
    cfg: &SearchConfig,
    convention: MultiplicityConvention,
) -> Result<Vec<RealTropicalCover>> {
    let mut out = Vec::new();
    for c in enumerate_covers_with(g, lambda, mu, &cfg.limits)? {
        let forks = SymmetrySets::of(&c).symmetric_forks;
        for rho in enumerate_colourings(&c) {
            let excluded = convention == MultiplicityConvention::WithoutEvenForks
                && forks.iter().any(|f| f.kind == SymmetryKind::EvenFork && rho.i_rho.contains(&f.edges));
            if excluded {
                continue;
            }
            if vertex_splitting(&c, &rho)? == *signs {
                out.push(RealTropicalCover::new(c.clone(), rho)?);
            }
        }
    }
    Ok(out)
}

/// Compares the real count with the sum of `d!·mult^ℝ` over the real
/// tropical covers realizing the splitting.
pub fn verify_correspondence(
    g: u32,
    lambda: &Partition,
    mu: &Partition,
    signs: &SignSequence,
    cfg: &SearchConfig,
) -> Result<CorrespondenceReport> {
    verify_correspondence_with(g, lambda, mu, signs, cfg, MultiplicityConvention::Standard)
}

pub fn verify_correspondence_with(
    g: u32,
    lambda: &Partition,
    mu: &Partition,
    signs: &SignSequence,
    cfg: &SearchConfig,
    convention: MultiplicityConvention,
) -> Result<CorrespondenceReport> {
    let spec = FactorizationSpec::new(g, lambda.clone(), mu.clone(), Variant::Real, Some(signs.clone()))?;
    let lhs = count_with(&spec, None, cfg)?;
    let d_fact = Ratio::from_integer(factorial(lambda.weight()) as i64);
    let mut rhs = Ratio::from_integer(0);
    let mut rhs_terms = Vec::new();
    for rc in real_covers_with_splitting(g, lambda, mu, signs, cfg, convention)? {
        let mult = real_multiplicity(&rc.cover, &rc.colouring);
        let contribution = d_fact * mult;
        rhs += contribution;
        rhs_terms.push(RhsTerm {
            cover_id: rc.cover.cover_id(),
            cover: rc.cover.to_string(),
            colouring: rc.colouring.to_string(),
            mult,
            contribution,
        });
    }
    Ok(CorrespondenceReport {
        kind: TypeDescriptor { genus: g, lambda: lambda.clone(), mu: mu.clone() },
        signs: signs.clone(),
        lhs,
        rhs,
        equal: rhs == Ratio::from_integer(lhs as i64),
        rhs_terms,
    })
}

/// Which splittings `n_numbers` ranges over and which family it counts.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum NMode {
    /// Simple sequences `+⋯+−⋯−`, real monotone factorizations.
    PerSimpleS,
    /// All `2^r` sequences, real monotone factorizations.
    PerSequence,
    /// All `2^r` sequences, real `k`-mixed factorizations.
    KMixed(usize),
}

#[derive(Clone, Debug, Serialize)]
pub struct NEntry {
    pub signs: SignSequence,
    /// Number of colourings of the cover with this splitting (one for zigzag covers).
    pub colourings: usize,
    pub count: u64,
    /// Set when no colouring realizes the splitting; `count` is then 0.
    pub no_colouring: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct NNumbers {
    pub mode: NMode,
    pub entries: Vec<NEntry>,
    /// The minimum over all entries.
    pub minimum: u64,
}

/// Counts, for each splitting in the mode's range, the factorizations of the
/// family whose coloured monodromy graph is the cover with a colouring
/// realizing that splitting.
pub fn n_numbers(cover: &TropicalCover, mode: NMode, cfg: &SearchConfig) -> Result<NNumbers> {
    let r = cover.r();
    let (sequences, variant) = match mode {
        NMode::PerSimpleS => (SignSequence::all_simple(r), Variant::RealMonotone),
        NMode::PerSequence => (SignSequence::all(r), Variant::RealMonotone),
        NMode::KMixed(k) if k <= r => (SignSequence::all(r), Variant::RealKMixed(k)),
        NMode::KMixed(k) => return Err(HurwitzError::InvalidInput(format!("k = {k} exceeds r = {r}"))),
    };
    let colourings = enumerate_colourings(cover);
    let mut by_splitting: BTreeMap<SignSequence, Vec<RealTropicalCover>> = BTreeMap::new();
    for rho in colourings {
        let rc = RealTropicalCover::new(cover.clone(), rho)?;
        by_splitting.entry(rc.splitting.clone()).or_default().push(rc);
    }
    // the splittings run in parallel; each fibre search then uses the same pool
    let inner = SearchConfig { threads: None, ..cfg.clone() };
    let entries = cfg.install(|| {
        sequences
            .into_par_iter()
            .map(|signs| {
                let matching = by_splitting.get(&signs).map(Vec::as_slice).unwrap_or(&[]);
                let mut count = 0;
                for rc in matching {
                    count += fibre_count(rc, variant, &inner)?;
                }
                Ok(NEntry { signs, colourings: matching.len(), count, no_colouring: matching.is_empty() })
            })
            .collect::<Result<Vec<_>>>()
    })?;
    let minimum = entries.iter().map(|e| e.count).min().unwrap_or(0);
    Ok(NNumbers { mode, entries, minimum })
}
