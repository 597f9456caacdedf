use rayon::prelude::*;

use crate::error::{invalid, HurwitzError, Result};
use crate::permcore::{involutions, permutations_of_type, Partition, Permutation};

use super::types::{Factorization, FactorizationSpec, Sign, SignSequence, Transposition, Variant};

/// Caps that make oversized searches fail loudly instead of running for hours.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchLimits {
    pub max_degree: usize,
    pub max_r: usize,
}

impl Default for SearchLimits {
    fn default() -> Self {
        SearchLimits { max_degree: 8, max_r: 10 }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SearchConfig {
    pub limits: SearchLimits,
    /// Worker count; `None` uses the global rayon pool.
    pub threads: Option<usize>,
}

impl SearchConfig {
    pub fn check(&self, d: usize, r: usize) -> Result<()> {
        if d > self.limits.max_degree {
            return Err(HurwitzError::ResourceLimit(format!(
                "degree {d} exceeds the limit {}",
                self.limits.max_degree
            )));
        }
        if r > self.limits.max_r {
            return Err(HurwitzError::ResourceLimit(format!("r = {r} exceeds the limit {}", self.limits.max_r)));
        }
        Ok(())
    }

    pub(crate) fn install<R: Send>(&self, f: impl FnOnce() -> R + Send) -> R {
        match self.threads {
            Some(n) => rayon::ThreadPoolBuilder::new()
                .num_threads(n.max(1))
                .build()
                .expect("thread pool")
                .install(f),
            None => f(),
        }
    }
}

/// One extension step of the depth-first search, handed to a [`Guide`].
pub struct Step<'a> {
    /// 0-based index of the transposition (and of the inner vertex it creates).
    pub index: usize,
    pub tau: Transposition,
    /// `π_{i−1}`
    pub prev: &'a Permutation,
    /// `π_i = τ_i∘π_{i−1}`
    pub pi: &'a Permutation,
    /// `γ_{i−1}` with `γ_0 = γ`; `None` for unsigned variants.
    pub gamma_prev: Option<&'a Permutation>,
    /// `γ_i`
    pub gamma: Option<&'a Permutation>,
    /// `ε_i ≠ ε_{i−1}`, reading `ε_0` as `+`; always `false` without signs.
    pub sign_changed: bool,
}

/// Optional pruning hook carried along the search.
pub trait Guide: Sync {
    type State: Clone + Send;
    fn root(&self, sigma1: &Permutation, gamma: Option<&Permutation>) -> Option<Self::State>;
    fn step(&self, state: &Self::State, step: &Step<'_>) -> Option<Self::State>;
}

/// The trivial guide.
pub struct Unguided;

impl Guide for Unguided {
    type State = ();
    fn root(&self, _: &Permutation, _: Option<&Permutation>) -> Option<()> {
        Some(())
    }
    fn step(&self, _: &(), _: &Step<'_>) -> Option<()> {
        Some(())
    }
}

/// A complete factorization reached by the search.
pub struct Leaf<'a, S> {
    pub sigma1: &'a Permutation,
    pub gamma: Option<&'a Permutation>,
    pub taus: &'a [Transposition],
    /// `π_r = σ₂⁻¹`
    pub pi: &'a Permutation,
    pub state: &'a S,
}

impl<S> Leaf<'_, S> {
    pub fn to_factorization(&self, signs: Option<&SignSequence>) -> Factorization {
        Factorization {
            gamma: self.gamma.copied(),
            sigma1: *self.sigma1,
            taus: self.taus.to_vec(),
            sigma2: self.pi.inverse(),
            signs: signs.cloned(),
        }
    }
}

struct Ctx<'a, G: Guide> {
    d: usize,
    r: usize,
    mu: &'a Partition,
    signs: Option<&'a [Sign]>,
    mono: usize,
    guide: &'a G,
    sigma1: Permutation,
    gamma: Option<Permutation>,
}

impl<G: Guide> Ctx<'_, G> {
    #[allow(clippy::too_many_arguments)]
    fn dfs<A>(
        &self,
        pi: Permutation,
        gamma_cur: Option<Permutation>,
        taus: &mut Vec<Transposition>,
        state: &G::State,
        acc: &mut A,
        fold: &(dyn Fn(&mut A, &Leaf<'_, G::State>) + Sync),
    ) {
        let depth = taus.len();
        if depth == self.r {
            if pi.cycle_type() == *self.mu && transitive(&self.sigma1, taus, self.d) {
                let leaf = Leaf { sigma1: &self.sigma1, gamma: self.gamma.as_ref(), taus, pi: &pi, state };
                fold(acc, &leaf);
            }
            return;
        }
        let j = depth + 1;
        let gamma_next = match (self.signs, gamma_cur) {
            (Some(signs), Some(g)) => Some(if j == 1 {
                if signs[0] == Sign::Plus {
                    g
                } else {
                    g.after(&self.sigma1)
                }
            } else if signs[j - 1] == signs[j - 2] {
                g
            } else {
                g.after(&pi)
            }),
            _ => None,
        };
        let sign_changed = match self.signs {
            Some(signs) if j == 1 => signs[0] != Sign::Plus,
            Some(signs) => signs[j - 1] != signs[j - 2],
            None => false,
        };
        let min_b = if depth >= 1 && j <= self.mono { taus[depth - 1].b as usize } else { 1 };
        let remaining = self.r - j;
        let target = self.mu.len();
        for b in min_b.max(1)..self.d {
            for a in 0..b {
                let next = pi.swap_values(a, b);
                if next.cycle_count().abs_diff(target) > remaining {
                    continue;
                }
                if let Some(g) = &gamma_next {
                    if !next.is_inverted_by(g) {
                        continue;
                    }
                }
                let tau = Transposition { a: a as u8, b: b as u8 };
                let step = Step {
                    index: depth,
                    tau,
                    prev: &pi,
                    pi: &next,
                    gamma_prev: gamma_cur.as_ref(),
                    gamma: gamma_next.as_ref(),
                    sign_changed,
                };
                let Some(st) = self.guide.step(state, &step) else {
                    continue;
                };
                taus.push(tau);
                self.dfs(next, gamma_next, taus, &st, acc, fold);
                taus.pop();
            }
        }
    }
}

fn transitive(sigma1: &Permutation, taus: &[Transposition], d: usize) -> bool {
    let mut parent: Vec<usize> = (0..d).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    let mut comps = d;
    let mut union = |p: &mut Vec<usize>, x: usize, y: usize| {
        let (rx, ry) = (find(p, x), find(p, y));
        if rx != ry {
            p[rx] = ry;
            comps -= 1;
        }
    };
    for x in 0..d {
        union(&mut parent, x, sigma1.apply(x));
    }
    for t in taus {
        union(&mut parent, t.a as usize, t.b as usize);
    }
    comps == 1
}

/// Runs the pruned search, folding the leaves below each root `(σ₁, γ)` into
/// one accumulator. Results come back in canonical root order whatever the
/// worker count.
pub fn search_fold<G, A, I, F>(
    spec: &FactorizationSpec,
    sigma1: Option<&Permutation>,
    cfg: &SearchConfig,
    guide: &G,
    init: I,
    fold: F,
) -> Result<Vec<A>>
where
    G: Guide,
    A: Send,
    I: Fn() -> A + Sync,
    F: Fn(&mut A, &Leaf<'_, G::State>) + Sync,
{
    let d = spec.degree();
    let r = spec.r();
    cfg.check(d, r)?;
    let starts = match sigma1 {
        Some(s) => {
            if s.degree() != d || s.cycle_type() != spec.lambda {
                return invalid(format!("σ₁ = {s} does not have cycle type {}", spec.lambda));
            }
            vec![*s]
        }
        None => permutations_of_type(&spec.lambda),
    };
    let mut roots: Vec<(Permutation, Option<Permutation>)> = Vec::new();
    if spec.variant.is_real() {
        let invs = involutions(d);
        for s in &starts {
            for g in invs.iter().filter(|g| s.is_inverted_by(g)) {
                roots.push((*s, Some(*g)));
            }
        }
    } else {
        roots.extend(starts.iter().map(|s| (*s, None)));
    }
    let signs = spec.signs.as_ref().map(|s| s.0.as_slice());
    let mono = spec.variant.monotone_prefix(r);
    let fold_ref: &(dyn Fn(&mut A, &Leaf<'_, G::State>) + Sync) = &fold;
    let run = |(s, g): &(Permutation, Option<Permutation>)| {
        let mut acc = init();
        if let Some(state) = guide.root(s, g.as_ref()) {
            let ctx = Ctx { d, r, mu: &spec.mu, signs, mono, guide, sigma1: *s, gamma: *g };
            let mut taus = Vec::with_capacity(r);
            ctx.dfs(*s, *g, &mut taus, &state, &mut acc, fold_ref);
        }
        acc
    };
    Ok(cfg.install(|| roots.par_iter().map(run).collect()))
}

/// Every factorization of the family, each exactly once, in canonical order.
pub fn enumerate(spec: &FactorizationSpec) -> Result<Vec<Factorization>> {
    enumerate_with(spec, None, &SearchConfig::default())
}

/// [`enumerate`] with an optional fixed `σ₁` and explicit configuration.
pub fn enumerate_with(
    spec: &FactorizationSpec,
    sigma1: Option<&Permutation>,
    cfg: &SearchConfig,
) -> Result<Vec<Factorization>> {
    let signs = spec.signs.clone();
    let parts = search_fold(spec, sigma1, cfg, &Unguided, Vec::new, |acc: &mut Vec<Factorization>, leaf| {
        acc.push(leaf.to_factorization(signs.as_ref()))
    })?;
    Ok(parts.into_iter().flatten().collect())
}

/// Number of factorizations of the family.
pub fn count(spec: &FactorizationSpec) -> Result<u64> {
    count_with(spec, None, &SearchConfig::default())
}

pub fn count_with(spec: &FactorizationSpec, sigma1: Option<&Permutation>, cfg: &SearchConfig) -> Result<u64> {
    let parts = search_fold(spec, sigma1, cfg, &Unguided, || 0u64, |acc, _| *acc += 1)?;
    Ok(parts.into_iter().sum())
}

/// Number of factorizations whose first permutation is exactly `σ₁`.
pub fn count_with_fixed_start(spec: &FactorizationSpec, sigma1: &Permutation) -> Result<u64> {
    count_with(spec, Some(sigma1), &SearchConfig::default())
}

/// `(γ_1, .., γ_r)` from the sign recursion.
pub fn gamma_sequence(f: &Factorization, signs: &SignSequence) -> Result<Vec<Permutation>> {
    let gamma = f.gamma.ok_or_else(|| HurwitzError::Precondition("factorization has no γ".into()))?;
    if signs.len() != f.taus.len() {
        return invalid(format!("{} signs for {} transpositions", signs.len(), f.taus.len()));
    }
    let pis = f.partial_products();
    let mut out = Vec::with_capacity(signs.len());
    for j in 0..signs.len() {
        let g = if j == 0 {
            if signs.get(0) == Sign::Plus {
                gamma
            } else {
                gamma.after(&f.sigma1)
            }
        } else if signs.get(j) == signs.get(j - 1) {
            out[j - 1]
        } else {
            let prev: Permutation = out[j - 1];
            prev.after(&pis[j])
        };
        out.push(g);
    }
    Ok(out)
}

/// Checks every defining condition of the family for `f`.
pub fn validate_factorization(f: &Factorization, spec: &FactorizationSpec) -> Result<()> {
    let d = spec.degree();
    let r = spec.r();
    let fail = |m: String| Err(HurwitzError::Invariant(m));
    if f.sigma1.degree() != d || f.sigma2.degree() != d {
        return fail("degree mismatch".into());
    }
    if f.taus.len() != r {
        return fail(format!("{} transpositions, expected {r}", f.taus.len()));
    }
    if f.taus.iter().any(|t| t.a >= t.b || t.b as usize >= d) {
        return fail("malformed transposition".into());
    }
    if f.sigma1.cycle_type() != spec.lambda || f.sigma2.cycle_type() != spec.mu {
        return fail("cycle types do not match the type".into());
    }
    let pis = f.partial_products();
    if !f.sigma2.after(&pis[r]).is_identity() {
        return fail("σ₂∘τ_r∘⋯∘τ₁∘σ₁ ≠ id".into());
    }
    if !transitive(&f.sigma1, &f.taus, d) {
        return fail("not transitive".into());
    }
    let mono = spec.variant.monotone_prefix(r);
    for j in 1..mono {
        if f.taus[j].b < f.taus[j - 1].b {
            return fail(format!("b_{} > b_{}", j, j + 1));
        }
    }
    if spec.variant.is_real() {
        let signs = spec.signs.as_ref().expect("validated spec");
        let gamma = f.gamma.ok_or_else(|| HurwitzError::Invariant("missing γ".into()))?;
        if !gamma.is_involution() || !f.sigma1.is_inverted_by(&gamma) {
            return fail("γ is not an involution inverting σ₁".into());
        }
        for (i, g) in gamma_sequence(f, signs)?.iter().enumerate() {
            if !pis[i + 1].is_inverted_by(g) {
                return fail(format!("γ_{} does not invert π_{}", i + 1, i + 1));
            }
        }
    } else if f.gamma.is_some() {
        return fail("unsigned variant with γ".into());
    }
    Ok(())
}

/// Search mode of [`infimum_number`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InfimumMode {
    Simple,
    Arbitrary,
}

/// Minimum of the real monotone (or k-mixed) count over sign sequences, with
/// the lexicographically smallest minimizing sequence.
pub fn infimum_number(
    g: u32,
    lambda: &Partition,
    mu: &Partition,
    mode: InfimumMode,
    k: Option<usize>,
    cfg: &SearchConfig,
) -> Result<(u64, SignSequence)> {
    let r = super::r_length(g, lambda, mu)?;
    let variant = match k {
        Some(k) => Variant::RealKMixed(k),
        None => Variant::RealMonotone,
    };
    let mut seqs = match mode {
        InfimumMode::Simple => SignSequence::all_simple(r),
        InfimumMode::Arbitrary => SignSequence::all(r),
    };
    seqs.sort();
    let mut best: Option<(u64, SignSequence)> = None;
    for s in seqs {
        let spec = FactorizationSpec::new(g, lambda.clone(), mu.clone(), variant, Some(s.clone()))?;
        let c = count_with(&spec, None, cfg)?;
        if best.as_ref().is_none_or(|(b, _)| c < *b) {
            best = Some((c, s));
        }
    }
    Ok(best.expect("r > 0 gives at least one sequence"))
}
