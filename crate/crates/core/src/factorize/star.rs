use crate::error::{HurwitzError, Result};
use crate::permcore::Permutation;

use super::types::Factorization;

/// Index `i` (1-based) of the first transposition breaking the star condition, if any.
///
/// Star condition: if `{a_i, b_i}` only uses earlier letters and `b_i ∈ {a_j, b_j}` for
/// some `j < i`, then `b_j = ⋯ = b_i`. Taking `j` maximal is enough: a chain
/// of equal `b`s from any smaller `j` contains the one from the largest.
pub fn star_violation(f: &Factorization) -> Option<usize> {
    let t = &f.taus;
    for i in 1..t.len() {
        let (a, b) = (t[i].a, t[i].b);
        let seen = |x: u8| t[..i].iter().any(|s| s.a == x || s.b == x);
        if !(seen(a) && seen(b)) {
            continue;
        }
        let Some(j) = (0..i).rev().find(|&j| t[j].a == b || t[j].b == b) else {
            continue;
        };
        if t[j..=i].iter().any(|s| s.b != b) {
            return Some(i + 1);
        }
    }
    None
}

pub fn check_star_condition(f: &Factorization) -> bool {
    star_violation(f).is_none()
}

fn is_monotone(f: &Factorization) -> bool {
    f.taus.windows(2).all(|w| w[0].b <= w[1].b)
}

/// Conjugates a factorization satisfying the star condition into one with weakly increasing
/// larger entries.
///
/// The maximal runs of equal `b` are processed from the last to the first:
/// run `t` is conjugated by `(b, b⁽ᵗ⁾)` where `b⁽ᵗ⁾` is the `t`-th smallest run
/// value, and by `(a*, b⁽ᵗ⁾)` instead when some smaller letter of the run
/// would exceed the target. That staged procedure presumes every new `b`
/// value is a fresh letter, which the star condition alone does not force (e.g.
/// `(23)(23)(12)(12)`); when its result is not monotone the relabelling is
/// found by search over `S_d` instead. Some inputs satisfying the star condition have no
/// monotone conjugate at all, e.g. `(24)(23)(14)(34)`: the last pair must
/// carry the top label and either choice breaks an earlier pair. Those
/// are reported as [`HurwitzError::Invariant`].
pub fn monotonize(f: &Factorization) -> Result<Factorization> {
    if let Some(i) = star_violation(f) {
        return Err(HurwitzError::Precondition(format!("the star condition fails at transposition {i}")));
    }
    if is_monotone(f) {
        return Ok(f.clone());
    }
    let staged = staged_conjugation(f);
    if is_monotone(&staged) {
        return Ok(staged);
    }
    searched_conjugation(f).ok_or_else(|| {
        HurwitzError::Invariant(format!("no relabelling makes {:?} monotone", f.taus))
    })
}

fn staged_conjugation(f: &Factorization) -> Factorization {
    let d = f.degree();
    let mut runs: Vec<(usize, usize)> = Vec::new();
    for (i, t) in f.taus.iter().enumerate() {
        match runs.last_mut() {
            Some((_, end)) if f.taus[*end].b == t.b => *end = i,
            _ => runs.push((i, i)),
        }
    }
    let mut targets: Vec<usize> = runs.iter().map(|&(s, _)| f.taus[s].b as usize).collect();
    targets.sort_unstable();
    let mut cur = f.clone();
    for t in (0..runs.len()).rev() {
        let target = targets[t];
        let (s, e) = runs[t];
        let after = cur.conjugate_by(&swap(d, cur.taus[e].b as usize, target));
        let a_star = (s..=e).map(|i| after.taus[i].a as usize).max().unwrap_or(0);
        cur = if (s..=e).all(|i| after.taus[i].b as usize == target) {
            after
        } else {
            after.conjugate_by(&swap(d, a_star, target))
        };
    }
    cur
}

fn searched_conjugation(f: &Factorization) -> Option<Factorization> {
    let d = f.degree();
    let mut images: Vec<usize> = (0..d).collect();
    loop {
        let h = Permutation::from_images(&images).expect("bijection");
        let g = f.conjugate_by(&h);
        if is_monotone(&g) {
            return Some(g);
        }
        if !next_permutation(&mut images) {
            return None;
        }
    }
}

fn next_permutation(v: &mut [usize]) -> bool {
    let Some(i) = (1..v.len()).rev().find(|&i| v[i - 1] < v[i]) else {
        return false;
    };
    let j = (i..v.len()).rev().find(|&j| v[j] > v[i - 1]).expect("successor exists");
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

fn swap(d: usize, x: usize, y: usize) -> Permutation {
    if x == y {
        Permutation::identity(d)
    } else {
        Permutation::transposition(d, x, y).expect("points in range")
    }
}

#[cfg(test)]
pub(super) fn staged_ok(f: &Factorization) -> bool {
    is_monotone(&staged_conjugation(f))
}

#[cfg(test)]
pub(super) fn has_monotone_conjugate(f: &Factorization) -> bool {
    is_monotone(f) || searched_conjugation(f).is_some()
}
