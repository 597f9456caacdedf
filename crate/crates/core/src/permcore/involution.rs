use serde::Serialize;

use crate::error::{HurwitzError, Result};

use super::Permutation;

/// How an inverting involution acts on one cycle it maps to itself.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InvertedCycle {
    /// Index into the canonical cycle list of the target permutation.
    pub cycle: usize,
    /// 0-based fixed points inside the cycle (one for odd cycles, two or none for even ones).
    pub fixed_points: Vec<usize>,
    /// For an even cycle without fixed points: the two arcs of `l/2` consecutive
    /// elements swapped by the involution, each listed in cycle order.
    pub exchanged_halves: Option<(Vec<usize>, Vec<usize>)>,
}

/// Classification of `γ` acting by conjugation on the cycles of `σ`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InvolutionAction {
    pub cycles: Vec<Vec<usize>>,
    pub exchanged_pairs: Vec<(usize, usize)>,
    pub inverted_cycles: Vec<InvertedCycle>,
}

impl InvolutionAction {
    /// Number of fixed points of an inverted cycle, `None` if the cycle is exchanged.
    pub fn fixed_point_count(&self, cycle: usize) -> Option<usize> {
        self.inverted_cycles
            .iter()
            .find(|c| c.cycle == cycle)
            .map(|c| c.fixed_points.len())
    }
}

fn check_pre(gamma: &Permutation, sigma: &Permutation) -> Result<()> {
    if gamma.degree() != sigma.degree() {
        return Err(HurwitzError::DegreeMismatch(gamma.degree(), sigma.degree()));
    }
    if !gamma.is_involution() {
        return Err(HurwitzError::Precondition(format!("γ = {gamma} is not an involution (γ² ≠ id)")));
    }
    if !sigma.is_inverted_by(gamma) {
        return Err(HurwitzError::Precondition(format!("γ∘σ∘γ ≠ σ⁻¹ for γ = {gamma}, σ = {sigma}")));
    }
    Ok(())
}

/// Classifies the action of `γ` on the cycles of `σ`: every cycle is either
/// exchanged with another cycle of the same length or inverted.
pub fn classify_involution_action(gamma: &Permutation, sigma: &Permutation) -> Result<InvolutionAction> {
    check_pre(gamma, sigma)?;
    Ok(classify_unchecked(gamma, sigma))
}

pub(crate) fn classify_unchecked(gamma: &Permutation, sigma: &Permutation) -> InvolutionAction {
    let cycles = sigma.cycles();
    let mut cycle_of = vec![0usize; sigma.degree()];
    for (i, c) in cycles.iter().enumerate() {
        for &x in c {
            cycle_of[x] = i;
        }
    }
    let mut exchanged_pairs = Vec::new();
    let mut inverted_cycles = Vec::new();
    for (i, c) in cycles.iter().enumerate() {
        let j = cycle_of[gamma.apply(c[0])];
        if j != i {
            if i < j {
                exchanged_pairs.push((i, j));
            }
            continue;
        }
        let k = c.len();
        let fixed_points: Vec<usize> = c.iter().copied().filter(|&x| gamma.apply(x) == x).collect();
        let exchanged_halves = if fixed_points.is_empty() && k % 2 == 0 {
            // γ(c_j) = c_{t-j}; with no fixed point t is odd and the axis
            // separates positions (t-1)/2 | (t+1)/2.
            let t = c.iter().position(|&x| x == gamma.apply(c[0])).expect("inverted cycle");
            let start = (t + 1) / 2;
            let arc = |s: usize| (0..k / 2).map(|o| c[(s + o) % k]).collect::<Vec<_>>();
            let a = arc(start);
            let b = arc(start + k / 2);
            Some(if b.contains(&c[0]) { (b, a) } else { (a, b) })
        } else {
            None
        };
        inverted_cycles.push(InvertedCycle { cycle: i, fixed_points, exchanged_halves });
    }
    InvolutionAction { cycles, exchanged_pairs, inverted_cycles }
}

/// Returns `γ∘σ`, again an involution inverting `σ`.
pub fn shift_involution(gamma: &Permutation, sigma: &Permutation) -> Result<Permutation> {
    check_pre(gamma, sigma)?;
    Ok(gamma.after(sigma))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::permcore::{involutions, permutations_of_type, Partition};

    // a..h ↦ 1..8
    fn letters(s: &str) -> Permutation {
        let mut out = String::new();
        for ch in s.chars() {
            match ch {
                'a'..='h' => {
                    out.push_str(&((ch as u8 - b'a' + 1).to_string()));
                    out.push(' ');
                }
                _ => out.push(ch),
            }
        }
        Permutation::parse_with_degree(&out.replace(" )", ")"), 8).unwrap()
    }

    #[test]
    fn conjugation_example() {
        let gamma = letters("(be)(cd)(gh)");
        let c1 = letters("(abcde)");
        let c2 = letters("(abcfde)");
        let c3 = letters("(bgcdhe)");

        let a1 = classify_involution_action(&gamma, &c1).unwrap();
        let inv = a1.inverted_cycles.iter().find(|c| c.fixed_points.len() == 1).unwrap();
        assert_eq!(inv.fixed_points, vec![0]); // a

        let a2 = classify_involution_action(&gamma, &c2).unwrap();
        let inv = &a2.inverted_cycles.iter().find(|c| a2.cycles[c.cycle].len() == 6).unwrap();
        assert_eq!(inv.fixed_points, vec![0, 5]); // a, f

        let a3 = classify_involution_action(&gamma, &c3).unwrap();
        let inv = &a3.inverted_cycles.iter().find(|c| a3.cycles[c.cycle].len() == 6).unwrap();
        assert!(inv.fixed_points.is_empty());
        let (x, y) = inv.exchanged_halves.clone().unwrap();
        assert_eq!((x.len(), y.len()), (3, 3));

        assert_eq!(shift_involution(&gamma, &c1).unwrap(), letters("(ae)(bd)(gh)"));
        assert_eq!(shift_involution(&gamma, &c2).unwrap(), letters("(ae)(bd)(cf)(gh)"));
        let g3 = shift_involution(&gamma, &c3).unwrap();
        assert_eq!(g3, letters("(bh)(dg)"));
        let a = classify_involution_action(&g3, &c3).unwrap();
        let inv = a.inverted_cycles.iter().find(|c| a.cycles[c.cycle].len() == 6).unwrap();
        assert_eq!(inv.fixed_points.len(), 2);
    }

    #[test]
    fn small_cases() {
        let t = Permutation::parse_with_degree("(12)", 2).unwrap();
        assert!(shift_involution(&t, &t).unwrap().is_identity());
        let a = classify_involution_action(&Permutation::identity(2), &t).unwrap();
        assert_eq!(a.inverted_cycles[0].fixed_points.len(), 2);
        let bad = Permutation::parse_with_degree("(123)", 3).unwrap();
        assert!(classify_involution_action(&bad, &bad).is_err());
        let s = Permutation::parse_with_degree("(123)", 3).unwrap();
        assert!(classify_involution_action(&Permutation::identity(3), &s).is_err());
    }

    fn position(c: &[usize], x: usize) -> usize {
        c.iter().position(|&y| y == x).unwrap()
    }

    /// Exhaustive sweep of the lemma and the shift rules for d ≤ 6.
    #[test]
    fn exhaustive_shift_rules() {
        for d in 1..=6usize {
            let invs = involutions(d);
            for sigma in all_perms(d) {
                for gamma in invs.iter().filter(|g| sigma.is_inverted_by(g)) {
                    let a = classify_unchecked(gamma, &sigma);
                    let shifted = shift_involution(gamma, &sigma).unwrap();
                    assert!(shifted.is_involution());
                    let b = classify_unchecked(&shifted, &sigma);
                    assert_eq!(a.exchanged_pairs, b.exchanged_pairs);
                    for (ia, ib) in a.inverted_cycles.iter().zip(&b.inverted_cycles) {
                        let c = &a.cycles[ia.cycle];
                        let l = c.len();
                        if l % 2 == 1 {
                            assert_eq!(ia.fixed_points.len(), 1);
                            assert_eq!(ib.fixed_points.len(), 1);
                            // the fixed point moves ⌊l/2⌋ steps along the cycle
                            let pa = position(c, ia.fixed_points[0]);
                            let pb = position(c, ib.fixed_points[0]);
                            let step = (pb + l - pa) % l;
                            assert!(step == l / 2 || step == l - l / 2, "odd shift {step} of {l}");
                        } else {
                            assert!(matches!(ia.fixed_points.len(), 0 | 2));
                            assert_eq!(ia.fixed_points.len() + ib.fixed_points.len(), 2);
                            if ia.fixed_points.len() == 2 {
                                let p0 = position(c, ia.fixed_points[0]);
                                let p1 = position(c, ia.fixed_points[1]);
                                assert_eq!((p1 + l - p0) % l, l / 2);
                                // the fixed points of γ head the arcs swapped by γ∘σ
                                let (x, y) = ib.exchanged_halves.clone().unwrap();
                                let mut heads = vec![x[0], y[0]];
                                heads.sort();
                                let mut fixed = ia.fixed_points.clone();
                                fixed.sort();
                                assert_eq!(heads, fixed);
                            }
                        }
                    }
                }
            }
        }
    }

    fn all_perms(d: usize) -> Vec<Permutation> {
        let mut out = Vec::new();
        let mut seen = std::collections::BTreeSet::new();
        for lam in partitions_of(d as u32, d as u32) {
            for p in permutations_of_type(&Partition::new(lam).unwrap()) {
                assert!(seen.insert(p));
                out.push(p);
            }
        }
        assert_eq!(out.len(), (1..=d).product::<usize>());
        out
    }

    fn partitions_of(n: u32, max: u32) -> Vec<Vec<u32>> {
        if n == 0 {
            return vec![vec![]];
        }
        let mut out = Vec::new();
        for first in (1..=max.min(n)).rev() {
            for mut rest in partitions_of(n - first, first) {
                rest.insert(0, first);
                out.push(rest);
            }
        }
        out
    }
}
