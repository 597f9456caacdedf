use std::collections::BTreeSet;

use super::*;
use crate::permcore::{permutations_of_type, Permutation};

fn spec(lambda: &str, mu: &str, variant: Variant, signs: Option<&str>) -> FactorizationSpec {
    FactorizationSpec::parse(0, lambda, mu, variant, signs).unwrap()
}

fn taus(s: &str) -> Vec<Transposition> {
    s.split(')')
        .filter(|t| !t.is_empty())
        .map(|t| {
            let digits: Vec<usize> = t.trim_start_matches('(').chars().map(|c| c.to_digit(10).unwrap() as usize).collect();
            Transposition::one_based(digits[0], digits[1]).unwrap()
        })
        .collect()
}

fn perm(s: &str, d: usize) -> Permutation {
    Permutation::parse_with_degree(s, d).unwrap()
}

#[test]
fn monotone_rows_of_three_points() {
    let got: BTreeSet<Vec<Transposition>> =
        enumerate(&spec("1,1,1", "1,1,1", Variant::Monotone, None)).unwrap().into_iter().map(|f| f.taus).collect();
    let want: BTreeSet<Vec<Transposition>> = [
        "(12)(13)(23)(13)",
        "(12)(12)(13)(13)",
        "(12)(23)(13)(23)",
        "(12)(12)(23)(23)",
        "(13)(23)(23)(13)",
        "(13)(13)(23)(23)",
        "(23)(13)(13)(23)",
        "(23)(23)(13)(13)",
    ]
    .iter()
    .map(|s| taus(s))
    .collect();
    assert_eq!(got, want);
    assert_eq!(got.len(), 8);
}

#[test]
fn real_monotone_rows_of_three_points() {
    let rows = |signs: &str| -> BTreeSet<(Vec<Transposition>, Permutation)> {
        enumerate(&spec("1,1,1", "1,1,1", Variant::RealMonotone, Some(signs)))
            .unwrap()
            .into_iter()
            .map(|f| (f.taus, f.gamma.unwrap()))
            .collect()
    };
    let want2: BTreeSet<_> = [
        ("(12)(12)(13)(13)", "()"),
        ("(12)(12)(23)(23)", "()"),
        ("(13)(23)(23)(13)", "(13)"),
        ("(13)(13)(23)(23)", "()"),
        ("(23)(13)(13)(23)", "(23)"),
        ("(23)(23)(13)(13)", "()"),
    ]
    .iter()
    .map(|(t, g)| (taus(t), perm(g, 3)))
    .collect();
    assert_eq!(rows("+++-"), want2);
    let want3: BTreeSet<_> = [
        ("(12)(12)(13)(13)", "(12)"),
        ("(12)(12)(23)(23)", "(12)"),
        ("(13)(13)(23)(23)", "(13)"),
        ("(23)(23)(13)(13)", "(23)"),
    ]
    .iter()
    .map(|(t, g)| (taus(t), perm(g, 3)))
    .collect();
    assert_eq!(rows("+-++"), want3);
}

#[test]
fn real_example_degree_four() {
    let s = spec("1,3", "2,2", Variant::Real, Some("++"));
    assert_eq!(count(&s).unwrap(), 24);
    let starts = permutations_of_type(&"3,1".parse().unwrap());
    assert_eq!(starts.len(), 8);
    for s1 in &starts {
        assert_eq!(count_with_fixed_start(&s, s1).unwrap(), 3, "σ₁ = {s1}");
    }
    let rows = |s1: &str| -> BTreeSet<(Permutation, Vec<Transposition>)> {
        enumerate_with(&s, Some(&perm(s1, 4)), &SearchConfig::default())
            .unwrap()
            .into_iter()
            .map(|f| (f.gamma.unwrap(), f.taus))
            .collect()
    };
    let table = |r: &[(&str, &str)]| -> BTreeSet<_> { r.iter().map(|(g, t)| (perm(g, 4), taus(t))).collect() };
    assert_eq!(rows("(1)(234)"), table(&[("(24)", "(34)(13)"), ("(34)", "(23)(12)"), ("(23)", "(24)(14)")]));
    assert_eq!(rows("(4)(132)"), table(&[("(13)", "(12)(24)"), ("(12)", "(23)(34)"), ("(23)", "(13)(14)")]));
    let m = spec("1,3", "2,2", Variant::RealMonotone, Some("++"));
    assert_eq!(count_with_fixed_start(&m, &perm("(1)(234)", 4)).unwrap(), 1);
    assert_eq!(count_with_fixed_start(&m, &perm("(4)(132)", 4)).unwrap(), 3);
    assert!(count_with_fixed_start(&m, &perm("(12)(34)", 4)).is_err());
}

#[test]
fn complex_and_monotone_counts() {
    assert_eq!(count(&spec("1,1,1", "1,1,1", Variant::Complex, None)).unwrap(), 24);
    assert_eq!(count(&spec("1,1,1", "1,1,1", Variant::Monotone, None)).unwrap(), 8);
}

#[test]
fn gamma_sequence_recursion() {
    let f = Factorization {
        gamma: Some(perm("(24)", 4)),
        sigma1: perm("(1)(234)", 4),
        taus: taus("(34)(13)"),
        sigma2: perm("(24)(13)", 4),
        signs: None,
    };
    let gs = gamma_sequence(&f, &"+-".parse().unwrap()).unwrap();
    assert_eq!(gs[0], perm("(24)", 4));
    let pi1 = perm("(34)", 4).after(&perm("(1)(234)", 4));
    assert_eq!(gs[1], perm("(24)", 4).after(&pi1));
    assert_eq!(gs[1], perm("(2)(4)(1)(3)", 4).after(&gs[1]));
    let same = gamma_sequence(&f, &"++".parse().unwrap()).unwrap();
    assert_eq!(same[0], same[1]);
    let s = spec("1,3", "2,2", Variant::Real, Some("+-"));
    validate_factorization(&Factorization { signs: Some("+-".parse().unwrap()), ..f }, &s).unwrap();
}

#[test]
fn infimum_examples() {
    let cfg = SearchConfig::default();
    let p = |s: &str| s.parse().unwrap();
    let (v, w) = infimum_number(0, &p("1,1,1"), &p("1,1,1"), InfimumMode::Arbitrary, None, &cfg).unwrap();
    assert!(v <= 4);
    let c = count(&spec("1,1,1", "1,1,1", Variant::RealMonotone, Some(&w.to_string()))).unwrap();
    assert_eq!(c, v);
    let (vs, ws) = infimum_number(0, &p("1,1,1"), &p("1,1,1"), InfimumMode::Simple, None, &cfg).unwrap();
    assert!(vs <= 6 && ws.is_simple());
    // k = r is the monotone infimum
    let (vk, wk) = infimum_number(0, &p("1,1,1"), &p("1,1,1"), InfimumMode::Arbitrary, Some(4), &cfg).unwrap();
    assert_eq!((vk, wk), (v, w));
}

#[test]
fn kmixed_collapses() {
    for signs in SignSequence::all(4) {
        let s = signs.to_string();
        let real = count(&spec("1,1,1", "1,1,1", Variant::Real, Some(&s))).unwrap();
        let mono = count(&spec("1,1,1", "1,1,1", Variant::RealMonotone, Some(&s))).unwrap();
        let k0 = count(&spec("1,1,1", "1,1,1", Variant::RealKMixed(0), Some(&s))).unwrap();
        let k4 = count(&spec("1,1,1", "1,1,1", Variant::RealKMixed(4), Some(&s))).unwrap();
        assert_eq!(k0, real);
        assert_eq!(k4, mono);
        let k2 = count(&spec("1,1,1", "1,1,1", Variant::RealKMixed(2), Some(&s))).unwrap();
        assert!(mono <= k2 && k2 <= real);
    }
}

#[test]
fn worker_count_does_not_change_results() {
    let s = spec("2,1,1", "2,1,1", Variant::Real, Some("+-+-"));
    let one = enumerate_with(&s, None, &SearchConfig { threads: Some(1), ..Default::default() }).unwrap();
    let four = enumerate_with(&s, None, &SearchConfig { threads: Some(4), ..Default::default() }).unwrap();
    assert_eq!(one, four);
    let set: BTreeSet<_> = one.iter().collect();
    assert_eq!(set.len(), one.len());
}

#[test]
fn resource_limits() {
    let s = spec("1,1,1", "1,1,1", Variant::Complex, None);
    let cfg = SearchConfig { limits: SearchLimits { max_degree: 2, max_r: 10 }, threads: None };
    assert!(matches!(count_with(&s, None, &cfg), Err(crate::HurwitzError::ResourceLimit(_))));
}

#[test]
fn star_condition_examples() {
    let f = |t: &str, g: &str| Factorization {
        gamma: Some(perm(g, 3)),
        sigma1: Permutation::identity(3),
        taus: taus(t),
        sigma2: Permutation::identity(3),
        signs: None,
    };
    // a +++- row: every repeated letter continues a run of equal b = 3
    assert!(check_star_condition(&f("(13)(23)(23)(13)", "(13)")));
    // b₃ reuses old letters while b₂ ≠ b₃
    assert!(!check_star_condition(&f("(12)(13)(12)", "()")));
    assert_eq!(star_violation(&f("(12)(13)(12)", "()")), Some(3));
    let constant = f("(13)(23)(23)(13)", "()");
    assert!(check_star_condition(&constant));
}

#[test]
fn monotonize_every_star_factorization() {
    let (mut staged, mut searched, mut impossible) = (0, 0, 0);
    for (l, m) in [("1,1,1", "1,1,1"), ("1,3", "2,2"), ("2,1,1", "2,1,1"), ("1,1,1,1", "2,2"), ("2,1,1", "3,1")] {
        let r = r_length(0, &l.parse().unwrap(), &m.parse().unwrap()).unwrap();
        for signs in SignSequence::all(r) {
            let s = spec(l, m, Variant::Real, Some(&signs.to_string()));
            let ms = spec(l, m, Variant::RealMonotone, Some(&signs.to_string()));
            for f in enumerate(&s).unwrap() {
                if !check_star_condition(&f) {
                    assert!(matches!(monotonize(&f), Err(crate::HurwitzError::Precondition(_))));
                    continue;
                }
                match monotonize(&f) {
                    Ok(g) => {
                        validate_factorization(&g, &ms).unwrap();
                        assert_eq!(monotonize(&g).unwrap(), g);
                        if star::staged_ok(&f) {
                            staged += 1;
                        } else {
                            searched += 1;
                        }
                    }
                    Err(crate::HurwitzError::Invariant(_)) => {
                        assert!(!star::has_monotone_conjugate(&f), "{f:?}");
                        impossible += 1;
                    }
                    Err(e) => panic!("{e}"),
                }
            }
        }
    }
    eprintln!("monotonize: staged {staged}, searched {searched}, no monotone conjugate {impossible}");
    assert!(staged > 0);
}

#[test]
fn star_condition_does_not_force_a_monotone_conjugate() {
    let f = Factorization {
        gamma: Some(perm("(23)", 4)),
        sigma1: perm("(23)", 4),
        taus: taus("(24)(23)(14)(34)"),
        sigma2: perm("(13)", 4),
        signs: None,
    };
    assert!(check_star_condition(&f));
    assert!(matches!(monotonize(&f), Err(crate::HurwitzError::Invariant(_))));
}

#[test]
fn monotonize_relabels_b_sequence() {
    let s = spec("1,3", "2,2", Variant::Real, Some("++"));
    let found: Vec<_> =
        enumerate(&s).unwrap().into_iter().filter(|f| f.b_sequence() == vec![2, 1] && check_star_condition(f)).collect();
    assert!(!found.is_empty());
    for f in found {
        let g = monotonize(&f).unwrap();
        let b = g.b_sequence();
        assert!(b[0] <= b[1], "{b:?}");
        assert_eq!(g.taus.len(), f.taus.len());
    }
}
