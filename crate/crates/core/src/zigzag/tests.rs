use std::collections::BTreeSet;

use super::*;
use crate::factorize::{SearchConfig, SignSequence};
use crate::permcore::Partition;
use crate::tropical::{enumerate_colourings, enumerate_covers, validate_cover, vertex_splitting, Edge, Endpoint, TropicalCover};

fn part(v: &[u32]) -> Partition {
    Partition::new(v.to_vec()).unwrap()
}

fn cover(r: usize, g: u32, edges: &[(usize, usize, u32)]) -> TropicalCover {
    // 0 is the left boundary, r + 1 the right one, vertices are 1-based
    let at = |x: usize| match x {
        0 => Endpoint::Left,
        x if x == r + 1 => Endpoint::Right,
        x => Endpoint::Vertex(x - 1),
    };
    TropicalCover::new(r, g, edges.iter().map(|&(a, b, w)| Edge::new(at(a), at(b), w)).collect()).unwrap()
}

#[test]
fn tail_decompositions() {
    let t = tail_decomposition(&part(&[4, 3, 3, 2, 1]));
    assert_eq!((t.even, t.odd_paired, t.odd_distinct), (part(&[4, 2]), part(&[3]), part(&[1])));
    let t = tail_decomposition(&part(&[3, 3]));
    assert_eq!((t.even.len(), t.odd_paired, t.odd_distinct.len()), (0, part(&[3]), 0));
    let t = tail_decomposition(&part(&[5, 1]));
    assert_eq!((t.odd_paired.len(), t.odd_distinct), (0, part(&[5, 1])));
    let lam = part(&[6, 5, 5, 5, 2, 1, 1]);
    let t = tail_decomposition(&lam);
    assert_eq!(t.recompose(), lam);
    assert_eq!(t.max_even(), Some(6));
}

#[test]
fn standard_cover_m2_edge_list() {
    let c = build_standard_universal(2, 0).unwrap();
    let expected = cover(
        8,
        0,
        &[
            (0, 1, 1), (0, 1, 1), (1, 2, 2), (2, 5, 1), (2, 9, 1),
            (0, 3, 1), (0, 3, 1), (3, 4, 2), (4, 5, 1), (4, 7, 1),
            (0, 7, 1), (5, 6, 2), (6, 9, 1), (6, 9, 1), (7, 8, 2), (8, 9, 1), (8, 9, 1),
        ],
    );
    assert_eq!(c, expected);
    assert_eq!(classify(&c).class, ZigzagClass::UniversallyMonotoneZigzag);
    assert!(c.edges().iter().all(|e| e.weight == 1 || e.weight == 2));
}

#[test]
fn standard_covers_have_the_right_type() {
    for m in 1..=3 {
        for g in 0..=2 {
            let c = build_standard_universal(m, g).unwrap();
            let ones = Partition::ones(2 * m + 1);
            assert!(validate_cover(&c, g, &ones, &ones), "m = {m}, g = {g}");
            assert_eq!(c.r(), 4 * m + 2 * g as usize);
            assert_eq!(classify(&c).class, ZigzagClass::UniversallyMonotoneZigzag, "m = {m}, g = {g}");
        }
    }
    assert!(build_standard_universal(0, 0).is_err());
}

#[test]
fn two_unbent_out_tails_are_monotone_only() {
    let c = build_string_cover(5, &[TailSpec::bare_out(2), TailSpec::bare_out(2)], 0).unwrap();
    assert_eq!(classify(&c).class, ZigzagClass::MonotoneZigzag);
    let z = classify(&c).witness.unwrap();
    assert_eq!(z.components.iter().filter(|c| c.incoming).count(), 1);
}

#[test]
fn unbent_in_tail_on_an_in_piece_is_not_monotone() {
    let c = build_string_cover(1, &[TailSpec::bare_in(2), TailSpec::bare_out(2)], 0).unwrap();
    assert_eq!(classify(&c).class, ZigzagClass::Zigzag);
}

#[test]
fn chain_glued_on_the_right_is_not_zigzag() {
    let types = chain_types(&[0, 1], true).unwrap();
    let c = build_component_chain(&types, &[0, 1], None).unwrap().cover;
    assert_eq!(classify(&c).class, ZigzagClass::NotZigzag);
    assert!(unique_colouring(&c, &SignSequence::all_plus(c.r())).is_err());
    assert!(is_kmixed(&c, c.r()).unwrap().is_none());
}

#[test]
fn classification_is_consistent_on_small_covers() {
    let types = [
        (0, vec![1, 1, 1], vec![1, 1, 1]),
        (0, vec![2, 1, 1], vec![2, 1, 1]),
        (0, vec![3, 1], vec![2, 2]),
        (0, vec![2, 2], vec![1, 1, 1, 1]),
        (1, vec![2, 1], vec![3]),
        (0, vec![3, 2], vec![4, 1]),
        (0, vec![5], vec![2, 2, 1]),
    ];
    for (g, l, u) in types {
        for c in enumerate_covers(g, &part(&l), &part(&u)).unwrap() {
            let cl = classify(&c);
            let all = zigzag_structures(&c);
            assert_eq!(cl.class == ZigzagClass::NotZigzag, all.is_empty());
            if let Some(w) = &cl.witness {
                assert!(all.contains(w));
            }
            if cl.class == ZigzagClass::NotZigzag || c.r() > 6 {
                continue;
            }
            // exactly one colouring per splitting on every zigzag cover
            let colourings = enumerate_colourings(&c);
            for signs in SignSequence::all(c.r()) {
                let n = colourings.iter().filter(|rho| vertex_splitting(&c, rho).unwrap() == signs).count();
                assert_eq!(n, 1, "{c} with {signs}");
            }
        }
    }
}

#[test]
fn unique_colouring_on_the_standard_cover() {
    let c = build_standard_universal(1, 0).unwrap();
    let mut seen = BTreeSet::new();
    for signs in SignSequence::all(c.r()) {
        let rho = unique_colouring(&c, &signs).unwrap();
        assert_eq!(vertex_splitting(&c, &rho).unwrap(), signs);
        seen.insert(rho);
    }
    assert_eq!(seen.len(), 1 << c.r());
}

#[test]
fn kmixed_readings() {
    let c = build_standard_universal(1, 0).unwrap();
    assert!(is_kmixed(&c, 0).unwrap().is_some());
    assert!(is_kmixed(&c, c.r()).unwrap().is_some());
    // the first vertex alone is a symmetric fork, which is no zigzag cover
    assert!(is_kmixed(&c, 1).unwrap().is_none());
    assert!(is_kmixed(&c, c.r() + 1).is_err());
    let (part_cover, map) = truncate(&c, 2).unwrap();
    assert_eq!(part_cover.r(), 2);
    assert_eq!(map.len(), part_cover.edges().len());
}

#[test]
fn weight_three_string_edge() {
    let c = build_string_cover(
        1,
        &[TailSpec::fork_in(2), TailSpec::fork_out(2), TailSpec::fork_out(2), TailSpec::fork_in(2)],
        0,
    )
    .unwrap();
    let ones = Partition::ones(5);
    assert!(validate_cover(&c, 0, &ones, &ones));
    assert_eq!(classify(&c).class, ZigzagClass::Zigzag);
    assert!(classify(&c).witness.unwrap().string_edges.iter().any(|&e| c.edges()[e].weight == 3));
}

#[test]
fn tail_sequences() {
    let t = tail_sequence(&part(&[2, 1, 1, 1]), &part(&[2, 2, 1]), TailCase::One).unwrap();
    assert_eq!(t.ks, vec![1, -1, 1, -1, 1]);
    assert_eq!(*t.tails.last().unwrap(), TailSpec::bare_in(2));

    let t = tail_sequence(&part(&[2, 1, 1]), &part(&[4]), TailCase::Four).unwrap();
    assert_eq!((t.ks[0], *t.ks.last().unwrap()), (1, -1));

    // λ_e^max = 6 is used last even though it is the largest
    let t = tail_sequence(&part(&[6, 2, 1]), &part(&[4, 4, 1]), TailCase::One).unwrap();
    assert_eq!(t.tails.iter().filter(|x| x.incoming).map(|x| x.weight).collect::<Vec<_>>(), vec![2, 6]);
    assert_eq!(*t.ks.last().unwrap(), 1);

    let t = tail_sequence(&part(&[3, 1, 1, 1]), &part(&[4, 2]), TailCase::Two).unwrap();
    assert_eq!(t.ks, vec![3, 1, -3, -1]);
    let t = tail_sequence(&part(&[4, 2]), &part(&[3, 2, 1]), TailCase::Three).unwrap();
    assert_eq!(t.ks, vec![-3, -1, 3, 1]);

    let err = tail_sequence(&part(&[2, 1]), &part(&[3]), TailCase::One).unwrap_err().to_string();
    assert!(err.contains("λ_e^max > μ_o"), "{err}");
    assert!(tail_sequence(&part(&[2, 1, 1]), &part(&[2, 1, 1]), TailCase::Four).unwrap_err().to_string().contains("μ_{o,o}"));
    assert!(tail_sequence(&part(&[2, 1]), &part(&[3]), TailCase::Two).is_err());
}

#[test]
fn component_chains() {
    // type 3 after type 1 sits on the left, so the identity order is refused
    let types = [ComponentType::One, ComponentType::Three];
    assert!(build_component_chain(&types, &[0, 1], None).is_err());
    let c = build_component_chain(&types, &[1, 0], None).unwrap();
    assert_eq!(c.cover.r(), 6);

    let orders: Vec<Vec<usize>> =
        vec![vec![0, 1, 2], vec![0, 2, 1], vec![1, 0, 2], vec![1, 2, 0], vec![2, 0, 1], vec![2, 1, 0]];
    let mut forms = BTreeSet::new();
    for order in &orders {
        let types = chain_types(order, true).unwrap();
        let plain = build_component_chain(&types, order, None).unwrap();
        forms.insert(plain.cover.canonical_form());
        for s in 0..=10 {
            let built = build_component_chain(&types, order, Some(s)).unwrap();
            let signs = SignSequence::simple(built.cover.r(), s);
            assert!(
                enumerate_colourings(&built.cover).iter().any(|rho| vertex_splitting(&built.cover, rho).unwrap() == signs),
                "order {order:?}, s = {s}"
            );
        }
    }
    assert_eq!(forms.len(), 6);
}

#[test]
fn case_covers_have_their_types() {
    let inputs = [
        (part(&[2, 1, 1, 1]), part(&[2, 2, 1]), TailCase::One),
        (part(&[3, 1, 1, 1]), part(&[4, 2]), TailCase::Two),
        (part(&[4, 2]), part(&[3, 2, 1]), TailCase::Three),
        (part(&[2, 1, 1]), part(&[4]), TailCase::Four),
    ];
    for (l, u, case) in inputs {
        for m in 1..=2 {
            for g in 0..=1 {
                let arb = build_case_cover(&l, &u, g, case, m, CaseFamily::ArbitrarySplitting, None);
                // case 1 with g = 1 has a fork in-tail for the cycle; the others may not
                if let Ok(cc) = arb {
                    assert_eq!(classify(&cc.cover).class, ZigzagClass::UniversallyMonotoneZigzag, "{case:?} m = {m}");
                }
                let simple = build_case_cover(&l, &u, g, case, m, CaseFamily::SimpleSplitting, Some(1));
                if let Ok(cc) = simple {
                    let extra = Partition::new(vec![2]).unwrap().join(&Partition::ones(2 * m));
                    assert!(validate_cover(&cc.cover, g, &l.join(&extra), &u.join(&extra)));
                }
            }
        }
        assert!(build_case_cover(&l, &u, 0, case, 1, CaseFamily::ArbitrarySplitting, None).is_ok());
        assert!(build_case_cover(&l, &u, 0, case, 1, CaseFamily::SimpleSplitting, None).is_ok());
    }
}

#[test]
fn kmixed_construction() {
    let (l, u) = (part(&[4, 1]), part(&[3, 2]));
    let km = build_kmixed_cover(&l, &u, &l, &u, 0, 1).unwrap();
    assert_eq!(km.k, 2);
    assert!(is_kmixed(&km.cover, km.k).unwrap().is_some());
    assert!(build_kmixed_cover(&l, &u, &part(&[2, 1]), &u, 0, 1).is_err());
}

#[test]
fn zigzag_number_of_the_smallest_universal_type() {
    let ones = Partition::ones(3);
    let z = zigzag_number(0, &ones, &ones, ZigzagFamily::Universal, &SearchConfig::default()).unwrap();
    assert!(z.value >= 1);
    let std_id = build_standard_universal(1, 0).unwrap().cover_id();
    assert!(z.terms.iter().any(|t| t.cover_id == std_id));
}
