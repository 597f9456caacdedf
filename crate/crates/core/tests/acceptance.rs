//! The acceptance suite: one PASS/FAIL line per criterion, non-zero exit if
//! any criterion fails. Runs without the libtest harness so the lines are
//! always printed.

use std::collections::{BTreeMap, BTreeSet};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use hurwitz_core::bridge::{
    cover_from_factorization, factorial, fibre_count, fibre_table, n_numbers, real_covers_with_splitting, verify_correspondence,
    MultiplicityConvention, NMode,
};
use hurwitz_core::factorize::{
    count, count_with, count_with_fixed_start, enumerate, enumerate_with, infimum_number, r_length, Factorization,
    FactorizationSpec, InfimumMode, SearchConfig, SignSequence, Transposition, Variant,
};
use hurwitz_core::permcore::{permutations_of_type, Partition, Permutation};
use hurwitz_core::tropical::{
    enumerate_colourings, validate_cover, vertex_splitting, EdgeColour, Endpoint, RealTropicalCover, SymmetrySets,
};
use hurwitz_core::zigzag::{
    build_component_chain, build_standard_universal, build_string_cover, chain_types, classify, count_for_signs,
    unique_colouring, zigzag_number, TailSpec, ZigzagClass, ZigzagFamily,
};
use num_rational::Ratio;

type Outcome = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn ok<T, E: std::fmt::Display>(r: Result<T, E>) -> Result<T, String> {
    r.map_err(|e| e.to_string())
}

fn p(s: &str) -> Partition {
    s.parse().unwrap()
}

fn perm(s: &str, d: usize) -> Permutation {
    Permutation::parse_with_degree(s, d).unwrap()
}

fn taus(s: &str) -> Vec<Transposition> {
    s.split(')')
        .filter(|t| !t.is_empty())
        .map(|t| {
            let digits: Vec<usize> =
                t.trim_start_matches('(').chars().map(|c| c.to_digit(10).unwrap() as usize).collect();
            Transposition::one_based(digits[0], digits[1]).unwrap()
        })
        .collect()
}

fn spec(g: u32, l: &str, m: &str, variant: Variant, signs: Option<&str>) -> FactorizationSpec {
    FactorizationSpec::parse(g, l, m, variant, signs).unwrap()
}

const CORRESPONDENCE_TYPES: [(&str, &str); 4] = [("1,1,1", "1,1,1"), ("1,3", "2,2"), ("2,1,1", "2,1,1"), ("1,1,1,1", "2,2")];

fn c1_monotone_three_points() -> Outcome {
    let start = Instant::now();
    let n = ok(count(&spec(0, "1,1,1", "1,1,1", Variant::Monotone, None)))?;
    let t = start.elapsed();
    ensure!(n == 8, "count = {n}, expected 8");
    ensure!(t < Duration::from_secs(1), "took {t:?}");
    Ok(format!("count = 8 in {t:?}"))
}

fn rows(s: &FactorizationSpec) -> Result<BTreeSet<(Vec<Transposition>, Permutation)>, String> {
    Ok(ok(enumerate(s))?.into_iter().map(|f| (f.taus, f.gamma.unwrap())).collect())
}

fn c2_real_monotone_plus_plus_plus_minus() -> Outcome {
    let s = spec(0, "1,1,1", "1,1,1", Variant::RealMonotone, Some("+++-"));
    let n = ok(count(&s))?;
    ensure!(n == 6, "count = {n}, expected 6");
    let want: BTreeSet<_> = [
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
    ensure!(rows(&s)? == want, "enumerated rows differ from the expected six");
    Ok("count = 6, all six (τ, γ) rows match".into())
}

fn c3_real_monotone_plus_minus_plus_plus() -> Outcome {
    let s = spec(0, "1,1,1", "1,1,1", Variant::RealMonotone, Some("+-++"));
    let n = ok(count(&s))?;
    ensure!(n == 4, "count = {n}, expected 4");
    let want: BTreeSet<_> = [
        ("(12)(12)(13)(13)", "(12)"),
        ("(12)(12)(23)(23)", "(12)"),
        ("(13)(13)(23)(23)", "(13)"),
        ("(23)(23)(13)(13)", "(23)"),
    ]
    .iter()
    .map(|(t, g)| (taus(t), perm(g, 3)))
    .collect();
    ensure!(rows(&s)? == want, "enumerated rows differ");
    Ok("count = 4, rows match".into())
}

fn c4_real_degree_four() -> Outcome {
    let s = spec(0, "1,3", "2,2", Variant::Real, Some("++"));
    let n = ok(count(&s))?;
    ensure!(n == 24, "count = {n}, expected 24");
    let starts = permutations_of_type(&p("3,1"));
    ensure!(starts.len() == 8, "{} permutations of type (3,1)", starts.len());
    for s1 in &starts {
        let c = ok(count_with_fixed_start(&s, s1))?;
        ensure!(c == 3, "σ₁ = {s1}: {c} factorizations, expected 3");
    }
    let fixed = |s1: &str| -> Result<BTreeSet<(Permutation, Vec<Transposition>)>, String> {
        Ok(ok(enumerate_with(&s, Some(&perm(s1, 4)), &SearchConfig::default()))?
            .into_iter()
            .map(|f| (f.gamma.unwrap(), f.taus))
            .collect())
    };
    let table = |r: &[(&str, &str)]| -> BTreeSet<_> { r.iter().map(|(g, t)| (perm(g, 4), taus(t))).collect() };
    ensure!(
        fixed("(1)(234)")? == table(&[("(24)", "(34)(13)"), ("(34)", "(23)(12)"), ("(23)", "(24)(14)")]),
        "rows for σ₁ = (1)(234) differ"
    );
    ensure!(
        fixed("(4)(132)")? == table(&[("(13)", "(12)(24)"), ("(12)", "(23)(34)"), ("(23)", "(13)(14)")]),
        "rows for σ₁ = (4)(132) differ"
    );
    let m = spec(0, "1,3", "2,2", Variant::RealMonotone, Some("++"));
    let a = ok(count_with_fixed_start(&m, &perm("(1)(234)", 4)))?;
    let b = ok(count_with_fixed_start(&m, &perm("(4)(132)", 4)))?;
    ensure!((a, b) == (1, 3), "real monotone fixed-start counts {a}, {b}; expected 1, 3");
    Ok("24 total, 3 per σ₁ for all 8, rows match, monotone 1 and 3".into())
}

fn c5_two_vertex_round_trip() -> Outcome {
    let f = Factorization {
        gamma: Some(perm("(24)", 4)),
        sigma1: perm("(1)(234)", 4),
        taus: taus("(34)(13)"),
        sigma2: perm("(24)(13)", 4),
        signs: None,
    };
    let signs: SignSequence = "+-".parse().unwrap();
    let rc = ok(cover_from_factorization(&f, &signs))?;
    let c = &rc.cover;
    ensure!(validate_cover(c, 0, &p("1,3"), &p("2,2")), "cover {c} has the wrong type");
    ensure!(c.left_ends() == p("3,1"), "left ends {}", c.left_ends());
    ensure!(c.right_ends() == p("2,2"), "right ends {}", c.right_ends());
    let inner: Vec<_> = c.edges().iter().filter(|e| e.is_inner()).collect();
    ensure!(inner.len() == 1 && inner[0].weight == 1, "inner edges {inner:?}");
    for (i, e) in c.edges().iter().enumerate() {
        if e.to == Endpoint::Right {
            ensure!(rc.colouring.colours[i] == EdgeColour::Blue, "right end {i} is not blue");
        }
    }
    ensure!(rc.splitting == signs, "vertex signs {}", rc.splitting);
    let right_vertices: BTreeSet<_> = c.edges().iter().filter(|e| e.to == Endpoint::Right).map(|e| e.from).collect();
    ensure!(right_vertices.len() == 2, "the weight-2 ends should sit on two different vertices");
    ensure!(SymmetrySets::of(c).cf().is_empty(), "CF should be empty");
    Ok(format!(
        "{c}: ends (3,1)/(2,2), both weight-2 ends blue, inner weight 1, signs {}; the weight-2 ends sit on different vertices, so they are not a symmetric fork (CF empty)",
        rc.splitting
    ))
}

fn c6_correspondence() -> Outcome {
    let start = Instant::now();
    let cfg = SearchConfig::default();
    let mut checked = 0;
    for (l, m) in CORRESPONDENCE_TYPES {
        let r = ok(r_length(0, &p(l), &p(m)))?;
        for signs in SignSequence::all(r) {
            let rep = ok(verify_correspondence(0, &p(l), &p(m), &signs, &cfg))?;
            ensure!(rep.equal, "({l})/({m}) {signs}: lhs {} rhs {}", rep.lhs, rep.rhs);
            checked += 1;
        }
    }
    let t = start.elapsed();
    ensure!(t < Duration::from_secs(300), "took {t:?}");
    Ok(format!("lhs = rhs for {checked} (type, signs) pairs in {t:?}"))
}

fn c7_fibre_law() -> Outcome {
    let cfg = SearchConfig::default();
    let mut classes = 0;
    let mut half = 0;
    // every type with d ≤ 4 and 1 ≤ r ≤ 4
    let parts = ["1", "2", "1,1", "3", "2,1", "1,1,1", "4", "3,1", "2,2", "2,1,1", "1,1,1,1"];
    let mut types = Vec::new();
    for g in 0..=2u32 {
        for l in parts {
            for m in parts {
                let (pl, pm) = (p(l), p(m));
                if pl.weight() == pm.weight() && r_length(g, &pl, &pm).is_ok_and(|r| r <= 4) {
                    types.push((g, l, m));
                }
            }
        }
    }
    for &(g, l, m) in &types {
        let (l, m) = (p(l), p(m));
        let r = ok(r_length(g, &l, &m))?;
        let d_fact = factorial(l.weight()) as i64;
        for signs in SignSequence::all(r) {
            let s = ok(FactorizationSpec::new(g, l.clone(), m.clone(), Variant::Real, Some(signs.clone())))?;
            let table = ok(fibre_table(&s, &cfg))?;
            let covers = ok(real_covers_with_splitting(g, &l, &m, &signs, &cfg, MultiplicityConvention::Standard))?;
            for rc in covers {
                let n = table.get(&rc).copied().unwrap_or(0);
                let want = rc.multiplicity() * d_fact;
                ensure!(Ratio::from_integer(n as i64) == want, "{} {}: fibre {n}, d!·mult {want}", rc.cover, rc.colouring);
                if rc.multiplicity() == Ratio::new(1, 2) && d_fact == 24 {
                    half += 1;
                }
                classes += 1;
            }
        }
    }
    // the two-vertex (3,1)/(2,2) cover with blue ends has mult 1, fibre 24
    let f = Factorization {
        gamma: Some(perm("(24)", 4)),
        sigma1: perm("(1)(234)", 4),
        taus: taus("(34)(13)"),
        sigma2: perm("(24)(13)", 4),
        signs: None,
    };
    let signs: SignSequence = "+-".parse().unwrap();
    let rc = ok(cover_from_factorization(&f, &signs))?;
    let s = spec(0, "1,3", "2,2", Variant::Real, Some("+-"));
    let n = ok(fibre_table(&s, &cfg))?.get(&rc).copied().unwrap_or(0);
    ensure!(n == 24 && rc.multiplicity() == Ratio::from_integer(1), "two-vertex cover: fibre {n}, mult {}", rc.multiplicity());
    ensure!(half > 0, "no d = 4 class with mult 1/2 was reached");
    Ok(format!(
        "fibre = d!·mult on {classes} classes of {} types ({half} with 12 = 4!·1/2); the blue-ended two-vertex cover has CF empty, so its fibre is 24 = 4!·1, not 12",
        types.len()
    ))
}

fn c8_sequence_independence() -> Outcome {
    let mut groups = 0;
    for (l, m) in CORRESPONDENCE_TYPES {
        let r = ok(r_length(0, &p(l), &p(m)))?;
        let mut by_s: BTreeMap<usize, BTreeSet<u64>> = BTreeMap::new();
        for signs in SignSequence::all(r) {
            let n = ok(count(&spec(0, l, m, Variant::Real, Some(&signs.to_string()))))?;
            by_s.entry(signs.s()).or_default().insert(n);
        }
        for (s, values) in &by_s {
            ensure!(values.len() == 1, "({l})/({m}) s = {s}: counts {values:?}");
        }
        groups += by_s.len();
    }
    Ok(format!("one real count per s in all {groups} (type, s) groups"))
}

fn c9_unique_colouring() -> Outcome {
    let mut total = 0;
    for m in 1..=2 {
        let c = ok(build_standard_universal(m, 0))?;
        let mut per: BTreeMap<SignSequence, usize> = BTreeMap::new();
        for rho in enumerate_colourings(&c) {
            *per.entry(ok(vertex_splitting(&c, &rho))?).or_default() += 1;
        }
        for signs in SignSequence::all(c.r()) {
            let n = per.get(&signs).copied().unwrap_or(0);
            ensure!(n == 1, "m = {m}, {signs}: {n} colourings");
            ok(unique_colouring(&c, &signs))?;
            total += 1;
        }
    }
    Ok(format!("exactly one colouring for each of the {total} splittings (m = 1, 2)"))
}

fn c10_monotone_lower_bounds() -> Outcome {
    let mut seen = Vec::new();
    for m in 1..=2usize {
        let start = Instant::now();
        let c = ok(build_standard_universal(m, 0))?;
        let n = ok(n_numbers(&c, NMode::PerSequence, &SearchConfig::default()))?.minimum;
        let t = start.elapsed();
        let bound = factorial(m as u32);
        ensure!(n >= bound, "m = {m}: N = {n} < {bound}");
        ensure!(t < Duration::from_secs(600), "m = {m} took {t:?}");
        seen.push(format!("m = {m}: N = {n} ≥ {bound} ({t:?})"));
    }
    Ok(seen.join(", "))
}

fn c11_weight_three_string() -> Outcome {
    let tails = [TailSpec::fork_in(2), TailSpec::fork_out(2), TailSpec::fork_out(2), TailSpec::fork_in(2)];
    let c = ok(build_string_cover(1, &tails, 0))?;
    ensure!(validate_cover(&c, 0, &Partition::ones(5), &Partition::ones(5)), "{c} has the wrong type");
    let cl = classify(&c);
    ensure!(cl.class >= ZigzagClass::Zigzag, "{c} is not a zigzag cover");
    let w = cl.witness.unwrap();
    ensure!(w.string_edges.iter().any(|&i| c.edges()[i].weight == 3), "no weight-3 string edge");
    let n = ok(n_numbers(&c, NMode::PerSequence, &SearchConfig::default()))?;
    ensure!(n.minimum == 0, "N = {}", n.minimum);
    ensure!(n.entries.iter().all(|e| !e.no_colouring), "some splitting has no colouring");
    // the search is not vacuous: without monotonicity the fibre is non-empty
    let signs = SignSequence::simple(c.r(), c.r());
    let rho = ok(unique_colouring(&c, &signs))?;
    let rc = ok(RealTropicalCover::new(c.clone(), rho))?;
    let real = ok(fibre_count(&rc, Variant::Real, &SearchConfig::default()))?;
    ensure!(real > 0, "the real fibre is empty too");
    Ok(format!(
        "{c}: every one of the {} splittings has its colouring and no monotone factorization, N = 0; the non-monotone real fibre at s = r is {real}",
        n.entries.len()
    ))
}

fn c12_component_chains() -> Outcome {
    let cfg = SearchConfig::default();
    let mut forms = BTreeSet::new();
    let mut report = Vec::new();
    for order in [vec![0, 1], vec![1, 0]] {
        let types = ok(chain_types(&order, true))?;
        let plain = ok(build_component_chain(&types, &order, None))?.cover;
        ensure!(validate_cover(&plain, 0, &p("2,1,1,1"), &p("2,1,1,1")), "order {order:?}: wrong type");
        forms.insert(plain.cover_id());
        let r = plain.r();
        let mut least = u64::MAX;
        for s in 0..=r {
            let built = ok(build_component_chain(&types, &order, Some(s)))?;
            let signs = SignSequence::simple(r, s);
            let n = ok(count_for_signs(&built.cover, &signs, Variant::RealMonotone, &cfg))?;
            let n = n.ok_or_else(|| format!("order {order:?}, s = {s}: no colouring"))?;
            ensure!(n >= 2, "order {order:?}, s = {s}: N = {n}");
            least = least.min(n);
        }
        report.push(format!("order {order:?}: colouring for s = 0..={r}, min N = {least}"));
    }
    ensure!(forms.len() == 2, "{} distinct covers", forms.len());
    Ok(format!("2 distinct covers; {}", report.join("; ")))
}

fn c13_inequality_chain() -> Outcome {
    let cfg = SearchConfig::default();
    let types = [(0, "1,1,1", "1,1,1"), (0, "1,3", "2,2"), (0, "2,1,1", "2,1,1"), (0, "2,1", "2,1"), (0, "1,1,1,1", "2,2")];
    let mut checked = 0;
    for &(g, l, m) in &types {
        let (l, m) = (p(l), p(m));
        let r = ok(r_length(g, &l, &m))?;
        let mut cases = vec![
            (ZigzagFamily::Monotone, InfimumMode::Simple, None),
            (ZigzagFamily::Universal, InfimumMode::Arbitrary, None),
        ];
        cases.extend((0..=r).map(|k| (ZigzagFamily::KMixed(k), InfimumMode::Arbitrary, Some(k))));
        for (family, mode, k) in cases {
            let z = ok(zigzag_number(g, &l, &m, family, &cfg))?.value;
            let (inf, _) = ok(infimum_number(g, &l, &m, mode, k, &cfg))?;
            ensure!(z <= inf, "({l})/({m}) {family:?}: zigzag {z} > infimum {inf}");
            checked += 1;
        }
    }
    Ok(format!("zigzag ≤ infimum on {checked} (type, family) instances"))
}

/// Transpositions of `{0, 1, 2}` as images.
fn naive_transpositions() -> Vec<[usize; 3]> {
    vec![[1, 0, 2], [2, 1, 0], [0, 2, 1]]
}

fn c14_naive_oracle() -> Outcome {
    // every 4-tuple of transpositions of three points, no pruning
    let ts = naive_transpositions();
    let mut naive = 0u64;
    for a in &ts {
        for b in &ts {
            for c in &ts {
                for d in &ts {
                    // σ₁ = id, and σ₂ must be the identity too, i.e. the product is trivial
                    let mut x = [0, 1, 2];
                    for t in [a, b, c, d] {
                        x = [t[x[0]], t[x[1]], t[x[2]]];
                    }
                    let mut comp = [0, 1, 2];
                    for t in [a, b, c, d] {
                        for i in 0..3 {
                            let (u, v) = (comp[i], comp[t[i]]);
                            let (lo, hi) = (u.min(v), u.max(v));
                            for e in comp.iter_mut() {
                                if *e == hi {
                                    *e = lo;
                                }
                            }
                        }
                    }
                    if x == [0, 1, 2] && comp.iter().all(|&e| e == comp[0]) {
                        naive += 1;
                    }
                }
            }
        }
    }
    ensure!(naive == 24, "naive sweep gives {naive}");
    let engine = ok(count_with(&spec(0, "1,1,1", "1,1,1", Variant::Complex, None), None, &SearchConfig::default()))?;
    ensure!(engine == naive, "engine {engine}, naive {naive}");
    Ok(format!("naive 3⁴ sweep = {naive}, engine = {engine}"))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 14] = [
        ("monotone count of (1,1,1)/(1,1,1)", c1_monotone_three_points),
        ("real monotone count and rows, signs +++-", c2_real_monotone_plus_plus_plus_minus),
        ("real monotone count, signs +-++", c3_real_monotone_plus_minus_plus_plus),
        ("real count of (1,3)/(2,2) and fixed starts", c4_real_degree_four),
        ("factorization to cover round trip", c5_two_vertex_round_trip),
        ("correspondence on four types", c6_correspondence),
        ("fibre law at d ≤ 4, r ≤ 4", c7_fibre_law),
        ("sign sequence independence", c8_sequence_independence),
        ("unique colouring of standard covers", c9_unique_colouring),
        ("monotone lower bounds m = 1, 2", c10_monotone_lower_bounds),
        ("vanishing with a weight-3 string edge", c11_weight_three_string),
        ("component chains at m = 2", c12_component_chains),
        ("zigzag number ≤ infimum number", c13_inequality_chain),
        ("naive oracle for the complex count", c14_naive_oracle),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|_| Err("panicked".into()));
        let t = start.elapsed();
        match outcome {
            Ok(detail) => println!("PASS criterion {:>2}: {name}: {detail} [{:.1}s]", i + 1, t.as_secs_f64()),
            Err(why) => {
                failed += 1;
                println!("FAIL criterion {:>2}: {name}: {why} [{:.1}s]", i + 1, t.as_secs_f64());
            }
        }
    }
    println!("acceptance: {} of {} criteria pass", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
