use std::collections::BTreeSet;

use serde::Serialize;

use crate::bridge::{n_numbers, NMode};
use crate::error::{HurwitzError, Result};
use crate::factorize::{SearchConfig, SignSequence};
use crate::permcore::Partition;
use crate::tropical::{
    enumerate_colourings, enumerate_covers_with, vertex_splitting, Colouring, Edge, Endpoint, SymmetryKind,
    SymmetrySets, TropicalCover,
};

/// `λ = (λ_e, λ_{o,o}², λ_o)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TailDecomposition {
    pub even: Partition,
    pub odd_paired: Partition,
    pub odd_distinct: Partition,
}

impl TailDecomposition {
    /// The largest even part, `λ_e^max`.
    pub fn max_even(&self) -> Option<u32> {
        self.even.parts().first().copied()
    }

    /// Reassembles `λ`.
    pub fn recompose(&self) -> Partition {
        let doubled: Vec<u32> = self.odd_paired.parts().iter().flat_map(|&p| [p, p]).collect();
        self.even.join(&Partition::new(doubled).expect("positive")).join(&self.odd_distinct)
    }
}

pub fn tail_decomposition(lambda: &Partition) -> TailDecomposition {
    let mut even = Vec::new();
    let mut paired = Vec::new();
    let mut distinct = Vec::new();
    let parts = lambda.parts();
    let mut i = 0;
    while i < parts.len() {
        let p = parts[i];
        let run = parts[i..].iter().take_while(|&&q| q == p).count();
        if p % 2 == 0 {
            even.extend(std::iter::repeat(p).take(run));
        } else {
            paired.extend(std::iter::repeat(p).take(run / 2));
            if run % 2 == 1 {
                distinct.push(p);
            }
        }
        i += run;
    }
    let part = |v| Partition::new(v).expect("positive");
    TailDecomposition { even: part(even), odd_paired: part(paired), odd_distinct: part(distinct) }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ZigzagClass {
    NotZigzag,
    Zigzag,
    MonotoneZigzag,
    UniversallyMonotoneZigzag,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum StringShape {
    /// A path of odd edges from one end of the cover to another.
    Path,
    /// A closed loop of odd edges.
    Loop,
    /// A single inner vertex.
    Vertex,
}

/// A component of `C∖S`, hanging off the string at one vertex.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Tail {
    /// String vertex the tail is attached to (0-based).
    pub attach: usize,
    /// Weight of the edge adjacent to the string.
    pub weight: u32,
    pub incoming: bool,
    pub bent: bool,
    pub symmetric_cycles: usize,
    pub symmetric_fork: bool,
    pub vertices: Vec<usize>,
    pub edges: Vec<usize>,
}

/// A maximal stretch of the string between bent vertices.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Piece {
    pub vertices: Vec<usize>,
    pub edges: Vec<usize>,
    /// In-piece (traversed left to right when read from the first end).
    pub incoming: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ZigzagComponent {
    pub piece: usize,
    pub incoming: bool,
    /// Inner vertices, sorted.
    pub vertices: Vec<usize>,
    pub tails: Vec<usize>,
}

/// A witness string together with the decomposition it induces. Pieces and
/// components are only filled in for path strings.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ZigzagStructure {
    pub shape: StringShape,
    /// Edge indices in the order the string is read.
    pub string_edges: Vec<usize>,
    pub string_vertices: Vec<usize>,
    pub bent_vertices: Vec<usize>,
    pub pieces: Vec<Piece>,
    pub tails: Vec<Tail>,
    pub components: Vec<ZigzagComponent>,
}

impl ZigzagStructure {
    fn edge_set(&self) -> BTreeSet<usize> {
        self.string_edges.iter().copied().collect()
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Classification {
    pub class: ZigzagClass,
    pub witness: Option<ZigzagStructure>,
}

/// Edges a string may use: odd, and in no symmetric cycle or odd fork.
fn string_edges_allowed(c: &TropicalCover) -> Vec<bool> {
    let mut ok: Vec<bool> = c.edges().iter().map(|e| !e.is_even()).collect();
    let sets = SymmetrySets::of(c);
    for p in sets.symmetric_cycles.iter().chain(&sets.symmetric_forks) {
        if p.kind != SymmetryKind::EvenFork {
            ok[p.edges.0] = false;
            ok[p.edges.1] = false;
        }
    }
    ok
}

fn incident(c: &TropicalCover, v: usize) -> Vec<usize> {
    let mut out = c.incoming(v);
    out.extend(c.outgoing(v));
    out
}

fn other_end(e: &Edge, v: usize) -> Endpoint {
    if e.from == Endpoint::Vertex(v) {
        e.to
    } else {
        e.from
    }
}

/// Oriented candidate strings: every end-to-end path in both directions,
/// every loop once, every single vertex.
fn candidates(c: &TropicalCover) -> Vec<(StringShape, Vec<usize>, Vec<usize>)> {
    let allowed = string_edges_allowed(c);
    let edges = c.edges();
    let mut out = Vec::new();
    // paths
    for (start, e) in edges.iter().enumerate() {
        if !allowed[start] || !e.is_end() {
            continue;
        }
        let v = e.vertices().next().expect("an end has one inner vertex");
        let mut path_e = vec![start];
        let mut path_v = vec![v];
        extend_path(c, &allowed, &mut path_e, &mut path_v, &mut out);
    }
    // loops, recorded once by their smallest edge
    let mut seen = BTreeSet::new();
    for v0 in 0..c.r() {
        let mut path_e = Vec::new();
        let mut path_v = vec![v0];
        find_loops(c, &allowed, v0, &mut path_e, &mut path_v, &mut seen, &mut out);
    }
    for v in 0..c.r() {
        out.push((StringShape::Vertex, Vec::new(), vec![v]));
    }
    out
}

fn extend_path(
    c: &TropicalCover,
    allowed: &[bool],
    path_e: &mut Vec<usize>,
    path_v: &mut Vec<usize>,
    out: &mut Vec<(StringShape, Vec<usize>, Vec<usize>)>,
) {
    let v = *path_v.last().expect("non-empty");
    let last = *path_e.last().expect("non-empty");
    for f in incident(c, v) {
        if f == last || !allowed[f] {
            continue;
        }
        let e = &c.edges()[f];
        match other_end(e, v).vertex() {
            None => {
                let mut done = path_e.clone();
                done.push(f);
                out.push((StringShape::Path, done, path_v.clone()));
            }
            Some(w) if !path_v.contains(&w) => {
                path_e.push(f);
                path_v.push(w);
                extend_path(c, allowed, path_e, path_v, out);
                path_e.pop();
                path_v.pop();
            }
            Some(_) => {}
        }
    }
}

fn find_loops(
    c: &TropicalCover,
    allowed: &[bool],
    v0: usize,
    path_e: &mut Vec<usize>,
    path_v: &mut Vec<usize>,
    seen: &mut BTreeSet<Vec<usize>>,
    out: &mut Vec<(StringShape, Vec<usize>, Vec<usize>)>,
) {
    let v = *path_v.last().expect("non-empty");
    for f in incident(c, v) {
        if !allowed[f] || path_e.contains(&f) || c.edges()[f].is_end() {
            continue;
        }
        let Some(w) = other_end(&c.edges()[f], v).vertex() else { continue };
        if w == v0 && !path_e.is_empty() {
            let mut key = path_e.clone();
            key.push(f);
            let mut sorted = key.clone();
            sorted.sort_unstable();
            if seen.insert(sorted) {
                out.push((StringShape::Loop, key, path_v.clone()));
            }
        } else if w > v0 && !path_v.contains(&w) {
            path_e.push(f);
            path_v.push(w);
            find_loops(c, allowed, v0, path_e, path_v, seen, out);
            path_e.pop();
            path_v.pop();
        }
    }
}

/// Walks the component of `C∖S` through `edge` away from the string and
/// checks it is one of the three tail shapes.
fn walk_tail(c: &TropicalCover, attach: usize, first: usize, on_string: &[bool]) -> Option<Tail> {
    let edges = c.edges();
    let incoming = edges[first].to == Endpoint::Vertex(attach);
    let w = edges[first].weight;
    if w % 2 == 1 {
        return None;
    }
    let half = w / 2;
    let mut tail = Tail {
        attach,
        weight: w,
        incoming,
        bent: false,
        symmetric_cycles: 0,
        symmetric_fork: false,
        vertices: Vec::new(),
        edges: vec![first],
    };
    let far = |e: &Edge| if incoming { e.from } else { e.to };
    let sides = |v: usize| if incoming { (c.outgoing(v), c.incoming(v)) } else { (c.incoming(v), c.outgoing(v)) };
    let mut current = first;
    while let Some(v) = far(&edges[current]).vertex() {
        if on_string[v] {
            return None;
        }
        let (near, away) = sides(v);
        if near != [current] || away.len() != 2 || half % 2 == 0 {
            return None;
        }
        let (f1, f2) = (away[0], away[1]);
        if edges[f1].weight != half || edges[f2].weight != half {
            return None;
        }
        tail.vertices.push(v);
        tail.edges.extend([f1, f2]);
        match (far(&edges[f1]).vertex(), far(&edges[f2]).vertex()) {
            (None, None) => {
                tail.symmetric_fork = true;
                break;
            }
            (Some(u), Some(u2)) if u == u2 && !on_string[u] => {
                let (near_u, away_u) = sides(u);
                let mut pair = vec![f1, f2];
                pair.sort_unstable();
                if near_u != pair || away_u.len() != 1 || edges[away_u[0]].weight != w {
                    return None;
                }
                tail.vertices.push(u);
                tail.symmetric_cycles += 1;
                current = away_u[0];
                tail.edges.push(current);
            }
            _ => return None,
        }
    }
    tail.vertices.sort_unstable();
    tail.edges.sort_unstable();
    Some(tail)
}

/// Builds the structure for one oriented candidate; `None` unless every
/// component of `C∖S` is a tail.
fn structure_of(c: &TropicalCover, shape: StringShape, string_edges: Vec<usize>, string_vertices: Vec<usize>) -> Option<ZigzagStructure> {
    let edges = c.edges();
    let mut on_string = vec![false; c.r()];
    for &v in &string_vertices {
        on_string[v] = true;
    }
    let s_edges: BTreeSet<usize> = string_edges.iter().copied().collect();
    let mut tails = Vec::new();
    for &v in &string_vertices {
        for f in incident(c, v) {
            if !s_edges.contains(&f) {
                tails.push(walk_tail(c, v, f, &on_string)?);
            }
        }
    }
    let covered: usize = s_edges.len() + tails.iter().map(|t| t.edges.len()).sum::<usize>();
    if covered != edges.len() {
        return None;
    }
    let mut z = ZigzagStructure {
        shape,
        string_edges,
        string_vertices,
        bent_vertices: Vec::new(),
        pieces: Vec::new(),
        tails,
        components: Vec::new(),
    };
    if shape == StringShape::Path {
        decompose_path(c, &mut z);
    }
    Some(z)
}

fn decompose_path(c: &TropicalCover, z: &mut ZigzagStructure) {
    let edges = c.edges();
    let n = z.string_vertices.len();
    let bent: Vec<bool> = (0..n)
        .map(|i| {
            let v = Endpoint::Vertex(z.string_vertices[i]);
            let (a, b) = (&edges[z.string_edges[i]], &edges[z.string_edges[i + 1]]);
            (a.to == v) == (b.to == v)
        })
        .collect();
    z.bent_vertices = (0..n).filter(|&i| bent[i]).map(|i| z.string_vertices[i]).collect();
    let mut incoming = edges[z.string_edges[0]].from == Endpoint::Left;
    let mut piece = Piece { vertices: Vec::new(), edges: vec![z.string_edges[0]], incoming };
    for i in 0..n {
        piece.vertices.push(z.string_vertices[i]);
        if bent[i] {
            let done = std::mem::replace(&mut piece, Piece { vertices: vec![z.string_vertices[i]], edges: Vec::new(), incoming: !incoming });
            z.pieces.push(done);
            incoming = !incoming;
        }
        piece.edges.push(z.string_edges[i + 1]);
    }
    z.pieces.push(piece);
    for t in &mut z.tails {
        t.bent = z.bent_vertices.contains(&t.attach);
    }
    for (p, piece) in z.pieces.iter().enumerate() {
        let mut vertices = Vec::new();
        let mut tails = Vec::new();
        for &v in &piece.vertices {
            let is_bent = z.bent_vertices.contains(&v);
            if is_bent && !piece.incoming {
                continue;
            }
            vertices.push(v);
            for (ti, t) in z.tails.iter().enumerate() {
                if t.attach == v {
                    tails.push(ti);
                    vertices.extend(&t.vertices);
                }
            }
        }
        vertices.sort_unstable();
        z.components.push(ZigzagComponent { piece: p, incoming: piece.incoming, vertices, tails });
    }
}

fn intervals_disjoint<'a>(sets: impl Iterator<Item = &'a Vec<usize>>) -> bool {
    let mut spans: Vec<(usize, usize)> =
        sets.filter(|s| !s.is_empty()).map(|s| (*s.iter().min().unwrap(), *s.iter().max().unwrap())).collect();
    spans.sort_unstable();
    spans.windows(2).all(|w| w[0].1 < w[1].0)
}

/// Conditions (1)–(3) of a monotone zigzag cover for this string.
fn is_monotone(z: &ZigzagStructure) -> bool {
    if z.shape != StringShape::Path {
        return false;
    }
    let piece_of = |v: usize| z.pieces.iter().position(|p| p.vertices.contains(&v)).expect("string vertex");
    for t in &z.tails {
        if t.bent {
            if (t.symmetric_cycles > 0 || t.symmetric_fork) && t.weight != 2 {
                return false;
            }
        } else {
            let on_in_piece = z.pieces[piece_of(t.attach)].incoming;
            if t.incoming == on_in_piece || t.symmetric_cycles > 0 || (!t.incoming && t.symmetric_fork) {
                return false;
            }
        }
    }
    intervals_disjoint(z.tails.iter().map(|t| &t.vertices)) && intervals_disjoint(z.components.iter().map(|c| &c.vertices))
}

/// At most one unbent out-tail on each in-piece.
fn is_universal(z: &ZigzagStructure) -> bool {
    z.components.iter().filter(|c| c.incoming).all(|c| {
        c.tails.iter().filter(|&&t| !z.tails[t].bent && !z.tails[t].incoming).count() <= 1
    })
}

fn level(z: &ZigzagStructure) -> ZigzagClass {
    if is_monotone(z) {
        if is_universal(z) {
            ZigzagClass::UniversallyMonotoneZigzag
        } else {
            ZigzagClass::MonotoneZigzag
        }
    } else {
        ZigzagClass::Zigzag
    }
}

/// Every string witnessing that `c` is a zigzag cover, paths once per
/// reading direction.
pub fn zigzag_structures(c: &TropicalCover) -> Vec<ZigzagStructure> {
    candidates(c).into_iter().filter_map(|(shape, e, v)| structure_of(c, shape, e, v)).collect()
}

/// The strongest class any string achieves, with the first string that
/// achieves it.
pub fn classify(c: &TropicalCover) -> Classification {
    let mut best = Classification { class: ZigzagClass::NotZigzag, witness: None };
    for z in zigzag_structures(c) {
        let l = level(&z);
        if l > best.class {
            best = Classification { class: l, witness: Some(z) };
            if l == ZigzagClass::UniversallyMonotoneZigzag {
                break;
            }
        }
    }
    best
}

/// The part of `c` over the first `k` branch points: those vertices and
/// every edge touching them (edges leaving them end on the right). Also
/// returns the old index of each new edge.
pub fn truncate(c: &TropicalCover, k: usize) -> Result<(TropicalCover, Vec<usize>)> {
    let keep = |p: Endpoint| matches!(p.vertex(), Some(v) if v < k);
    let mut tagged: Vec<(Edge, usize)> = c
        .edges()
        .iter()
        .enumerate()
        .filter(|(_, e)| keep(e.from) || keep(e.to))
        .map(|(i, e)| (Edge::new(e.from, if keep(e.to) { e.to } else { Endpoint::Right }, e.weight), i))
        .collect();
    tagged.sort();
    let edges: Vec<Edge> = tagged.iter().map(|t| t.0).collect();
    let ends = edges.iter().filter(|e| e.is_end()).count() as i64;
    let rank = (edges.len() as i64 - k as i64 - ends + 1).max(0);
    let cover = TropicalCover::new(k, rank as u32, edges)?;
    Ok((cover, tagged.into_iter().map(|t| t.1).collect()))
}

#[derive(Clone, Debug, Serialize)]
pub struct KMixedWitness {
    pub k: usize,
    pub string: ZigzagStructure,
    /// The string's trace in the truncated cover (absent for `k = 0`).
    pub restricted: Option<ZigzagStructure>,
}

/// Whether the string edges outside the truncation form one run.
fn outside_connected(z: &ZigzagStructure, inside: &BTreeSet<usize>, k: usize) -> bool {
    match z.shape {
        StringShape::Vertex => true,
        StringShape::Path | StringShape::Loop => {
            let flags: Vec<bool> = z.string_edges.iter().map(|e| !inside.contains(e)).collect();
            let mut runs = flags.windows(2).filter(|w| w[1] && !w[0]).count() + usize::from(flags[0]);
            if z.shape == StringShape::Loop && flags[0] && flags[flags.len() - 1] && runs > 1 {
                runs -= 1;
            }
            let _ = k;
            runs <= 1
        }
    }
}

/// Whether `c` is a `k`-mixed zigzag cover: some zigzag string `S` whose
/// trace on the part over `x_1..x_k` witnesses a universally monotone
/// zigzag cover there, with `S` connected outside that part.
pub fn is_kmixed(c: &TropicalCover, k: usize) -> Result<Option<KMixedWitness>> {
    if k > c.r() {
        return Err(HurwitzError::InvalidInput(format!("k = {k} exceeds r = {}", c.r())));
    }
    let structures = zigzag_structures(c);
    if k == 0 {
        return Ok(structures.into_iter().next().map(|string| KMixedWitness { k, string, restricted: None }));
    }
    let (part, old_index) = truncate(c, k)?;
    if !part.is_connected() {
        return Ok(None);
    }
    let inside: BTreeSet<usize> = old_index.iter().copied().collect();
    let universal: Vec<ZigzagStructure> =
        zigzag_structures(&part).into_iter().filter(|z| level(z) == ZigzagClass::UniversallyMonotoneZigzag).collect();
    for z in structures {
        let trace: BTreeSet<usize> = z.string_edges.iter().filter(|e| inside.contains(e)).copied().collect();
        let contained = trace.len() == z.string_edges.len()
            && (z.shape != StringShape::Vertex || z.string_vertices[0] < k);
        if !contained && !outside_connected(&z, &inside, k) {
            continue;
        }
        let found = universal.iter().find(|u| {
            let mapped: BTreeSet<usize> = u.edge_set().iter().map(|&e| old_index[e]).collect();
            match u.shape {
                StringShape::Vertex => z.shape == StringShape::Vertex && z.string_vertices == u.string_vertices,
                _ => !mapped.is_empty() && mapped == trace,
            }
        });
        if let Some(u) = found {
            return Ok(Some(KMixedWitness { k, string: z.clone(), restricted: Some(u.clone()) }));
        }
    }
    Ok(None)
}

/// The colouring of a zigzag cover realizing `splitting`; exactly one exists.
pub fn unique_colouring(c: &TropicalCover, splitting: &SignSequence) -> Result<Colouring> {
    if splitting.len() != c.r() {
        return Err(HurwitzError::InvalidInput(format!("{} signs for {} branch points", splitting.len(), c.r())));
    }
    if classify(c).class == ZigzagClass::NotZigzag {
        return Err(HurwitzError::Precondition("the cover is not a zigzag cover".into()));
    }
    let mut found: Vec<Colouring> = Vec::new();
    for rho in enumerate_colourings(c) {
        if vertex_splitting(c, &rho)? == *splitting {
            found.push(rho);
        }
    }
    match found.len() {
        1 => Ok(found.pop().expect("one colouring")),
        n => Err(HurwitzError::Invariant(format!("{n} colourings realize {splitting} on a zigzag cover"))),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ZigzagFamily {
    /// Monotone zigzag covers, minimum over simple splittings.
    Monotone,
    /// Universally monotone zigzag covers, minimum over all splittings.
    Universal,
    /// `k`-mixed zigzag covers, minimum over all splittings.
    KMixed(usize),
}

#[derive(Clone, Debug, Serialize)]
pub struct ZigzagTerm {
    pub cover_id: String,
    pub cover: String,
    pub class: ZigzagClass,
    pub n: u64,
}

#[derive(Clone, Debug, Serialize)]
pub struct ZigzagNumber {
    pub family: ZigzagFamily,
    pub value: u64,
    pub terms: Vec<ZigzagTerm>,
}

/// Sum of `N(φ)` over the covers of the family: each cover contributes the
/// minimum over its splitting range of the number of factorizations that
/// produce it with the matching colouring.
pub fn zigzag_number(
    g: u32,
    lambda: &Partition,
    mu: &Partition,
    family: ZigzagFamily,
    cfg: &SearchConfig,
) -> Result<ZigzagNumber> {
    let covers = enumerate_covers_with(g, lambda, mu, &cfg.limits)?;
    let mut terms = Vec::new();
    for c in covers {
        let class = classify(&c).class;
        let (member, mode) = match family {
            ZigzagFamily::Monotone => (class >= ZigzagClass::MonotoneZigzag, NMode::PerSimpleS),
            ZigzagFamily::Universal => (class == ZigzagClass::UniversallyMonotoneZigzag, NMode::PerSequence),
            ZigzagFamily::KMixed(k) => (is_kmixed(&c, k)?.is_some(), NMode::KMixed(k)),
        };
        if !member {
            continue;
        }
        let n = n_numbers(&c, mode, cfg)?.minimum;
        terms.push(ZigzagTerm { cover_id: c.cover_id(), cover: c.to_string(), class, n });
    }
    let value = terms.iter().map(|t| t.n).sum();
    Ok(ZigzagNumber { family, value, terms })
}
