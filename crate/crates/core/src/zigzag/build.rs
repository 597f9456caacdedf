//! Explicit constructions of zigzag covers: a string with tails laid out
//! component by component, the standard universally monotone cover, the
//! chain of monotone components and the glued covers built from them.

use std::collections::{BTreeMap, BTreeSet, BinaryHeap};
use std::cmp::Reverse;

use serde::Serialize;

use crate::bridge::fibre_count;
use crate::error::{HurwitzError, Result};
use crate::factorize::{SearchConfig, SignSequence, Variant};
use crate::permcore::Partition;
use crate::tropical::{
    enumerate_colourings, validate_cover, vertex_splitting, Edge, Endpoint, RealTropicalCover, TropicalCover,
};

use super::classify::tail_decomposition;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Node {
    Left,
    Right,
    V(usize),
}

/// A cover under construction: vertices are abstract ids, `order` is their
/// left-to-right arrangement.
#[derive(Clone, Debug, Default)]
struct Layout {
    vertices: usize,
    edges: Vec<Option<(Node, Node, u32)>>,
    order: Vec<usize>,
}

impl Layout {
    fn vertex(&mut self) -> usize {
        self.vertices += 1;
        self.vertices - 1
    }

    fn edge(&mut self, from: Node, to: Node, w: u32) -> usize {
        self.edges.push(Some((from, to, w)));
        self.edges.len() - 1
    }

    fn get(&self, e: usize) -> (Node, Node, u32) {
        self.edges[e].expect("live edge")
    }

    fn set(&mut self, e: usize, from: Node, to: Node) {
        let w = self.get(e).2;
        self.edges[e] = Some((from, to, w));
    }

    /// Copies `other` in with fresh ids; returns the vertex and edge offsets.
    /// The caller places the new vertices in `order`.
    fn absorb(&mut self, other: &Layout) -> (usize, usize) {
        let (dv, de) = (self.vertices, self.edges.len());
        let shift = |n: Node| if let Node::V(v) = n { Node::V(v + dv) } else { n };
        self.vertices += other.vertices;
        self.edges.extend(other.edges.iter().map(|e| e.map(|(a, b, w)| (shift(a), shift(b), w))));
        (dv, de)
    }

    /// Joins the open end of `out` (`x → Right`) with the open end of `inc`
    /// (`Left → y`) into one edge `x → y`, kept at index `out`.
    fn glue(&mut self, out: usize, inc: usize) -> Result<()> {
        let (x, r, w1) = self.get(out);
        let (l, y, w2) = self.get(inc);
        if r != Node::Right || l != Node::Left || w1 != w2 {
            return Err(HurwitzError::Invariant(format!("cannot glue ends of weights {w1} and {w2}")));
        }
        self.edges[out] = Some((x, y, w1));
        self.edges[inc] = None;
        Ok(())
    }

    fn insert_after(&mut self, anchor: Node, before: Node, ids: &[usize]) {
        let at = match (anchor, before) {
            (Node::V(a), _) => self.order.iter().position(|&v| v == a).expect("placed") + 1,
            (_, Node::V(b)) => self.order.iter().position(|&v| v == b).expect("placed"),
            _ => 0,
        };
        self.order.splice(at..at, ids.iter().copied());
    }

    fn cover(&self, genus: u32) -> Result<TropicalCover> {
        let mut pos = vec![usize::MAX; self.vertices];
        for (i, &v) in self.order.iter().enumerate() {
            pos[v] = i;
        }
        if self.order.len() != self.vertices || pos.contains(&usize::MAX) {
            return Err(HurwitzError::Invariant("layout order is not a permutation of the vertices".into()));
        }
        let at = |n: Node| match n {
            Node::Left => Endpoint::Left,
            Node::Right => Endpoint::Right,
            Node::V(v) => Endpoint::Vertex(pos[v]),
        };
        let edges = self.edges.iter().flatten().map(|&(a, b, w)| Edge::new(at(a), at(b), w)).collect();
        TropicalCover::new(self.vertices, genus, edges)
    }
}

/// One tail to hang on the string: an in-tail adds its weight to the running
/// string weight, an out-tail subtracts it. A fork tail ends in two ends of
/// half the weight.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct TailSpec {
    pub incoming: bool,
    pub weight: u32,
    pub fork: bool,
}

impl TailSpec {
    pub fn bare_in(weight: u32) -> Self {
        TailSpec { incoming: true, weight, fork: false }
    }
    pub fn bare_out(weight: u32) -> Self {
        TailSpec { incoming: false, weight, fork: false }
    }
    pub fn fork_in(weight: u32) -> Self {
        TailSpec { incoming: true, weight, fork: true }
    }
    pub fn fork_out(weight: u32) -> Self {
        TailSpec { incoming: false, weight, fork: true }
    }
}

struct StringLayout {
    layout: Layout,
    /// The two string ends, first and last in reading order.
    start_end: usize,
    last_end: usize,
    /// Inner string edges in reading order.
    inner: Vec<usize>,
}

/// Order of the string vertices `1..=n`: components in topological order
/// (ties by position along the string), then vertices inside each.
fn unit_order(ks: &[i64]) -> Vec<usize> {
    let n = ks.len() - 1;
    let bent: Vec<bool> = (1..=n).map(|j| (ks[j - 1] > 0) != (ks[j] > 0)).collect();
    let mut piece = 0usize;
    let mut piece_of = vec![(0usize, 0usize); n + 1];
    for j in 1..=n {
        piece_of[j] = (piece, piece);
        if bent[j - 1] {
            piece_of[j] = (piece, piece + 1);
            piece += 1;
        }
    }
    let first_in = ks[0] > 0;
    let is_in = |p: usize| (p % 2 == 0) == first_in;
    let comp: Vec<usize> = (0..=n)
        .map(|j| if j == 0 { 0 } else if is_in(piece_of[j].0) { piece_of[j].0 } else { piece_of[j].1 })
        .collect();
    // string edge j joins j and j + 1, pointing right iff k_j > 0
    let arcs: Vec<(usize, usize)> =
        (1..n).map(|j| if ks[j] > 0 { (j, j + 1) } else { (j + 1, j) }).collect();
    let comps: BTreeSet<usize> = (1..=n).map(|j| comp[j]).collect();
    let comp_arcs: Vec<(usize, usize)> =
        arcs.iter().filter(|(a, b)| comp[*a] != comp[*b]).map(|&(a, b)| (comp[a], comp[b])).collect();
    let comp_order = kahn(&comps.iter().copied().collect::<Vec<_>>(), &comp_arcs);
    let mut out = Vec::with_capacity(n);
    for c in comp_order {
        let members: Vec<usize> = (1..=n).filter(|&j| comp[j] == c).collect();
        let inside: Vec<(usize, usize)> =
            arcs.iter().filter(|(a, b)| comp[*a] == c && comp[*b] == c).copied().collect();
        out.extend(kahn(&members, &inside));
    }
    out
}

/// Topological sort, smallest available node first.
fn kahn(nodes: &[usize], arcs: &[(usize, usize)]) -> Vec<usize> {
    let mut indeg: BTreeMap<usize, usize> = nodes.iter().map(|&v| (v, 0)).collect();
    for &(_, b) in arcs {
        *indeg.get_mut(&b).expect("node") += 1;
    }
    let mut ready: BinaryHeap<Reverse<usize>> = indeg.iter().filter(|(_, &d)| d == 0).map(|(&v, _)| Reverse(v)).collect();
    let mut out = Vec::with_capacity(nodes.len());
    while let Some(Reverse(v)) = ready.pop() {
        out.push(v);
        for &(a, b) in arcs {
            if a == v {
                let d = indeg.get_mut(&b).expect("node");
                *d -= 1;
                if *d == 0 {
                    ready.push(Reverse(b));
                }
            }
        }
    }
    out
}

fn running_weights(k0: i64, tails: &[TailSpec]) -> Result<Vec<i64>> {
    let mut ks = vec![k0];
    for t in tails {
        let w = t.weight as i64;
        let k = ks.last().unwrap() + if t.incoming { w } else { -w };
        if k == 0 {
            return Err(HurwitzError::Precondition("the string weight reaches 0".into()));
        }
        ks.push(k);
    }
    Ok(ks)
}

/// Builds a string whose `j`-th vertex carries `tails[j]`, starting from an
/// end of weight `|k0|` (an in-end when `k0 > 0`). `g` symmetric cycles go on
/// one fork in-tail: bent ones of weight 2 first, then earliest in the order.
fn string_layout(k0: i64, tails: &[TailSpec], g: u32) -> Result<StringLayout> {
    if tails.is_empty() || k0 == 0 {
        return Err(HurwitzError::InvalidInput("a string needs a non-zero end and at least one tail".into()));
    }
    for t in tails {
        if t.weight % 2 == 1 || (t.fork && (t.weight / 2) % 2 == 0) {
            return Err(HurwitzError::InvalidInput(format!("no tail of weight {} with fork = {}", t.weight, t.fork)));
        }
    }
    let ks = running_weights(k0, tails)?;
    let n = tails.len();
    let units = unit_order(&ks);
    let rank = |j: usize| units.iter().position(|&u| u == j).expect("unit");
    let bent = |j: usize| (ks[j - 1] > 0) != (ks[j] > 0);
    let cycle_tail = if g == 0 {
        None
    } else {
        let pick = (1..=n)
            .filter(|&j| tails[j - 1].fork && tails[j - 1].incoming)
            .min_by_key(|&j| (!(bent(j) && tails[j - 1].weight == 2), rank(j)))
            .or_else(|| (1..=n).filter(|&j| tails[j - 1].fork).min_by_key(|&j| rank(j)));
        Some(pick.ok_or_else(|| HurwitzError::Precondition("symmetric cycles need a fork tail".into()))?)
    };

    let mut lay = Layout::default();
    let attach: Vec<usize> = (0..=n).map(|_| lay.vertex()).collect();
    for &j in &units {
        let t = tails[j - 1];
        let v = Node::V(attach[j]);
        let (w, half) = (t.weight, t.weight / 2);
        let cycles = if cycle_tail == Some(j) { g } else { 0 };
        let mut chain = Vec::new();
        for _ in 0..cycles {
            chain.push((lay.vertex(), lay.vertex()));
        }
        let fork = if t.fork { Some(lay.vertex()) } else { None };
        if t.incoming {
            let mut prev = match fork {
                Some(f) => {
                    lay.edge(Node::Left, Node::V(f), half);
                    lay.edge(Node::Left, Node::V(f), half);
                    lay.order.push(f);
                    Node::V(f)
                }
                None => Node::Left,
            };
            for &(c, k) in &chain {
                lay.edge(prev, Node::V(c), w);
                lay.edge(Node::V(c), Node::V(k), half);
                lay.edge(Node::V(c), Node::V(k), half);
                lay.order.extend([c, k]);
                prev = Node::V(k);
            }
            lay.edge(prev, v, w);
            lay.order.push(attach[j]);
        } else {
            lay.order.push(attach[j]);
            let mut prev = v;
            for &(c, k) in &chain {
                lay.edge(prev, Node::V(c), w);
                lay.edge(Node::V(c), Node::V(k), half);
                lay.edge(Node::V(c), Node::V(k), half);
                lay.order.extend([c, k]);
                prev = Node::V(k);
            }
            match fork {
                Some(f) => {
                    lay.edge(prev, Node::V(f), w);
                    lay.edge(Node::V(f), Node::Right, half);
                    lay.edge(Node::V(f), Node::Right, half);
                    lay.order.push(f);
                }
                None => {
                    lay.edge(prev, Node::Right, w);
                }
            }
        }
    }
    let weight = |k: i64| k.unsigned_abs() as u32;
    let start_end = if ks[0] > 0 {
        lay.edge(Node::Left, Node::V(attach[1]), weight(ks[0]))
    } else {
        lay.edge(Node::V(attach[1]), Node::Right, weight(ks[0]))
    };
    let mut inner = Vec::new();
    for j in 1..n {
        let (a, b) = (Node::V(attach[j]), Node::V(attach[j + 1]));
        inner.push(if ks[j] > 0 { lay.edge(a, b, weight(ks[j])) } else { lay.edge(b, a, weight(ks[j])) });
    }
    let last_end = if ks[n] > 0 {
        lay.edge(Node::V(attach[n]), Node::Right, weight(ks[n]))
    } else {
        lay.edge(Node::Left, Node::V(attach[n]), weight(ks[n]))
    };
    // attach[0] only keeps string vertices 1-based
    drop_placeholder(&mut lay, attach[0]);
    Ok(StringLayout { layout: lay, start_end, last_end, inner })
}

/// Removes an unused vertex id, renumbering the others.
fn drop_placeholder(lay: &mut Layout, dead: usize) {
    let re = |v: usize| if v > dead { v - 1 } else { v };
    let node = |n: Node| if let Node::V(v) = n { Node::V(re(v)) } else { n };
    lay.order.retain(|&v| v != dead);
    for v in &mut lay.order {
        *v = re(*v);
    }
    for e in lay.edges.iter_mut().flatten() {
        *e = (node(e.0), node(e.1), e.2);
    }
    lay.vertices -= 1;
}

/// A zigzag cover with string ends of weights `|k0|` and `|k_N|` and the
/// given tails, laid out so that tails and components occupy consecutive
/// vertices.
pub fn build_string_cover(k0: i64, tails: &[TailSpec], g: u32) -> Result<TropicalCover> {
    string_layout(k0, tails, g)?.layout.cover(g)
}

fn standard_tails(m: usize) -> Vec<TailSpec> {
    (0..m).flat_map(|_| [TailSpec::fork_out(2), TailSpec::fork_in(2)]).collect()
}

fn standard_layout(m: usize, g: u32) -> Result<StringLayout> {
    string_layout(1, &standard_tails(m), g)
}

/// The universally monotone zigzag cover of type `(g, 1^{2m+1}, 1^{2m+1})`:
/// a string `L → b_1 ← b_2 → ⋯ ← b_{2m} → R` of weight-1 edges, a fork
/// out-tail of weight 2 at each odd `b` and a fork in-tail at each even one,
/// with `g` symmetric cycles on the in-tail that comes first.
pub fn build_standard_universal(m: usize, g: u32) -> Result<TropicalCover> {
    if m == 0 {
        return Err(HurwitzError::InvalidInput("m must be at least 1".into()));
    }
    standard_layout(m, g)?.layout.cover(g)
}

/// The four monotone components a chain is made of.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum ComponentType {
    /// Fork in-tail, cut, join, cut; glues its follower on the left.
    One,
    /// Mirror image of `One`.
    Two,
    /// Closing component: a weight-2 in-end and out-end, glued on the left.
    Three,
    /// Mirror image of `Three`.
    Four,
}

impl ComponentType {
    fn leans_left(self) -> bool {
        matches!(self, ComponentType::One | ComponentType::Three)
    }

    pub fn from_index(i: u8) -> Result<Self> {
        match i {
            1 => Ok(ComponentType::One),
            2 => Ok(ComponentType::Two),
            3 => Ok(ComponentType::Three),
            4 => Ok(ComponentType::Four),
            _ => Err(HurwitzError::InvalidInput(format!("no component type {i}"))),
        }
    }

    pub fn index(self) -> u8 {
        match self {
            ComponentType::One => 1,
            ComponentType::Two => 2,
            ComponentType::Three => 3,
            ComponentType::Four => 4,
        }
    }
}

/// Tail exchange with the closing component `C_m`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TailExchange {
    /// The fork in-tail of component `i` (type 1) swaps with the in-tail of `C_m`.
    InTail(usize),
    /// The fork out-tail of component `i` (type 2) swaps with the out-tail of `C_m`.
    OutTail(usize),
}

#[derive(Clone, Debug, Serialize)]
pub struct ChainCover {
    pub cover: TropicalCover,
    pub types: Vec<ComponentType>,
    pub order: Vec<usize>,
    pub exchange: Option<TailExchange>,
}

struct ChainParts {
    layout: Layout,
    blocks: Vec<Vec<usize>>,
    /// Per component: e1, e2, e3 (e3 absent for types 3 and 4).
    stubs: Vec<(usize, usize, Option<usize>)>,
    /// Per component: fork vertex and the weight-2 edge to it (types 1, 2).
    fork: Vec<Option<(usize, usize)>>,
    /// For the closing component: in-tail edge and vertex, out-tail edge and vertex.
    closing: (usize, usize, usize, usize),
}

fn chain_parts(types: &[ComponentType]) -> ChainParts {
    use ComponentType::*;
    use Node::{Left as L, Right as R, V};
    let mut lay = Layout::default();
    let mut blocks = Vec::new();
    let mut stubs = Vec::new();
    let mut fork = Vec::new();
    let mut closing = (0, 0, 0, 0);
    for &t in types {
        match t {
            One => {
                let (f, a, b, g) = (lay.vertex(), lay.vertex(), lay.vertex(), lay.vertex());
                lay.edge(L, V(f), 1);
                lay.edge(L, V(f), 1);
                let fa = lay.edge(V(f), V(a), 2);
                let e1 = lay.edge(V(a), R, 1);
                lay.edge(V(a), V(b), 1);
                let e2 = lay.edge(L, V(b), 1);
                lay.edge(V(b), V(g), 2);
                lay.edge(V(g), R, 1);
                let e3 = lay.edge(V(g), R, 1);
                blocks.push(vec![f, a, b, g]);
                stubs.push((e1, e2, Some(e3)));
                fork.push(Some((f, fa)));
            }
            Two => {
                let (g, b, a, f) = (lay.vertex(), lay.vertex(), lay.vertex(), lay.vertex());
                lay.edge(L, V(g), 1);
                let e3 = lay.edge(L, V(g), 1);
                lay.edge(V(g), V(b), 2);
                lay.edge(V(b), V(a), 1);
                let e2 = lay.edge(V(b), R, 1);
                let e1 = lay.edge(L, V(a), 1);
                let af = lay.edge(V(a), V(f), 2);
                lay.edge(V(f), R, 1);
                lay.edge(V(f), R, 1);
                blocks.push(vec![g, b, a, f]);
                stubs.push((e1, e2, Some(e3)));
                fork.push(Some((f, af)));
            }
            Three => {
                let (a, b) = (lay.vertex(), lay.vertex());
                let tin = lay.edge(L, V(a), 2);
                let e1 = lay.edge(V(a), R, 1);
                lay.edge(V(a), V(b), 1);
                let e2 = lay.edge(L, V(b), 1);
                let tout = lay.edge(V(b), R, 2);
                blocks.push(vec![a, b]);
                stubs.push((e1, e2, None));
                fork.push(None);
                closing = (tin, a, tout, b);
            }
            Four => {
                let (b, a) = (lay.vertex(), lay.vertex());
                let tin = lay.edge(L, V(b), 2);
                lay.edge(V(b), V(a), 1);
                let e2 = lay.edge(V(b), R, 1);
                let e1 = lay.edge(L, V(a), 1);
                let tout = lay.edge(V(a), R, 2);
                blocks.push(vec![b, a]);
                stubs.push((e1, e2, None));
                fork.push(None);
                closing = (tin, b, tout, a);
            }
        }
    }
    ChainParts { layout: lay, blocks, stubs, fork, closing }
}

/// Component types forced by a left-to-right `order` of the components
/// (0-based): `C_{i+1}` must sit left of `C_i` exactly when it is of type 1
/// or 3. `first_left` picks the type of `C_1` (1 rather than 2).
pub fn chain_types(order: &[usize], first_left: bool) -> Result<Vec<ComponentType>> {
    let m = order.len();
    let pos = order_positions(order)?;
    let mut types = Vec::with_capacity(m);
    for i in 0..m {
        let left = if i == 0 { first_left } else { pos[i] < pos[i - 1] };
        let closing = i + 1 == m;
        types.push(match (left, closing) {
            (true, false) => ComponentType::One,
            (false, false) => ComponentType::Two,
            (true, true) => ComponentType::Three,
            (false, true) => ComponentType::Four,
        });
    }
    Ok(types)
}

fn order_positions(order: &[usize]) -> Result<Vec<usize>> {
    let m = order.len();
    let mut pos = vec![usize::MAX; m];
    for (p, &c) in order.iter().enumerate() {
        if c >= m || pos[c] != usize::MAX {
            return Err(HurwitzError::InvalidInput(format!("{order:?} is not a permutation of 0..{m}")));
        }
        pos[c] = p;
    }
    Ok(pos)
}

fn chain_layout(types: &[ComponentType], order: &[usize], exchange: Option<TailExchange>) -> Result<(ChainParts, Layout)> {
    let m = types.len();
    if m == 0 {
        return Err(HurwitzError::InvalidInput("a chain needs at least one component".into()));
    }
    let pos = order_positions(order)?;
    if order.len() != m {
        return Err(HurwitzError::InvalidInput("order and types differ in length".into()));
    }
    for (i, t) in types.iter().enumerate() {
        let closing = matches!(t, ComponentType::Three | ComponentType::Four);
        if closing != (i + 1 == m) {
            return Err(HurwitzError::InvalidInput(
                "the first m-1 components must be of type 1 or 2 and the last of type 3 or 4".into(),
            ));
        }
        if i > 0 && t.leans_left() != (pos[i] < pos[i - 1]) {
            return Err(HurwitzError::InvalidInput(format!(
                "component {} of type {} cannot sit {} component {}",
                i + 1,
                t.index(),
                if pos[i] < pos[i - 1] { "left of" } else { "right of" },
                i
            )));
        }
    }
    let mut parts = chain_parts(types);
    let lay = &mut parts.layout;
    for i in 0..m - 1 {
        let (_, e2, e3) = parts.stubs[i];
        let e1_next = parts.stubs[i + 1].0;
        let e3 = e3.expect("leading components have e3");
        match (types[i], types[i + 1].leans_left()) {
            (ComponentType::One, true) => lay.glue(e1_next, e2)?,
            (ComponentType::One, false) => lay.glue(e3, e1_next)?,
            (ComponentType::Two, false) => lay.glue(e2, e1_next)?,
            (ComponentType::Two, true) => lay.glue(e1_next, e3)?,
            _ => unreachable!("checked above"),
        }
    }
    let mut blocks = parts.blocks.clone();
    let (tin, x, tout, y) = parts.closing;
    match exchange {
        None => {}
        Some(TailExchange::InTail(i)) => {
            let (f, fa) = match (types.get(i), parts.fork.get(i)) {
                (Some(ComponentType::One), Some(Some(p))) => *p,
                _ => return Err(HurwitzError::InvalidInput(format!("component {} has no fork in-tail", i + 1))),
            };
            let a = match lay.get(fa).1 {
                Node::V(a) => a,
                _ => unreachable!(),
            };
            lay.set(fa, Node::V(f), Node::V(x));
            lay.set(tin, Node::Left, Node::V(a));
            blocks[i].retain(|&v| v != f);
            let at = blocks[m - 1].iter().position(|&v| v == x).expect("closing vertex");
            blocks[m - 1].insert(at, f);
        }
        Some(TailExchange::OutTail(i)) => {
            let (f, af) = match (types.get(i), parts.fork.get(i)) {
                (Some(ComponentType::Two), Some(Some(p))) => *p,
                _ => return Err(HurwitzError::InvalidInput(format!("component {} has no fork out-tail", i + 1))),
            };
            let a = match lay.get(af).0 {
                Node::V(a) => a,
                _ => unreachable!(),
            };
            lay.set(af, Node::V(y), Node::V(f));
            lay.set(tout, Node::V(a), Node::Right);
            blocks[i].retain(|&v| v != f);
            let at = blocks[m - 1].iter().position(|&v| v == y).expect("closing vertex");
            blocks[m - 1].insert(at + 1, f);
        }
    }
    lay.order = order.iter().flat_map(|&c| blocks[c].clone()).collect();
    let lay = lay.clone();
    Ok((parts, lay))
}

fn has_colouring(c: &TropicalCover, signs: &SignSequence) -> Result<bool> {
    for rho in enumerate_colourings(c) {
        if vertex_splitting(c, &rho)? == *signs {
            return Ok(true);
        }
    }
    Ok(false)
}

fn exchanges(types: &[ComponentType]) -> Vec<TailExchange> {
    let mut out: Vec<TailExchange> = types
        .iter()
        .enumerate()
        .filter(|(_, t)| **t == ComponentType::One)
        .map(|(i, _)| TailExchange::InTail(i))
        .collect();
    out.extend(
        types.iter().enumerate().filter(|(_, t)| **t == ComponentType::Two).map(|(i, _)| TailExchange::OutTail(i)),
    );
    out
}

/// Glues `m = types.len()` monotone components into a cover of type
/// `(0, (2,1^{2m-1}), (2,1^{2m-1}))`, each component's vertices consecutive
/// and the blocks arranged left to right by `order`. With `splitting_s`, a
/// cover admitting a colouring with the simple splitting of `s` positive
/// points is returned, exchanging a fork tail with the closing component's
/// tail when the plain chain has none.
pub fn build_component_chain(types: &[ComponentType], order: &[usize], splitting_s: Option<usize>) -> Result<ChainCover> {
    let m = types.len();
    let (_, lay) = chain_layout(types, order, None)?;
    let plain = lay.cover(0)?;
    let ones = Partition::ones(2 * m - 1).join(&Partition::new(vec![2])?);
    if !validate_cover(&plain, 0, &ones, &ones) {
        return Err(HurwitzError::Invariant("the glued chain has the wrong type".into()));
    }
    let done = |cover, exchange| ChainCover { cover, types: types.to_vec(), order: order.to_vec(), exchange };
    let Some(s) = splitting_s else { return Ok(done(plain, None)) };
    let r = plain.r();
    if s > r {
        return Err(HurwitzError::InvalidInput(format!("s = {s} exceeds r = {r}")));
    }
    let signs = SignSequence::simple(r, s);
    if has_colouring(&plain, &signs)? {
        return Ok(done(plain, None));
    }
    for x in exchanges(types) {
        let (_, lay) = chain_layout(types, order, Some(x))?;
        let cover = lay.cover(0)?;
        if validate_cover(&cover, 0, &ones, &ones) && has_colouring(&cover, &signs)? {
            return Ok(done(cover, Some(x)));
        }
    }
    Err(HurwitzError::Invariant(format!("no tail exchange gives a colouring with s = {s}")))
}

/// Number of real factorizations of `variant` producing `cover` with a
/// colouring whose splitting is `signs`; `None` when no colouring has it.
pub fn count_for_signs(cover: &TropicalCover, signs: &SignSequence, variant: Variant, cfg: &SearchConfig) -> Result<Option<u64>> {
    let mut total = None;
    for rho in enumerate_colourings(cover) {
        if vertex_splitting(cover, &rho)? == *signs {
            let rc = RealTropicalCover::new(cover.clone(), rho)?;
            *total.get_or_insert(0) += fibre_count(&rc, variant, cfg)?;
        }
    }
    Ok(total)
}

/// The four cases of the simple-splitting construction, by the lengths of
/// `λ_o` and `μ_o`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum TailCase {
    /// `l(λ_o) = l(μ_o) = 1`.
    One,
    /// `l(λ_o) = 2`, `l(μ_o) = 0`.
    Two,
    /// `l(λ_o) = 0`, `l(μ_o) = 2`.
    Three,
    /// `l(λ_o) = l(μ_o) = 0`.
    Four,
}

impl TailCase {
    pub fn from_index(i: u8) -> Result<Self> {
        match i {
            1 => Ok(TailCase::One),
            2 => Ok(TailCase::Two),
            3 => Ok(TailCase::Three),
            4 => Ok(TailCase::Four),
            _ => Err(HurwitzError::InvalidInput(format!("no case {i}"))),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct TailSequence {
    pub case: TailCase,
    /// `k_0, …, k_N`.
    pub ks: Vec<i64>,
    /// The tail hung at each step, `tails[i]` taking `k_i` to `k_{i+1}`.
    pub tails: Vec<TailSpec>,
}

fn reject(msg: impl Into<String>) -> HurwitzError {
    HurwitzError::Precondition(msg.into())
}

/// Runs `k_{i+1} = k_i − μ_e^{s_i}` if `k_i > 0`, else `k_i + λ_e^{t_i}`, over
/// `μ_e` and `(λ_e, 2^{l(λ_{1,1})})`, keeping the case's largest even part
/// for last.
pub fn tail_sequence(lambda: &Partition, mu: &Partition, case: TailCase) -> Result<TailSequence> {
    if lambda.weight() != mu.weight() {
        return Err(HurwitzError::InvalidInput(format!("|λ| = {} but |μ| = {}", lambda.weight(), mu.weight())));
    }
    let l = tail_decomposition(lambda);
    let u = tail_decomposition(mu);
    if !u.odd_paired.is_empty() {
        return Err(reject("μ_{o,o} must be empty"));
    }
    if l.odd_paired.parts().iter().any(|&p| p != 1) {
        return Err(reject("λ_{o,o} may only contain 1"));
    }
    let lo = l.odd_distinct.parts();
    let uo = u.odd_distinct.parts();
    let lmax = l.max_even().map(i64::from);
    let umax = u.max_even().map(i64::from);
    let pairs = l.odd_paired.len();
    let (k0, terminal, defer_lambda, pairs_used) = match case {
        TailCase::One => {
            if lo.len() != 1 || uo.len() != 1 {
                return Err(reject("case 1 needs l(λ_o) = l(μ_o) = 1"));
            }
            if lmax.map_or(true, |x| x <= uo[0] as i64) {
                return Err(reject("case 1 needs λ_e^max > μ_o"));
            }
            (lo[0] as i64, uo[0] as i64, true, pairs)
        }
        TailCase::Two => {
            if lo.len() != 2 || !uo.is_empty() {
                return Err(reject("case 2 needs l(λ_o) = 2 and l(μ_o) = 0"));
            }
            if umax.map_or(true, |x| x <= lo[0] as i64) {
                return Err(reject("case 2 needs μ_e^max > max(λ_o)"));
            }
            (lo[0] as i64, -(lo[1] as i64), false, pairs)
        }
        TailCase::Three => {
            if !lo.is_empty() || uo.len() != 2 {
                return Err(reject("case 3 needs l(λ_o) = 0 and l(μ_o) = 2"));
            }
            if lmax.map_or(true, |x| x <= uo[0] as i64) {
                return Err(reject("case 3 needs λ_e^max > max(μ_o)"));
            }
            (-(uo[0] as i64), uo[1] as i64, true, pairs)
        }
        TailCase::Four => {
            if !lo.is_empty() || !uo.is_empty() {
                return Err(reject("case 4 needs l(λ_o) = l(μ_o) = 0"));
            }
            if pairs == 0 {
                return Err(reject("case 4 needs a pair of ones in λ"));
            }
            (1, -1, false, pairs - 1)
        }
    };
    // Bare even parts largest first, then the forks; the case's maximum last.
    let mut lam: Vec<TailSpec> = l.even.parts().iter().map(|&w| TailSpec::bare_in(w)).collect();
    let mut mus: Vec<TailSpec> = u.even.parts().iter().map(|&w| TailSpec::bare_out(w)).collect();
    lam.extend(std::iter::repeat(TailSpec::fork_in(2)).take(pairs_used));
    let pool = if defer_lambda { &mut lam } else { &mut mus };
    if !pool.is_empty() {
        let max = pool.remove(0);
        pool.push(max);
    }
    let (mut lam, mut mus) = (lam.into_iter(), mus.into_iter());
    let mut ks = vec![k0];
    let mut tails = Vec::new();
    loop {
        let k = *ks.last().unwrap();
        let next = if k > 0 { mus.next() } else { lam.next() };
        let Some(t) = next else { break };
        let w = t.weight as i64;
        ks.push(if t.incoming { k + w } else { k - w });
        tails.push(t);
    }
    let (left_l, left_m) = (lam.count(), mus.count());
    if left_l + left_m > 0 {
        return Err(reject(format!("the recurrence stops at k = {} with {left_l} λ and {left_m} μ parts unused", ks.last().unwrap())));
    }
    if *ks.last().unwrap() != terminal {
        return Err(reject(format!("the recurrence ends at {} instead of {terminal}", ks.last().unwrap())));
    }
    if tails.is_empty() {
        return Err(reject("no even parts to hang as tails"));
    }
    Ok(TailSequence { case, ks, tails })
}

/// How the case construction is completed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CaseFamily {
    /// Cut a weight-1 string edge and glue in a chain of monotone components:
    /// type `(g, (λ,2,1^{2m}), (μ,2,1^{2m}))`.
    SimpleSplitting,
    /// Glue the weight-1 string end to the standard universally monotone
    /// cover: type `(g, (λ,1^{2m}), (μ,1^{2m}))`.
    ArbitrarySplitting,
}

#[derive(Clone, Debug, Serialize)]
pub struct CaseCover {
    pub cover: TropicalCover,
    pub sequence: TailSequence,
    pub family: CaseFamily,
    /// Fork tail pairs added around the cut edge (simple splittings).
    pub added_pairs: usize,
    /// The glued chain, for simple splittings.
    pub chain: Option<ChainCover>,
}

/// The case construction: the zigzag cover of `tail_sequence`, completed per
/// `family`. For simple splittings, `s` selects the chain variant that is
/// real for the simple splitting with `s` positive points.
pub fn build_case_cover(
    lambda: &Partition,
    mu: &Partition,
    g: u32,
    case: TailCase,
    m: usize,
    family: CaseFamily,
    s: Option<usize>,
) -> Result<CaseCover> {
    if m == 0 {
        return Err(HurwitzError::InvalidInput("m must be at least 1".into()));
    }
    let sequence = tail_sequence(lambda, mu, case)?;
    let (cover, added_pairs, chain) = match family {
        CaseFamily::ArbitrarySplitting => (glue_standard(&sequence, m, g)?, 0, None),
        CaseFamily::SimpleSplitting => {
            let base = string_layout(sequence.ks[0], &sequence.tails, g)?;
            let (c, a, ch) = splice_chain(base, m, g, s)?;
            (c, a, Some(ch))
        }
    };
    let extra = match family {
        CaseFamily::SimpleSplitting => Partition::new(vec![2])?.join(&Partition::ones(2 * m)),
        CaseFamily::ArbitrarySplitting => Partition::ones(2 * m),
    };
    if !validate_cover(&cover, g, &lambda.join(&extra), &mu.join(&extra)) {
        return Err(HurwitzError::Invariant(format!("the glued cover {cover} has the wrong type")));
    }
    Ok(CaseCover { cover, sequence, family, added_pairs, chain })
}

/// Glues the weight-1 string end that closes the base with the standard
/// cover's string. The result is again one string with tails, so it is laid
/// out as such: the standard tails continue the sequence, alternating from
/// the sign of the closing end.
fn glue_standard(sequence: &TailSequence, m: usize, g: u32) -> Result<TropicalCover> {
    let last = *sequence.ks.last().expect("non-empty");
    if last.abs() != 1 {
        return Err(reject(format!("the closing string end has weight {}, not 1", last.abs())));
    }
    let mut tails = sequence.tails.clone();
    for _ in 0..m {
        if last > 0 {
            tails.extend([TailSpec::fork_out(2), TailSpec::fork_in(2)]);
        } else {
            tails.extend([TailSpec::fork_in(2), TailSpec::fork_out(2)]);
        }
    }
    build_string_cover(sequence.ks[0], &tails, g)
}

/// Cuts the lightest inner string edge (the last one on ties), first
/// thinning it to weight 1 with `a` fork out-tails before and `a` fork
/// in-tails after the cut, then glues in a chain of `m + 1 − a` components.
fn splice_chain(base: StringLayout, m: usize, g: u32, s: Option<usize>) -> Result<(TropicalCover, usize, ChainCover)> {
    let mut lay = base.layout;
    let mut candidates = base.inner.clone();
    if candidates.is_empty() {
        candidates = vec![base.start_end, base.last_end];
    }
    let cut = *candidates
        .iter()
        .rev()
        .min_by_key(|&&e| lay.get(e).2)
        .expect("a string has edges");
    let (x, y, w) = lay.get(cut);
    let a = (w as usize - 1) / 2;
    if a > m {
        return Err(reject(format!("m = {m} is too small to thin an edge of weight {w}")));
    }
    let size = m + 1 - a;
    // q_1..q_a thin the edge, p_1..p_a restore it
    let mut inserted = Vec::new();
    let mut prev = x;
    let mut weight = w;
    for _ in 0..a {
        let (q, f) = (lay.vertex(), lay.vertex());
        lay.edge(prev, Node::V(q), weight);
        lay.edge(Node::V(q), Node::V(f), 2);
        lay.edge(Node::V(f), Node::Right, 1);
        lay.edge(Node::V(f), Node::Right, 1);
        inserted.extend([q, f]);
        prev = Node::V(q);
        weight -= 2;
    }
    let before_chain = prev;
    let mut after = Vec::new();
    let mut next = y;
    let mut weight = w;
    for _ in 0..a {
        let (f, p) = (lay.vertex(), lay.vertex());
        lay.edge(Node::Left, Node::V(f), 1);
        lay.edge(Node::Left, Node::V(f), 1);
        lay.edge(Node::V(f), Node::V(p), 2);
        lay.edge(Node::V(p), next, weight);
        after.splice(0..0, [f, p]);
        next = Node::V(p);
        weight -= 2;
    }
    let after_chain = next;
    lay.edges[cut] = None;

    let order: Vec<usize> = (0..size).rev().collect();
    let types = chain_types(&order, true)?;
    let anchor_pos = |lay: &Layout| match (x, y) {
        (Node::V(v), _) => lay.order.iter().position(|&u| u == v).unwrap() + 1,
        (_, Node::V(v)) => lay.order.iter().position(|&u| u == v).unwrap(),
        _ => 0,
    };
    let chain_start = anchor_pos(&lay) + inserted.len();
    let local_s = s.map(|s| s.saturating_sub(chain_start).min(4 * size - 2));
    let chain = build_component_chain(&types, &order, local_s)?;
    let (parts, chain_lay) = chain_layout(&types, &order, chain.exchange)?;
    let (dv, de) = lay.absorb(&chain_lay);
    // the open string ends of the chain: e2 of the closing component, e1 of the first
    let closing_e2 = parts.stubs[size - 1].1 + de;
    let first_e1 = parts.stubs[0].0 + de;
    let (_, to, _) = lay.get(closing_e2);
    lay.set(closing_e2, before_chain, to);
    let (from, _, _) = lay.get(first_e1);
    lay.set(first_e1, from, after_chain);
    let mut ids = inserted;
    ids.extend(chain_lay.order.iter().map(|v| v + dv));
    ids.extend(after);
    lay.insert_after(x, y, &ids);
    Ok((lay.cover(g)?, a, chain))
}

#[derive(Clone, Debug, Serialize)]
pub struct KMixedCover {
    pub cover: TropicalCover,
    /// Number of branch points of the universally monotone part.
    pub k: usize,
    pub universal_part: TailSequence,
    pub zigzag_tails: Vec<TailSpec>,
}

fn multiset_minus(a: &Partition, b: &[u32]) -> Option<Vec<u32>> {
    let mut rest = a.parts().to_vec();
    for x in b {
        let i = rest.iter().position(|y| y == x)?;
        rest.remove(i);
    }
    Some(rest)
}

/// The `k`-mixed construction: a universally monotone cover of type
/// `(0, λ′, μ′)` from the case-1 sequence, its out-end glued to the in-end
/// of a zigzag cover of type `(g, (λ∖λ′, μ′_o, 1^{2m}), (μ∖(μ′∖μ′_o), 1^{2m}))`.
/// The result has type `(g, (λ,1^{2m}), (μ,1^{2m}))` and `k = r(λ′, μ′)`.
pub fn build_kmixed_cover(
    lambda: &Partition,
    mu: &Partition,
    lambda_prime: &Partition,
    mu_prime: &Partition,
    g: u32,
    m: usize,
) -> Result<KMixedCover> {
    if m == 0 {
        return Err(HurwitzError::InvalidInput("m must be at least 1".into()));
    }
    let l = tail_decomposition(lambda);
    let u = tail_decomposition(mu);
    let lp = tail_decomposition(lambda_prime);
    let up = tail_decomposition(mu_prime);
    if l.odd_distinct.len() != 1 || u.odd_distinct.len() != 1 {
        return Err(reject("the k-mixed construction needs l(λ_o) = l(μ_o) = 1"));
    }
    if lp.odd_distinct != l.odd_distinct || up.odd_distinct.len() != 1 {
        return Err(reject("λ′_o must equal λ_o and l(μ′_o) must be 1"));
    }
    if !lp.odd_paired.is_empty() || !up.odd_paired.is_empty() {
        return Err(reject("λ′_{o,o} and μ′_{o,o} must be empty"));
    }
    let lam_rest = multiset_minus(&l.even, lp.even.parts()).ok_or_else(|| reject("λ′_e must lie in λ_e"))?;
    let mu_rest = multiset_minus(&u.even, up.even.parts()).ok_or_else(|| reject("μ′_e must lie in μ_e"))?;
    let top = l.odd_distinct.parts()[0].max(lp.max_even().unwrap_or(0));
    let ue = up.even.parts();
    for i in 0..ue.len() {
        for j in i + 1..ue.len() {
            if ue[i] + ue[j] <= top {
                return Err(reject("μ′_i + μ′_j must exceed max(λ_o, λ′_max)"));
            }
        }
    }
    let universal_part = tail_sequence(lambda_prime, mu_prime, TailCase::One)?;
    let first = string_layout(universal_part.ks[0], &universal_part.tails, 0)?;
    let k = first.layout.vertices;

    // The second string runs from μ′_o; forks carry the odd pairs and the 1^{2m}.
    let mut ins: Vec<TailSpec> = lam_rest.iter().map(|&w| TailSpec::bare_in(w)).collect();
    ins.extend(l.odd_paired.parts().iter().map(|&p| TailSpec::fork_in(2 * p)));
    ins.extend(std::iter::repeat(TailSpec::fork_in(2)).take(m));
    let mut outs: Vec<TailSpec> = mu_rest.iter().map(|&w| TailSpec::bare_out(w)).collect();
    outs.extend(u.odd_paired.parts().iter().map(|&p| TailSpec::fork_out(2 * p)));
    outs.extend(std::iter::repeat(TailSpec::fork_out(2)).take(m));
    let (mut ins, mut outs) = (ins.into_iter().peekable(), outs.into_iter().peekable());
    let mut kk = up.odd_distinct.parts()[0] as i64;
    let mut tails = Vec::new();
    while ins.peek().is_some() || outs.peek().is_some() {
        let t = if (kk > 0 && outs.peek().is_some()) || ins.peek().is_none() { outs.next() } else { ins.next() };
        let t = t.expect("one side is non-empty");
        kk += if t.incoming { t.weight as i64 } else { -(t.weight as i64) };
        tails.push(t);
    }
    if kk != u.odd_distinct.parts()[0] as i64 {
        return Err(reject(format!("the second string ends at {kk}, not μ_o")));
    }
    let second = string_layout(up.odd_distinct.parts()[0] as i64, &tails, g)?;
    let mut lay = first.layout;
    let (dv, de) = lay.absorb(&second.layout);
    lay.glue(first.last_end, second.start_end + de)?;
    lay.order.extend(second.layout.order.iter().map(|v| v + dv));
    let cover = lay.cover(g)?;
    let ones = Partition::ones(2 * m);
    if !validate_cover(&cover, g, &lambda.join(&ones), &mu.join(&ones)) {
        return Err(HurwitzError::Invariant(format!("the k-mixed cover {cover} has the wrong type")));
    }
    Ok(KMixedCover { cover, k, universal_part, zigzag_tails: tails })
}
