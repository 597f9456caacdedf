use std::fmt;

use serde::{de, Deserialize, Deserializer, Serialize, Serializer};
use sha2::{Digest, Sha256};

use crate::error::{invalid, Result};
use crate::permcore::Partition;

/// Where an edge starts or ends. Inner vertices are 0-based positions in the
/// left-to-right order; text and JSON forms are 1-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Endpoint {
    Left,
    Vertex(usize),
    Right,
}

impl Endpoint {
    pub fn vertex(self) -> Option<usize> {
        match self {
            Endpoint::Vertex(v) => Some(v),
            _ => None,
        }
    }
}

impl fmt::Display for Endpoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Endpoint::Left => f.write_str("L"),
            Endpoint::Right => f.write_str("R"),
            Endpoint::Vertex(v) => write!(f, "{}", v + 1),
        }
    }
}

impl Serialize for Endpoint {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Endpoint::Vertex(v) => s.serialize_u64(*v as u64 + 1),
            other => s.serialize_str(&other.to_string()),
        }
    }
}

impl<'de> Deserialize<'de> for Endpoint {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Index(u64),
            Name(String),
        }
        match Raw::deserialize(d)? {
            Raw::Index(0) => Err(de::Error::custom("inner vertices are numbered from 1")),
            Raw::Index(i) => Ok(Endpoint::Vertex(i as usize - 1)),
            Raw::Name(s) => match s.as_str() {
                "L" => Ok(Endpoint::Left),
                "R" => Ok(Endpoint::Right),
                other => other
                    .parse::<usize>()
                    .ok()
                    .filter(|&i| i > 0)
                    .map(|i| Endpoint::Vertex(i - 1))
                    .ok_or_else(|| de::Error::custom(format!("bad endpoint {other:?}"))),
            },
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Edge {
    pub from: Endpoint,
    pub to: Endpoint,
    #[serde(rename = "w")]
    pub weight: u32,
}

impl Edge {
    pub fn new(from: Endpoint, to: Endpoint, weight: u32) -> Self {
        Edge { from, to, weight }
    }

    pub fn is_end(&self) -> bool {
        self.from == Endpoint::Left || self.to == Endpoint::Right
    }

    pub fn is_inner(&self) -> bool {
        !self.is_end()
    }

    pub fn is_even(&self) -> bool {
        self.weight % 2 == 0
    }

    /// Inner vertices the edge touches.
    pub fn vertices(&self) -> impl Iterator<Item = usize> {
        [self.from.vertex(), self.to.vertex()].into_iter().flatten()
    }

    /// Does the edge cross the vertical line just right of vertex `slab - 1`
    /// (`slab = 0` is the far left)?
    pub fn crosses(&self, slab: usize) -> bool {
        let start = match self.from {
            Endpoint::Vertex(v) => v + 1,
            _ => 0,
        };
        let end = match self.to {
            Endpoint::Vertex(v) => v,
            _ => usize::MAX,
        };
        start <= slab && slab <= end
    }
}

/// A combinatorial tropical cover (monodromy graph): `r` inner vertices in a
/// fixed left-to-right order and weighted edges between them and the two
/// boundaries. Edges are kept sorted, which makes the edge list itself the
/// canonical form: with the vertex order fixed, the only isomorphisms
/// permute edges with identical endpoints and weight.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TropicalCover {
    r: usize,
    genus: u32,
    edges: Vec<Edge>,
}

impl TropicalCover {
    /// Builds a cover, checking that the edge list is well formed (edges run
    /// left to right between existing vertices and every vertex is 3-valent).
    /// Balancing and the type are checked by [`validate_cover`].
    pub fn new(r: usize, genus: u32, mut edges: Vec<Edge>) -> Result<Self> {
        let mut valence = vec![0usize; r];
        for e in &edges {
            let ok = match (e.from, e.to) {
                (Endpoint::Left, Endpoint::Vertex(_)) | (Endpoint::Vertex(_), Endpoint::Right) => true,
                (Endpoint::Vertex(a), Endpoint::Vertex(b)) => a < b,
                _ => false,
            };
            if !ok {
                return invalid(format!("edge {} -> {} does not run left to right through the inner vertices", e.from, e.to));
            }
            if e.weight == 0 {
                return invalid("edge weights must be positive");
            }
            for v in e.vertices() {
                if v >= r {
                    return invalid(format!("edge refers to vertex {} but there are only {r}", v + 1));
                }
                valence[v] += 1;
            }
        }
        if let Some(v) = valence.iter().position(|&k| k != 3) {
            return invalid(format!("inner vertex {} has valence {}", v + 1, valence[v]));
        }
        edges.sort();
        Ok(TropicalCover { r, genus, edges })
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn genus(&self) -> u32 {
        self.genus
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn degree(&self) -> u32 {
        self.slab_degree(0)
    }

    /// Total weight crossing the slab left of vertex `slab` (`slab = r` is the far right).
    pub fn slab_degree(&self, slab: usize) -> u32 {
        self.edges.iter().filter(|e| e.crosses(slab)).map(|e| e.weight).sum()
    }

    pub fn left_ends(&self) -> Partition {
        self.end_partition(|e| e.from == Endpoint::Left)
    }

    pub fn right_ends(&self) -> Partition {
        self.end_partition(|e| e.to == Endpoint::Right)
    }

    fn end_partition(&self, pick: impl Fn(&Edge) -> bool) -> Partition {
        Partition::new(self.edges.iter().filter(|e| pick(e)).map(|e| e.weight).collect()).expect("positive weights")
    }

    /// Indices of the edges entering vertex `v` from the left.
    pub fn incoming(&self, v: usize) -> Vec<usize> {
        (0..self.edges.len()).filter(|&i| self.edges[i].to == Endpoint::Vertex(v)).collect()
    }

    /// Indices of the edges leaving vertex `v` to the right.
    pub fn outgoing(&self, v: usize) -> Vec<usize> {
        (0..self.edges.len()).filter(|&i| self.edges[i].from == Endpoint::Vertex(v)).collect()
    }

    /// First Betti number of the graph with one leaf per end.
    pub fn cycle_rank(&self) -> i64 {
        let ends = self.edges.iter().filter(|e| e.is_end()).count();
        self.edges.len() as i64 - (self.r + ends) as i64 + 1
    }

    pub fn is_connected(&self) -> bool {
        if self.r == 0 {
            return self.edges.len() == 1;
        }
        let mut parent: Vec<usize> = (0..self.r).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            let mut x = x;
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        for e in &self.edges {
            if let (Endpoint::Vertex(a), Endpoint::Vertex(b)) = (e.from, e.to) {
                let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
                parent[ra] = rb;
            }
        }
        let root = find(&mut parent, 0);
        (0..self.r).all(|v| find(&mut parent, v) == root)
    }

    /// Stable hashable encoding of the isomorphism class.
    pub fn canonical_form(&self) -> CanonicalForm {
        CanonicalForm(self.edges.iter().map(|e| (e.from, e.to, e.weight)).collect())
    }

    /// Short content hash of the canonical form, used as a cover id in reports.
    pub fn cover_id(&self) -> String {
        let mut h = Sha256::new();
        h.update(self.to_string().as_bytes());
        hex::encode(&h.finalize()[..6])
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(CoverJson { r: self.r, genus: self.genus, edges: self.edges.clone() })
            .expect("serializable")
    }

    /// Graphviz rendering; `colours` gives one DOT colour per edge.
    pub fn to_dot(&self, colours: Option<&[&str]>) -> String {
        let mut out = String::from("graph cover {\n  rankdir=LR;\n");
        for v in 0..self.r {
            out.push_str(&format!("  v{} [label=\"{}\", shape=point];\n", v + 1, v + 1));
        }
        for (i, e) in self.edges.iter().enumerate() {
            let node = |p: Endpoint, side: &str| match p {
                Endpoint::Vertex(v) => format!("v{}", v + 1),
                _ => format!("{side}{i}"),
            };
            if e.from == Endpoint::Left {
                out.push_str(&format!("  L{i} [label=\"\", shape=none];\n"));
            }
            if e.to == Endpoint::Right {
                out.push_str(&format!("  R{i} [label=\"\", shape=none];\n"));
            }
            let attrs = match colours.map(|c| c[i]).unwrap_or("black") {
                "dotted" => "style=dotted".to_string(),
                colour => format!("color={colour}"),
            };
            out.push_str(&format!(
                "  {} -- {} [label=\"{}\", {attrs}];\n",
                node(e.from, "L"),
                node(e.to, "R"),
                e.weight
            ));
        }
        out.push_str("}\n");
        out
    }
}

impl fmt::Display for TropicalCover {
    /// Compact text form, e.g. `L-1:3 L-2:1 1-2:1 1-R:2 2-R:2`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.edges.iter().map(|e| format!("{}-{}:{}", e.from, e.to, e.weight)).collect();
        write!(f, "{}", parts.join(" "))
    }
}

impl fmt::Debug for TropicalCover {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TropicalCover(g={}, r={}: {self})", self.genus, self.r)
    }
}

#[derive(Serialize, Deserialize)]
struct CoverJson {
    r: usize,
    genus: u32,
    edges: Vec<Edge>,
}

impl Serialize for TropicalCover {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        CoverJson { r: self.r, genus: self.genus, edges: self.edges.clone() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for TropicalCover {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = CoverJson::deserialize(d)?;
        TropicalCover::new(raw.r, raw.genus, raw.edges).map_err(de::Error::custom)
    }
}

/// Sorted edge tuples; equal iff the covers are isomorphic.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonicalForm(pub Vec<(Endpoint, Endpoint, u32)>);

pub fn canonicalize(c: &TropicalCover) -> CanonicalForm {
    c.canonical_form()
}

/// Checks balancing, constant degree, end weights, connectivity and genus
/// against the type `(g, λ, μ)`.
pub fn validate_cover(c: &TropicalCover, g: u32, lambda: &Partition, mu: &Partition) -> bool {
    cover_defects(c, g, lambda, mu).is_empty()
}

/// Human-readable list of everything [`validate_cover`] objects to.
pub fn cover_defects(c: &TropicalCover, g: u32, lambda: &Partition, mu: &Partition) -> Vec<String> {
    let mut out = Vec::new();
    for v in 0..c.r {
        let left: u32 = c.incoming(v).iter().map(|&i| c.edges[i].weight).sum();
        let right: u32 = c.outgoing(v).iter().map(|&i| c.edges[i].weight).sum();
        if left != right {
            out.push(format!("vertex {} is not balanced ({left} in, {right} out)", v + 1));
        }
        let sides = (c.incoming(v).len(), c.outgoing(v).len());
        if sides != (1, 2) && sides != (2, 1) {
            out.push(format!("vertex {} has {} incoming and {} outgoing edges", v + 1, sides.0, sides.1));
        }
    }
    let d = c.degree();
    if let Some(s) = (0..=c.r).find(|&s| c.slab_degree(s) != d) {
        out.push(format!("degree {} left of the cover but {} at slab {s}", d, c.slab_degree(s)));
    }
    if &c.left_ends() != lambda {
        out.push(format!("left ends {} instead of {lambda}", c.left_ends()));
    }
    if &c.right_ends() != mu {
        out.push(format!("right ends {} instead of {mu}", c.right_ends()));
    }
    if !c.is_connected() {
        out.push("graph is disconnected".into());
    }
    if c.cycle_rank() != c.genus as i64 {
        out.push(format!("cycle rank {} does not match genus {}", c.cycle_rank(), c.genus));
    }
    if c.genus != g {
        out.push(format!("genus {} instead of {g}", c.genus));
    }
    let expected_r = lambda.len() as i64 + mu.len() as i64 + 2 * g as i64 - 2;
    if c.r as i64 != expected_r {
        out.push(format!("{} inner vertices instead of {expected_r}", c.r));
    }
    out
}
