use std::collections::BTreeSet;

use crate::error::{invalid, Result};
use crate::factorize::{r_length, SearchLimits};
use crate::permcore::Partition;
use crate::HurwitzError;

use super::cover::{Edge, Endpoint, TropicalCover};

struct Sweep<'a> {
    r: usize,
    genus: u32,
    mu: &'a Partition,
    out: BTreeSet<TropicalCover>,
}

impl Sweep<'_> {
    /// `open` holds the edges crossing the current slab as (origin, weight),
    /// kept sorted so equal choices are tried once.
    fn go(&mut self, v: usize, open: &mut Vec<(Endpoint, u32)>, closed: &mut Vec<Edge>) {
        let left = self.r - v;
        let target = self.mu.len();
        if open.len().abs_diff(target) > left || (open.len() + left + target) % 2 == 1 {
            return;
        }
        if v == self.r {
            let mut weights: Vec<u32> = open.iter().map(|o| o.1).collect();
            weights.sort_unstable_by(|a, b| b.cmp(a));
            if weights != self.mu.parts() {
                return;
            }
            let mut edges = closed.clone();
            edges.extend(open.iter().map(|&(from, w)| Edge::new(from, Endpoint::Right, w)));
            if let Ok(c) = TropicalCover::new(self.r, self.genus, edges) {
                if c.is_connected() && c.cycle_rank() == self.genus as i64 {
                    self.out.insert(c);
                }
            }
            return;
        }
        let here = Endpoint::Vertex(v);
        // cuts
        for i in 0..open.len() {
            if i > 0 && open[i] == open[i - 1] {
                continue;
            }
            let (from, w) = open[i];
            for a in 1..=w / 2 {
                let mut next = open.clone();
                next.remove(i);
                next.push((here, a));
                next.push((here, w - a));
                next.sort();
                closed.push(Edge::new(from, here, w));
                self.go(v + 1, &mut next, closed);
                closed.pop();
            }
        }
        // joins
        for i in 0..open.len() {
            if i > 0 && open[i] == open[i - 1] {
                continue;
            }
            for j in i + 1..open.len() {
                if j > i + 1 && open[j] == open[j - 1] {
                    continue;
                }
                let (fi, wi) = open[i];
                let (fj, wj) = open[j];
                let mut next = open.clone();
                next.remove(j);
                next.remove(i);
                next.push((here, wi + wj));
                next.sort();
                closed.push(Edge::new(fi, here, wi));
                closed.push(Edge::new(fj, here, wj));
                self.go(v + 1, &mut next, closed);
                closed.pop();
                closed.pop();
            }
        }
    }
}

/// All tropical covers of type `(g, λ, μ)`, one per isomorphism class, in
/// canonical order.
pub fn enumerate_covers(g: u32, lambda: &Partition, mu: &Partition) -> Result<Vec<TropicalCover>> {
    enumerate_covers_with(g, lambda, mu, &SearchLimits::default())
}

pub fn enumerate_covers_with(g: u32, lambda: &Partition, mu: &Partition, limits: &SearchLimits) -> Result<Vec<TropicalCover>> {
    if lambda.weight() != mu.weight() {
        return Err(HurwitzError::DegreeMismatch(lambda.weight() as usize, mu.weight() as usize));
    }
    if lambda.is_empty() {
        return invalid("partitions must be non-empty");
    }
    let r = r_length(g, lambda, mu)?;
    if lambda.weight() as usize > limits.max_degree || r > limits.max_r {
        return Err(HurwitzError::ResourceLimit(format!(
            "cover enumeration for d = {}, r = {r} exceeds the limits",
            lambda.weight()
        )));
    }
    let mut sweep = Sweep { r, genus: g, mu, out: BTreeSet::new() };
    let mut open: Vec<(Endpoint, u32)> = lambda.parts().iter().map(|&w| (Endpoint::Left, w)).collect();
    open.sort();
    sweep.go(0, &mut open, &mut Vec::new());
    Ok(sweep.out.into_iter().collect())
}
