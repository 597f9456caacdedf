use std::fmt;
use std::str::FromStr;

use crate::error::{invalid, HurwitzError, Result};

use super::Partition;

/// Largest supported degree. Permutations are packed into arrays of this size.
pub const MAX_DEGREE: usize = 16;

/// A bijection of `{0, .., d-1}` stored in one-line form.
///
/// Points are 0-based internally; the text form uses 1-based names.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    degree: u8,
    map: [u8; MAX_DEGREE],
}

impl Permutation {
    pub fn identity(degree: usize) -> Self {
        assert!(degree <= MAX_DEGREE, "degree {degree} exceeds {MAX_DEGREE}");
        let mut map = [0u8; MAX_DEGREE];
        for (i, m) in map.iter_mut().enumerate().take(degree) {
            *m = i as u8;
        }
        Permutation { degree: degree as u8, map }
    }

    /// Builds a permutation from 0-based images.
    pub fn from_images(images: &[usize]) -> Result<Self> {
        let d = images.len();
        if d == 0 || d > MAX_DEGREE {
            return invalid(format!("degree {d} outside 1..={MAX_DEGREE}"));
        }
        let mut seen = [false; MAX_DEGREE];
        let mut map = [0u8; MAX_DEGREE];
        for (i, &x) in images.iter().enumerate() {
            if x >= d || seen[x] {
                return invalid(format!("images {images:?} do not form a bijection"));
            }
            seen[x] = true;
            map[i] = x as u8;
        }
        Ok(Permutation { degree: d as u8, map })
    }

    /// The transposition swapping the 0-based points `a` and `b`.
    pub fn transposition(degree: usize, a: usize, b: usize) -> Result<Self> {
        if a == b || a >= degree || b >= degree {
            return invalid(format!("bad transposition ({a} {b}) in degree {degree}"));
        }
        let mut p = Self::identity(degree);
        p.map.swap(a, b);
        Ok(p)
    }

    /// Builds a permutation from disjoint cycles of 0-based points.
    pub fn from_cycles(degree: usize, cycles: &[Vec<usize>]) -> Result<Self> {
        if degree == 0 || degree > MAX_DEGREE {
            return invalid(format!("degree {degree} outside 1..={MAX_DEGREE}"));
        }
        let mut p = Self::identity(degree);
        let mut used = [false; MAX_DEGREE];
        for c in cycles {
            for (i, &x) in c.iter().enumerate() {
                if x >= degree || used[x] {
                    return invalid(format!("cycles {cycles:?} are not disjoint in degree {degree}"));
                }
                used[x] = true;
                p.map[x] = c[(i + 1) % c.len()] as u8;
            }
        }
        Ok(p)
    }

    /// Parses cycle notation such as `(1)(2 3 4)` in the given degree.
    pub fn parse_with_degree(s: &str, degree: usize) -> Result<Self> {
        let cycles = parse_cycles(s)?;
        Self::from_cycles(degree, &cycles)
    }

    #[inline]
    pub fn degree(&self) -> usize {
        self.degree as usize
    }

    #[inline]
    pub fn apply(&self, x: usize) -> usize {
        self.map[x] as usize
    }

    pub fn images(&self) -> Vec<usize> {
        self.map[..self.degree()].iter().map(|&x| x as usize).collect()
    }

    /// `x ↦ self(q(x))`.
    pub fn compose(&self, q: &Permutation) -> Result<Permutation> {
        if self.degree != q.degree {
            return Err(HurwitzError::DegreeMismatch(self.degree(), q.degree()));
        }
        Ok(self.after(q))
    }

    /// Unchecked composition `x ↦ self(q(x))`; degrees must agree.
    #[inline]
    pub fn after(&self, q: &Permutation) -> Permutation {
        debug_assert_eq!(self.degree, q.degree);
        let mut map = [0u8; MAX_DEGREE];
        for (x, m) in map.iter_mut().enumerate().take(self.degree()) {
            *m = self.map[q.map[x] as usize];
        }
        Permutation { degree: self.degree, map }
    }

    /// Left multiplication by the transposition `(a b)`, i.e. `(a b)∘self`.
    #[inline]
    pub fn swap_values(&self, a: usize, b: usize) -> Permutation {
        let mut p = *self;
        for x in 0..self.degree() {
            let y = p.map[x] as usize;
            if y == a {
                p.map[x] = b as u8;
            } else if y == b {
                p.map[x] = a as u8;
            }
        }
        p
    }

    pub fn inverse(&self) -> Permutation {
        let mut map = [0u8; MAX_DEGREE];
        for x in 0..self.degree() {
            map[self.map[x] as usize] = x as u8;
        }
        Permutation { degree: self.degree, map }
    }

    /// Conjugation `h∘self∘h⁻¹`.
    pub fn conjugate_by(&self, h: &Permutation) -> Permutation {
        let mut map = [0u8; MAX_DEGREE];
        for x in 0..self.degree() {
            map[h.apply(x)] = h.map[self.map[x] as usize];
        }
        Permutation { degree: self.degree, map }
    }

    pub fn is_identity(&self) -> bool {
        (0..self.degree()).all(|x| self.map[x] as usize == x)
    }

    /// True iff `self∘self = id`.
    pub fn is_involution(&self) -> bool {
        (0..self.degree()).all(|x| self.map[self.map[x] as usize] as usize == x)
    }

    /// True iff `γ∘self∘γ = self⁻¹`, equivalently `(γ∘self)² = id`.
    pub fn is_inverted_by(&self, gamma: &Permutation) -> bool {
        (0..self.degree()).all(|x| {
            let y = gamma.map[self.map[x] as usize] as usize;
            gamma.map[self.map[y] as usize] as usize == x
        })
    }

    /// Disjoint cycles, each starting at its minimum, sorted by minimum.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let d = self.degree();
        let mut seen = [false; MAX_DEGREE];
        let mut out = Vec::new();
        for start in 0..d {
            if seen[start] {
                continue;
            }
            let mut c = vec![start];
            seen[start] = true;
            let mut x = self.apply(start);
            while x != start {
                seen[x] = true;
                c.push(x);
                x = self.apply(x);
            }
            out.push(c);
        }
        out
    }

    pub fn cycle_count(&self) -> usize {
        let mut seen = [false; MAX_DEGREE];
        let mut n = 0;
        for start in 0..self.degree() {
            if seen[start] {
                continue;
            }
            n += 1;
            let mut x = start;
            while !seen[x] {
                seen[x] = true;
                x = self.apply(x);
            }
        }
        n
    }

    pub fn cycle_type(&self) -> Partition {
        let parts = self.cycles().iter().map(|c| c.len() as u32).collect();
        Partition::new(parts).expect("cycle lengths are positive")
    }

    /// Length of the cycle through `x`.
    pub fn cycle_len_of(&self, x: usize) -> usize {
        let mut n = 1;
        let mut y = self.apply(x);
        while y != x {
            n += 1;
            y = self.apply(y);
        }
        n
    }
}

impl fmt::Display for Permutation {
    /// Canonical cycle notation with 1-based points, fixed points included.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in self.cycles() {
            write!(f, "(")?;
            for (i, x) in c.iter().enumerate() {
                if i > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{}", x + 1)?;
            }
            write!(f, ")")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl FromStr for Permutation {
    type Err = HurwitzError;

    /// Parses cycle notation; the degree is the largest point mentioned.
    fn from_str(s: &str) -> Result<Self> {
        let cycles = parse_cycles(s)?;
        let degree = cycles.iter().flatten().max().map_or(0, |m| m + 1);
        Self::from_cycles(degree, &cycles)
    }
}

/// Parses `(1 2)(3)` or `(12)(3)` into 0-based cycles.
///
/// Inside a cycle, points are separated by spaces or commas; a cycle written
/// without separators is read digit by digit (only sensible for d ≤ 9).
pub fn parse_cycles(s: &str) -> Result<Vec<Vec<usize>>> {
    let s = s.trim();
    if s.is_empty() || s == "id" || s == "()" {
        return Ok(Vec::new());
    }
    let mut out = Vec::new();
    let mut rest = s;
    while !rest.is_empty() {
        let r = rest.trim_start();
        let Some(body_start) = r.strip_prefix('(') else {
            return invalid(format!("expected '(' in cycle notation {s:?}"));
        };
        let Some(end) = body_start.find(')') else {
            return invalid(format!("unclosed cycle in {s:?}"));
        };
        let body = body_start[..end].trim();
        rest = body_start[end + 1..].trim_start();
        let tokens: Vec<&str> = if body.contains([' ', ',']) {
            body.split([' ', ',']).filter(|t| !t.is_empty()).collect()
        } else {
            body.char_indices().map(|(i, c)| &body[i..i + c.len_utf8()]).collect()
        };
        let mut cycle = Vec::with_capacity(tokens.len());
        for t in tokens {
            let v: usize = t
                .parse()
                .map_err(|_| HurwitzError::InvalidInput(format!("bad point {t:?} in {s:?}")))?;
            if v == 0 {
                return invalid("points are named 1..d");
            }
            cycle.push(v - 1);
        }
        if cycle.is_empty() {
            return invalid(format!("empty cycle in {s:?}"));
        }
        out.push(cycle);
    }
    Ok(out)
}

/// All permutations of the given cycle type, in increasing one-line order.
pub fn permutations_of_type(lambda: &Partition) -> Vec<Permutation> {
    let d = lambda.weight() as usize;
    assert!(d <= MAX_DEGREE);
    let mut remaining: Vec<u32> = lambda.parts().to_vec();
    let mut out = Vec::new();
    let mut used = vec![false; d];
    let mut cycles: Vec<Vec<usize>> = Vec::new();
    fill_cycles(d, &mut remaining, &mut used, &mut cycles, &mut out);
    out.sort();
    out
}

fn fill_cycles(
    d: usize,
    remaining: &mut Vec<u32>,
    used: &mut [bool],
    cycles: &mut Vec<Vec<usize>>,
    out: &mut Vec<Permutation>,
) {
    let Some(start) = used.iter().position(|u| !u) else {
        out.push(Permutation::from_cycles(d, cycles).expect("disjoint by construction"));
        return;
    };
    let mut tried: Vec<u32> = Vec::new();
    for idx in 0..remaining.len() {
        let len = remaining[idx];
        if tried.contains(&len) {
            continue;
        }
        tried.push(len);
        remaining.swap_remove(idx);
        used[start] = true;
        let mut cycle = vec![start];
        extend_cycle(d, len as usize, &mut cycle, remaining, used, cycles, out);
        used[start] = false;
        remaining.push(len);
        let last = remaining.len() - 1;
        remaining.swap(idx, last);
    }
}

fn extend_cycle(
    d: usize,
    len: usize,
    cycle: &mut Vec<usize>,
    remaining: &mut Vec<u32>,
    used: &mut [bool],
    cycles: &mut Vec<Vec<usize>>,
    out: &mut Vec<Permutation>,
) {
    if cycle.len() == len {
        cycles.push(cycle.clone());
        fill_cycles(d, remaining, used, cycles, out);
        cycles.pop();
        return;
    }
    for x in cycle[0] + 1..d {
        if used[x] {
            continue;
        }
        used[x] = true;
        cycle.push(x);
        extend_cycle(d, len, cycle, remaining, used, cycles, out);
        cycle.pop();
        used[x] = false;
    }
}

/// All involutions of degree `d` (including the identity), sorted.
pub fn involutions(d: usize) -> Vec<Permutation> {
    fn rec(x: usize, map: &mut Vec<usize>, out: &mut Vec<Permutation>) {
        let d = map.len();
        if x == d {
            out.push(Permutation::from_images(map).expect("involution"));
            return;
        }
        if map[x] != usize::MAX {
            rec(x + 1, map, out);
            return;
        }
        map[x] = x;
        rec(x + 1, map, out);
        for y in x + 1..d {
            if map[y] == usize::MAX {
                map[x] = y;
                map[y] = x;
                rec(x + 1, map, out);
                map[y] = usize::MAX;
            }
        }
        map[x] = usize::MAX;
    }
    let mut out = Vec::new();
    rec(0, &mut vec![usize::MAX; d], &mut out);
    out.sort();
    out
}

/// True iff the group generated by `gens` acts transitively on `{0..d-1}`.
pub fn is_transitive(gens: &[Permutation], d: usize) -> bool {
    if d == 0 {
        return true;
    }
    let mut seen = vec![false; d];
    let mut stack = vec![0usize];
    seen[0] = true;
    let mut count = 1;
    while let Some(x) = stack.pop() {
        for g in gens {
            let y = g.apply(x);
            if !seen[y] {
                seen[y] = true;
                count += 1;
                stack.push(y);
            }
        }
    }
    count == d
}
