//! Global minimum cuts and exhaustive small-cut enumeration.
//!
//! Vertex subsets are bitmasks. Every nontrivial cut has exactly one
//! canonical side: the one that does not contain vertex 0. Enumeration walks
//! the canonical sides in increasing mask order, which is also the order used
//! whenever a "first" cut is reported.

use std::fmt;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::num::Q;

/// Largest vertex count accepted anywhere (masks are 64-bit).
pub const MAX_VERTICES: usize = 64;

/// Default cap on exhaustive enumeration (about 5 * 10^5 cuts).
pub const DEFAULT_EXHAUSTIVE_LIMIT: usize = 20;

/// Exhaustive limit, overridable through `NETDESIGN_MAX_N`.
pub fn exhaustive_limit() -> usize {
    std::env::var("NETDESIGN_MAX_N")
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .map(|v| v.min(MAX_VERTICES - 1))
        .unwrap_or(DEFAULT_EXHAUSTIVE_LIMIT)
}

pub fn check_enumerable(n: usize) -> Result<()> {
    let limit = exhaustive_limit();
    if n > limit {
        Err(Error::InstanceTooLarge { n, limit })
    } else {
        Ok(())
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct VertexSet(pub u64);

impl VertexSet {
    pub fn full(n: usize) -> Self {
        if n >= 64 {
            VertexSet(u64::MAX)
        } else {
            VertexSet((1u64 << n) - 1)
        }
    }

    pub fn from_vertices(vertices: impl IntoIterator<Item = usize>) -> Self {
        VertexSet(vertices.into_iter().fold(0, |m, v| m | (1u64 << v)))
    }

    #[inline]
    pub fn contains(self, v: usize) -> bool {
        self.0 >> v & 1 == 1
    }

    /// True iff the edge `uv` has exactly one endpoint in the set.
    #[inline]
    pub fn separates(self, u: usize, v: usize) -> bool {
        (self.0 >> u ^ self.0 >> v) & 1 == 1
    }

    pub fn complement(self, n: usize) -> Self {
        VertexSet(!self.0 & Self::full(n).0)
    }

    /// The side of the bipartition that excludes vertex 0.
    pub fn canonical(self, n: usize) -> Self {
        if self.contains(0) {
            self.complement(n)
        } else {
            self
        }
    }

    pub fn is_subset_of(self, other: VertexSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn vertices(self) -> impl Iterator<Item = usize> {
        (0..64).filter(move |&v| self.contains(v))
    }
}

impl fmt::Debug for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.vertices()).finish()
    }
}

impl fmt::Display for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, v) in self.vertices().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "}}")
    }
}

/// A nontrivial cut with its canonical side and cached weight.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cut {
    pub side: VertexSet,
    pub weight: Q,
}

/// Canonical sides of all nontrivial cuts of an `n`-vertex graph, in order.
pub fn canonical_sides(n: usize) -> impl Iterator<Item = VertexSet> {
    let count: u64 = if n < 2 { 0 } else { (1u64 << (n - 1)) - 1 };
    (1..=count).map(|m| VertexSet(m << 1))
}

#[derive(Debug, Clone, Default)]
pub struct WeightedGraph {
    pub n: usize,
    pub edges: Vec<(usize, usize, Q)>,
}

impl WeightedGraph {
    pub fn new(n: usize) -> Self {
        WeightedGraph {
            n,
            edges: Vec::new(),
        }
    }

    pub fn add_edge(&mut self, u: usize, v: usize, w: Q) {
        debug_assert!(u < self.n && v < self.n);
        self.edges.push((u, v, w));
    }

    pub fn cut_weight(&self, side: VertexSet) -> Q {
        let mut total = Q::zero();
        for (u, v, w) in &self.edges {
            if side.separates(*u, *v) {
                total += w;
            }
        }
        total
    }
}

/// Stoer-Wagner over a dense rational adjacency matrix.
///
/// Vertices are scanned in index order and a phase cut only replaces the
/// incumbent when strictly lighter, so the result is deterministic.
pub fn min_cut(g: &WeightedGraph) -> Result<(Q, Cut)> {
    let n = g.n;
    if n < 2 {
        return Err(Error::InvalidInput("min cut needs at least two vertices".into()));
    }
    if n > MAX_VERTICES {
        return Err(Error::InvalidInput(format!("{n} vertices exceeds {MAX_VERTICES}")));
    }
    let mut w = vec![vec![Q::zero(); n]; n];
    for (u, v, c) in &g.edges {
        if u != v {
            w[*u][*v] += c;
            w[*v][*u] += c;
        }
    }
    let mut groups: Vec<u64> = (0..n).map(|v| 1u64 << v).collect();
    let mut active: Vec<usize> = (0..n).collect();
    let mut best: Option<(Q, u64)> = None;

    while active.len() > 1 {
        let mut added = vec![false; n];
        let mut key: Vec<Q> = vec![Q::zero(); n];
        let mut prev = active[0];
        let mut last = active[0];
        added[last] = true;
        for &v in &active {
            key[v] = w[last][v].clone();
        }
        let mut phase_cut = Q::zero();
        for _ in 1..active.len() {
            let mut next: Option<usize> = None;
            for &v in &active {
                if added[v] {
                    continue;
                }
                match next {
                    Some(b) if key[v] <= key[b] => {}
                    _ => next = Some(v),
                }
            }
            let next = next.expect("active vertex remains");
            added[next] = true;
            prev = last;
            last = next;
            phase_cut = key[next].clone();
            for &v in &active {
                if !added[v] {
                    let inc = w[next][v].clone();
                    key[v] += inc;
                }
            }
        }
        let improves = match &best {
            None => true,
            Some((value, _)) => phase_cut < *value,
        };
        if improves {
            best = Some((phase_cut, groups[last]));
        }
        for v in 0..n {
            let inc = w[last][v].clone();
            w[prev][v] += &inc;
            w[v][prev] += inc;
        }
        w[prev][prev] = Q::zero();
        groups[prev] |= groups[last];
        active.retain(|&v| v != last);
    }

    let (value, side) = best.expect("n >= 2 yields at least one phase");
    let side = VertexSet(side).canonical(n);
    Ok((value.clone(), Cut { side, weight: value }))
}

/// All nontrivial cuts whose weight satisfies `keep`, in canonical order.
pub fn enumerate_cuts_where(g: &WeightedGraph, keep: impl Fn(&Q) -> bool) -> Result<Vec<Cut>> {
    check_enumerable(g.n)?;
    Ok(canonical_sides(g.n)
        .filter_map(|side| {
            let weight = g.cut_weight(side);
            keep(&weight).then_some(Cut { side, weight })
        })
        .collect())
}

/// Cuts of weight strictly below `bound`.
pub fn enumerate_cuts_below(g: &WeightedGraph, bound: &Q) -> Result<Vec<Cut>> {
    enumerate_cuts_where(g, |w| w < bound)
}

/// Cuts of weight at most `bound`.
pub fn enumerate_cuts_at_most(g: &WeightedGraph, bound: &Q) -> Result<Vec<Cut>> {
    enumerate_cuts_where(g, |w| w <= bound)
}
