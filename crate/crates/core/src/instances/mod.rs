//! Problem instances, solution edge sets and feasibility checks.

mod format;
mod generate;

pub use format::{parse, parse_solution, serialize, serialize_solution, Instance, Solution};
pub use generate::{gen_capk, gen_cover, gen_fgc};

use num_traits::{One, Signed, Zero};

use crate::cut_oracle::{self, canonical_sides, VertexSet, WeightedGraph, MAX_VERTICES};
use crate::error::{Error, Result};
use crate::num::{int, Q};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EdgeKind {
    Safe,
    Unsafe,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FgcEdge {
    pub u: usize,
    pub v: usize,
    pub cost: Q,
    pub kind: EdgeKind,
}

/// Flexible graph connectivity: stay `p`-edge-connected after any `q`
/// unsafe edges fail.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FgcInstance {
    pub n: usize,
    pub edges: Vec<FgcEdge>,
    pub p: u32,
    pub q: u32,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CapEdge {
    pub u: usize,
    pub v: usize,
    pub cost: Q,
    pub capacity: u64,
}

/// Capacitated k-edge-connected spanning subgraph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CapEcssInstance {
    pub n: usize,
    pub edges: Vec<CapEdge>,
    pub k: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BaseEdge {
    pub u: usize,
    pub v: usize,
    pub capacity: Q,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Link {
    pub u: usize,
    pub v: usize,
    pub cost: Q,
}

/// Cover every cut of base capacity below `lambda` with `r` links.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinkCoverInstance {
    pub n: usize,
    pub base_edges: Vec<BaseEdge>,
    pub links: Vec<Link>,
    pub lambda: Q,
    pub r: u32,
}

fn check_endpoints(n: usize, u: usize, v: usize, what: &str, idx: usize) -> Result<()> {
    if u >= n || v >= n {
        return Err(Error::InvalidInput(format!(
            "{what} {idx}: endpoint out of range for {n} vertices"
        )));
    }
    if u == v {
        return Err(Error::InvalidInput(format!("{what} {idx}: self-loop at {u}")));
    }
    Ok(())
}

fn check_vertex_count(n: usize) -> Result<()> {
    if !(2..=MAX_VERTICES).contains(&n) {
        return Err(Error::InvalidInput(format!(
            "vertex count {n} outside 2..={MAX_VERTICES}"
        )));
    }
    Ok(())
}

fn check_cost(cost: &Q, what: &str, idx: usize) -> Result<()> {
    if cost.is_negative() {
        return Err(Error::InvalidInput(format!("{what} {idx}: negative cost")));
    }
    Ok(())
}

impl FgcInstance {
    pub fn new(n: usize, edges: Vec<FgcEdge>, p: u32, q: u32) -> Result<Self> {
        check_vertex_count(n)?;
        if p < 1 || q < 1 {
            return Err(Error::InvalidInput(format!("need p >= 1 and q >= 1, got ({p},{q})")));
        }
        for (i, e) in edges.iter().enumerate() {
            check_endpoints(n, e.u, e.v, "edge", i)?;
            check_cost(&e.cost, "edge", i)?;
        }
        Ok(FgcInstance { n, edges, p, q })
    }

    pub fn all_edges(&self) -> EdgeSet {
        EdgeSet::all(self.edges.len())
    }

    pub fn is_safe(&self, e: usize) -> bool {
        self.edges[e].kind == EdgeKind::Safe
    }

    pub fn safe_edges(&self) -> EdgeSet {
        EdgeSet::from_sorted((0..self.edges.len()).filter(|&e| self.is_safe(e)).collect())
    }

    pub fn unsafe_edges(&self) -> EdgeSet {
        EdgeSet::from_sorted((0..self.edges.len()).filter(|&e| !self.is_safe(e)).collect())
    }

    pub fn cost(&self, set: &EdgeSet) -> Q {
        set.iter().fold(Q::zero(), |acc, e| acc + &self.edges[e].cost)
    }

    pub fn costs(&self) -> Vec<Q> {
        self.edges.iter().map(|e| e.cost.clone()).collect()
    }

    /// Same graph with different connectivity parameters.
    pub fn with_params(&self, p: u32, q: u32) -> Result<Self> {
        FgcInstance::new(self.n, self.edges.clone(), p, q)
    }
}

impl CapEcssInstance {
    /// Capacities above `k` are clamped to `k`.
    pub fn new(n: usize, mut edges: Vec<CapEdge>, k: u64) -> Result<Self> {
        check_vertex_count(n)?;
        if k < 1 {
            return Err(Error::InvalidInput("k must be at least 1".into()));
        }
        for (i, e) in edges.iter_mut().enumerate() {
            check_endpoints(n, e.u, e.v, "edge", i)?;
            check_cost(&e.cost, "edge", i)?;
            if e.capacity < 1 {
                return Err(Error::InvalidInput(format!("edge {i}: capacity must be positive")));
            }
            e.capacity = e.capacity.min(k);
        }
        Ok(CapEcssInstance { n, edges, k })
    }

    pub fn cost(&self, set: &EdgeSet) -> Q {
        set.iter().fold(Q::zero(), |acc, e| acc + &self.edges[e].cost)
    }

    pub fn costs(&self) -> Vec<Q> {
        self.edges.iter().map(|e| e.cost.clone()).collect()
    }

    pub fn capacities(&self) -> Vec<Q> {
        self.edges.iter().map(|e| int(e.capacity as i64)).collect()
    }
}

impl LinkCoverInstance {
    pub fn new(
        n: usize,
        base_edges: Vec<BaseEdge>,
        links: Vec<Link>,
        lambda: Q,
        r: u32,
    ) -> Result<Self> {
        check_vertex_count(n)?;
        if !(1..=2).contains(&r) {
            return Err(Error::InvalidInput(format!("cover multiplicity must be 1 or 2, got {r}")));
        }
        if lambda.is_negative() {
            return Err(Error::InvalidInput("threshold must be nonnegative".into()));
        }
        for (i, e) in base_edges.iter().enumerate() {
            check_endpoints(n, e.u, e.v, "base edge", i)?;
            if e.capacity.is_negative() {
                return Err(Error::InvalidInput(format!("base edge {i}: negative capacity")));
            }
        }
        for (i, l) in links.iter().enumerate() {
            check_endpoints(n, l.u, l.v, "link", i)?;
            check_cost(&l.cost, "link", i)?;
        }
        Ok(LinkCoverInstance {
            n,
            base_edges,
            links,
            lambda,
            r,
        })
    }

    pub fn base_graph(&self) -> WeightedGraph {
        let mut g = WeightedGraph::new(self.n);
        for e in &self.base_edges {
            g.add_edge(e.u, e.v, e.capacity.clone());
        }
        g
    }

    pub fn cost(&self, set: &EdgeSet) -> Q {
        set.iter().fold(Q::zero(), |acc, l| acc + &self.links[l].cost)
    }

    pub fn with_multiplicity(&self, r: u32) -> Result<Self> {
        LinkCoverInstance::new(
            self.n,
            self.base_edges.clone(),
            self.links.clone(),
            self.lambda.clone(),
            r,
        )
    }

    pub fn has_unit_capacities(&self) -> bool {
        self.base_edges.iter().all(|e| e.capacity.is_one())
    }
}

/// Sorted, duplicate-free indices into an instance's edge (or link) list.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct EdgeSet(Vec<usize>);

impl EdgeSet {
    pub fn new(mut indices: Vec<usize>, universe: usize) -> Result<Self> {
        indices.sort_unstable();
        if let Some(w) = indices.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::InvalidInput(format!("duplicate index {}", w[0])));
        }
        if let Some(&bad) = indices.iter().find(|&&i| i >= universe) {
            return Err(Error::InvalidInput(format!(
                "index {bad} out of range for {universe} elements"
            )));
        }
        Ok(EdgeSet(indices))
    }

    pub fn empty() -> Self {
        EdgeSet(Vec::new())
    }

    pub fn all(len: usize) -> Self {
        EdgeSet((0..len).collect())
    }

    pub(crate) fn from_sorted(indices: Vec<usize>) -> Self {
        debug_assert!(indices.windows(2).all(|w| w[0] < w[1]));
        EdgeSet(indices)
    }

    pub fn from_mask(mask: u64) -> Self {
        EdgeSet((0..64).filter(|&i| mask >> i & 1 == 1).collect())
    }

    pub fn from_flags(flags: &[bool]) -> Self {
        EdgeSet((0..flags.len()).filter(|&i| flags[i]).collect())
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().copied()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, e: usize) -> bool {
        self.0.binary_search(&e).is_ok()
    }

    pub fn union(&self, other: &EdgeSet) -> EdgeSet {
        let mut v: Vec<usize> = self.0.iter().chain(other.0.iter()).copied().collect();
        v.sort_unstable();
        v.dedup();
        EdgeSet(v)
    }

    pub fn difference(&self, other: &EdgeSet) -> EdgeSet {
        EdgeSet(self.0.iter().copied().filter(|&e| !other.contains(e)).collect())
    }

    pub fn flags(&self, len: usize) -> Vec<bool> {
        let mut f = vec![false; len];
        for &e in &self.0 {
            f[e] = true;
        }
        f
    }

    pub fn mask(&self) -> u64 {
        self.0.iter().fold(0u64, |m, &e| m | (1u64 << e))
    }
}

impl FromIterator<usize> for EdgeSet {
    fn from_iter<T: IntoIterator<Item = usize>>(iter: T) -> Self {
        let mut v: Vec<usize> = iter.into_iter().collect();
        v.sort_unstable();
        v.dedup();
        EdgeSet(v)
    }
}

fn check_membership(set: &EdgeSet, universe: usize) -> Result<()> {
    match set.as_slice().last() {
        Some(&e) if e >= universe => Err(Error::InvalidInput(format!(
            "index {e} out of range for {universe} elements"
        ))),
        _ => Ok(()),
    }
}

/// Survivable connectivity on one cut: `safe + max(0, unsafe - q) >= p`.
#[inline]
pub fn fgc_cut_ok(safe: u32, unsafe_count: u32, p: u32, q: u32) -> bool {
    safe + unsafe_count.saturating_sub(q) >= p
}

/// First cut (canonical order) on which `chosen` fails the FGC requirement.
pub fn fgc_violation(inst: &FgcInstance, chosen: &EdgeSet) -> Result<Option<VertexSet>> {
    check_membership(chosen, inst.edges.len())?;
    cut_oracle::check_enumerable(inst.n)?;
    let edges: Vec<(usize, usize, bool)> = chosen
        .iter()
        .map(|e| {
            let ed = &inst.edges[e];
            (ed.u, ed.v, ed.kind == EdgeKind::Safe)
        })
        .collect();
    for side in canonical_sides(inst.n) {
        let (mut s, mut t) = (0u32, 0u32);
        for &(u, v, safe) in &edges {
            if side.separates(u, v) {
                if safe {
                    s += 1;
                } else {
                    t += 1;
                }
            }
        }
        if !fgc_cut_ok(s, t, inst.p, inst.q) {
            return Ok(Some(side));
        }
    }
    Ok(None)
}

pub fn feasible_fgc(inst: &FgcInstance, chosen: &EdgeSet) -> Result<bool> {
    Ok(fgc_violation(inst, chosen)?.is_none())
}

/// A violated cut of `(V, chosen)` under capacities, if the min cut is below `k`.
pub fn capk_violation(inst: &CapEcssInstance, chosen: &EdgeSet) -> Result<Option<VertexSet>> {
    check_membership(chosen, inst.edges.len())?;
    let mut g = WeightedGraph::new(inst.n);
    for e in chosen.iter() {
        let ed = &inst.edges[e];
        g.add_edge(ed.u, ed.v, int(ed.capacity as i64));
    }
    let (value, cut) = cut_oracle::min_cut(&g)?;
    Ok((value < int(inst.k as i64)).then_some(cut.side))
}

pub fn feasible_capk(inst: &CapEcssInstance, chosen: &EdgeSet) -> Result<bool> {
    Ok(capk_violation(inst, chosen)?.is_none())
}

/// First deficient cut not crossed by `r` chosen links.
pub fn cover_violation(inst: &LinkCoverInstance, chosen: &EdgeSet) -> Result<Option<VertexSet>> {
    check_membership(chosen, inst.links.len())?;
    let family = cut_oracle::enumerate_cuts_below(&inst.base_graph(), &inst.lambda)?;
    for cut in family {
        let covered = chosen
            .iter()
            .filter(|&l| cut.side.separates(inst.links[l].u, inst.links[l].v))
            .count();
        if covered < inst.r as usize {
            return Ok(Some(cut.side));
        }
    }
    Ok(None)
}

pub fn feasible_cover(inst: &LinkCoverInstance, chosen: &EdgeSet) -> Result<bool> {
    Ok(cover_violation(inst, chosen)?.is_none())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num::int;

    pub(crate) fn fgc_gap(q: u32) -> FgcInstance {
        let mut edges: Vec<FgcEdge> = (0..q)
            .map(|_| FgcEdge {
                u: 0,
                v: 1,
                cost: int(0),
                kind: EdgeKind::Unsafe,
            })
            .collect();
        edges.push(FgcEdge {
            u: 0,
            v: 1,
            cost: int(1),
            kind: EdgeKind::Safe,
        });
        FgcInstance::new(2, edges, 1, q).unwrap()
    }

    fn capk_gap(k: u64) -> CapEcssInstance {
        CapEcssInstance::new(
            2,
            vec![
                CapEdge {
                    u: 0,
                    v: 1,
                    cost: int(0),
                    capacity: k - 1,
                },
                CapEdge {
                    u: 0,
                    v: 1,
                    cost: int(1),
                    capacity: k,
                },
            ],
            k,
        )
        .unwrap()
    }

    #[test]
    fn unsafe_parallel_edges_do_not_suffice() {
        let inst = fgc_gap(3);
        assert!(!feasible_fgc(&inst, &inst.unsafe_edges()).unwrap());
        assert!(feasible_fgc(&inst, &inst.safe_edges()).unwrap());
    }

    #[test]
    fn safe_spanning_tree_is_feasible() {
        let mut edges = Vec::new();
        for u in 0..4 {
            for v in (u + 1)..4 {
                edges.push(FgcEdge {
                    u,
                    v,
                    cost: int(1),
                    kind: EdgeKind::Safe,
                });
            }
        }
        let inst = FgcInstance::new(4, edges, 1, 1).unwrap();
        // star at 0: edges (0,1),(0,2),(0,3) are indices 0,1,2
        let tree = EdgeSet::new(vec![0, 1, 2], 6).unwrap();
        assert!(feasible_fgc(&inst, &tree).unwrap());
        assert!(!feasible_fgc(&inst, &EdgeSet::new(vec![0, 1], 6).unwrap()).unwrap());
    }

    #[test]
    fn capk_gap_feasibility() {
        let inst = capk_gap(5);
        assert!(!feasible_capk(&inst, &EdgeSet::new(vec![0], 2).unwrap()).unwrap());
        assert!(feasible_capk(&inst, &EdgeSet::new(vec![1], 2).unwrap()).unwrap());
        assert!(!feasible_capk(&inst, &EdgeSet::empty()).unwrap());
    }

    #[test]
    fn capacities_clamped_to_k() {
        let inst = CapEcssInstance::new(
            2,
            vec![CapEdge {
                u: 0,
                v: 1,
                cost: int(1),
                capacity: 9,
            }],
            4,
        )
        .unwrap();
        assert_eq!(inst.edges[0].capacity, 4);
    }

    fn path_cover(r: u32) -> LinkCoverInstance {
        LinkCoverInstance::new(
            3,
            vec![
                BaseEdge {
                    u: 0,
                    v: 1,
                    capacity: int(1),
                },
                BaseEdge {
                    u: 1,
                    v: 2,
                    capacity: int(1),
                },
            ],
            vec![Link {
                u: 0,
                v: 2,
                cost: int(1),
            }],
            int(2),
            r,
        )
        .unwrap()
    }

    #[test]
    fn path_cover_single_multiplicity() {
        let inst = path_cover(1);
        assert!(feasible_cover(&inst, &EdgeSet::all(1)).unwrap());
        assert!(!feasible_cover(&inst, &EdgeSet::empty()).unwrap());
    }

    #[test]
    fn path_cover_double_multiplicity() {
        let inst = path_cover(2);
        assert!(!feasible_cover(&inst, &EdgeSet::all(1)).unwrap());
    }

    #[test]
    fn nothing_to_cover() {
        let mut inst = path_cover(1);
        inst.lambda = int(1);
        assert!(feasible_cover(&inst, &EdgeSet::empty()).unwrap());
    }

    #[test]
    fn edge_set_validation() {
        assert!(EdgeSet::new(vec![1, 1], 3).is_err());
        assert!(EdgeSet::new(vec![3], 3).is_err());
        let s = EdgeSet::new(vec![2, 0], 3).unwrap();
        assert_eq!(s.as_slice(), &[0, 2]);
    }

    #[test]
    fn invalid_instances_rejected() {
        let e = FgcEdge {
            u: 0,
            v: 0,
            cost: int(1),
            kind: EdgeKind::Safe,
        };
        assert!(FgcInstance::new(2, vec![e], 1, 1).is_err());
        assert!(FgcInstance::new(2, vec![], 0, 1).is_err());
    }
}
