//! Exact optima by branch and bound, for verification on small instances.
//!
//! Among optimal sets the witness has the fewest edges, then the
//! lexicographically smallest sorted index vector.

use std::collections::HashSet;

use crate::cut_oracle::{canonical_sides, check_enumerable, enumerate_cuts_below};
use crate::error::Result;
use crate::instances::{CapEcssInstance, EdgeKind, EdgeSet, FgcInstance, LinkCoverInstance};
use crate::jain::{FConnInstance, RoundingMode};
use crate::num::{int, Q};
use crate::search::{exact_min_cover, Requirement};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleResult {
    pub cost: Q,
    pub witness: EdgeSet,
    pub subsets_examined: u64,
}

fn finish(what: &'static str, costs: &[Q], reqs: Vec<Requirement>) -> Result<OracleResult> {
    let out = exact_min_cover(what, costs, reqs)?;
    Ok(OracleResult {
        cost: out.cost,
        witness: EdgeSet::from_mask(out.mask),
        subsets_examined: out.nodes,
    })
}

pub fn opt_fgc(inst: &FgcInstance) -> Result<OracleResult> {
    check_enumerable(inst.n)?;
    let mut seen = HashSet::new();
    let mut reqs = Vec::new();
    for side in canonical_sides(inst.n) {
        let (mut safe, mut unsafe_) = (0u64, 0u64);
        for (e, ed) in inst.edges.iter().enumerate() {
            if side.separates(ed.u, ed.v) {
                match ed.kind {
                    EdgeKind::Safe => safe |= 1 << e,
                    EdgeKind::Unsafe => unsafe_ |= 1 << e,
                }
            }
        }
        if seen.insert((safe, unsafe_)) {
            reqs.push(Requirement::Fgc { safe, unsafe_, p: inst.p, q: inst.q });
        }
    }
    finish("edges", &inst.costs(), reqs)
}

pub fn opt_capk(inst: &CapEcssInstance) -> Result<OracleResult> {
    check_enumerable(inst.n)?;
    let mut seen = HashSet::new();
    let mut reqs = Vec::new();
    for side in canonical_sides(inst.n) {
        let crossing: Vec<usize> = (0..inst.edges.len())
            .filter(|&e| side.separates(inst.edges[e].u, inst.edges[e].v))
            .collect();
        if seen.insert(crossing.clone()) {
            reqs.push(Requirement::Weighted {
                terms: crossing
                    .into_iter()
                    .map(|e| (e, int(inst.edges[e].capacity as i64)))
                    .collect(),
                demand: int(inst.k as i64),
            });
        }
    }
    finish("edges", &inst.costs(), reqs)
}

/// Cheapest link set crossing every small cut at least `r` times.
pub fn opt_cover(inst: &LinkCoverInstance, r: u32) -> Result<OracleResult> {
    let mut seen = HashSet::new();
    let mut reqs = Vec::new();
    for cut in enumerate_cuts_below(&inst.base_graph(), &inst.lambda)? {
        let crossing: Vec<usize> = (0..inst.links.len())
            .filter(|&l| cut.side.separates(inst.links[l].u, inst.links[l].v))
            .collect();
        if seen.insert(crossing.clone()) {
            reqs.push(Requirement::Weighted {
                terms: crossing.into_iter().map(|l| (l, int(1))).collect(),
                demand: int(r as i64),
            });
        }
    }
    let costs: Vec<Q> = inst.links.iter().map(|l| l.cost.clone()).collect();
    finish("links", &costs, reqs)
}

/// Exact optimum of an f-connectivity instance over its candidates.
pub fn opt_fconn(inst: &FConnInstance, mode: RoundingMode) -> Result<OracleResult> {
    check_enumerable(inst.n)?;
    let none = vec![false; inst.candidates.len()];
    let mut reqs = Vec::new();
    for side in canonical_sides(inst.n) {
        let need = inst.residual(side, &none, mode);
        if need == 0 {
            continue;
        }
        let terms = (0..inst.candidates.len())
            .filter(|&e| side.separates(inst.candidates[e].u, inst.candidates[e].v))
            .map(|e| {
                let w = match mode {
                    RoundingMode::Unit => 1,
                    RoundingMode::Capacitated => inst.candidates[e].capacity,
                };
                (e, int(w as i64))
            })
            .collect();
        reqs.push(Requirement::Weighted { terms, demand: int(need as i64) });
    }
    let costs: Vec<Q> = inst.candidates.iter().map(|c| c.cost.clone()).collect();
    finish("candidates", &costs, reqs)
}
