//! Exact minimum-cost covering by branch and bound over edge bitmasks.
//!
//! Shared by the brute-force oracles, the exact 2-cover solver and the
//! exact CIP solver. Ties between optimal sets are broken by fewer edges,
//! then by the lexicographically smallest sorted index vector.

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::num::{scale_to_integers, Q};

/// Largest candidate count accepted by the exact search.
pub const MAX_CANDIDATES: usize = 22;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Requirement {
    /// `sum w_e [e chosen] >= demand`.
    Weighted { terms: Vec<(usize, Q)>, demand: Q },
    /// `|safe chosen| + max(0, |unsafe chosen| - q) >= p`.
    Fgc { safe: u64, unsafe_: u64, p: u32, q: u32 },
}

#[derive(Debug, Clone)]
enum Req {
    Weighted { terms: Vec<(u32, i128)>, support: u64, demand: i128 },
    Fgc { safe: u64, unsafe_: u64, p: u32, q: u32 },
}

impl Req {
    fn support(&self) -> u64 {
        match self {
            Req::Weighted { support, .. } => *support,
            Req::Fgc { safe, unsafe_, .. } => safe | unsafe_,
        }
    }

    fn satisfied_by(&self, mask: u64) -> bool {
        match self {
            Req::Weighted { terms, support, demand } => {
                if mask & support == *support {
                    return terms.iter().map(|t| t.1).sum::<i128>() >= *demand;
                }
                terms
                    .iter()
                    .filter(|(e, _)| mask >> e & 1 == 1)
                    .map(|t| t.1)
                    .sum::<i128>()
                    >= *demand
            }
            Req::Fgc { safe, unsafe_, p, q } => {
                let s = (mask & safe).count_ones();
                let t = (mask & unsafe_).count_ones();
                s + t.saturating_sub(*q) >= *p
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchOutcome {
    pub mask: u64,
    pub cost: Q,
    pub nodes: u64,
}

/// With equal cardinality, the set holding the lowest differing bit has the
/// smaller sorted index vector.
fn lex_less(a: u64, b: u64) -> bool {
    let d = a ^ b;
    d != 0 && a & (d & d.wrapping_neg()) != 0
}

struct Search<'a> {
    costs: &'a [i128],
    reqs: Vec<Req>,
    best: Option<(i128, u32, u64)>,
    nodes: u64,
}

impl Search<'_> {
    fn better(&self, cost: i128, mask: u64) -> bool {
        match self.best {
            None => true,
            Some((bc, bn, bm)) => {
                let n = mask.count_ones();
                cost < bc || (cost == bc && (n < bn || (n == bn && lex_less(mask, bm))))
            }
        }
    }

    fn mask_cost(&self, mask: u64) -> i128 {
        (0..self.costs.len())
            .filter(|&e| mask >> e & 1 == 1)
            .map(|e| self.costs[e])
            .sum()
    }

    fn dfs(&mut self, chosen: u64, excluded: u64, cost: i128) {
        self.nodes += 1;
        let all = (1u64 << self.costs.len()) - 1;
        let undecided = all & !chosen & !excluded;
        let mut lb = 0i128;
        let mut branch: Option<(u32, u64)> = None;
        for req in &self.reqs {
            if req.satisfied_by(chosen) {
                continue;
            }
            if !req.satisfied_by(chosen | undecided) {
                return;
            }
            let open = req.support() & undecided;
            let cheapest = (0..self.costs.len())
                .filter(|&e| open >> e & 1 == 1)
                .map(|e| self.costs[e])
                .min()
                .unwrap_or(0);
            lb = lb.max(cheapest);
            let width = open.count_ones();
            if branch.is_none_or(|(w, _)| width < w) {
                branch = Some((width, open));
            }
        }
        let Some((_, open)) = branch else {
            if self.better(cost, chosen) {
                self.best = Some((cost, chosen.count_ones(), chosen));
            }
            return;
        };
        if let Some((bc, bn, _)) = self.best {
            if cost + lb > bc || (cost + lb == bc && chosen.count_ones() + 1 > bn) {
                return;
            }
        }
        let mut order: Vec<usize> = (0..self.costs.len()).filter(|&e| open >> e & 1 == 1).collect();
        order.sort_by_key(|&e| (self.costs[e], e));
        let mut excl = excluded;
        for e in order {
            self.dfs(chosen | 1 << e, excl, cost + self.costs[e]);
            excl |= 1 << e;
        }
    }
}

fn lower(what: &'static str, n: usize, reqs: Vec<Requirement>) -> Result<Vec<Req>> {
    let mut out: Vec<Req> = Vec::with_capacity(reqs.len());
    for req in reqs {
        match req {
            Requirement::Weighted { terms, demand } => {
                if !demand.is_positive() {
                    continue;
                }
                let mut values: Vec<Q> = terms.iter().map(|t| t.1.clone()).collect();
                values.push(demand);
                let scaled = scale_to_integers(&values).ok_or_else(|| {
                    Error::InvalidInput(format!("{what}: negative or oversized coefficient"))
                })?;
                let demand = *scaled.last().unwrap();
                let mut support = 0u64;
                let mut lowered = Vec::new();
                for ((e, _), w) in terms.iter().zip(&scaled) {
                    if *e >= n {
                        return Err(Error::InvalidInput(format!("{what}: index {e} out of range")));
                    }
                    if *w > 0 {
                        support |= 1 << e;
                        lowered.push((*e as u32, *w));
                    }
                }
                out.push(Req::Weighted { terms: lowered, support, demand });
            }
            Requirement::Fgc { safe, unsafe_, p, q } => {
                if (safe | unsafe_) >> n != 0 {
                    return Err(Error::InvalidInput(format!("{what}: mask out of range")));
                }
                out.push(Req::Fgc { safe, unsafe_, p, q });
            }
        }
    }
    Ok(out)
}

/// Minimum-cost subset of `costs.len()` candidates meeting every requirement.
pub fn exact_min_cover(
    what: &'static str,
    costs: &[Q],
    reqs: Vec<Requirement>,
) -> Result<SearchOutcome> {
    if costs.len() > MAX_CANDIDATES {
        return Err(Error::TooManyEdges {
            what,
            count: costs.len(),
            limit: MAX_CANDIDATES,
        });
    }
    let scaled = scale_to_integers(costs)
        .ok_or_else(|| Error::InvalidInput(format!("{what}: costs must be nonnegative")))?;
    let reqs = lower(what, costs.len(), reqs)?;
    let mut search = Search {
        costs: &scaled,
        reqs,
        best: None,
        nodes: 0,
    };
    let all = if costs.is_empty() { 0 } else { (1u64 << costs.len()) - 1 };
    if search.reqs.iter().any(|r| !r.satisfied_by(all)) {
        return Err(Error::Infeasible(format!("{what}: even the full candidate set fails")));
    }
    search.dfs(0, 0, 0);
    let (c, _, mask) = search.best.expect("full set is feasible");
    debug_assert_eq!(c, search.mask_cost(mask));
    let cost = (0..costs.len())
        .filter(|&e| mask >> e & 1 == 1)
        .fold(Q::zero(), |acc, e| acc + &costs[e]);
    Ok(SearchOutcome {
        mask,
        cost,
        nodes: search.nodes,
    })
}
