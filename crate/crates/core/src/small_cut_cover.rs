//! Covering small cuts with links: primal-dual 1-cover, exact LP value and
//! an exact r-cover.

use std::collections::HashSet;

use log::debug;
use num_traits::{Signed, Zero};

use crate::cut_oracle::{enumerate_cuts_below, Cut, VertexSet, WeightedGraph};
use crate::error::{Error, Result};
use crate::instances::{EdgeSet, LinkCoverInstance};
use crate::lp::{solve_vertex, LpProblem, Row};
use crate::num::{int, Q};
use crate::search::{exact_min_cover, Requirement};

/// Cuts of base weight strictly below the threshold, each needing `r` links.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoverFamily {
    pub cuts: Vec<Cut>,
    pub r: u32,
}

pub fn small_cut_family(g: &WeightedGraph, lambda: &Q, r: u32) -> Result<CoverFamily> {
    Ok(CoverFamily {
        cuts: enumerate_cuts_below(g, lambda)?,
        r,
    })
}

fn family_of(inst: &LinkCoverInstance) -> Result<CoverFamily> {
    small_cut_family(&inst.base_graph(), &inst.lambda, inst.r)
}

fn crossing_links(inst: &LinkCoverInstance, side: VertexSet) -> Vec<usize> {
    (0..inst.links.len())
        .filter(|&l| side.separates(inst.links[l].u, inst.links[l].v))
        .collect()
}

/// One row per distinct crossing-link set: `sum x_l >= r`.
fn cover_rows(inst: &LinkCoverInstance, family: &CoverFamily, r: u32) -> Vec<Row> {
    let mut seen = HashSet::new();
    let mut rows = Vec::new();
    for cut in &family.cuts {
        let links = crossing_links(inst, cut.side);
        if seen.insert(links.clone()) {
            rows.push(Row::unit(links, int(r as i64)));
        }
    }
    rows
}

/// Optimum of the cover LP with right-hand side `r` on every small cut.
pub fn lp_cover_value(inst: &LinkCoverInstance, r: u32) -> Result<Q> {
    let family = family_of(inst)?;
    if family.cuts.is_empty() {
        return Ok(Q::zero());
    }
    let mut lp = LpProblem::new(inst.links.iter().map(|l| l.cost.clone()).collect());
    for row in cover_rows(inst, &family, r) {
        lp.push(row);
    }
    Ok(solve_vertex(&lp)?.objective)
}

/// Whether `x` (one value per link) is feasible for the cover LP of `inst`.
pub fn cover_lp_feasible(inst: &LinkCoverInstance, x: &[Q]) -> Result<bool> {
    if x.len() != inst.links.len() {
        return Err(Error::InvalidInput("witness length differs from link count".into()));
    }
    if x.iter().any(|v| v.is_negative() || *v > int(1)) {
        return Ok(false);
    }
    let r = int(inst.r as i64);
    for cut in family_of(inst)?.cuts {
        let total = crossing_links(inst, cut.side)
            .into_iter()
            .fold(Q::zero(), |acc, l| acc + &x[l]);
        if total < r {
            return Ok(false);
        }
    }
    Ok(true)
}

fn check_coverable(inst: &LinkCoverInstance, family: &CoverFamily) -> Result<()> {
    for cut in &family.cuts {
        if crossing_links(inst, cut.side).len() < family.r as usize {
            return Err(Error::Infeasible(format!(
                "small cut {} is crossed by fewer than {} links",
                cut.side, family.r
            )));
        }
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WgmvOutcome {
    pub links: EdgeSet,
    pub cost: Q,
    pub lp_value: Q,
    /// Total dual grown; a lower bound on `lp_value`.
    pub dual_value: Q,
}

impl WgmvOutcome {
    pub fn within_bound(&self) -> bool {
        self.cost <= int(5) * &self.lp_value
    }
}

/// Primal-dual cover of every small cut by at least one link.
///
/// Duals grow uniformly on the inclusion-minimal uncovered sets (either side
/// of a small cut); the lowest-index tight link is bought; redundant links are
/// then removed in reverse order of purchase.
pub fn wgmv_cover(inst: &LinkCoverInstance) -> Result<WgmvOutcome> {
    if inst.r != 1 {
        return Err(Error::InvalidInput("primal-dual cover needs multiplicity 1".into()));
    }
    let family = family_of(inst)?;
    check_coverable(inst, &family)?;
    let lp_value = lp_cover_value(inst, 1)?;
    let n = inst.n;
    let members: Vec<VertexSet> = family
        .cuts
        .iter()
        .flat_map(|c| [c.side, c.side.complement(n)])
        .collect();
    let crosses = |l: usize, s: VertexSet| s.separates(inst.links[l].u, inst.links[l].v);

    let mut residual: Vec<Q> = inst.links.iter().map(|l| l.cost.clone()).collect();
    let mut bought: Vec<usize> = Vec::new();
    let mut in_sol = vec![false; inst.links.len()];
    let mut dual_value = Q::zero();
    loop {
        let uncovered: Vec<VertexSet> = members
            .iter()
            .copied()
            .filter(|&s| !bought.iter().any(|&l| crosses(l, s)))
            .collect();
        if uncovered.is_empty() {
            break;
        }
        let active: Vec<VertexSet> = uncovered
            .iter()
            .copied()
            .filter(|&s| !uncovered.iter().any(|&t| t != s && t.is_subset_of(s)))
            .collect();
        let load: Vec<usize> = (0..inst.links.len())
            .map(|l| active.iter().filter(|&&s| crosses(l, s)).count())
            .collect();
        let mut eps: Option<Q> = None;
        for l in 0..inst.links.len() {
            if in_sol[l] || load[l] == 0 {
                continue;
            }
            let t = &residual[l] / int(load[l] as i64);
            if eps.as_ref().is_none_or(|e| t < *e) {
                eps = Some(t);
            }
        }
        let eps = eps.ok_or_else(|| Error::invariant("active set with no crossing link"))?;
        dual_value += &eps * int(active.len() as i64);
        for l in 0..inst.links.len() {
            if load[l] > 0 && !in_sol[l] {
                residual[l] -= &eps * int(load[l] as i64);
            }
        }
        let tight = (0..inst.links.len())
            .find(|&l| !in_sol[l] && load[l] > 0 && residual[l].is_zero())
            .ok_or_else(|| Error::invariant("dual growth made no link tight"))?;
        in_sol[tight] = true;
        bought.push(tight);
    }

    let covers_all = |set: &[usize]| {
        family
            .cuts
            .iter()
            .all(|c| set.iter().any(|&l| crosses(l, c.side)))
    };
    let mut kept = bought.clone();
    for &l in bought.iter().rev() {
        let trial: Vec<usize> = kept.iter().copied().filter(|&x| x != l).collect();
        if covers_all(&trial) {
            kept = trial;
        }
    }
    for &l in &kept {
        let trial: Vec<usize> = kept.iter().copied().filter(|&x| x != l).collect();
        if covers_all(&trial) {
            return Err(Error::invariant(format!("reverse delete left redundant link {l}")));
        }
    }
    if dual_value > lp_value {
        return Err(Error::invariant("dual value exceeds the LP optimum"));
    }
    let links: EdgeSet = kept.into_iter().collect();
    let cost = inst.cost(&links);
    debug!(
        "primal-dual cover: {} links, cost {}, lp {}, dual {}",
        links.len(),
        cost,
        lp_value,
        dual_value
    );
    Ok(WgmvOutcome {
        links,
        cost,
        lp_value,
        dual_value,
    })
}

/// Minimum-cost link set crossing every small cut at least `inst.r` times.
pub fn exact_cover(inst: &LinkCoverInstance) -> Result<EdgeSet> {
    let family = family_of(inst)?;
    check_coverable(inst, &family)?;
    let mut seen = HashSet::new();
    let reqs: Vec<Requirement> = family
        .cuts
        .iter()
        .map(|c| crossing_links(inst, c.side))
        .filter(|links| seen.insert(links.clone()))
        .map(|links| Requirement::Weighted {
            terms: links.into_iter().map(|l| (l, int(1))).collect(),
            demand: int(inst.r as i64),
        })
        .collect();
    let costs: Vec<Q> = inst.links.iter().map(|l| l.cost.clone()).collect();
    let out = exact_min_cover("links", &costs, reqs)?;
    Ok(EdgeSet::from_mask(out.mask))
}

/// Exact minimum-cost 2-cover.
pub fn exact_two_cover(inst: &LinkCoverInstance) -> Result<EdgeSet> {
    if inst.r != 2 {
        return exact_cover(&inst.with_multiplicity(2)?);
    }
    exact_cover(inst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances::{feasible_cover, BaseEdge, Link};
    use crate::num::{int, ratio};

    fn one_cut_instance(costs: &[i64], r: u32) -> LinkCoverInstance {
        // base: single edge 0-1 of capacity 1; only cut has weight 1 < 2
        LinkCoverInstance::new(
            2,
            vec![BaseEdge { u: 0, v: 1, capacity: int(1) }],
            costs.iter().map(|&c| Link { u: 0, v: 1, cost: int(c) }).collect(),
            int(2),
            r,
        )
        .unwrap()
    }

    #[test]
    fn empty_family() {
        let mut inst = one_cut_instance(&[3], 1);
        inst.lambda = int(1);
        let out = wgmv_cover(&inst).unwrap();
        assert!(out.links.is_empty());
        assert_eq!(out.cost, int(0));
        assert!(exact_two_cover(&inst.with_multiplicity(2).unwrap()).unwrap().is_empty());
    }

    #[test]
    fn star_with_one_deficient_leaf() {
        // star centred at 0; leaf 3 has weak capacity, link 1-3 of cost 3 is the only cover
        let inst = LinkCoverInstance::new(
            4,
            vec![
                BaseEdge { u: 0, v: 1, capacity: int(5) },
                BaseEdge { u: 0, v: 2, capacity: int(5) },
                BaseEdge { u: 0, v: 3, capacity: int(1) },
            ],
            vec![Link { u: 1, v: 3, cost: int(3) }],
            int(2),
            1,
        )
        .unwrap();
        let out = wgmv_cover(&inst).unwrap();
        assert_eq!(out.links.as_slice(), &[0]);
        assert_eq!(out.cost, int(3));
        assert_eq!(out.lp_value, int(3));
    }

    #[test]
    fn lp_values_for_one_cut() {
        let inst = one_cut_instance(&[2, 5], 1);
        assert_eq!(lp_cover_value(&inst, 1).unwrap(), int(2));
        assert_eq!(lp_cover_value(&inst, 2).unwrap(), int(7));
        assert_eq!(lp_cover_value(&inst, 3), Err(Error::LpInfeasible));
    }

    #[test]
    fn exact_two_cover_takes_two_cheapest() {
        let inst = one_cut_instance(&[1, 2, 4], 2);
        let j = exact_two_cover(&inst).unwrap();
        assert_eq!(j.as_slice(), &[0, 1]);
        assert_eq!(inst.cost(&j), int(3));
    }

    #[test]
    fn uncoverable_cut_is_infeasible() {
        let inst = one_cut_instance(&[], 1);
        assert!(matches!(wgmv_cover(&inst), Err(Error::Infeasible(_))));
    }

    #[test]
    fn witness_feasibility() {
        let inst = one_cut_instance(&[1, 1], 1);
        assert!(cover_lp_feasible(&inst, &[ratio(1, 2), ratio(1, 2)]).unwrap());
        assert!(!cover_lp_feasible(&inst, &[ratio(1, 2), ratio(1, 3)]).unwrap());
    }

    #[test]
    fn primal_dual_output_is_feasible_on_a_cycle() {
        // 5-cycle base with unit capacities, lambda 3: every cut of weight 2 needs a link
        let base = (0..5)
            .map(|i| BaseEdge { u: i, v: (i + 1) % 5, capacity: int(1) })
            .collect();
        let links = vec![
            Link { u: 0, v: 2, cost: int(1) },
            Link { u: 1, v: 3, cost: int(2) },
            Link { u: 2, v: 4, cost: int(1) },
            Link { u: 3, v: 0, cost: int(3) },
            Link { u: 4, v: 1, cost: int(1) },
        ];
        let inst = LinkCoverInstance::new(5, base, links, int(3), 1).unwrap();
        let out = wgmv_cover(&inst).unwrap();
        assert!(feasible_cover(&inst, &out.links).unwrap());
        assert!(out.cost >= out.lp_value && out.within_bound());
    }
}
