//! (1,q)-FGC: knapsack-cover strengthened LP and three-part rounding
//! (small-cut cover with safe edges, heavy unsafe edges, iterative rounding
//! on light unsafe edges).

use log::info;
use num_traits::Zero;

use crate::checks::CheckLog;
use crate::cut_oracle::{canonical_sides, check_enumerable};
use crate::error::{Error, Result};
use crate::instances::{
    feasible_fgc, BaseEdge, EdgeKind, EdgeSet, FgcInstance, Link, LinkCoverInstance,
};
use crate::jain::{iterative_round, Candidate, FConnInstance, RoundingMode};
use crate::lp::{
    kci_row, separate_with_kci, CuttingPlane, FractionalSolution, LpProblem, RowTag, Separation,
};
use crate::num::{clamp_scaled, int, ratio, Q};
use crate::small_cut_cover::{cover_lp_feasible, wgmv_cover};

/// `(u, v, capacity)` in the network view with `q_eff + 1` on safe edges and
/// 1 on unsafe edges; the edge `removed`, if any, gets capacity 0.
pub(crate) fn network_caps(
    inst: &FgcInstance,
    q_eff: u32,
    removed: Option<usize>,
) -> Vec<(usize, usize, Q)> {
    inst.edges
        .iter()
        .enumerate()
        .map(|(e, ed)| {
            let cap = if Some(e) == removed {
                Q::zero()
            } else if ed.kind == EdgeKind::Safe {
                int(q_eff as i64 + 1)
            } else {
                int(1)
            };
            (ed.u, ed.v, cap)
        })
        .collect()
}

pub(crate) fn unsafe_at_least(inst: &FgcInstance, x: &[Q], t: &Q) -> EdgeSet {
    EdgeSet::from_flags(
        &(0..inst.edges.len())
            .map(|e| !inst.is_safe(e) && x[e] >= *t)
            .collect::<Vec<_>>(),
    )
}

pub(crate) fn check_instance_feasible(inst: &FgcInstance) -> Result<()> {
    check_enumerable(inst.n)?;
    if !feasible_fgc(inst, &inst.all_edges())? {
        return Err(Error::Infeasible(format!(
            "the full edge set is not ({},{})-feasible",
            inst.p, inst.q
        )));
    }
    Ok(())
}

/// Capacity rows below `q+1`, then knapsack-cover rows with
/// `A = {unsafe : x >= 2/7}` on cuts of weight at most `2(q+1)`.
pub fn separate_1q(inst: &FgcInstance, x: &[Q]) -> Result<Separation> {
    separate_1q_with(inst, inst.q, x)
}

pub(crate) fn separate_1q_with(inst: &FgcInstance, q_eff: u32, x: &[Q]) -> Result<Separation> {
    let caps = network_caps(inst, q_eff, None);
    let a = unsafe_at_least(inst, x, &ratio(2, 7));
    separate_with_kci(
        inst.n,
        &caps,
        &int(q_eff as i64 + 1),
        x,
        &a,
        RowTag::BaseCut,
        RowTag::Kci,
    )
}

/// Singleton-vertex capacity rows used to seed the cutting plane.
pub(crate) fn seed_rows(cp: &mut CuttingPlane, inst: &FgcInstance, q_eff: u32) -> Result<()> {
    let caps = network_caps(inst, q_eff, None);
    let k = int(q_eff as i64 + 1);
    for side in canonical_sides(inst.n).filter(|s| s.len() == 1 || s.len() + 1 == inst.n) {
        let row = kci_row(&caps, &k, side, &EdgeSet::empty()).to_row();
        cp.add_row(row, RowTag::Initial)?;
    }
    Ok(())
}

fn lp_snapshot(cp: &CuttingPlane, objective: Vec<Q>) -> LpProblem {
    LpProblem {
        objective,
        rows: cp.rows().to_vec(),
    }
}

/// Output of the rounding step for a given `q_eff`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rounding1q {
    pub u1: EdgeSet,
    pub u2: EdgeSet,
    pub s1_cover: EdgeSet,
    pub jain_edges: EdgeSet,
    pub edges: EdgeSet,
    pub checks: CheckLog,
}

fn weighted_cost(inst: &FgcInstance, x: &[Q], set: &EdgeSet) -> Q {
    set.iter()
        .fold(Q::zero(), |acc, e| acc + &inst.edges[e].cost * &x[e])
}

/// Rounds `x` for robustness `q_eff`. The returned set is feasible for
/// `(1, q_eff)` whenever `x` satisfies the two separation properties for
/// `q_eff`.
pub fn round_1q(inst: &FgcInstance, q_eff: u32, x: &[Q]) -> Result<Rounding1q> {
    let lambda = int(q_eff as i64 + 1);
    let two_sevenths = ratio(2, 7);
    let seven_halves = ratio(7, 2);
    let u1 = unsafe_at_least(inst, x, &two_sevenths);
    let u2 = inst.unsafe_edges().difference(&u1);
    let safe = inst.safe_edges();

    let base_edges: Vec<BaseEdge> = inst
        .unsafe_edges()
        .iter()
        .map(|e| {
            let ed = &inst.edges[e];
            let capacity = if u1.contains(e) {
                int(1)
            } else {
                &seven_halves * &x[e]
            };
            BaseEdge { u: ed.u, v: ed.v, capacity }
        })
        .collect();
    let links: Vec<Link> = safe
        .iter()
        .map(|e| {
            let ed = &inst.edges[e];
            Link { u: ed.u, v: ed.v, cost: ed.cost.clone() }
        })
        .collect();
    let cover = LinkCoverInstance::new(inst.n, base_edges, links, lambda.clone(), 1)?;
    let witness: Vec<Q> = safe.iter().map(|e| clamp_scaled(&x[e], &ratio(7, 5))).collect();
    if !cover_lp_feasible(&cover, &witness)? {
        return Err(Error::invariant("min(1, 7/5 x) on safe edges does not cover the small cuts"));
    }
    let wgmv = wgmv_cover(&cover)?;
    let s1_cover: EdgeSet = wgmv.links.iter().map(|l| safe.as_slice()[l]).collect();

    let u2_list: Vec<usize> = u2.iter().collect();
    let mut fixed: Vec<(usize, usize, u64)> = Vec::new();
    for e in s1_cover.iter() {
        fixed.push((inst.edges[e].u, inst.edges[e].v, q_eff as u64 + 1));
    }
    for e in u1.iter() {
        fixed.push((inst.edges[e].u, inst.edges[e].v, 1));
    }
    let fconn = FConnInstance {
        n: inst.n,
        candidates: u2_list
            .iter()
            .map(|&e| {
                let ed = &inst.edges[e];
                Candidate { u: ed.u, v: ed.v, cost: ed.cost.clone(), capacity: 1 }
            })
            .collect(),
        preselected: vec![],
        k_req: q_eff as u64 + 1,
        fixed,
    };
    let witness: Vec<Q> = u2_list.iter().map(|&e| &seven_halves * &x[e]).collect();
    if !fconn.fractional_feasible(&witness, RoundingMode::Unit)? {
        return Err(Error::invariant("7/2 x on light unsafe edges is not feasible for the residual"));
    }
    let jain = iterative_round(&fconn, RoundingMode::Unit)?;
    let jain_edges: EdgeSet = jain.chosen.iter().map(|j| u2_list[j]).collect();
    let edges = s1_cover.union(&u1).union(&jain_edges);

    let mut checks = CheckLog::default();
    checks.le(
        "cost(U1) <= 7/2 c(x on U1)",
        inst.cost(&u1),
        &seven_halves * weighted_cost(inst, x, &u1),
    );
    checks.le(
        "cost(S1) <= 7 c(x on safe)",
        inst.cost(&s1_cover),
        int(7) * weighted_cost(inst, x, &safe),
    );
    checks.le(
        "cost(J) <= 7 c(x on U2)",
        inst.cost(&jain_edges),
        int(7) * weighted_cost(inst, x, &u2),
    );
    checks.le("cover cost <= 5 cover lp", wgmv.cost.clone(), int(5) * &wgmv.lp_value);
    checks.extend("jain: ", jain.checks);
    checks.le(
        "cost <= 7 c(x)",
        inst.cost(&edges),
        int(7) * weighted_cost(inst, x, &inst.all_edges()),
    );
    Ok(Rounding1q {
        u1,
        u2,
        s1_cover,
        jain_edges,
        edges,
        checks,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Fgc1qSolveReport {
    pub x_star: FractionalSolution,
    pub lp: LpProblem,
    pub u1: EdgeSet,
    pub u2: EdgeSet,
    pub s1_cover: EdgeSet,
    pub jain_edges: EdgeSet,
    pub lp_value: Q,
    pub total_cost: Q,
    pub restarts: usize,
    pub checks: CheckLog,
}

/// Strengthened LP for `(1,q)` by row generation.
pub fn solve_lp_1q(inst: &FgcInstance) -> Result<(FractionalSolution, LpProblem)> {
    let mut cp = CuttingPlane::new(inst.costs())?;
    seed_rows(&mut cp, inst, inst.q)?;
    let x = cp.run(|x| separate_1q(inst, x))?;
    let lp = lp_snapshot(&cp, inst.costs());
    Ok((x, lp))
}

pub fn solve_1q(inst: &FgcInstance) -> Result<(EdgeSet, Fgc1qSolveReport)> {
    if inst.p != 1 {
        return Err(Error::InvalidInput(format!("expected p = 1, got {}", inst.p)));
    }
    check_instance_feasible(inst)?;
    let (x_star, lp) = solve_lp_1q(inst)?;
    let r = round_1q(inst, inst.q, &x_star.values)?;
    if !feasible_fgc(inst, &r.edges)? {
        return Err(Error::invariant("(1,q) rounding produced an infeasible set"));
    }
    let total_cost = inst.cost(&r.edges);
    info!(
        "(1,q) solve: lp {} cost {} ({} rows)",
        x_star.objective,
        total_cost,
        lp.rows.len()
    );
    let report = Fgc1qSolveReport {
        lp_value: x_star.objective.clone(),
        x_star,
        lp,
        u1: r.u1,
        u2: r.u2,
        s1_cover: r.s1_cover,
        jain_edges: r.jain_edges,
        total_cost,
        restarts: 0,
        checks: r.checks,
    };
    Ok((r.edges, report))
}

/// Optimum of the plain capacity LP, without knapsack-cover rows.
pub fn plain_lp_1q(inst: &FgcInstance) -> Result<Q> {
    let caps = network_caps(inst, inst.q, None);
    let k = int(inst.q as i64 + 1);
    let mut cp = CuttingPlane::new(inst.costs())?;
    let sol = cp.run(|x| {
        separate_with_kci(inst.n, &caps, &k, x, &EdgeSet::empty(), RowTag::BaseCut, RowTag::Kci)
    })?;
    Ok(sol.objective)
}
