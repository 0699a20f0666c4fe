//! (2,q)-FGC rounded through a pluggable 2-cover solver, and the reverse
//! direction: unit-capacity 2-cover solved through a pluggable (2,q)-FGC
//! solver.

use log::info;
use num_traits::{One, Zero};

use crate::checks::CheckLog;
use crate::cut_oracle::canonical_sides;
use crate::error::{Error, Result};
use crate::fgc1q::{check_instance_feasible, network_caps, round_1q, seed_rows, separate_1q_with, unsafe_at_least};
use crate::instances::{
    feasible_cover, feasible_fgc, BaseEdge, EdgeKind, EdgeSet, FgcEdge, FgcInstance, Link,
    LinkCoverInstance,
};
use crate::jain::{iterative_round, Candidate, FConnInstance, RoundingMode};
use crate::lp::{separate_with_kci, CuttingPlane, FractionalSolution, LpProblem, RowTag, Separation};
use crate::num::{int, ratio, Q};
use crate::small_cut_cover::{cover_lp_feasible, lp_cover_value, small_cut_family};

/// Solver for unit 2-cover instances; returns link indices.
pub type TwoCoverSolver<'a> = &'a dyn Fn(&LinkCoverInstance) -> Result<EdgeSet>;

/// Solver for (2,q)-FGC instances; returns edge indices.
pub type Fgc2qSolver<'a> = &'a dyn Fn(&FgcInstance) -> Result<EdgeSet>;

/// Checks, in order: capacity and knapsack-cover rows for `(1, q+1)`, then
/// for each safe edge `f` the capacity and knapsack-cover rows for `(1, q)`
/// in the graph without `f`, with `A = {unsafe : x >= 1/2}`.
pub fn separate_2q(inst: &FgcInstance, x: &[Q]) -> Result<Separation> {
    let sep = separate_1q_with(inst, inst.q + 1, x)?;
    if sep != Separation::Feasible {
        return Ok(sep);
    }
    let a2 = unsafe_at_least(inst, x, &ratio(1, 2));
    let k = int(inst.q as i64 + 1);
    for f in inst.safe_edges().iter() {
        let caps = network_caps(inst, inst.q, Some(f));
        let sep = separate_with_kci(
            inst.n,
            &caps,
            &k,
            x,
            &a2,
            RowTag::SafeFailureCut { safe_edge: f },
            RowTag::SafeFailureKci { safe_edge: f },
        )?;
        if sep != Separation::Feasible {
            return Ok(sep);
        }
    }
    Ok(Separation::Feasible)
}

/// Strengthened `(2,q)` LP by row generation.
pub fn solve_lp_2q(inst: &FgcInstance) -> Result<(FractionalSolution, LpProblem)> {
    let mut cp = CuttingPlane::new(inst.costs())?;
    seed_rows(&mut cp, inst, inst.q + 1)?;
    let x = cp.run(|x| separate_2q(inst, x))?;
    let lp = LpProblem {
        objective: inst.costs(),
        rows: cp.rows().to_vec(),
    };
    Ok((x, lp))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Fgc2qSolveReport {
    pub x_star: FractionalSolution,
    pub lp: LpProblem,
    /// Output of the `(1, q+1)` rounding.
    pub part1_edges: EdgeSet,
    pub s1: EdgeSet,
    pub s_alg: EdgeSet,
    pub u1: EdgeSet,
    pub jain_edges: EdgeSet,
    pub alpha_used: Q,
    pub lp_value: Q,
    pub total_cost: Q,
    pub checks: CheckLog,
}

fn weighted_cost(inst: &FgcInstance, x: &[Q], set: &EdgeSet) -> Q {
    set.iter()
        .fold(Q::zero(), |acc, e| acc + &inst.edges[e].cost * &x[e])
}

fn min_one(v: Q) -> Q {
    if v > Q::one() {
        Q::one()
    } else {
        v
    }
}

/// Two-cover instance on the cuts where `U1` and `2x` on `U2` fall short of
/// `q+1`; links are the safe edges in index order.
fn safe_cover_instance(inst: &FgcInstance, x: &[Q], u1: &EdgeSet) -> Result<LinkCoverInstance> {
    let base_edges = inst
        .unsafe_edges()
        .iter()
        .map(|e| {
            let ed = &inst.edges[e];
            let capacity = if u1.contains(e) { int(1) } else { int(2) * &x[e] };
            BaseEdge { u: ed.u, v: ed.v, capacity }
        })
        .collect();
    let links = inst
        .safe_edges()
        .iter()
        .map(|e| {
            let ed = &inst.edges[e];
            Link { u: ed.u, v: ed.v, cost: ed.cost.clone() }
        })
        .collect();
    LinkCoverInstance::new(inst.n, base_edges, links, int(inst.q as i64 + 1), 2)
}

/// Every cut of the family keeps half a unit of safe `x` after losing any
/// one safe edge.
fn check_safe_slack(inst: &FgcInstance, x: &[Q], cover: &LinkCoverInstance) -> Result<()> {
    let safe = inst.safe_edges();
    let half = ratio(1, 2);
    let family = small_cut_family(&cover.base_graph(), &cover.lambda, 2)?;
    for cut in &family.cuts {
        let crossing: Vec<usize> = safe
            .iter()
            .filter(|&e| cut.side.separates(inst.edges[e].u, inst.edges[e].v))
            .collect();
        let total = crossing.iter().fold(Q::zero(), |acc, &e| acc + &x[e]);
        for f in safe.iter() {
            let rest = if crossing.contains(&f) { &total - &x[f] } else { total.clone() };
            if rest < half {
                return Err(Error::invariant(format!(
                    "cut {} keeps only {} of safe x without edge {f}",
                    cut.side, rest
                )));
            }
        }
    }
    Ok(())
}

/// Each cut of `f` has two safe edges, or one safe edge and `q+1` edges of
/// `jain`, or no safe edge and `q+2` edges of `part1`.
fn check_decomposition(
    inst: &FgcInstance,
    f: &EdgeSet,
    part1: &EdgeSet,
    jain: &EdgeSet,
) -> Result<()> {
    for side in canonical_sides(inst.n) {
        let crossing = |set: &EdgeSet| {
            set.iter()
                .filter(|&e| side.separates(inst.edges[e].u, inst.edges[e].v))
                .count() as u32
        };
        let safe = crossing(&f.iter().filter(|&e| inst.is_safe(e)).collect());
        let ok = match safe {
            0 => crossing(part1) >= inst.q + 2,
            1 => crossing(jain) > inst.q,
            _ => true,
        };
        if !ok {
            return Err(Error::invariant(format!(
                "cut {side} with {safe} safe edges is not covered by the expected part"
            )));
        }
    }
    Ok(())
}

/// Rounds the strengthened LP: `(1, q+1)` rounding, a 2-cover of the
/// remaining small cuts with safe edges, and iterative rounding on unsafe
/// edges for the cuts the 2-cover crosses at most once.
pub fn solve_2q(
    inst: &FgcInstance,
    two_cover_solver: TwoCoverSolver<'_>,
) -> Result<(EdgeSet, Fgc2qSolveReport)> {
    if inst.p != 2 {
        return Err(Error::InvalidInput(format!("expected p = 2, got {}", inst.p)));
    }
    check_instance_feasible(inst)?;
    let (x_star, lp) = solve_lp_2q(inst)?;
    let x = &x_star.values;
    let q = inst.q;
    let mut checks = CheckLog::default();

    let part1 = round_1q(inst, q + 1, x)?;
    checks.extend("part 1: ", part1.checks.clone());
    let part1_edges = part1.edges.clone();
    let wider = inst.with_params(1, q + 1)?;
    if !feasible_fgc(&wider, &part1_edges)? {
        return Err(Error::invariant("part 1 is not (1,q+1)-feasible"));
    }

    let safe = inst.safe_edges();
    let s1: EdgeSet = safe.iter().filter(|&e| x[e] >= ratio(1, 4)).collect();
    let u1 = unsafe_at_least(inst, x, &ratio(1, 2));
    let u2 = inst.unsafe_edges().difference(&u1);

    let cover = safe_cover_instance(inst, x, &u1)?;
    check_safe_slack(inst, x, &cover)?;
    let witness: Vec<Q> = safe
        .iter()
        .map(|e| if s1.contains(e) { Q::one() } else { min_one(int(4) * &x[e]) })
        .collect();
    if !cover_lp_feasible(&cover, &witness)? {
        return Err(Error::invariant("(1 on S1, 4x on S2) does not 2-cover the family"));
    }
    let links = match two_cover_solver(&cover) {
        Ok(l) => l,
        Err(Error::Infeasible(m)) => return Err(Error::TwoCoverInfeasible(m)),
        Err(e) => return Err(e),
    };
    if links.iter().any(|l| l >= cover.links.len()) || !feasible_cover(&cover, &links)? {
        return Err(Error::TwoCoverInfeasible("solver output is not a 2-cover".into()));
    }
    let s_alg: EdgeSet = links.iter().map(|l| safe.as_slice()[l]).collect();
    let cover_cost = cover.cost(&links);
    let cover_lp = lp_cover_value(&cover, 2)?;
    let alpha_used = if cover_cost.is_zero() {
        Q::one()
    } else if cover_lp.is_zero() {
        return Err(Error::invariant("2-cover of positive cost against a zero LP"));
    } else {
        let a = &cover_cost / &cover_lp;
        if a < Q::one() {
            Q::one()
        } else {
            a
        }
    };

    let unsafe_list: Vec<usize> = inst.unsafe_edges().iter().collect();
    let fconn = FConnInstance {
        n: inst.n,
        candidates: unsafe_list
            .iter()
            .map(|&e| {
                let ed = &inst.edges[e];
                Candidate { u: ed.u, v: ed.v, cost: ed.cost.clone(), capacity: 1 }
            })
            .collect(),
        preselected: s_alg.iter().map(|e| (inst.edges[e].u, inst.edges[e].v)).collect(),
        k_req: q as u64 + 1,
        fixed: vec![],
    };
    let witness: Vec<Q> = unsafe_list
        .iter()
        .map(|&e| if u1.contains(e) { Q::one() } else { int(2) * &x[e] })
        .collect();
    if !fconn.fractional_feasible(&witness, RoundingMode::Unit)? {
        return Err(Error::invariant("(1 on U1, 2x on U2) is not feasible for the residual"));
    }
    let jain = iterative_round(&fconn, RoundingMode::Unit)?;
    checks.extend("jain: ", jain.checks.clone());
    let jain_edges: EdgeSet = jain.chosen.iter().map(|j| unsafe_list[j]).collect();

    let f = part1_edges.union(&s_alg).union(&jain_edges);
    check_decomposition(inst, &f, &part1_edges, &jain_edges)?;
    if !feasible_fgc(inst, &f)? {
        return Err(Error::invariant("(2,q) rounding produced an infeasible set"));
    }

    let total_cost = inst.cost(&f);
    let all = inst.all_edges();
    checks.le("cost(part 1) <= 7 c(x)", inst.cost(&part1_edges), int(7) * weighted_cost(inst, x, &all));
    checks.le(
        "cost(S_alg) <= 4 alpha c(x on safe)",
        inst.cost(&s_alg),
        int(4) * &alpha_used * weighted_cost(inst, x, &safe),
    );
    checks.le(
        "cost(J) <= 4 c(x on unsafe)",
        inst.cost(&jain_edges),
        int(4) * weighted_cost(inst, x, &u1.union(&u2)),
    );
    checks.le(
        "cost <= (4 alpha + 11) c(x)",
        total_cost.clone(),
        (int(4) * &alpha_used + int(11)) * weighted_cost(inst, x, &all),
    );
    info!(
        "(2,q) solve: lp {} cost {} alpha {} ({} rows)",
        x_star.objective,
        total_cost,
        alpha_used,
        lp.rows.len()
    );
    let report = Fgc2qSolveReport {
        lp_value: x_star.objective.clone(),
        x_star,
        lp,
        part1_edges,
        s1,
        s_alg,
        u1,
        jain_edges,
        alpha_used,
        total_cost,
        checks,
    };
    Ok((f, report))
}

/// `(2, lambda-2)`-FGC instance with base edges as cost-0 unsafe edges
/// (indices `0..m`) followed by the links as safe edges.
pub fn fgc_from_cover(inst: &LinkCoverInstance) -> Result<FgcInstance> {
    if !inst.has_unit_capacities() {
        return Err(Error::InvalidInput("base edges must have unit capacity".into()));
    }
    if !inst.lambda.is_integer() || inst.lambda < int(3) {
        return Err(Error::InvalidInput(format!(
            "threshold must be an integer >= 3, got {}",
            inst.lambda
        )));
    }
    let q = inst.lambda.to_integer();
    let q = u32::try_from(q - 2u32)
        .map_err(|_| Error::InvalidInput("threshold too large".into()))?;
    let mut edges: Vec<FgcEdge> = inst
        .base_edges
        .iter()
        .map(|b| FgcEdge { u: b.u, v: b.v, cost: Q::zero(), kind: EdgeKind::Unsafe })
        .collect();
    edges.extend(
        inst.links
            .iter()
            .map(|l| FgcEdge { u: l.u, v: l.v, cost: l.cost.clone(), kind: EdgeKind::Safe }),
    );
    FgcInstance::new(inst.n, edges, 2, q)
}

/// Solves a unit-capacity 2-cover instance by a `(2, lambda-2)`-FGC solve
/// followed by iterative rounding for the cuts it crosses only once.
pub fn two_cover_via_fgc2q(
    inst: &LinkCoverInstance,
    fgc2q_solver: Fgc2qSolver<'_>,
) -> Result<EdgeSet> {
    let inst = inst.with_multiplicity(2)?;
    let fgc = fgc_from_cover(&inst)?;
    let all_links = EdgeSet::all(inst.links.len());
    if !feasible_cover(&inst, &all_links)? {
        return Err(Error::Infeasible("the full link set is not a 2-cover".into()));
    }
    let m = inst.base_edges.len();
    let lambda = inst.lambda.to_integer();
    let lambda = u64::try_from(lambda).map_err(|_| Error::InvalidInput("threshold".into()))?;

    let chosen = fgc2q_solver(&fgc)?;
    if !feasible_fgc(&fgc, &chosen)? {
        return Err(Error::invariant("(2,q) solver output is infeasible"));
    }
    let s_alg: EdgeSet = chosen.iter().filter(|&e| e >= m).collect();

    let cand_edges: Vec<usize> = (0..fgc.edges.len()).filter(|&e| !s_alg.contains(e)).collect();
    let fconn = FConnInstance {
        n: inst.n,
        candidates: cand_edges
            .iter()
            .map(|&e| {
                let ed = &fgc.edges[e];
                Candidate { u: ed.u, v: ed.v, cost: ed.cost.clone(), capacity: 1 }
            })
            .collect(),
        preselected: s_alg.iter().map(|e| (fgc.edges[e].u, fgc.edges[e].v)).collect(),
        k_req: lambda,
        fixed: vec![],
    };
    let none = vec![false; cand_edges.len()];
    for side in canonical_sides(inst.n) {
        if fconn.residual(side, &none, RoundingMode::Unit) == 0 {
            continue;
        }
        let crosses = |e: usize| side.separates(fgc.edges[e].u, fgc.edges[e].v);
        let unsafe_count = (0..m).filter(|&e| crosses(e)).count() as u64;
        let alg_count = s_alg.iter().filter(|&e| crosses(e)).count();
        let spare = cand_edges.iter().any(|&e| e >= m && crosses(e));
        let ok = unsafe_count >= lambda
            || (unsafe_count + 1 == lambda && alg_count == 1 && spare);
        if !ok {
            return Err(Error::invariant(format!(
                "cut {side} has requirement {lambda} with {unsafe_count} base edges \
                 and {alg_count} chosen links"
            )));
        }
    }
    let jain = iterative_round(&fconn, RoundingMode::Unit)?;
    let links: EdgeSet = s_alg
        .iter()
        .chain(jain.chosen.iter().map(|j| cand_edges[j]).filter(|&e| e >= m))
        .map(|e| e - m)
        .collect();
    if !feasible_cover(&inst, &links)? {
        return Err(Error::invariant("reverse reduction produced a set that is not a 2-cover"));
    }
    Ok(links)
}
