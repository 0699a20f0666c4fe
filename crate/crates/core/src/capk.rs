//! Cap-k-ECSS: capacity buckets rounded by repeated small-cut covers,
//! finished by iterative rounding on the smallest bucket. A knapsack-cover
//! row found violated during rounding is added to the LP and the rounding
//! restarts from scratch.

use log::{debug, info};
use num_traits::{FromPrimitive, One, Signed, Zero};

use crate::checks::CheckLog;
use crate::cut_oracle::{
    canonical_sides, check_enumerable, enumerate_cuts_at_most, VertexSet, WeightedGraph,
};
use crate::error::{Error, Result};
use crate::instances::{feasible_capk, BaseEdge, CapEcssInstance, EdgeSet, Link, LinkCoverInstance};
use crate::jain::{iterative_round, Candidate, FConnInstance, RoundingMode};
use crate::lp::{
    kci_row, separate_with_kci, violation, CuttingPlane, FractionalSolution, LpProblem, Row,
    RowTag, Separation,
};
use crate::num::{ceil_log2, clamp_scaled, int, ratio, Q};
use crate::small_cut_cover::{cover_lp_feasible, wgmv_cover};

/// Largest accepted connectivity requirement.
pub const MAX_K: u64 = 1 << 16;
pub const DEFAULT_RESTART_LIMIT: usize = 10_000;

/// `E_cur` at the start of rounding and the nested capacity classes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Buckets {
    pub t: u32,
    pub e_cur: EdgeSet,
    /// `e_j[j]` for `j = 0..=t`; `e_j[0]` is empty.
    pub e_j: Vec<EdgeSet>,
}

impl Buckets {
    pub fn new(inst: &CapEcssInstance, x: &[Q]) -> Self {
        let t = ceil_log2(inst.k);
        let half = ratio(1, 2);
        let e_cur = (0..inst.edges.len()).filter(|&e| x[e] >= half).collect();
        let e_j = (0..=t)
            .map(|j| {
                if j == 0 {
                    return EdgeSet::empty();
                }
                (0..inst.edges.len())
                    .filter(|&e| x[e] < half && inst.edges[e].capacity <= 1u64 << j)
                    .collect()
            })
            .collect();
        Buckets { t, e_cur, e_j }
    }

    /// The `i`-th bucket, `E_{T-i+1} - E_{T-i}`.
    pub fn bucket(&self, i: u32) -> EdgeSet {
        let hi = (self.t + 1 - i) as usize;
        self.e_j[hi].difference(&self.e_j[hi - 1])
    }
}

/// Minimum-cut row, then knapsack-cover rows relative to `a` on cuts of
/// `u.x` weight at most `2k`.
pub fn separate_capk(inst: &CapEcssInstance, x: &[Q], a: &EdgeSet) -> Result<Separation> {
    separate_with_kci(
        inst.n,
        &edge_caps(inst),
        &int(inst.k as i64),
        x,
        a,
        RowTag::BaseCut,
        RowTag::Kci,
    )
}

fn edge_caps(inst: &CapEcssInstance) -> Vec<(usize, usize, Q)> {
    inst.edges
        .iter()
        .map(|e| (e.u, e.v, int(e.capacity as i64)))
        .collect()
}

fn seed_rows(cp: &mut CuttingPlane, inst: &CapEcssInstance) -> Result<()> {
    let caps = edge_caps(inst);
    let k = int(inst.k as i64);
    for side in canonical_sides(inst.n).filter(|s| s.len() == 1 || s.len() + 1 == inst.n) {
        cp.add_row(kci_row(&caps, &k, side, &EdgeSet::empty()).to_row(), RowTag::Initial)?;
    }
    Ok(())
}

/// Optimum of the capacity LP without knapsack-cover rows.
pub fn plain_lp_capk(inst: &CapEcssInstance) -> Result<Q> {
    check_enumerable(inst.n)?;
    let mut cp = CuttingPlane::new(inst.costs())?;
    let sol = cp.run(|x| separate_capk(inst, x, &EdgeSet::empty()))?;
    Ok(sol.objective)
}

/// Capacity LP strengthened by knapsack-cover rows. On each cut of `u.x`
/// weight at most `2k`, the candidate sets `A` are the crossing edges with
/// `x_e` at or above each distinct crossing value.
pub fn kci_lp_capk(inst: &CapEcssInstance) -> Result<FractionalSolution> {
    check_enumerable(inst.n)?;
    let caps = edge_caps(inst);
    let k = int(inst.k as i64);
    let mut cp = CuttingPlane::new(inst.costs())?;
    seed_rows(&mut cp, inst)?;
    cp.run(|x| {
        let sep = separate_capk(inst, x, &EdgeSet::empty())?;
        if sep != Separation::Feasible {
            return Ok(sep);
        }
        let mut g = WeightedGraph::new(inst.n);
        for ((u, v, cap), xe) in caps.iter().zip(x) {
            g.add_edge(*u, *v, cap * xe);
        }
        for cut in enumerate_cuts_at_most(&g, &(int(2) * &k))? {
            let crossing: Vec<usize> =
                (0..caps.len()).filter(|&e| cut.side.separates(caps[e].0, caps[e].1)).collect();
            let mut levels: Vec<&Q> = crossing.iter().map(|&e| &x[e]).collect();
            levels.sort();
            levels.dedup();
            for theta in levels.into_iter().rev() {
                let a: EdgeSet = crossing.iter().copied().filter(|&e| x[e] >= *theta).collect();
                let row = kci_row(&caps, &k, cut.side, &a).to_row();
                if violation(&row, x).is_positive() {
                    return Ok(Separation::Violated { row, tag: RowTag::Kci });
                }
            }
        }
        Ok(Separation::Feasible)
    })
}

/// Result of one rounding attempt.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RoundCapk {
    Done(CapkRounding),
    /// A knapsack-cover row relative to the current `E_cur` that `x` violates.
    Restart(Row),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CapkRounding {
    pub edges: EdgeSet,
    pub buckets: Buckets,
    /// One entry per spend: cost paid against its bound.
    pub ledger: CheckLog,
    /// Invariant checkpoints passed, in order.
    pub invariants: Vec<String>,
}

struct Rounder<'a> {
    inst: &'a CapEcssInstance,
    x: &'a [Q],
    k: Q,
    sides: Vec<VertexSet>,
    cur: Vec<bool>,
    ledger: CheckLog,
    invariants: Vec<String>,
}

impl Rounder<'_> {
    fn crosses(&self, e: usize, side: VertexSet) -> bool {
        side.separates(self.inst.edges[e].u, self.inst.edges[e].v)
    }

    fn cap(&self, e: usize) -> Q {
        int(self.inst.edges[e].capacity as i64)
    }

    /// `u(E_cur ∩ δS) + sum over frac ∩ δS of 2 u x`.
    fn level(&self, side: VertexSet, frac: &EdgeSet) -> Q {
        let mut total = Q::zero();
        for e in 0..self.inst.edges.len() {
            if !self.crosses(e, side) {
                continue;
            }
            if self.cur[e] {
                total += self.cap(e);
            } else if frac.contains(e) {
                total += int(2) * self.cap(e) * &self.x[e];
            }
        }
        total
    }

    fn small_cuts(&self, frac: &EdgeSet, threshold: &Q) -> Vec<VertexSet> {
        self.sides
            .iter()
            .copied()
            .filter(|&s| self.level(s, frac) < *threshold)
            .collect()
    }

    fn cur_set(&self) -> EdgeSet {
        EdgeSet::from_flags(&self.cur)
    }

    fn check_level(&mut self, name: String, frac: &EdgeSet, bound: &Q) -> Result<()> {
        for &s in &self.sides {
            let v = self.level(s, frac);
            if v < *bound {
                return Err(Error::invariant(format!("{name}: cut {s} at {v} < {bound}")));
            }
        }
        self.invariants.push(name);
        Ok(())
    }

    fn check_disjoint(&self, name: &str, set: &EdgeSet) -> Result<()> {
        if set.iter().any(|e| self.cur[e]) {
            return Err(Error::invariant(format!("{name}: E_cur meets the fractional class")));
        }
        Ok(())
    }

    fn violated_kci(&self, cuts: &[VertexSet]) -> Option<Row> {
        let caps = edge_caps(self.inst);
        let a = self.cur_set();
        cuts.iter()
            .map(|&s| kci_row(&caps, &self.k, s, &a).to_row())
            .find(|row| violation(row, self.x).is_positive())
    }

    /// Covers the cuts below `threshold` with edges from `links`, each link
    /// weighted by `scale * x` (clamped at 1) in the witness. Returns the
    /// added edges, or a violated row if `verify_kci` finds one.
    fn cover(
        &mut self,
        label: String,
        frac: &EdgeSet,
        threshold: &Q,
        links: &EdgeSet,
        scale: &Q,
        verify_kci: bool,
    ) -> Result<std::result::Result<EdgeSet, Row>> {
        let cuts = self.small_cuts(frac, threshold);
        if cuts.is_empty() {
            self.ledger.le(label, Q::zero(), Q::zero());
            return Ok(Ok(EdgeSet::empty()));
        }
        if verify_kci {
            if let Some(row) = self.violated_kci(&cuts) {
                return Ok(Err(row));
            }
        }
        let links: Vec<usize> = links.iter().filter(|&e| !self.cur[e]).collect();
        let base_edges = (0..self.inst.edges.len())
            .filter_map(|e| {
                let ed = &self.inst.edges[e];
                let capacity = if self.cur[e] {
                    self.cap(e)
                } else if frac.contains(e) {
                    int(2) * self.cap(e) * &self.x[e]
                } else {
                    return None;
                };
                Some(BaseEdge { u: ed.u, v: ed.v, capacity })
            })
            .collect();
        let link_list = links
            .iter()
            .map(|&e| {
                let ed = &self.inst.edges[e];
                Link { u: ed.u, v: ed.v, cost: ed.cost.clone() }
            })
            .collect();
        let cover = LinkCoverInstance::new(self.inst.n, base_edges, link_list, threshold.clone(), 1)?;
        let witness: Vec<Q> = links.iter().map(|&e| clamp_scaled(&self.x[e], scale)).collect();
        if !cover_lp_feasible(&cover, &witness)? {
            return Err(Error::invariant(format!("{label}: scaled x does not cover the small cuts")));
        }
        let out = wgmv_cover(&cover)?;
        let witness_cost = links
            .iter()
            .zip(&witness)
            .fold(Q::zero(), |acc, (&e, w)| acc + &self.inst.edges[e].cost * w);
        self.ledger.le(label, out.cost.clone(), int(5) * witness_cost);
        let added: EdgeSet = out.links.iter().map(|l| links[l]).collect();
        for e in added.iter() {
            self.cur[e] = true;
        }
        debug!("cover added {:?} for {} small cuts", added.as_slice(), cuts.len());
        Ok(Ok(added))
    }

    fn weighted(&self, set: &EdgeSet) -> Q {
        set.iter()
            .fold(Q::zero(), |acc, e| acc + &self.inst.edges[e].cost * &self.x[e])
    }
}

macro_rules! restart_on {
    ($e:expr) => {
        match $e? {
            Ok(v) => v,
            Err(row) => return Ok(RoundCapk::Restart(row)),
        }
    };
}

/// One pass of the bucketed rounding on `x`.
pub fn round_capk(inst: &CapEcssInstance, x: &[Q]) -> Result<RoundCapk> {
    check_enumerable(inst.n)?;
    let buckets = Buckets::new(inst, x);
    let t = buckets.t;
    let k = int(inst.k as i64);
    let mut r = Rounder {
        inst,
        x,
        k: k.clone(),
        sides: canonical_sides(inst.n).collect(),
        cur: buckets.e_cur.flags(inst.edges.len()),
        ledger: CheckLog::default(),
        invariants: Vec::new(),
    };
    let two = int(2);
    let all = EdgeSet::all(inst.edges.len());
    r.ledger.le(
        "initial E_cur <= 2 c(x)",
        inst.cost(&buckets.e_cur),
        int(2) * r.weighted(&buckets.e_cur),
    );

    if t >= 2 {
        let frac = &buckets.e_j[t as usize - 1];
        let links = all.difference(frac);
        let first_small = r.small_cuts(frac, &k);
        let first = restart_on!(r.cover("iteration 1 pass 1".into(), frac, &k, &links, &two, true));
        let second_small = r.small_cuts(frac, &k);
        for s in &second_small {
            if !first_small.contains(s) || !first.iter().any(|e| r.crosses(e, *s)) {
                return Err(Error::invariant(format!("iteration 1: cut {s} missed by pass 1")));
            }
        }
        let second = restart_on!(r.cover("iteration 1 pass 2".into(), frac, &k, &links, &two, true));
        for s in &second_small {
            if !second.iter().any(|e| r.crosses(e, *s)) {
                return Err(Error::invariant(format!("iteration 1: cut {s} missed by pass 2")));
            }
        }
        r.check_disjoint("iteration 1: invariant 3", frac)?;
        r.check_level("iteration 1: invariant 3".into(), frac, &k)?;
    }

    for i in 2..t {
        let step = 1u64 << (t - i);
        let hi = &buckets.e_j[(t - i + 1) as usize];
        let lo = &buckets.e_j[(t - i) as usize];
        r.check_disjoint(&format!("iteration {i}: invariant 1"), hi)?;
        r.check_level(format!("iteration {i}: invariant 1"), hi, &k)?;

        let bucket = buckets.bucket(i);
        let l_hat = (inst.k as i64 - 2 * step as i64).div_euclid(step as i64);
        let mut phase1 = Q::zero();
        let mut harmonic = Q::zero();
        for l in 1..=l_hat.max(0) {
            let threshold = int(l * step as i64);
            let rest = &k - &threshold;
            let scale = &two * int(2 * step as i64) / &rest;
            harmonic += Q::one() / &rest;
            let before = inst.cost(&r.cur_set());
            restart_on!(r.cover(
                format!("iteration {i} phase 1 l={l}"),
                lo,
                &threshold,
                &bucket,
                &scale,
                false
            ));
            phase1 += inst.cost(&r.cur_set()) - before;
            r.check_level(format!("iteration {i} phase 1 l={l}: threshold"), lo, &threshold)?;
        }
        if l_hat >= 1 {
            r.ledger.le(
                format!("iteration {i} phase 1 total"),
                phase1,
                int(10) * r.weighted(&bucket) * int(2 * step as i64) * &harmonic,
            );
            let (kf, sf) = (inst.k as f64, step as f64);
            let integral = 1.0 / (2.0 * sf) + ((kf - sf).ln() - (kf - l_hat as f64 * sf).ln()) / sf;
            let integral = Q::from_f64(integral).ok_or_else(|| Error::invariant("harmonic bound"))?;
            r.ledger.le(format!("iteration {i} phase 1 harmonic sum"), harmonic, integral);
        }
        let inv2 = &k - int(3 * step as i64);
        r.check_level(format!("iteration {i}: invariant 2"), lo, &inv2)?;

        let links = all.difference(lo);
        for pass in 1..=3 {
            restart_on!(r.cover(format!("iteration {i} phase 2 pass {pass}"), lo, &k, &links, &two, true));
        }
        r.check_disjoint(&format!("iteration {i}: invariant 3"), lo)?;
        r.check_level(format!("iteration {i}: invariant 3"), lo, &k)?;
    }

    // the last class: E_1, or everything outside E_cur when k = 1
    let last = if t == 0 {
        all.difference(&buckets.e_cur)
    } else {
        buckets.e_j[1].clone()
    };
    r.check_disjoint("iteration T: start", &last)?;
    r.check_level("iteration T: start".into(), &last, &k)?;
    let cand: Vec<usize> = last.iter().collect();
    let fconn = FConnInstance {
        n: inst.n,
        candidates: cand
            .iter()
            .map(|&e| {
                let ed = &inst.edges[e];
                Candidate { u: ed.u, v: ed.v, cost: ed.cost.clone(), capacity: ed.capacity }
            })
            .collect(),
        preselected: vec![],
        k_req: inst.k,
        fixed: r
            .cur_set()
            .iter()
            .map(|e| (inst.edges[e].u, inst.edges[e].v, inst.edges[e].capacity))
            .collect(),
    };
    let witness: Vec<Q> = cand.iter().map(|&e| clamp_scaled(&x[e], &two)).collect();
    if !fconn.fractional_feasible(&witness, RoundingMode::Capacitated)? {
        return Err(Error::invariant("iteration T: 2x on the last class is not feasible"));
    }
    let jain = iterative_round(&fconn, RoundingMode::Capacitated)?;
    let u_max = cand.iter().map(|&e| inst.edges[e].capacity).max().unwrap_or(1).max(1);
    let floor = Q::one() / int(2 * u_max as i64);
    if jain.rounds.iter().all(|rd| rd.threshold >= floor) {
        let witness_cost = cand
            .iter()
            .zip(&witness)
            .fold(Q::zero(), |acc, (&e, w)| acc + &inst.edges[e].cost * w);
        r.ledger.le(
            "iteration T: rounding <= 2 u_max c(2x)",
            jain.cost.clone(),
            int(2 * u_max as i64) * witness_cost,
        );
    }
    let finish: EdgeSet = jain.chosen.iter().map(|j| cand[j]).collect();
    let edges = r.cur_set().union(&finish);
    if !feasible_capk(inst, &edges)? {
        return Err(Error::invariant("rounding produced an infeasible set"));
    }
    r.invariants.push("final: feasible".into());
    Ok(RoundCapk::Done(CapkRounding {
        edges,
        buckets,
        ledger: r.ledger,
        invariants: r.invariants,
    }))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CapkSolveReport {
    pub x_star: FractionalSolution,
    pub lp: LpProblem,
    pub buckets: Buckets,
    pub ledger: CheckLog,
    pub invariants: Vec<String>,
    pub restarts: usize,
    pub lp_value: Q,
    pub total_cost: Q,
}

pub fn solve_capk(inst: &CapEcssInstance) -> Result<(EdgeSet, CapkSolveReport)> {
    solve_capk_with(inst, DEFAULT_RESTART_LIMIT)
}

pub fn solve_capk_with(
    inst: &CapEcssInstance,
    restart_limit: usize,
) -> Result<(EdgeSet, CapkSolveReport)> {
    check_enumerable(inst.n)?;
    if inst.k > MAX_K {
        return Err(Error::InvalidInput(format!("k = {} exceeds {MAX_K}", inst.k)));
    }
    if !feasible_capk(inst, &EdgeSet::all(inst.edges.len()))? {
        return Err(Error::Infeasible(format!("the full edge set is not {}-connected", inst.k)));
    }
    let mut cp = CuttingPlane::new(inst.costs())?;
    seed_rows(&mut cp, inst)?;
    let separate = |x: &[Q]| separate_capk(inst, x, &EdgeSet::empty());
    let mut x_star = cp.run(separate)?;
    let mut restarts = 0;
    loop {
        match round_capk(inst, &x_star.values)? {
            RoundCapk::Done(out) => {
                let total_cost = inst.cost(&out.edges);
                info!(
                    "cap-k solve: lp {} cost {} after {restarts} restarts",
                    x_star.objective, total_cost
                );
                let report = CapkSolveReport {
                    lp_value: x_star.objective.clone(),
                    lp: LpProblem {
                        objective: inst.costs(),
                        rows: cp.rows().to_vec(),
                    },
                    x_star,
                    buckets: out.buckets,
                    ledger: out.ledger,
                    invariants: out.invariants,
                    restarts,
                    total_cost,
                };
                return Ok((out.edges, report));
            }
            RoundCapk::Restart(row) => {
                if restarts >= restart_limit {
                    return Err(Error::RestartLimitExceeded(restarts));
                }
                restarts += 1;
                debug!("restart {restarts}: {row:?}");
                cp.add_row(row, RowTag::Restart)?;
                x_star = cp.run(separate)?;
            }
        }
    }
}
