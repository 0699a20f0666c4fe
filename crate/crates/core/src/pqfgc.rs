//! General (p,q)-FGC: when it can be phrased as Cap-k-ECSS, and an
//! augmentation scheme that raises p one unit at a time by solving a
//! covering integer program over the deficient cuts.

use std::collections::HashSet;

use log::{debug, info};
use num_traits::{One, Signed, Zero};

use crate::cut_oracle::{canonical_sides, VertexSet};
use crate::error::{Error, Result};
use crate::fgc1q::{check_instance_feasible, solve_1q};
use crate::instances::{fgc_cut_ok, feasible_fgc, EdgeSet, FgcInstance};
use crate::num::{int, Q};
use crate::search::{exact_min_cover, Requirement};

/// Capacities that turn `(p,q)`-FGC into Cap-k-ECSS.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CapFormulation {
    pub u_unsafe: u64,
    pub u_safe: u64,
    pub k: u64,
}

/// The formulation with `u_unsafe = p`, `u_safe = p + q`, `k = p(p+q)`, if
/// it is exact: a cut meets the FGC requirement iff its capacity is `>= k`.
/// Checked over every safe/unsafe count up to `p + q`, beyond which both
/// sides hold.
pub fn capkecss_formulation(p: u32, q: u32) -> Option<CapFormulation> {
    let (p64, q64) = (p as u64, q as u64);
    let f = CapFormulation {
        u_unsafe: p64,
        u_safe: p64 + q64,
        k: p64 * (p64 + q64),
    };
    let top = p + q;
    for s in 0..=top {
        for t in 0..=top {
            let capacity = s as u64 * f.u_safe + t as u64 * f.u_unsafe;
            if fgc_cut_ok(s, t, p, q) != (capacity >= f.k) {
                return None;
            }
        }
    }
    Some(f)
}

/// `pq < iq + p` for every `i` in `1..p`.
pub fn check_formulation_inequalities(p: u32, q: u32) -> bool {
    let (p, q) = (p as u64, q as u64);
    (1..p).all(|i| p * q < i * q + p)
}

/// Kind of deficient cut behind a CIP row.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DeficientCut {
    /// `i + q` edges: any one more edge.
    Full,
    /// `i` safe and `j < q` unsafe edges: one safe or `q + 1 - j` unsafe.
    Short { j: u32 },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CipRow {
    pub side: VertexSet,
    pub kind: DeficientCut,
    /// `(candidate, coefficient)` with coefficients in `(0, 1]`.
    pub coeffs: Vec<(usize, Q)>,
    pub rhs: Q,
}

/// `min c.z` subject to `A z >= 1`, `z` in `{0,1}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CipProblem {
    /// Edge index of each candidate in the FGC instance.
    pub edges: Vec<usize>,
    pub costs: Vec<Q>,
    pub rows: Vec<CipRow>,
}

impl CipProblem {
    pub fn satisfied_by(&self, chosen: &EdgeSet) -> bool {
        self.rows.iter().all(|r| {
            let have = r
                .coeffs
                .iter()
                .filter(|(c, _)| chosen.contains(*c))
                .fold(Q::zero(), |acc, (_, a)| acc + a);
            have >= r.rhs
        })
    }

    pub fn cost(&self, chosen: &EdgeSet) -> Q {
        chosen.iter().fold(Q::zero(), |acc, c| acc + &self.costs[c])
    }
}

pub type CipSolver<'a> = &'a dyn Fn(&CipProblem) -> Result<EdgeSet>;

/// Minimum-cost solution by exhaustive search.
pub fn cip_solve_exact(cip: &CipProblem) -> Result<EdgeSet> {
    let reqs = cip
        .rows
        .iter()
        .map(|r| Requirement::Weighted { terms: r.coeffs.clone(), demand: r.rhs.clone() })
        .collect();
    let out = exact_min_cover("candidates", &cip.costs, reqs)?;
    Ok(EdgeSet::from_mask(out.mask))
}

/// Repeatedly takes the candidate with the largest residual coverage per
/// unit cost; zero-cost candidates with positive coverage go first, ties to
/// the lowest index.
pub fn cip_solve_greedy(cip: &CipProblem) -> Result<EdgeSet> {
    let mut residual: Vec<Q> = cip.rows.iter().map(|r| r.rhs.clone()).collect();
    let mut chosen = vec![false; cip.costs.len()];
    loop {
        if residual.iter().all(|r| !r.is_positive()) {
            return Ok(EdgeSet::from_flags(&chosen));
        }
        let mut coverage = vec![Q::zero(); cip.costs.len()];
        for (row, res) in cip.rows.iter().zip(&residual) {
            if !res.is_positive() {
                continue;
            }
            for (c, a) in &row.coeffs {
                if !chosen[*c] {
                    coverage[*c] += if a < res { a.clone() } else { res.clone() };
                }
            }
        }
        // (zero cost, coverage / cost) compared lexicographically
        let mut best: Option<(usize, bool, Q)> = None;
        for (c, cov) in coverage.iter().enumerate() {
            if !cov.is_positive() {
                continue;
            }
            let free = cip.costs[c].is_zero();
            let score = if free { cov.clone() } else { cov / &cip.costs[c] };
            let better = match &best {
                None => true,
                Some((_, bf, bs)) => (free && !bf) || (free == *bf && score > *bs),
            };
            if better {
                best = Some((c, free, score));
            }
        }
        let Some((c, _, _)) = best else {
            return Err(Error::Infeasible("a CIP row cannot be satisfied".into()));
        };
        chosen[c] = true;
        for (row, res) in cip.rows.iter().zip(residual.iter_mut()) {
            if let Some((_, a)) = row.coeffs.iter().find(|(e, _)| *e == c) {
                *res -= a;
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AugmentRound {
    /// The round raises `p` from `i` to `i + 1`.
    pub i: u32,
    pub cip: CipProblem,
    pub added: EdgeSet,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PqReport {
    pub initial: EdgeSet,
    pub rounds: Vec<AugmentRound>,
    pub total_cost: Q,
}

fn crossing_counts(inst: &FgcInstance, h: &[bool], side: VertexSet) -> (u32, u32) {
    let (mut s, mut t) = (0, 0);
    for (e, ed) in inst.edges.iter().enumerate() {
        if h[e] && side.separates(ed.u, ed.v) {
            if inst.is_safe(e) {
                s += 1;
            } else {
                t += 1;
            }
        }
    }
    (s, t)
}

/// CIP over the cuts that are `(i,q)`-feasible but not `(i+1,q)`-feasible
/// under `h`.
pub fn deficient_cip(inst: &FgcInstance, h: &[bool], i: u32) -> Result<CipProblem> {
    let q = inst.q;
    let lower = (i * (i + q)) as u64;
    let upper = 2 * ((i + 1) * (i + q)) as u64;
    let edges: Vec<usize> = (0..inst.edges.len()).filter(|&e| !h[e]).collect();
    let costs = edges.iter().map(|&e| inst.edges[e].cost.clone()).collect();
    let mut rows = Vec::new();
    let mut seen = HashSet::new();
    for side in canonical_sides(inst.n) {
        let (s, t) = crossing_counts(inst, h, side);
        let capacity = (s * (i + q) + t * i) as u64;
        if capacity < lower {
            return Err(Error::invariant(format!("cut {side} is below the (i,q) requirement")));
        }
        let ok = fgc_cut_ok(s, t, i + 1, q);
        if capacity >= upper {
            if !ok {
                return Err(Error::invariant(format!(
                    "cut {side} with capacity {capacity} >= {upper} is deficient"
                )));
            }
            continue;
        }
        if ok {
            continue;
        }
        let kind = if s + t == i + q {
            DeficientCut::Full
        } else if s == i && t < q {
            DeficientCut::Short { j: t }
        } else {
            return Err(Error::invariant(format!(
                "deficient cut {side} with {s} safe and {t} unsafe edges has no row type"
            )));
        };
        let a = match kind {
            DeficientCut::Full => Q::one(),
            DeficientCut::Short { j } => int((q + 1 - j) as i64),
        };
        let coeffs: Vec<(usize, Q)> = edges
            .iter()
            .enumerate()
            .filter(|(_, &e)| side.separates(inst.edges[e].u, inst.edges[e].v))
            .map(|(c, &e)| {
                let coef = if inst.is_safe(e) { Q::one() } else { Q::one() / &a };
                (c, coef)
            })
            .collect();
        if seen.insert((kind, coeffs.clone())) {
            rows.push(CipRow { side, kind, coeffs, rhs: Q::one() });
        }
    }
    Ok(CipProblem { edges, costs, rows })
}

/// `(1,q)` solution, then `p - 1` CIP augmentation rounds.
pub fn pq_fgc_augment(inst: &FgcInstance, cip_solver: CipSolver<'_>) -> Result<(EdgeSet, PqReport)> {
    check_instance_feasible(inst)?;
    let (initial, _) = solve_1q(&inst.with_params(1, inst.q)?)?;
    let mut h = initial.flags(inst.edges.len());
    let mut rounds = Vec::new();
    for i in 1..inst.p {
        let cip = deficient_cip(inst, &h, i)?;
        let picked = if cip.rows.is_empty() {
            EdgeSet::empty()
        } else {
            cip_solver(&cip)?
        };
        if picked.iter().any(|c| c >= cip.edges.len()) || !cip.satisfied_by(&picked) {
            return Err(Error::invariant(format!("round {i}: CIP solution misses a row")));
        }
        let added: EdgeSet = picked.iter().map(|c| cip.edges[c]).collect();
        for e in added.iter() {
            h[e] = true;
        }
        let chosen = EdgeSet::from_flags(&h);
        if !feasible_fgc(&inst.with_params(i + 1, inst.q)?, &chosen)? {
            return Err(Error::invariant(format!("round {i}: not ({},{})-feasible", i + 1, inst.q)));
        }
        debug!("round {i}: {} rows, added {:?}", cip.rows.len(), added.as_slice());
        rounds.push(AugmentRound { i, cip, added });
    }
    let edges = EdgeSet::from_flags(&h);
    let total_cost = inst.cost(&edges);
    info!("(p,q) augment: cost {total_cost} after {} rounds", rounds.len());
    Ok((edges, PqReport { initial, rounds, total_cost }))
}
