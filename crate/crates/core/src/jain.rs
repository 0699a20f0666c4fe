//! Iterative rounding for f-connectivity with requirement
//! `f(S) = k` when at most one preselected edge crosses `S`, else 0,
//! minus contributions of already fixed edges.

use std::collections::HashSet;

use log::{debug, info};
use num_traits::{One, Zero};

use crate::checks::CheckLog;
use crate::cut_oracle::{canonical_sides, check_enumerable, VertexSet};
use crate::error::{Error, Result};
use crate::instances::EdgeSet;
use crate::lp::{solve_vertex, LpProblem, Row};
use crate::num::{format_rational, int, ratio, Q};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Candidate {
    pub u: usize,
    pub v: usize,
    pub cost: Q,
    pub capacity: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FConnInstance {
    pub n: usize,
    pub candidates: Vec<Candidate>,
    /// Endpoints of the preselected set `E0`.
    pub preselected: Vec<(usize, usize)>,
    pub k_req: u64,
    /// Edges outside the candidate set that already count towards each cut.
    pub fixed: Vec<(usize, usize, u64)>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RoundingMode {
    /// Every candidate contributes 1; a round without a value `>= 1/2` is an error.
    Unit,
    /// Candidates contribute their capacity. Rounds without a value `>= 1/2`
    /// fall back to `>= 1/(2 u_max)`, then to the single largest value.
    Capacitated,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RoundLog {
    pub lp_value: Q,
    pub max_value: Q,
    pub threshold: Q,
    pub fixed: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JainOutcome {
    pub chosen: EdgeSet,
    pub cost: Q,
    /// Optimum of the first-round LP.
    pub lp_value: Q,
    pub rounds: Vec<RoundLog>,
    pub checks: CheckLog,
}

impl JainOutcome {
    pub fn fallback_rounds(&self) -> usize {
        self.rounds.iter().filter(|r| r.threshold < ratio(1, 2)).count()
    }
}

impl FConnInstance {
    pub fn requirement(&self, side: VertexSet) -> u64 {
        let hits = self
            .preselected
            .iter()
            .filter(|(u, v)| side.separates(*u, *v))
            .count();
        if hits <= 1 {
            self.k_req
        } else {
            0
        }
    }

    fn base(&self, side: VertexSet) -> u64 {
        self.fixed
            .iter()
            .filter(|(u, v, _)| side.separates(*u, *v))
            .map(|t| t.2)
            .sum()
    }

    fn contribution(&self, e: usize, mode: RoundingMode) -> u64 {
        match mode {
            RoundingMode::Unit => 1,
            RoundingMode::Capacitated => self.candidates[e].capacity,
        }
    }

    /// Requirement left on `side` once `chosen` candidates are added.
    pub fn residual(&self, side: VertexSet, chosen: &[bool], mode: RoundingMode) -> u64 {
        let mut have = self.base(side);
        for (e, c) in self.candidates.iter().enumerate() {
            if chosen[e] && side.separates(c.u, c.v) {
                have += self.contribution(e, mode);
            }
        }
        self.requirement(side).saturating_sub(have)
    }

    /// Whether `x` (one value per candidate) satisfies every residual row.
    pub fn fractional_feasible(&self, x: &[Q], mode: RoundingMode) -> Result<bool> {
        check_enumerable(self.n)?;
        let none = vec![false; self.candidates.len()];
        for side in canonical_sides(self.n) {
            let need = self.residual(side, &none, mode);
            if need == 0 {
                continue;
            }
            let have = self
                .candidates
                .iter()
                .enumerate()
                .filter(|(_, c)| side.separates(c.u, c.v))
                .fold(Q::zero(), |acc, (e, _)| {
                    acc + int(self.contribution(e, mode) as i64) * &x[e]
                });
            if have < int(need as i64) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn cost(&self, set: &EdgeSet) -> Q {
        set.iter()
            .fold(Q::zero(), |acc, e| acc + &self.candidates[e].cost)
    }
}

pub fn iterative_round(inst: &FConnInstance, mode: RoundingMode) -> Result<JainOutcome> {
    check_enumerable(inst.n)?;
    let m = inst.candidates.len();
    let sides: Vec<VertexSet> = canonical_sides(inst.n).collect();
    let mut chosen = vec![false; m];
    let mut rounds: Vec<RoundLog> = Vec::new();
    let mut first_lp: Option<Q> = None;
    let u_max = inst.candidates.iter().map(|c| c.capacity).max().unwrap_or(1).max(1);
    let mut prev_total: Option<u64> = None;

    loop {
        let needs: Vec<(VertexSet, u64)> = sides
            .iter()
            .map(|&s| (s, inst.residual(s, &chosen, mode)))
            .filter(|(_, r)| *r > 0)
            .collect();
        let total: u64 = needs.iter().map(|t| t.1).sum();
        if let Some(p) = prev_total {
            if total >= p {
                return Err(Error::invariant("total residual did not decrease"));
            }
        }
        prev_total = Some(total);
        if needs.is_empty() {
            break;
        }
        // only candidates crossing some deficient cut take part
        let vars: Vec<usize> = (0..m)
            .filter(|&e| !chosen[e])
            .filter(|&e| {
                let c = &inst.candidates[e];
                needs.iter().any(|(s, _)| s.separates(c.u, c.v))
            })
            .collect();
        let mut lp = LpProblem::new(vars.iter().map(|&e| inst.candidates[e].cost.clone()).collect());
        let mut seen = HashSet::new();
        for (side, need) in &needs {
            let coeffs: Vec<(usize, Q)> = vars
                .iter()
                .enumerate()
                .filter(|(_, &e)| side.separates(inst.candidates[e].u, inst.candidates[e].v))
                .map(|(j, &e)| (j, int(inst.contribution(e, mode) as i64)))
                .collect();
            let row = Row::new(coeffs, int(*need as i64));
            if seen.insert(row.clone()) {
                lp.push(row);
            }
        }
        let sol = solve_vertex(&lp)?;
        if first_lp.is_none() {
            first_lp = Some(sol.objective.clone());
        }
        let max_value = sol.values.iter().max().cloned().unwrap_or_else(Q::zero);
        let half = ratio(1, 2);
        let mut threshold = half.clone();
        let mut pick: Vec<usize> = pick_at_least(&sol.values, &threshold);
        if pick.is_empty() {
            match mode {
                RoundingMode::Unit => {
                    return Err(Error::RoundingStuck {
                        max_value: format_rational(&max_value),
                    })
                }
                RoundingMode::Capacitated => {
                    threshold = Q::one() / int(2 * u_max as i64);
                    pick = pick_at_least(&sol.values, &threshold);
                    if pick.is_empty() {
                        threshold = max_value.clone();
                        pick = sol
                            .values
                            .iter()
                            .position(|v| *v == max_value)
                            .into_iter()
                            .collect();
                    }
                    info!(
                        "capacitated rounding fell back to threshold {}",
                        format_rational(&threshold)
                    );
                }
            }
        }
        let fixed: Vec<usize> = pick.into_iter().map(|j| vars[j]).collect();
        for &e in &fixed {
            chosen[e] = true;
        }
        debug!(
            "rounding: lp {} max {} fixed {:?}",
            sol.objective, max_value, fixed
        );
        rounds.push(RoundLog {
            lp_value: sol.objective,
            max_value,
            threshold,
            fixed,
        });
    }

    let chosen = EdgeSet::from_flags(&chosen);
    let cost = inst.cost(&chosen);
    let lp_value = first_lp.unwrap_or_else(Q::zero);
    let mut checks = CheckLog::default();
    if mode == RoundingMode::Unit || rounds.iter().all(|r| r.threshold == ratio(1, 2)) {
        checks.le("cost <= 2 lp", cost.clone(), int(2) * &lp_value);
    }
    Ok(JainOutcome {
        chosen,
        cost,
        lp_value,
        rounds,
        checks,
    })
}

fn pick_at_least(values: &[Q], threshold: &Q) -> Vec<usize> {
    values
        .iter()
        .enumerate()
        .filter(|(_, v)| *v >= threshold && !v.is_zero())
        .map(|(j, _)| j)
        .collect()
}

/// Exhaustive check of weak F-supermodularity: `f` vanishes outside the
/// family, and every pair of members uncrosses one way or the other.
pub fn check_weakly_f_supermodular(
    n: usize,
    in_family: impl Fn(VertexSet) -> bool,
    f: impl Fn(VertexSet) -> i64,
) -> bool {
    if n > 12 {
        return false;
    }
    let full = VertexSet::full(n).0;
    let proper = |s: u64| s != 0 && s != full;
    let member = |s: u64| proper(s) && in_family(VertexSet(s));
    let mut fam = Vec::new();
    for s in 1..full {
        let vs = VertexSet(s);
        if in_family(vs) {
            fam.push(s);
        } else if f(vs) != 0 {
            return false;
        }
    }
    let val = |s: u64| f(VertexSet(s));
    for &a in &fam {
        for &b in &fam {
            let fa_fb = val(a) + val(b);
            let diff = member(a & !b) && member(b & !a) && fa_fb <= val(a & !b) + val(b & !a);
            let meet = member(a & b) && member(a | b) && fa_fb <= val(a & b) + val(a | b);
            if !diff && !meet {
                return false;
            }
        }
    }
    true
}
