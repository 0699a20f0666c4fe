//! Problem dispatch shared by `solve`, `verify` and `bench`.

use clap::ValueEnum;

use netdesign_core::capk::solve_capk;
use netdesign_core::checks::CheckLog;
use netdesign_core::cut_oracle::VertexSet;
use netdesign_core::fgc1q::solve_1q;
use netdesign_core::fgc2q::{solve_2q, two_cover_via_fgc2q};
use netdesign_core::instances::{
    capk_violation, cover_violation, fgc_violation, CapEcssInstance, EdgeSet, FgcInstance,
    Instance, LinkCoverInstance,
};
use netdesign_core::lp::LpProblem;
use netdesign_core::num::{to_f64, zero};
use netdesign_core::oracle::{opt_capk, opt_cover, opt_fgc};
use netdesign_core::pqfgc::{cip_solve_exact, cip_solve_greedy, pq_fgc_augment};
use netdesign_core::small_cut_cover::{exact_two_cover, lp_cover_value, wgmv_cover};
use netdesign_core::{Error, Result, Q};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, ValueEnum)]
pub enum Problem {
    Fgc1q,
    Fgc2q,
    Capk,
    Cover,
    #[value(name = "cover2-via-fgc")]
    Cover2ViaFgc,
    Pqfgc,
}

impl Problem {
    pub fn name(self) -> &'static str {
        match self {
            Problem::Fgc1q => "fgc1q",
            Problem::Fgc2q => "fgc2q",
            Problem::Capk => "capk",
            Problem::Cover => "cover",
            Problem::Cover2ViaFgc => "cover2-via-fgc",
            Problem::Pqfgc => "pqfgc",
        }
    }

    pub fn parse(name: &str) -> Option<Self> {
        Problem::from_str(name, false).ok()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CipKind {
    Exact,
    Greedy,
}

/// (1,q)/(2,q) solver plugged into the 2-cover reduction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Plugin {
    Approx,
    Oracle,
}

#[derive(Debug, Clone, Copy)]
pub struct Options {
    pub cip: CipKind,
    pub plugin: Plugin,
}

impl Default for Options {
    fn default() -> Self {
        Options {
            cip: CipKind::Exact,
            plugin: Plugin::Approx,
        }
    }
}

pub struct Outcome {
    pub edges: EdgeSet,
    pub cost: Q,
    pub lp_value: Option<Q>,
    pub restarts: usize,
    pub checks: CheckLog,
    pub lp: Option<LpProblem>,
}

impl Outcome {
    fn new(edges: EdgeSet, cost: Q) -> Self {
        Outcome {
            edges,
            cost,
            lp_value: None,
            restarts: 0,
            checks: CheckLog::default(),
            lp: None,
        }
    }
}

fn fgc(problem: Problem, inst: &Instance) -> Result<&FgcInstance> {
    match inst {
        Instance::Fgc(g) => Ok(g),
        _ => Err(mismatch(problem, "an FGC")),
    }
}

fn capk(problem: Problem, inst: &Instance) -> Result<&CapEcssInstance> {
    match inst {
        Instance::Capk(g) => Ok(g),
        _ => Err(mismatch(problem, "a CAPK")),
    }
}

fn cover(problem: Problem, inst: &Instance) -> Result<&LinkCoverInstance> {
    match inst {
        Instance::Cover(g) => Ok(g),
        _ => Err(mismatch(problem, "a COVER")),
    }
}

fn mismatch(problem: Problem, header: &str) -> Error {
    Error::InvalidInput(format!("problem {} needs {header} instance", problem.name()))
}

pub fn size(inst: &Instance) -> (usize, usize) {
    match inst {
        Instance::Fgc(g) => (g.n, g.edges.len()),
        Instance::Capk(g) => (g.n, g.edges.len()),
        Instance::Cover(g) => (g.n, g.links.len()),
    }
}

pub fn solve(problem: Problem, inst: &Instance, opts: Options) -> Result<Outcome> {
    match problem {
        Problem::Fgc1q => {
            let (edges, report) = solve_1q(fgc(problem, inst)?)?;
            Ok(Outcome {
                edges,
                cost: report.total_cost,
                lp_value: Some(report.lp_value),
                restarts: report.restarts,
                checks: report.checks,
                lp: Some(report.lp),
            })
        }
        Problem::Fgc2q => {
            let (edges, report) = solve_2q(fgc(problem, inst)?, &exact_two_cover)?;
            Ok(Outcome {
                edges,
                cost: report.total_cost,
                lp_value: Some(report.lp_value),
                restarts: 0,
                checks: report.checks,
                lp: Some(report.lp),
            })
        }
        Problem::Capk => {
            let (edges, report) = solve_capk(capk(problem, inst)?)?;
            Ok(Outcome {
                edges,
                cost: report.total_cost,
                lp_value: Some(report.lp_value),
                restarts: report.restarts,
                checks: report.ledger,
                lp: Some(report.lp),
            })
        }
        Problem::Cover => {
            let g = cover(problem, inst)?;
            if g.r == 1 {
                let out = wgmv_cover(g)?;
                let mut o = Outcome::new(out.links, out.cost);
                o.lp_value = Some(out.lp_value);
                Ok(o)
            } else {
                let links = exact_two_cover(g)?;
                let mut o = Outcome::new(links.clone(), g.cost(&links));
                o.lp_value = Some(lp_cover_value(g, 2)?);
                Ok(o)
            }
        }
        Problem::Cover2ViaFgc => {
            let g = cover(problem, inst)?.with_multiplicity(2)?;
            let links = match opts.plugin {
                Plugin::Approx => two_cover_via_fgc2q(&g, &|f| {
                    solve_2q(f, &exact_two_cover).map(|(s, _)| s)
                })?,
                Plugin::Oracle => two_cover_via_fgc2q(&g, &|f| Ok(opt_fgc(f)?.witness))?,
            };
            let mut o = Outcome::new(links.clone(), g.cost(&links));
            o.lp_value = Some(lp_cover_value(&g, 2)?);
            Ok(o)
        }
        Problem::Pqfgc => {
            let g = fgc(problem, inst)?;
            let (edges, report) = match opts.cip {
                CipKind::Exact => pq_fgc_augment(g, &cip_solve_exact)?,
                CipKind::Greedy => pq_fgc_augment(g, &cip_solve_greedy)?,
            };
            Ok(Outcome::new(edges, report.total_cost))
        }
    }
}

pub fn oracle(problem: Problem, inst: &Instance) -> Result<Q> {
    Ok(match problem {
        Problem::Fgc1q | Problem::Fgc2q | Problem::Pqfgc => opt_fgc(fgc(problem, inst)?)?.cost,
        Problem::Capk => opt_capk(capk(problem, inst)?)?.cost,
        Problem::Cover => {
            let g = cover(problem, inst)?;
            opt_cover(g, g.r)?.cost
        }
        Problem::Cover2ViaFgc => opt_cover(cover(problem, inst)?, 2)?.cost,
    })
}

/// Cost of `edges` and the first violated cut, if any. `problem` only
/// matters for cover instances, where `cover2-via-fgc` asks for two links.
pub fn check(
    problem: Option<Problem>,
    inst: &Instance,
    edges: &EdgeSet,
) -> Result<(Q, Option<VertexSet>)> {
    match inst {
        Instance::Fgc(g) => Ok((g.cost(edges), fgc_violation(g, edges)?)),
        Instance::Capk(g) => Ok((g.cost(edges), capk_violation(g, edges)?)),
        Instance::Cover(g) => {
            let g = if problem == Some(Problem::Cover2ViaFgc) {
                g.with_multiplicity(2)?
            } else {
                g.clone()
            };
            Ok((g.cost(edges), cover_violation(&g, edges)?))
        }
    }
}

/// `alg / opt`; 1 when both are zero, `None` when only `opt` is.
pub fn ratio(alg: &Q, opt: &Q) -> Option<f64> {
    if *opt == zero() {
        (*alg == zero()).then_some(1.0)
    } else {
        Some(to_f64(&(alg / opt)))
    }
}
