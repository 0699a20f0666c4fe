//! Seeded benchmark suites with oracle ratios.

use std::fmt::Write as _;
use std::time::Instant;

use netdesign_core::instances::{gen_capk, gen_cover, gen_fgc, Instance};
use netdesign_core::num::{format_rational, int};
use netdesign_core::{Error, Result};

use crate::run::{self, Options, Problem};

pub const HEADER: &str = "problem,seed,n,m,param,lp,alg,opt,ratio,ms";

pub struct Row {
    pub problem: Problem,
    pub seed: u64,
    pub ratio: Option<f64>,
    line: String,
}

/// Seed-derived instance of the given kind, with its parameter label.
pub fn instance(problem: Problem, seed: u64) -> Result<(Instance, String)> {
    let s = seed as usize;
    Ok(match problem {
        Problem::Fgc1q => {
            let n = 3 + s % 6;
            let q = 1 + (seed % 3) as u32;
            let g = gen_fgc(seed, n, (n + 2 + s % 7).min(16), 1, q, 10, 0.4)?;
            (Instance::Fgc(g), format!("q={q}"))
        }
        Problem::Fgc2q => {
            let n = 3 + s % 5;
            let q = 1 + (seed % 2) as u32;
            let g = gen_fgc(seed, n, (2 * n + s % 5).min(16), 2, q, 10, 0.5)?;
            (Instance::Fgc(g), format!("q={q}"))
        }
        Problem::Capk => {
            let n = 3 + s % 6;
            let k = 1 + seed * 7 % 16;
            let g = gen_capk(seed, n, (2 * n + s % 5).min(16), k, 10)?;
            (Instance::Capk(g), format!("k={k}"))
        }
        Problem::Cover => {
            let n = 3 + s % 7;
            let lambda = 2 + (seed % 4) as i64;
            let g = gen_cover(seed, n, n + 1, 4 + s % 9, int(lambda), 1, 3, 10)?;
            (Instance::Cover(g), format!("lambda={lambda}"))
        }
        Problem::Cover2ViaFgc => {
            let n = 3 + s % 5;
            let lambda = 3 + (seed % 2) as i64;
            let g = gen_cover(seed, n, n + s % 4, 5 + s % 6, int(lambda), 2, 1, 10)?;
            (Instance::Cover(g), format!("lambda={lambda}"))
        }
        Problem::Pqfgc => {
            let n = 3 + s % 5;
            let p = 1 + (seed % 3) as u32;
            let q = 1 + (seed / 3 % 2) as u32;
            let g = gen_fgc(seed, n, (3 * n).min(18), p, q, 10, 0.5)?;
            (Instance::Fgc(g), format!("p={p};q={q}"))
        }
    })
}

/// Runs one seed; `None` if the generated instance is infeasible.
pub fn run_seed(problem: Problem, seed: u64, opts: Options, timing: bool) -> Result<Option<Row>> {
    let (inst, param) = instance(problem, seed)?;
    let start = Instant::now();
    let out = match run::solve(problem, &inst, opts) {
        Err(Error::Infeasible(_)) => return Ok(None),
        other => other?,
    };
    let ms = if timing { start.elapsed().as_secs_f64() * 1e3 } else { 0.0 };
    let opt = run::oracle(problem, &inst)?;
    let ratio = run::ratio(&out.cost, &opt);
    let (n, m) = run::size(&inst);
    let line = format!(
        "{},{seed},{n},{m},{param},{},{},{},{},{ms:.3}",
        problem.name(),
        out.lp_value.as_ref().map(format_rational).unwrap_or_default(),
        format_rational(&out.cost),
        format_rational(&opt),
        ratio.map(|r| format!("{r:.6}")).unwrap_or_else(|| "inf".into()),
    );
    Ok(Some(Row {
        problem,
        seed,
        ratio,
        line,
    }))
}

/// Collects `count` feasible rows per problem, trying seeds upward from
/// `first_seed`. Rows come back sorted by (problem, seed).
pub fn run_suite(
    problems: &[Problem],
    count: usize,
    first_seed: u64,
    opts: Options,
    timing: bool,
) -> Result<Vec<Row>> {
    let mut rows = Vec::new();
    for &problem in problems {
        let mut found = 0;
        let mut seed = first_seed;
        while found < count && seed < first_seed + 50 * count as u64 {
            if let Some(row) = run_seed(problem, seed, opts, timing)? {
                rows.push(row);
                found += 1;
            }
            seed += 1;
        }
    }
    rows.sort_by(|a, b| (a.problem.name(), a.seed).cmp(&(b.problem.name(), b.seed)));
    Ok(rows)
}

pub fn csv(rows: &[Row]) -> String {
    let mut out = format!("{HEADER}\n");
    for r in rows {
        out.push_str(&r.line);
        out.push('\n');
    }
    out
}

/// Min, median and max ratio per problem, as CSV.
pub fn summary(rows: &[Row]) -> String {
    let mut out = String::from("problem,count,min,median,max\n");
    let mut problems: Vec<Problem> = rows.iter().map(|r| r.problem).collect();
    problems.dedup();
    for p in problems {
        let mut ratios: Vec<f64> = rows
            .iter()
            .filter(|r| r.problem == p)
            .map(|r| r.ratio.unwrap_or(f64::INFINITY))
            .collect();
        ratios.sort_by(f64::total_cmp);
        let _ = writeln!(
            out,
            "{},{},{:.6},{:.6},{:.6}",
            p.name(),
            ratios.len(),
            ratios[0],
            ratios[ratios.len() / 2],
            ratios[ratios.len() - 1]
        );
    }
    out
}
