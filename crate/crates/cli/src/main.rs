//! `netdesign`: solve, generate, verify and benchmark network design
//! instances.
//!
//! Exit codes: 0 success, 1 failed check or internal error, 2 infeasible,
//! 3 instance too large for exhaustive enumeration, 64 usage or input error.

mod bench;
mod run;

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use netdesign_core::checks::CheckLog;
use netdesign_core::instances::{
    gen_capk, gen_cover, gen_fgc, parse, parse_solution, serialize, serialize_solution, EdgeSet,
    Instance, Solution,
};
use netdesign_core::num::{format_rational, parse_rational};
use netdesign_core::Error;

use run::{CipKind, Options, Plugin, Problem};

#[derive(Parser)]
#[command(name = "netdesign", version, about = "Network design approximation algorithms")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve an instance and print a SOL block.
    Solve(SolveArgs),
    /// Write a seeded random instance.
    Gen(GenArgs),
    /// Check a SOL block against an instance.
    Verify(VerifyArgs),
    /// Run seeded suites and print a ratio CSV.
    Bench(BenchArgs),
}

#[derive(Args)]
struct SolveArgs {
    #[arg(long, value_enum)]
    problem: Problem,
    #[arg(long)]
    input: PathBuf,
    /// Compute the exact optimum and the approximation ratio.
    #[arg(long)]
    oracle: bool,
    /// Print the run record as JSON instead of text.
    #[arg(long)]
    json: bool,
    /// Also write the JSON run record to this file.
    #[arg(long)]
    record: Option<PathBuf>,
    /// Solve twice, require identical output, and re-verify feasibility.
    #[arg(long)]
    seed_check: bool,
    #[arg(long, value_enum, default_value = "exact")]
    cip: CipKind,
    /// FGC solver used by cover2-via-fgc.
    #[arg(long, value_enum, default_value = "approx")]
    plugin: Plugin,
    /// Write the final LP in CPLEX LP format.
    #[arg(long)]
    dump_lp: Option<PathBuf>,
}

#[derive(Args)]
struct GenArgs {
    #[arg(long, value_enum)]
    problem: Problem,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long, default_value_t = 6)]
    n: usize,
    /// Edge count (base edges for cover); defaults to 2n.
    #[arg(long)]
    m: Option<usize>,
    #[arg(long)]
    p: Option<u32>,
    #[arg(long)]
    q: Option<u32>,
    #[arg(long, default_value_t = 4)]
    k: u64,
    #[arg(long, default_value_t = 8)]
    links: usize,
    #[arg(long, default_value = "3")]
    lambda: String,
    #[arg(long)]
    r: Option<u32>,
    #[arg(long)]
    cap_max: Option<u32>,
    #[arg(long, default_value_t = 10)]
    cost_max: u32,
    #[arg(long, default_value_t = 0.5)]
    safe_fraction: f64,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    solution: PathBuf,
}

#[derive(Args)]
struct BenchArgs {
    /// Problems to run (repeatable); all by default.
    #[arg(long, value_enum)]
    problem: Vec<Problem>,
    /// Feasible instances per problem.
    #[arg(long, default_value_t = 20)]
    count: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Fill the ms column with wall time; otherwise it is 0.
    #[arg(long)]
    timing: bool,
    #[arg(long, value_enum, default_value = "exact")]
    cip: CipKind,
    #[arg(long)]
    output: Option<PathBuf>,
}

struct Fail {
    code: u8,
    msg: String,
}

impl Fail {
    fn usage(msg: impl Into<String>) -> Self {
        Fail {
            code: 64,
            msg: msg.into(),
        }
    }

    fn check(msg: impl Into<String>) -> Self {
        Fail {
            code: 1,
            msg: msg.into(),
        }
    }
}

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Infeasible(_) | Error::LpInfeasible => 2,
            Error::InstanceTooLarge { .. } | Error::TooManyEdges { .. } => 3,
            Error::Parse { .. } | Error::InvalidInput(_) => 64,
            _ => 1,
        };
        Fail {
            code,
            msg: e.to_string(),
        }
    }
}

type CliResult = Result<(), Fail>;

#[derive(Serialize)]
struct CheckRecord {
    name: String,
    lhs: String,
    rhs: String,
    holds: bool,
}

#[derive(Serialize)]
struct RunRecord {
    schema: u32,
    problem: String,
    instance: String,
    n: usize,
    m: usize,
    lp_value: Option<String>,
    alg_cost: String,
    oracle_cost: Option<String>,
    ratio: Option<f64>,
    wall_ms: f64,
    restarts: usize,
    edges: Vec<usize>,
    checks: Vec<CheckRecord>,
}

fn read(path: &Path) -> Result<String, Fail> {
    fs::read_to_string(path).map_err(|e| Fail::usage(format!("{}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> CliResult {
    fs::write(path, text).map_err(|e| Fail::check(format!("{}: {e}", path.display())))
}

fn load(path: &Path) -> Result<Instance, Fail> {
    parse(&read(path)?).map_err(|e| Fail::usage(format!("{}: {e}", path.display())))
}

fn check_records(log: &CheckLog) -> Vec<CheckRecord> {
    log.checks
        .iter()
        .map(|c| CheckRecord {
            name: c.name.clone(),
            lhs: format_rational(&c.lhs),
            rhs: format_rational(&c.rhs),
            holds: c.holds(),
        })
        .collect()
}

fn text_record(r: &RunRecord, ledger_title: &str) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "problem   {}", r.problem);
    let _ = writeln!(out, "instance  {} (n={}, m={})", r.instance, r.n, r.m);
    if let Some(lp) = &r.lp_value {
        let _ = writeln!(out, "lp        {lp}");
    }
    let _ = writeln!(out, "cost      {}", r.alg_cost);
    if let Some(opt) = &r.oracle_cost {
        let _ = writeln!(out, "oracle    {opt}");
        match r.ratio {
            Some(x) => {
                let _ = writeln!(out, "ratio     {x:?}");
            }
            None => {
                let _ = writeln!(out, "ratio     inf");
            }
        }
    }
    let _ = writeln!(out, "restarts  {}", r.restarts);
    let _ = writeln!(out, "time      {:.3} ms", r.wall_ms);
    if !r.checks.is_empty() {
        let w = r.checks.iter().map(|c| c.name.len()).max().unwrap_or(0);
        let _ = writeln!(out, "{ledger_title}");
        for c in &r.checks {
            let status = if c.holds { "ok" } else { "FAIL" };
            let _ = writeln!(out, "  {:<w$}  {:>12} <= {:<12}  {status}", c.name, c.lhs, c.rhs);
        }
    }
    out
}

fn cmd_solve(a: SolveArgs) -> CliResult {
    let inst = load(&a.input)?;
    let opts = Options {
        cip: a.cip,
        plugin: a.plugin,
    };
    let start = Instant::now();
    let out = run::solve(a.problem, &inst, opts)?;
    let wall_ms = start.elapsed().as_secs_f64() * 1e3;

    if a.seed_check {
        let again = run::solve(a.problem, &inst, opts)?;
        if again.edges != out.edges || again.cost != out.cost {
            return Err(Fail::check("seed check: second run returned a different solution"));
        }
        let (cost, violated) = run::check(Some(a.problem), &inst, &out.edges)?;
        if let Some(side) = violated {
            return Err(Fail::check(format!("seed check: output violates cut {side}")));
        }
        if cost != out.cost {
            return Err(Fail::check("seed check: reported cost differs from edge costs"));
        }
    }

    let opt = if a.oracle {
        Some(run::oracle(a.problem, &inst)?)
    } else {
        None
    };
    if let (Some(path), Some(lp)) = (&a.dump_lp, &out.lp) {
        write(path, &lp.to_lp_text())?;
    }

    let (n, m) = run::size(&inst);
    let record = RunRecord {
        schema: 1,
        problem: a.problem.name().into(),
        instance: a.input.display().to_string(),
        n,
        m,
        lp_value: out.lp_value.as_ref().map(format_rational),
        alg_cost: format_rational(&out.cost),
        oracle_cost: opt.as_ref().map(format_rational),
        ratio: opt.as_ref().and_then(|o| run::ratio(&out.cost, o)),
        wall_ms,
        restarts: out.restarts,
        edges: out.edges.as_slice().to_vec(),
        checks: check_records(&out.checks),
    };
    let json = serde_json::to_string_pretty(&record).expect("record serializes");
    if let Some(path) = &a.record {
        write(path, &format!("{json}\n"))?;
    }

    print!(
        "{}",
        serialize_solution(&Solution {
            problem: a.problem.name().into(),
            cost: out.cost,
            edges: out.edges,
        })
    );
    if a.json {
        eprintln!("{json}");
    } else {
        let title = if a.problem == Problem::Capk {
            "cost ledger"
        } else {
            "checks"
        };
        eprint!("{}", text_record(&record, title));
    }
    Ok(())
}

fn cmd_gen(a: GenArgs) -> CliResult {
    let m = a.m.unwrap_or(2 * a.n);
    let lambda = parse_rational(&a.lambda)
        .ok_or_else(|| Fail::usage(format!("--lambda: `{}` is not a number", a.lambda)))?;
    let fixed_p = |want: u32| -> Result<u32, Fail> {
        match a.p {
            Some(p) if p != want => Err(Fail::usage(format!(
                "--p {p} conflicts with problem {}",
                a.problem.name()
            ))),
            _ => Ok(want),
        }
    };
    let inst = match a.problem {
        Problem::Fgc1q | Problem::Fgc2q | Problem::Pqfgc => {
            let (p, q_default) = match a.problem {
                Problem::Fgc1q => (fixed_p(1)?, 2),
                Problem::Fgc2q => (fixed_p(2)?, 1),
                _ => (a.p.unwrap_or(2), 1),
            };
            let q = a.q.unwrap_or(q_default);
            Instance::Fgc(gen_fgc(a.seed, a.n, m, p, q, a.cost_max, a.safe_fraction)?)
        }
        Problem::Capk => Instance::Capk(gen_capk(a.seed, a.n, m, a.k, a.cost_max)?),
        Problem::Cover => Instance::Cover(gen_cover(
            a.seed,
            a.n,
            m,
            a.links,
            lambda,
            a.r.unwrap_or(1),
            a.cap_max.unwrap_or(2),
            a.cost_max,
        )?),
        Problem::Cover2ViaFgc => Instance::Cover(gen_cover(
            a.seed,
            a.n,
            m,
            a.links,
            lambda,
            a.r.unwrap_or(2),
            a.cap_max.unwrap_or(1),
            a.cost_max,
        )?),
    };
    let text = serialize(&inst);
    match &a.output {
        Some(path) => write(path, &text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn cmd_verify(a: VerifyArgs) -> CliResult {
    let inst = load(&a.input)?;
    let sol = parse_solution(&read(&a.solution)?)
        .map_err(|e| Fail::usage(format!("{}: {e}", a.solution.display())))?;
    let (_, m) = run::size(&inst);
    let edges = EdgeSet::new(sol.edges.as_slice().to_vec(), m)
        .map_err(|e| Fail::check(format!("FAIL: {e}")))?;
    let (cost, violated) = run::check(Problem::parse(&sol.problem), &inst, &edges)?;
    if let Some(side) = violated {
        return Err(Fail::check(format!("FAIL: cut {side} is violated")));
    }
    if cost != sol.cost {
        return Err(Fail::check(format!(
            "FAIL: declared cost {} but the edges cost {}",
            format_rational(&sol.cost),
            format_rational(&cost)
        )));
    }
    println!("OK cost {}", format_rational(&cost));
    Ok(())
}

fn cmd_bench(a: BenchArgs) -> CliResult {
    let problems = if a.problem.is_empty() {
        vec![
            Problem::Fgc1q,
            Problem::Fgc2q,
            Problem::Capk,
            Problem::Cover,
            Problem::Cover2ViaFgc,
            Problem::Pqfgc,
        ]
    } else {
        a.problem.clone()
    };
    let opts = Options {
        cip: a.cip,
        plugin: Plugin::Approx,
    };
    let rows = bench::run_suite(&problems, a.count, a.seed, opts, a.timing)?;
    let csv = bench::csv(&rows);
    match &a.output {
        Some(path) => write(path, &csv)?,
        None => print!("{csv}"),
    }
    if !rows.is_empty() {
        eprint!("{}", bench::summary(&rows));
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(64)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let result = match cli.command {
        Command::Solve(a) => cmd_solve(a),
        Command::Gen(a) => cmd_gen(a),
        Command::Verify(a) => cmd_verify(a),
        Command::Bench(a) => cmd_bench(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("netdesign: {}", f.msg);
            ExitCode::from(f.code)
        }
    }
}
