//! Line-based text format for instances and solutions.
//!
//! ```text
//! FGC n m p q          then m lines:  E u v cost S|U
//! CAPK n m k           then m lines:  E u v cost cap
//! COVER n m l lambda r then m lines:  E u v cap, then l lines: L u v cost
//! SOL problem cost     then one edge index per line
//! ```
//!
//! `#` starts a comment; blank lines are ignored.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::num::{format_rational, parse_rational, Q};

use super::{
    BaseEdge, CapEcssInstance, CapEdge, EdgeKind, EdgeSet, FgcEdge, FgcInstance, Link,
    LinkCoverInstance,
};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Instance {
    Fgc(FgcInstance),
    Capk(CapEcssInstance),
    Cover(LinkCoverInstance),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Solution {
    pub problem: String,
    pub cost: Q,
    pub edges: EdgeSet,
}

struct Lines<'a> {
    inner: std::iter::Enumerate<std::str::Lines<'a>>,
    last: usize,
}

impl<'a> Lines<'a> {
    fn new(text: &'a str) -> Self {
        Lines {
            inner: text.lines().enumerate(),
            last: 0,
        }
    }

    /// Next non-empty line, with comments stripped, split into tokens.
    fn next_tokens(&mut self) -> Option<(usize, Vec<&'a str>)> {
        for (i, raw) in self.inner.by_ref() {
            let line = raw.split('#').next().unwrap_or("");
            let tokens: Vec<&str> = line.split_whitespace().collect();
            self.last = i + 1;
            if !tokens.is_empty() {
                return Some((i + 1, tokens));
            }
        }
        None
    }

    fn expect(&mut self, what: &str) -> Result<(usize, Vec<&'a str>)> {
        self.next_tokens().ok_or_else(|| Error::Parse {
            line: self.last + 1,
            reason: format!("unexpected end of input, expected {what}"),
        })
    }

    fn finish(&mut self) -> Result<()> {
        match self.next_tokens() {
            Some((line, _)) => Err(Error::Parse {
                line,
                reason: "trailing content after the declared records".into(),
            }),
            None => Ok(()),
        }
    }
}

fn perr(line: usize, reason: impl Into<String>) -> Error {
    Error::Parse {
        line,
        reason: reason.into(),
    }
}

fn arity(line: usize, tokens: &[&str], tag: &str, n: usize) -> Result<()> {
    if tokens[0] != tag {
        return Err(perr(line, format!("expected `{tag}` record, found `{}`", tokens[0])));
    }
    if tokens.len() != n {
        return Err(perr(
            line,
            format!("`{tag}` record needs {} fields, found {}", n - 1, tokens.len() - 1),
        ));
    }
    Ok(())
}

fn uint<T: std::str::FromStr>(line: usize, tok: &str, what: &str) -> Result<T> {
    tok.parse()
        .map_err(|_| perr(line, format!("{what}: `{tok}` is not a nonnegative integer")))
}

fn rational(line: usize, tok: &str, what: &str) -> Result<Q> {
    parse_rational(tok).ok_or_else(|| perr(line, format!("{what}: `{tok}` is not a number")))
}

/// Re-labels validation failures with the line that caused them.
fn at_line<T>(line: usize, r: Result<T>) -> Result<T> {
    r.map_err(|e| match e {
        Error::InvalidInput(reason) => perr(line, reason),
        other => other,
    })
}

pub fn parse(text: &str) -> Result<Instance> {
    let mut lines = Lines::new(text);
    let (hline, header) = lines.expect("a header")?;
    let inst = match header[0] {
        "FGC" => {
            arity(hline, &header, "FGC", 5)?;
            let n: usize = uint(hline, header[1], "n")?;
            let m: usize = uint(hline, header[2], "m")?;
            let p: u32 = uint(hline, header[3], "p")?;
            let q: u32 = uint(hline, header[4], "q")?;
            let mut edges = Vec::with_capacity(m);
            for _ in 0..m {
                let (line, t) = lines.expect("an edge")?;
                arity(line, &t, "E", 5)?;
                let kind = match t[4] {
                    "S" => EdgeKind::Safe,
                    "U" => EdgeKind::Unsafe,
                    other => return Err(perr(line, format!("edge kind `{other}` is not S or U"))),
                };
                edges.push(FgcEdge {
                    u: uint(line, t[1], "u")?,
                    v: uint(line, t[2], "v")?,
                    cost: rational(line, t[3], "cost")?,
                    kind,
                });
            }
            Instance::Fgc(at_line(hline, FgcInstance::new(n, edges, p, q))?)
        }
        "CAPK" => {
            arity(hline, &header, "CAPK", 4)?;
            let n: usize = uint(hline, header[1], "n")?;
            let m: usize = uint(hline, header[2], "m")?;
            let k: u64 = uint(hline, header[3], "k")?;
            let mut edges = Vec::with_capacity(m);
            for _ in 0..m {
                let (line, t) = lines.expect("an edge")?;
                arity(line, &t, "E", 5)?;
                edges.push(CapEdge {
                    u: uint(line, t[1], "u")?,
                    v: uint(line, t[2], "v")?,
                    cost: rational(line, t[3], "cost")?,
                    capacity: uint(line, t[4], "capacity")?,
                });
            }
            Instance::Capk(at_line(hline, CapEcssInstance::new(n, edges, k))?)
        }
        "COVER" => {
            arity(hline, &header, "COVER", 6)?;
            let n: usize = uint(hline, header[1], "n")?;
            let m: usize = uint(hline, header[2], "m")?;
            let l: usize = uint(hline, header[3], "l")?;
            let lambda = rational(hline, header[4], "lambda")?;
            let r: u32 = uint(hline, header[5], "r")?;
            let mut base = Vec::with_capacity(m);
            for _ in 0..m {
                let (line, t) = lines.expect("a base edge")?;
                arity(line, &t, "E", 4)?;
                base.push(BaseEdge {
                    u: uint(line, t[1], "u")?,
                    v: uint(line, t[2], "v")?,
                    capacity: rational(line, t[3], "capacity")?,
                });
            }
            let mut links = Vec::with_capacity(l);
            for _ in 0..l {
                let (line, t) = lines.expect("a link")?;
                arity(line, &t, "L", 4)?;
                links.push(Link {
                    u: uint(line, t[1], "u")?,
                    v: uint(line, t[2], "v")?,
                    cost: rational(line, t[3], "cost")?,
                });
            }
            Instance::Cover(at_line(
                hline,
                LinkCoverInstance::new(n, base, links, lambda, r),
            )?)
        }
        other => return Err(perr(hline, format!("unknown header `{other}`"))),
    };
    lines.finish()?;
    Ok(inst)
}

pub fn serialize(inst: &Instance) -> String {
    let mut out = String::new();
    match inst {
        Instance::Fgc(g) => {
            let _ = writeln!(out, "FGC {} {} {} {}", g.n, g.edges.len(), g.p, g.q);
            for e in &g.edges {
                let kind = match e.kind {
                    EdgeKind::Safe => "S",
                    EdgeKind::Unsafe => "U",
                };
                let _ = writeln!(out, "E {} {} {} {}", e.u, e.v, format_rational(&e.cost), kind);
            }
        }
        Instance::Capk(g) => {
            let _ = writeln!(out, "CAPK {} {} {}", g.n, g.edges.len(), g.k);
            for e in &g.edges {
                let _ = writeln!(
                    out,
                    "E {} {} {} {}",
                    e.u,
                    e.v,
                    format_rational(&e.cost),
                    e.capacity
                );
            }
        }
        Instance::Cover(g) => {
            let _ = writeln!(
                out,
                "COVER {} {} {} {} {}",
                g.n,
                g.base_edges.len(),
                g.links.len(),
                format_rational(&g.lambda),
                g.r
            );
            for e in &g.base_edges {
                let _ = writeln!(out, "E {} {} {}", e.u, e.v, format_rational(&e.capacity));
            }
            for l in &g.links {
                let _ = writeln!(out, "L {} {} {}", l.u, l.v, format_rational(&l.cost));
            }
        }
    }
    out
}

pub fn serialize_solution(sol: &Solution) -> String {
    let mut out = format!("SOL {} {}\n", sol.problem, format_rational(&sol.cost));
    for e in sol.edges.iter() {
        let _ = writeln!(out, "{e}");
    }
    out
}

/// Parses a `SOL` block. Index range checks are left to the caller, which
/// knows the instance.
pub fn parse_solution(text: &str) -> Result<Solution> {
    let mut lines = Lines::new(text);
    let (hline, header) = lines.expect("a SOL header")?;
    arity(hline, &header, "SOL", 3)?;
    let cost = rational(hline, header[2], "cost")?;
    let mut indices = Vec::new();
    while let Some((line, t)) = lines.next_tokens() {
        if t.len() != 1 {
            return Err(perr(line, "expected a single edge index"));
        }
        indices.push(uint::<usize>(line, t[0], "edge index")?);
    }
    let edges = EdgeSet::new(indices, usize::MAX).map_err(|e| perr(hline, e.to_string()))?;
    Ok(Solution {
        problem: header[1].to_string(),
        cost,
        edges,
    })
}
