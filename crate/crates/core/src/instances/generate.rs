//! Seeded random instance generators. Every generated graph is connected.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::num::{int, Q};

use super::{
    BaseEdge, CapEcssInstance, CapEdge, EdgeKind, FgcEdge, FgcInstance, Link, LinkCoverInstance,
};

/// `m` vertex pairs: a random spanning tree followed by uniform extra pairs.
fn connected_pairs(rng: &mut ChaCha8Rng, n: usize, m: usize) -> Result<Vec<(usize, usize)>> {
    if n < 2 {
        return Err(Error::InvalidInput("need at least two vertices".into()));
    }
    if m + 1 < n {
        return Err(Error::InvalidInput(format!(
            "{m} edges cannot connect {n} vertices"
        )));
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    let mut pairs = Vec::with_capacity(m);
    for i in 1..n {
        let j = rng.gen_range(0..i);
        pairs.push((order[j].min(order[i]), order[j].max(order[i])));
    }
    while pairs.len() < m {
        let u = rng.gen_range(0..n);
        let v = rng.gen_range(0..n);
        if u != v {
            pairs.push((u.min(v), u.max(v)));
        }
    }
    Ok(pairs)
}

fn cost(rng: &mut ChaCha8Rng, cost_max: u32) -> Q {
    if cost_max == 0 {
        int(0)
    } else {
        int(rng.gen_range(1..=cost_max) as i64)
    }
}

pub fn gen_fgc(
    seed: u64,
    n: usize,
    m: usize,
    p: u32,
    q: u32,
    cost_max: u32,
    safe_fraction: f64,
) -> Result<FgcInstance> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pairs = connected_pairs(&mut rng, n, m)?;
    let edges = pairs
        .into_iter()
        .map(|(u, v)| {
            let c = cost(&mut rng, cost_max);
            let kind = if rng.gen_bool(safe_fraction.clamp(0.0, 1.0)) {
                EdgeKind::Safe
            } else {
                EdgeKind::Unsafe
            };
            FgcEdge { u, v, cost: c, kind }
        })
        .collect();
    FgcInstance::new(n, edges, p, q)
}

pub fn gen_capk(seed: u64, n: usize, m: usize, k: u64, cost_max: u32) -> Result<CapEcssInstance> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pairs = connected_pairs(&mut rng, n, m)?;
    let edges = pairs
        .into_iter()
        .map(|(u, v)| {
            let c = cost(&mut rng, cost_max);
            CapEdge {
                u,
                v,
                cost: c,
                capacity: rng.gen_range(1..=k.max(1)),
            }
        })
        .collect();
    CapEcssInstance::new(n, edges, k)
}

/// Connected base graph with integer capacities in `[1, cap_max]` plus `l`
/// random links.
#[allow(clippy::too_many_arguments)]
pub fn gen_cover(
    seed: u64,
    n: usize,
    m: usize,
    l: usize,
    lambda: Q,
    r: u32,
    cap_max: u32,
    cost_max: u32,
) -> Result<LinkCoverInstance> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pairs = connected_pairs(&mut rng, n, m)?;
    let base = pairs
        .into_iter()
        .map(|(u, v)| BaseEdge {
            u,
            v,
            capacity: int(rng.gen_range(1..=cap_max.max(1)) as i64),
        })
        .collect();
    let mut links = Vec::with_capacity(l);
    while links.len() < l {
        let u = rng.gen_range(0..n);
        let v = rng.gen_range(0..n);
        if u != v {
            let c = cost(&mut rng, cost_max);
            links.push(Link {
                u: u.min(v),
                v: u.max(v),
                cost: c,
            });
        }
    }
    LinkCoverInstance::new(n, base, links, lambda, r)
}
