use num_traits::{Signed, Zero};

use crate::cut_oracle::{enumerate_cuts_at_most, min_cut, VertexSet, WeightedGraph};
use crate::error::Result;
use crate::instances::EdgeSet;
use crate::num::{int, Q};

use super::{violation, Row, RowTag, Separation};

/// Knapsack-cover row for cut `side` with respect to the edge set `a`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KciRow {
    pub side: VertexSet,
    pub a: EdgeSet,
    pub demand: Q,
    /// `(edge, min(u_e, demand))` for crossing edges outside `a`, zeros dropped.
    pub coeffs: Vec<(usize, Q)>,
}

impl KciRow {
    pub fn to_row(&self) -> Row {
        Row::new(self.coeffs.iter().cloned(), self.demand.clone())
    }
}

/// `edges[e] = (u, v, capacity)`; `k` is the cut requirement.
///
/// An edge given capacity 0 never appears in the row, which is how callers
/// model an edge that has been removed from the graph.
pub fn kci_row(edges: &[(usize, usize, Q)], k: &Q, side: VertexSet, a: &EdgeSet) -> KciRow {
    let mut covered = Q::zero();
    for e in a.iter() {
        let (u, v, cap) = &edges[e];
        if side.separates(*u, *v) {
            covered += cap;
        }
    }
    let demand = {
        let d = k - covered;
        if d.is_positive() {
            d
        } else {
            Q::zero()
        }
    };
    let mut coeffs = Vec::new();
    if demand.is_positive() {
        for (e, (u, v, cap)) in edges.iter().enumerate() {
            if a.contains(e) || !side.separates(*u, *v) {
                continue;
            }
            let c = if *cap < demand { cap.clone() } else { demand.clone() };
            if c.is_positive() {
                coeffs.push((e, c));
            }
        }
    }
    KciRow {
        side,
        a: a.clone(),
        demand,
        coeffs,
    }
}

/// Capacity-row check by global min cut, then knapsack-cover rows relative
/// to `a` on every cut whose `u.x` weight is at most `2k`.
pub fn separate_with_kci(
    n: usize,
    edges: &[(usize, usize, Q)],
    k: &Q,
    x: &[Q],
    a: &EdgeSet,
    base_tag: RowTag,
    kci_tag: RowTag,
) -> Result<Separation> {
    let mut g = WeightedGraph::new(n);
    for ((u, v, cap), xe) in edges.iter().zip(x) {
        if !xe.is_zero() && !cap.is_zero() {
            g.add_edge(*u, *v, cap * xe);
        }
    }
    let (value, cut) = min_cut(&g)?;
    if value < *k {
        let row = kci_row(edges, k, cut.side, &EdgeSet::empty()).to_row();
        return Ok(Separation::Violated { row, tag: base_tag });
    }
    for cut in enumerate_cuts_at_most(&g, &(int(2) * k))? {
        let row = kci_row(edges, k, cut.side, a).to_row();
        if violation(&row, x).is_positive() {
            return Ok(Separation::Violated { row, tag: kci_tag });
        }
    }
    Ok(Separation::Feasible)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num::int;

    fn gap(k: i64) -> Vec<(usize, usize, Q)> {
        vec![(0, 1, int(k - 1)), (0, 1, int(k))]
    }

    #[test]
    fn empty_a_is_the_capacity_row() {
        let row = kci_row(&gap(5), &int(5), VertexSet(0b10), &EdgeSet::empty());
        assert_eq!(row.demand, int(5));
        assert_eq!(row.coeffs, vec![(0, int(4)), (1, int(5))]);
    }

    #[test]
    fn gap_instance_with_cheap_edge_in_a() {
        let a = EdgeSet::new(vec![0], 2).unwrap();
        let row = kci_row(&gap(5), &int(5), VertexSet(0b10), &a);
        assert_eq!(row.demand, int(1));
        assert_eq!(row.coeffs, vec![(1, int(1))]);
    }

    #[test]
    fn satisfied_by_a_gives_empty_row() {
        let a = EdgeSet::new(vec![0, 1], 2).unwrap();
        let row = kci_row(&gap(5), &int(5), VertexSet(0b10), &a);
        assert_eq!(row.demand, int(0));
        assert!(row.coeffs.is_empty());
    }

    #[test]
    fn capacities_above_k_are_clamped() {
        let edges = vec![(0, 1, int(9)), (1, 2, int(2))];
        let row = kci_row(&edges, &int(4), VertexSet(0b010), &EdgeSet::empty());
        assert_eq!(row.coeffs, vec![(0, int(4)), (1, int(2))]);
    }
}
