//! Exact LP over `[0,1]` boxes with `>=` rows, a row-generation driver and
//! knapsack-cover rows.

mod cutting_plane;
mod kci;
mod simplex;

pub use cutting_plane::{cutting_plane, CuttingPlane, Separation, DEFAULT_ROW_LIMIT};
pub use kci::{kci_row, separate_with_kci, KciRow};
pub use simplex::{solve_vertex, Simplex};

use std::fmt::{self, Write as _};

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::instances::EdgeSet;
use crate::num::{format_rational, Q};

/// A `>=` row with sparse coefficients sorted by variable, zeros dropped.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Row {
    coeffs: Vec<(usize, Q)>,
    rhs: Q,
}

impl Row {
    pub fn new(coeffs: impl IntoIterator<Item = (usize, Q)>, rhs: Q) -> Self {
        let mut merged: Vec<(usize, Q)> = Vec::new();
        let mut all: Vec<(usize, Q)> = coeffs.into_iter().collect();
        all.sort_by_key(|(j, _)| *j);
        for (j, a) in all {
            match merged.last_mut() {
                Some((last, acc)) if *last == j => *acc += a,
                _ => merged.push((j, a)),
            }
        }
        merged.retain(|(_, a)| !a.is_zero());
        Row { coeffs: merged, rhs }
    }

    /// `sum_{j in vars} x_j >= rhs`.
    pub fn unit(vars: impl IntoIterator<Item = usize>, rhs: Q) -> Self {
        Row::new(vars.into_iter().map(|j| (j, Q::one())), rhs)
    }

    pub fn coeffs(&self) -> &[(usize, Q)] {
        &self.coeffs
    }

    pub fn rhs(&self) -> &Q {
        &self.rhs
    }

    pub fn lhs(&self, x: &[Q]) -> Q {
        self.coeffs
            .iter()
            .fold(Q::zero(), |acc, (j, a)| acc + a * &x[*j])
    }

    pub fn max_var(&self) -> Option<usize> {
        self.coeffs.last().map(|(j, _)| *j)
    }
}

/// Why a row was generated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RowTag {
    Initial,
    BaseCut,
    Kci,
    SafeFailureCut { safe_edge: usize },
    SafeFailureKci { safe_edge: usize },
    Residual,
    Restart,
}

impl fmt::Display for RowTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RowTag::Initial => write!(f, "initial"),
            RowTag::BaseCut => write!(f, "base-cut"),
            RowTag::Kci => write!(f, "kci"),
            RowTag::SafeFailureCut { safe_edge } => write!(f, "safe-failure-cut[{safe_edge}]"),
            RowTag::SafeFailureKci { safe_edge } => write!(f, "safe-failure-kci[{safe_edge}]"),
            RowTag::Residual => write!(f, "residual"),
            RowTag::Restart => write!(f, "restart"),
        }
    }
}

/// `min c.x` subject to `rows` and `0 <= x <= 1`, with `c >= 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LpProblem {
    pub objective: Vec<Q>,
    pub rows: Vec<Row>,
}

impl LpProblem {
    pub fn new(objective: Vec<Q>) -> Self {
        LpProblem {
            objective,
            rows: Vec::new(),
        }
    }

    pub fn n_vars(&self) -> usize {
        self.objective.len()
    }

    pub fn push(&mut self, row: Row) {
        self.rows.push(row);
    }

    pub(crate) fn validate(&self) -> Result<()> {
        if self.objective.iter().any(|c| c.is_negative()) {
            return Err(Error::InvalidInput("objective coefficients must be nonnegative".into()));
        }
        for row in &self.rows {
            if let Some(j) = row.max_var() {
                if j >= self.n_vars() {
                    return Err(Error::InvalidInput(format!(
                        "row references variable {j} of {}",
                        self.n_vars()
                    )));
                }
            }
        }
        Ok(())
    }

    /// CPLEX-style LP text, for cross-checking with an external solver.
    pub fn to_lp_text(&self) -> String {
        let term = |a: &Q, j: usize, first: bool| -> String {
            let sign = if a.is_negative() {
                "- "
            } else if first {
                ""
            } else {
                "+ "
            };
            format!("{sign}{} x{j}", lp_number(&a.abs()))
        };
        let mut out = String::from("Minimize\n obj:");
        let mut first = true;
        for (j, c) in self.objective.iter().enumerate() {
            if !c.is_zero() {
                let _ = write!(out, " {}", term(c, j, first));
                first = false;
            }
        }
        if first {
            out.push_str(" 0 x0");
        }
        out.push_str("\nSubject To\n");
        for (i, row) in self.rows.iter().enumerate() {
            let _ = write!(out, " r{i}:");
            if row.coeffs.is_empty() {
                out.push_str(" 0 x0");
            }
            for (t, (j, a)) in row.coeffs.iter().enumerate() {
                let _ = write!(out, " {}", term(a, *j, t == 0));
            }
            let _ = writeln!(out, " >= {}", lp_number(&row.rhs));
        }
        out.push_str("Bounds\n");
        for j in 0..self.n_vars() {
            let _ = writeln!(out, " 0 <= x{j} <= 1");
        }
        out.push_str("End\n");
        out
    }
}

/// LP files have no fraction syntax; non-integers are written as decimals.
fn lp_number(v: &Q) -> String {
    if v.is_integer() {
        format_rational(v)
    } else {
        crate::num::to_f64(v).to_string()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FractionalSolution {
    pub values: Vec<Q>,
    pub objective: Q,
    pub is_vertex: bool,
}

impl FractionalSolution {
    pub fn value(&self, j: usize) -> &Q {
        &self.values[j]
    }
}

/// `rhs - lhs(x)`; positive means violated.
pub fn violation(row: &Row, x: &[Q]) -> Q {
    row.rhs() - row.lhs(x)
}

/// `min(1, factor * x_e)` on `subset`, 0 elsewhere.
pub fn scaled(x: &[Q], factor: &Q, subset: &EdgeSet) -> Vec<Q> {
    let mut out = vec![Q::zero(); x.len()];
    for e in subset.iter() {
        out[e] = crate::num::clamp_scaled(&x[e], factor);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num::{int, ratio};

    #[test]
    fn scaling_clamps_at_one() {
        let x = vec![ratio(5, 7), ratio(1, 7)];
        let s = scaled(&x, &ratio(7, 5), &EdgeSet::all(2));
        assert_eq!(s, vec![int(1), ratio(1, 5)]);
        let only_first = scaled(&x, &int(1), &EdgeSet::new(vec![0], 2).unwrap());
        assert_eq!(only_first, vec![ratio(5, 7), int(0)]);
    }

    #[test]
    fn violation_sign() {
        let row = Row::unit([0, 1], int(1));
        assert!(violation(&row, &[int(1), int(0)]) <= int(0));
        assert_eq!(violation(&row, &[ratio(1, 4), int(0)]), ratio(3, 4));
    }

    #[test]
    fn rows_merge_and_drop_zeros() {
        let row = Row::new([(2, int(1)), (0, int(0)), (2, int(2))], int(1));
        assert_eq!(row.coeffs(), &[(2, int(3))]);
    }

    #[test]
    fn lp_text_dump() {
        let mut lp = LpProblem::new(vec![int(1), ratio(1, 2)]);
        lp.push(Row::unit([0, 1], int(1)));
        let text = lp.to_lp_text();
        assert!(text.contains("obj: 1 x0 + 0.5 x1"));
        assert!(text.contains("r0: 1 x0 + 1 x1 >= 1"));
        assert!(text.contains("0 <= x1 <= 1"));
    }
}
