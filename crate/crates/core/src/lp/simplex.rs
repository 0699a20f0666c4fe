//! Exact revised simplex on the dual.
//!
//! The primal `min c.x, Ax >= b, 0 <= x <= 1` (with `c >= 0`) is solved via
//! its dual `max b.y - 1.z` subject to `A^T y - z + s = c`, `y, z, s >= 0`.
//! The all-slack basis is feasible because `c >= 0`, so no phase one is
//! needed, and appending a primal row only appends a dual column: the
//! current basis stays feasible, which makes row generation a warm start.
//!
//! At dual optimality the simplex multipliers `c_B B^-1` are a primal basic
//! optimal solution. Each basic dual variable pins one primal constraint
//! (`s_j`: `x_j = 0`, `z_j`: `x_j = 1`, `y_i`: row `i` tight), so the
//! returned point is a vertex.
//!
//! Bland's rule over the fixed column order `s_0.., z_0.., y_0..` guarantees
//! termination without perturbation.

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::num::Q;

use super::{FractionalSolution, LpProblem, Row};

#[derive(Debug, Clone)]
pub struct Simplex {
    c: Vec<Q>,
    rows: Vec<Row>,
    basis: Vec<usize>,
    is_basic: Vec<bool>,
    binv: Vec<Vec<Q>>,
    beta: Vec<Q>,
    pivots: u64,
}

impl Simplex {
    pub fn new(objective: Vec<Q>) -> Result<Self> {
        if objective.iter().any(|c| c.is_negative()) {
            return Err(Error::InvalidInput(
                "objective coefficients must be nonnegative".into(),
            ));
        }
        let n = objective.len();
        let mut binv = vec![vec![Q::zero(); n]; n];
        for (j, row) in binv.iter_mut().enumerate() {
            row[j] = Q::one();
        }
        let mut is_basic = vec![false; 2 * n];
        is_basic[..n].fill(true);
        Ok(Simplex {
            beta: objective.clone(),
            c: objective,
            rows: Vec::new(),
            basis: (0..n).collect(),
            is_basic,
            binv,
            pivots: 0,
        })
    }

    pub fn n_vars(&self) -> usize {
        self.c.len()
    }

    pub fn rows(&self) -> &[Row] {
        &self.rows
    }

    /// Total pivots performed so far.
    pub fn pivots(&self) -> u64 {
        self.pivots
    }

    pub fn add_row(&mut self, row: Row) -> Result<()> {
        if let Some(j) = row.max_var() {
            if j >= self.n_vars() {
                return Err(Error::InvalidInput(format!(
                    "row references variable {j} of {}",
                    self.n_vars()
                )));
            }
        }
        self.rows.push(row);
        self.is_basic.push(false);
        Ok(())
    }

    fn profit(&self, g: usize) -> Q {
        let n = self.n_vars();
        if g < n {
            Q::zero()
        } else if g < 2 * n {
            -Q::one()
        } else {
            self.rows[g - 2 * n].rhs().clone()
        }
    }

    fn column(&self, g: usize) -> Vec<(usize, Q)> {
        let n = self.n_vars();
        if g < n {
            vec![(g, Q::one())]
        } else if g < 2 * n {
            vec![(g - n, -Q::one())]
        } else {
            self.rows[g - 2 * n].coeffs().to_vec()
        }
    }

    fn multipliers(&self) -> Vec<Q> {
        let n = self.n_vars();
        let mut pi = vec![Q::zero(); n];
        for (r, &g) in self.basis.iter().enumerate() {
            let cb = self.profit(g);
            if cb.is_zero() {
                continue;
            }
            for (j, b) in self.binv[r].iter().enumerate() {
                if !b.is_zero() {
                    pi[j] += &cb * b;
                }
            }
        }
        pi
    }

    fn reduced_profit(&self, g: usize, pi: &[Q]) -> Q {
        let n = self.n_vars();
        if g < n {
            -pi[g].clone()
        } else if g < 2 * n {
            &pi[g - n] - Q::one()
        } else {
            let row = &self.rows[g - 2 * n];
            row.rhs() - row.lhs(pi)
        }
    }

    fn pivot(&mut self, leave: usize, enter: usize, dcol: &[Q]) {
        let piv = dcol[leave].clone();
        for b in self.binv[leave].iter_mut() {
            if !b.is_zero() {
                *b /= &piv;
            }
        }
        self.beta[leave] /= &piv;
        let pivot_row = self.binv[leave].clone();
        let pivot_beta = self.beta[leave].clone();
        for (i, d) in dcol.iter().enumerate() {
            if i == leave || d.is_zero() {
                continue;
            }
            for (b, p) in self.binv[i].iter_mut().zip(&pivot_row) {
                if !p.is_zero() {
                    *b -= d * p;
                }
            }
            self.beta[i] -= d * &pivot_beta;
        }
        self.is_basic[self.basis[leave]] = false;
        self.is_basic[enter] = true;
        self.basis[leave] = enter;
        self.pivots += 1;
    }

    /// Re-optimizes from the current basis.
    pub fn solve(&mut self) -> Result<FractionalSolution> {
        let n = self.n_vars();
        loop {
            let pi = self.multipliers();
            let total = 2 * n + self.rows.len();
            let entering = (0..total)
                .filter(|&g| !self.is_basic[g])
                .find(|&g| self.reduced_profit(g, &pi).is_positive());
            let Some(enter) = entering else {
                return self.extract(pi);
            };
            let col = self.column(enter);
            let dcol: Vec<Q> = self
                .binv
                .iter()
                .map(|brow| {
                    col.iter()
                        .fold(Q::zero(), |acc, (j, a)| acc + &brow[*j] * a)
                })
                .collect();
            let mut leave: Option<(usize, Q)> = None;
            for (r, d) in dcol.iter().enumerate() {
                if !d.is_positive() {
                    continue;
                }
                let t = &self.beta[r] / d;
                let better = match &leave {
                    None => true,
                    Some((lr, lt)) => t < *lt || (t == *lt && self.basis[r] < self.basis[*lr]),
                };
                if better {
                    leave = Some((r, t));
                }
            }
            // Unbounded dual ray: the primal has no feasible point.
            let Some((leave, _)) = leave else {
                return Err(Error::LpInfeasible);
            };
            self.pivot(leave, enter, &dcol);
        }
    }

    fn extract(&self, x: Vec<Q>) -> Result<FractionalSolution> {
        for (j, v) in x.iter().enumerate() {
            if v.is_negative() || *v > Q::one() {
                return Err(Error::invariant(format!("simplex value x{j} = {v} out of bounds")));
            }
        }
        for (i, row) in self.rows.iter().enumerate() {
            if row.lhs(&x) < *row.rhs() {
                return Err(Error::invariant(format!("simplex solution violates row {i}")));
            }
        }
        let objective = self
            .c
            .iter()
            .zip(&x)
            .fold(Q::zero(), |acc, (c, v)| acc + c * v);
        let dual: Q = self
            .basis
            .iter()
            .zip(&self.beta)
            .fold(Q::zero(), |acc, (&g, b)| acc + self.profit(g) * b);
        if dual != objective {
            return Err(Error::invariant("primal and dual objectives differ at optimum"));
        }
        Ok(FractionalSolution {
            values: x,
            objective,
            is_vertex: true,
        })
    }
}

/// Optimal vertex of `lp`.
pub fn solve_vertex(lp: &LpProblem) -> Result<FractionalSolution> {
    lp.validate()?;
    let mut s = Simplex::new(lp.objective.clone())?;
    for row in &lp.rows {
        s.add_row(row.clone())?;
    }
    s.solve()
}
