use std::collections::HashSet;

use log::debug;
use num_traits::Signed;

use crate::error::{Error, Result};
use crate::num::Q;

use super::{violation, FractionalSolution, Row, RowTag, Simplex};

pub const DEFAULT_ROW_LIMIT: usize = 100_000;

/// Answer of a separation oracle for a queried point.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Separation {
    Feasible,
    Violated { row: Row, tag: RowTag },
}

/// Row-generation state. Rows persist across [`CuttingPlane::run`] calls so
/// a caller can add a row found elsewhere and re-optimize warm.
#[derive(Debug, Clone)]
pub struct CuttingPlane {
    simplex: Simplex,
    tags: Vec<RowTag>,
    seen: HashSet<Row>,
    row_limit: usize,
    last: Option<FractionalSolution>,
}

impl CuttingPlane {
    pub fn new(objective: Vec<Q>) -> Result<Self> {
        Ok(CuttingPlane {
            simplex: Simplex::new(objective)?,
            tags: Vec::new(),
            seen: HashSet::new(),
            row_limit: DEFAULT_ROW_LIMIT,
            last: None,
        })
    }

    pub fn with_row_limit(mut self, limit: usize) -> Self {
        self.row_limit = limit;
        self
    }

    pub fn rows(&self) -> &[Row] {
        self.simplex.rows()
    }

    pub fn tags(&self) -> &[RowTag] {
        &self.tags
    }

    pub fn n_vars(&self) -> usize {
        self.simplex.n_vars()
    }

    /// Adds `row` unless an identical row is present. Returns whether it was new.
    pub fn add_row(&mut self, row: Row, tag: RowTag) -> Result<bool> {
        if self.seen.contains(&row) {
            return Ok(false);
        }
        if self.tags.len() >= self.row_limit {
            return Err(Error::IterationLimitExceeded(self.row_limit));
        }
        self.simplex.add_row(row.clone())?;
        self.seen.insert(row);
        self.tags.push(tag);
        Ok(true)
    }

    pub fn solve(&mut self) -> Result<FractionalSolution> {
        let sol = self.simplex.solve()?;
        if let Some(prev) = &self.last {
            if sol.objective < prev.objective {
                return Err(Error::invariant("LP objective decreased after adding rows"));
            }
        }
        self.last = Some(sol.clone());
        Ok(sol)
    }

    /// Solve, separate, add, repeat until the oracle accepts the point.
    pub fn run(
        &mut self,
        mut separate: impl FnMut(&[Q]) -> Result<Separation>,
    ) -> Result<FractionalSolution> {
        loop {
            let sol = self.solve()?;
            match separate(&sol.values)? {
                Separation::Feasible => {
                    for (i, row) in self.rows().iter().enumerate() {
                        if violation(row, &sol.values).is_positive() {
                            return Err(Error::invariant(format!(
                                "final point violates generated row {i}"
                            )));
                        }
                    }
                    debug!(
                        "cutting plane done: {} rows, {} pivots, value {}",
                        self.tags.len(),
                        self.simplex.pivots(),
                        sol.objective
                    );
                    return Ok(sol);
                }
                Separation::Violated { row, tag } => {
                    if !violation(&row, &sol.values).is_positive() {
                        return Err(Error::OracleInconsistent(format!(
                            "{tag} row is satisfied by the queried point"
                        )));
                    }
                    if !self.add_row(row, tag)? {
                        return Err(Error::OracleInconsistent(format!(
                            "{tag} row was already present"
                        )));
                    }
                }
            }
        }
    }
}

/// One-shot driver: initial rows, then row generation with `separate`.
pub fn cutting_plane(
    objective: Vec<Q>,
    initial_rows: impl IntoIterator<Item = Row>,
    separate: impl FnMut(&[Q]) -> Result<Separation>,
) -> Result<FractionalSolution> {
    let mut cp = CuttingPlane::new(objective)?;
    for row in initial_rows {
        cp.add_row(row, RowTag::Initial)?;
    }
    cp.run(separate)
}
