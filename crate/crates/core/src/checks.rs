//! Recorded numeric bound checks (`lhs <= rhs`) from a solver run.
//!
//! Hard invariants abort with [`crate::Error::InvariantViolated`]; the
//! checks here are approximation bounds that a report carries so tests and
//! the CLI can inspect them.

use std::fmt;

use crate::num::{format_rational, Q};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Check {
    pub name: String,
    pub lhs: Q,
    pub rhs: Q,
}

impl Check {
    pub fn holds(&self) -> bool {
        self.lhs <= self.rhs
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {}: {} <= {}",
            if self.holds() { "ok  " } else { "FAIL" },
            self.name,
            format_rational(&self.lhs),
            format_rational(&self.rhs)
        )
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CheckLog {
    pub checks: Vec<Check>,
}

impl CheckLog {
    pub fn le(&mut self, name: impl Into<String>, lhs: Q, rhs: Q) {
        self.checks.push(Check {
            name: name.into(),
            lhs,
            rhs,
        });
    }

    pub fn extend(&mut self, prefix: &str, other: CheckLog) {
        for mut c in other.checks {
            c.name = format!("{prefix}{}", c.name);
            self.checks.push(c);
        }
    }

    pub fn all_hold(&self) -> bool {
        self.checks.iter().all(Check::holds)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.holds())
    }

    pub fn get(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }
}
