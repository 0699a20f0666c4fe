//! Approximation algorithms for flexible graph connectivity and capacitated
//! k-edge-connected spanning subgraphs, with exact LP machinery and
//! brute-force oracles for small instances.

pub mod capk;
pub mod checks;
pub mod cut_oracle;
pub mod error;
pub mod fgc1q;
pub mod fgc2q;
pub mod instances;
pub mod jain;
pub mod lp;
pub mod num;
pub mod oracle;
pub mod pqfgc;
pub mod search;
pub mod small_cut_cover;

pub use error::{Error, Result};
pub use num::Q;
