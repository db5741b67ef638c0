//! Exact computations around Shapovalov forms of generalized Verma modules,
//! their Jantzen filtrations and the q-series identities they produce.

pub mod error;
pub mod exact;
pub mod glmod;
pub mod identities;
pub mod qseries;
pub mod report;
pub mod ulambda;
pub mod young;

pub use error::{Error, Result};
pub use exact::{Poly, Rational, Var};
