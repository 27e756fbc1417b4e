//! Exact computation of GKZ-type series, their canonical coordinates and
//! mirror-type maps, integrality certification, and brute-force verifiers
//! for the p-adic congruences behind their integrality.

pub mod congruence;
pub mod exact;
pub mod gkz;
pub mod mps;
pub mod report;

pub use exact::{MultiIndex, Prime, Valuation};
pub use gkz::{GkzError, GkzOperator, GkzSpec};
pub use mps::{LogSeries, Series, SeriesError, Substitution};
pub use report::CongruenceReport;
