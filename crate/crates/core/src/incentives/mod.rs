//! Payment rules, misreport search and the NTU weight iteration.
//!
//! Verdicts are always relative to a finite candidate family of reports.

mod mechanism;
mod misreport;
mod ntu;

pub use mechanism::{
    directional_derivative_h, mechanism_outcome, truthful_outcome, MechanismGame, MechanismOutcome,
    PaymentRule,
};
pub use misreport::{best_misreport, is_incentive_compatible, misreport_candidates, MisreportSearch};
pub use ntu::{ntu_fixed_point, ntu_map, NtuOptions, NtuOutcome, NtuStatus, Weighted, WeightVector};
