//! Theorem-instance verifiers over the group catalog: cycle-count bounds,
//! nilpotent order bounds, the subset-stabilizer theorem, global inequality
//! scans, the semilinear case table, and the orbit-size main theorems. All
//! inequalities are decided in cross-multiplied exact integer arithmetic;
//! only the log-ratio exponent comparisons use interval arithmetic, with an
//! explicit indeterminate verdict.

pub mod bounds;
pub mod claims;
pub mod gamma;
pub mod inequalities;
pub mod lemma24;
pub mod main_theorems;
pub mod order_bounds;
pub mod report;
pub mod subset;

pub use claims::{Claim, RunContext};
pub use report::{ClaimReport, RunReport, Verdict, Witness};
