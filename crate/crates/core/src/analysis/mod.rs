//! Observed error quantities for a factorization and the deterministic and
//! expected-value bounds they are checked against.

mod angles;
mod bounds;
mod errors;
mod oracle;
mod report;

pub use angles::{principal_angles, PrincipalAngles};
pub use bounds::{deterministic_bounds, expected_bounds, DeterministicBounds, ExpectedBounds};
pub use errors::{empirical_errors, empirical_errors_with, EmpiricalErrors, NormPair};
pub use oracle::{partition_sketch, partition_sketch_with, SketchPartition, SpectralOracle, SpectrumSummary};
pub use report::{
    deterministic_report, expected_report, verify_run, verify_run_with, BoundKind, BoundReport, BoundRow, NormTag,
    BOUND_SLACK,
};
