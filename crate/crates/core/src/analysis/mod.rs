//! Verdicts from curves: power-law fits, asymptotic and monotonicity
//! checks, the invariance-principle table, the diffusive baseline and the
//! acceptance suite that strings them together.

pub mod acceptance;
mod checks;
mod fit;
mod report;

pub use acceptance::{run_criterion, run_suite, SuiteOptions, CRITERIA};
pub use checks::{
    check_complete_monotone, check_green_asymptotic, check_invariance_principle, check_log_growth,
    check_transform_identity, diffusive_baseline, diffusive_baseline_native, fourier_laplace_numeric,
    invariance_errors, log_growth, monotonicity_violations, LogGrowth, LOG_GROWTH_MIN_R2, PAPER_C_HALF,
};
pub use fit::{fit_power_law, log_space, PowerLawFit, MIN_FIT_POINTS};
pub use report::{timed, CheckReport, Provenance, ReportFile, SCHEMA_VERSION};
