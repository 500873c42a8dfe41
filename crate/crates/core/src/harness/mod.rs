//! Monte Carlo plumbing and the identity-verification suite.

mod stats;
mod suite;

pub use stats::{
    aggregate, ks_critical_value, ks_statistic, ks_statistic_cdf, Histogram, MCEstimate,
    KS_COEFF_1PCT,
};
pub use suite::{
    run_suite, CheckResult, CheckStatus, Environment, ExperimentReport, SuiteConfig, Summary,
    Threshold, MIN_SUITE_PATHS,
};
