//! Ornstein–Uhlenbeck processes killed at zero, the 3-dimensional radial OU
//! process, and the h-transform that links them.
//!
//! Under `P` the process solves `dX = dB - gamma X dt` from `a > 0`; under
//! `Q`, defined on `F_t` by the density `(X_{t ∧ T_0} / a) e^{gamma t}`, it
//! is the radial OU process `dR = dB + dt / R - gamma R dt`. The crate
//! provides exact samplers and Euler schemes for both, the closed-form
//! densities, estimators that transport expectations between the two
//! measures, and a suite that checks all of it by Monte Carlo.
//!
//! ```
//! use ouh_core::{closed_form, measure, ProcessParams, StreamKey, TestFunctional};
//!
//! let params = ProcessParams::new(1.0, 1.0)?;
//! // Survival of the killed OU process, estimated from radial samples.
//! let est = measure::estimate_killed_expectation_via_q(
//!     &params, &TestFunctional::ConstantOne, 1.0, 100_000, &StreamKey::new(7))?;
//! let exact = closed_form::survival_probability(&params, 1.0)?;
//! assert!((est.mean - exact).abs() < 4.0 * est.stderr);
//! # Ok::<(), ouh_core::Error>(())
//! ```

pub mod closed_form;
mod error;
pub mod format;
pub mod harness;
pub mod killed;
pub mod measure;
pub mod process;
pub mod quadrature;
pub mod stream;

pub use error::{Error, Result};
pub use harness::{aggregate, run_suite, ExperimentReport, MCEstimate, SuiteConfig};
pub use killed::{KilledPath, PathSample, SchemeConfig, TimeGrid};
pub use measure::{TestFunctional, WeightedSample};
pub use process::{GaussianLaw, ProcessParams, RadialLaw};
pub use stream::StreamKey;

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/time-change.md")]
    mod time_change {}
    #[doc = include_str!("../../../book/src/killing.md")]
    mod killing {}
    #[doc = include_str!("../../../book/src/h-transform.md")]
    mod h_transform {}
    #[doc = include_str!("../../../book/src/densities.md")]
    mod densities {}
    #[doc = include_str!("../../../book/src/local-martingale.md")]
    mod local_martingale {}
    #[doc = include_str!("../../../book/src/streams.md")]
    mod streams {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
