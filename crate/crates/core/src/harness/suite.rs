//! The registered identity checks and the report they produce.

use std::fmt::Write as _;
use std::time::{Instant, SystemTime, UNIX_EPOCH};

use rayon::prelude::*;
use serde::Serialize;

use super::stats::{aggregate, ks_critical_value, ks_statistic, MCEstimate};
use crate::closed_form::{
    abscissae, density_identity_relative_residual, killed_expectation, killed_mass,
    local_martingale_mean, radial_mass, support_upper, survival_probability,
    Spacing, QUAD_TOL,
};
use crate::error::{invalid, Result};
use crate::format::sig17;
use crate::killed::{euler_radial, KilledOuSampler, SchemeConfig, TimeGrid};
use crate::measure::{
    conditional_identity_gap, estimate_killed_expectation_direct,
    estimate_killed_expectation_via_q_scaled, estimate_q_expectation_direct,
    estimate_q_expectation_via_p, local_martingale_curve_scaled, TestFunctional,
};
use crate::process::{
    martingale_value, radial_transition, sample_ou_exact, sample_radial_exact, ProcessParams,
};
use crate::stream::{map_paths, StreamKey};

/// Monte Carlo checks with fewer paths than this are skipped.
pub const MIN_SUITE_PATHS: usize = 1000;
/// Pass threshold for Monte Carlo checks, in combined standard errors.
const STDERR_LIMIT: f64 = 4.0;
const RESIDUAL_LIMIT: f64 = 1e-12;
const RESIDUAL_GRID_POINTS: usize = 500;
/// Weak-error allowance for the Euler second moment is this times `dt t`.
const EULER_BIAS_COEFF: f64 = 5.0;
/// Added in quadrature to every standard error. Some estimators are exactly
/// constant (e.g. `x * (a / x) e^{-gamma t}`) and their oracle is only
/// accurate to quadrature precision.
const NUMERICAL_FLOOR: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteConfig {
    pub gamma: f64,
    pub a: f64,
    pub times: Vec<f64>,
    pub n_paths: usize,
    pub dt: f64,
    pub seed: u64,
    /// Paths for the Euler-versus-exact checks.
    pub euler_paths: usize,
    /// Negative control: inflates the inverse weight by `1 + weight_bias`.
    pub weight_bias: f64,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        Self {
            gamma: 1.0,
            a: 1.0,
            times: vec![0.5, 1.0, 2.0],
            n_paths: 100_000,
            dt: 1e-3,
            seed: 1,
            euler_paths: 100_000,
            weight_bias: 0.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckStatus {
    Pass,
    Fail,
    Skipped,
}

impl CheckStatus {
    pub fn as_str(&self) -> &'static str {
        match self {
            Self::Pass => "pass",
            Self::Fail => "fail",
            Self::Skipped => "skipped",
        }
    }
}

/// How `gap` is measured and the limit it must not exceed.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Threshold {
    /// `gap = max(0, |value - reference| - allowance) / stderr`.
    Stderr { limit: f64, allowance: f64 },
    /// `gap = |value - reference|`.
    Absolute { limit: f64 },
    /// `gap = |value - reference| / |reference|`, or a maximum over a grid.
    Relative { limit: f64 },
    /// `gap = value`.
    UpperBound { limit: f64 },
}

impl Threshold {
    fn limit(&self) -> f64 {
        match *self {
            Self::Stderr { limit, .. }
            | Self::Absolute { limit }
            | Self::Relative { limit }
            | Self::UpperBound { limit } => limit,
        }
    }

    fn describe(&self) -> String {
        match *self {
            Self::Stderr { limit, allowance } if allowance > 0.0 => {
                format!("{limit} stderr + {}", sig17(allowance))
            }
            Self::Stderr { limit, .. } => format!("{limit} stderr"),
            Self::Absolute { limit } => format!("abs {limit:e}"),
            Self::Relative { limit } => format!("rel {limit:e}"),
            Self::UpperBound { limit } => format!("<= {}", sig17(limit)),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckResult {
    pub name: String,
    /// The identity under test, written out.
    pub identity: String,
    /// What the value is compared against.
    pub oracle: String,
    pub t: Option<f64>,
    pub functional: Option<String>,
    pub value: Option<f64>,
    pub reference: Option<f64>,
    pub gap: Option<f64>,
    pub threshold: Threshold,
    pub status: CheckStatus,
    pub reason: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Summary {
    pub passed: usize,
    pub failed: usize,
    pub skipped: usize,
}

/// Run metadata that is not expected to reproduce.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Environment {
    pub workers: usize,
    pub started_unix_seconds: u64,
    pub elapsed_seconds: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentReport {
    pub name: String,
    pub tool: String,
    pub config: SuiteConfig,
    pub gamma_sign: &'static str,
    pub summary: Summary,
    pub checks: Vec<CheckResult>,
    /// Excluded from reproducibility comparisons.
    pub environment: Environment,
}

impl ExperimentReport {
    /// True when no check failed.
    pub fn passed(&self) -> bool {
        self.summary.failed == 0
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckResult> {
        self.checks.iter().filter(|c| c.status == CheckStatus::Fail)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// JSON without the [`Environment`] block.
    pub fn to_reproducible_json(&self) -> String {
        let mut value = serde_json::to_value(self).expect("report serializes");
        if let Some(map) = value.as_object_mut() {
            map.remove("environment");
        }
        serde_json::to_string_pretty(&value).expect("report serializes")
    }

    /// Flat `check,value,oracle,gap,threshold,status` table with a commented
    /// config header.
    pub fn to_csv(&self) -> String {
        let c = &self.config;
        let mut out = String::new();
        let _ = writeln!(out, "# {} {}", self.tool, self.name);
        let _ = writeln!(
            out,
            "# gamma={} a={} times={} paths={} dt={} seed={} euler_paths={} weight_bias={}",
            c.gamma,
            c.a,
            c.times.iter().map(|t| t.to_string()).collect::<Vec<_>>().join(";"),
            c.n_paths,
            c.dt,
            c.seed,
            c.euler_paths,
            c.weight_bias
        );
        out.push_str("check,value,oracle,gap,threshold,status\n");
        let num = |x: Option<f64>| x.map(sig17).unwrap_or_default();
        for check in &self.checks {
            let _ = writeln!(
                out,
                "{},{},{},{},{},{}",
                csv_field(&check.name),
                num(check.value),
                num(check.reference),
                num(check.gap),
                csv_field(&check.threshold.describe()),
                check.status.as_str()
            );
        }
        out
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

struct Outcome {
    value: f64,
    reference: f64,
    gap: f64,
    threshold: Threshold,
}

impl Outcome {
    fn stderr(value: f64, reference: f64, stderr: f64) -> Self {
        Self::stderr_with_allowance(value, reference, stderr, 0.0)
    }

    fn stderr_with_allowance(value: f64, reference: f64, stderr: f64, allowance: f64) -> Self {
        let excess = ((value - reference).abs() - allowance).max(0.0);
        let gap = excess / stderr.hypot(NUMERICAL_FLOOR);
        Self {
            value,
            reference,
            gap,
            threshold: Threshold::Stderr { limit: STDERR_LIMIT, allowance },
        }
    }

    fn two_sample(a: &MCEstimate, b: &MCEstimate) -> Self {
        Self::stderr(a.mean, b.mean, (a.stderr.powi(2) + b.stderr.powi(2)).sqrt())
    }

    fn absolute(value: f64, reference: f64, limit: f64) -> Self {
        Self {
            value,
            reference,
            gap: (value - reference).abs(),
            threshold: Threshold::Absolute { limit },
        }
    }
}

type CheckFn<'a> = Box<dyn Fn() -> Result<Outcome> + Send + Sync + 'a>;

struct Check<'a> {
    name: String,
    identity: &'static str,
    oracle: &'static str,
    t: Option<f64>,
    functional: Option<String>,
    monte_carlo_paths: Option<usize>,
    run: CheckFn<'a>,
}

impl Check<'_> {
    fn evaluate(&self) -> CheckResult {
        let mut result = CheckResult {
            name: self.name.clone(),
            identity: self.identity.to_string(),
            oracle: self.oracle.to_string(),
            t: self.t,
            functional: self.functional.clone(),
            value: None,
            reference: None,
            gap: None,
            threshold: Threshold::UpperBound { limit: 0.0 },
            status: CheckStatus::Skipped,
            reason: None,
        };
        if let Some(n) = self.monte_carlo_paths {
            if n < MIN_SUITE_PATHS {
                result.reason = Some(format!(
                    "insufficient samples: {n} paths, need at least {MIN_SUITE_PATHS}"
                ));
                return result;
            }
        }
        match (self.run)() {
            Ok(outcome) => {
                let pass = outcome.gap <= outcome.threshold.limit();
                result.value = Some(outcome.value);
                result.reference = Some(outcome.reference);
                result.gap = Some(outcome.gap);
                result.threshold = outcome.threshold;
                result.status = if pass { CheckStatus::Pass } else { CheckStatus::Fail };
            }
            Err(e) => result.reason = Some(e.to_string()),
        }
        result
    }
}

fn validate(config: &SuiteConfig) -> Result<ProcessParams> {
    let params = ProcessParams::new(config.gamma, config.a)?;
    if config.times.is_empty() {
        return Err(invalid("times", "need at least one time"));
    }
    TimeGrid::from_observations(&config.times)
        .map_err(|e| invalid("times", format!("must be positive and ascending ({e})")))?;
    SchemeConfig::with_dt(config.dt).validate(&params)?;
    if !config.weight_bias.is_finite() || config.weight_bias <= -1.0 {
        return Err(invalid("weight_bias", "must be finite and > -1"));
    }
    Ok(params)
}

/// Run every registered check for `config`. Checks execute concurrently on
/// the current rayon pool; each draws from its own named substream of
/// `config.seed`, so the report does not depend on the pool size.
pub fn run_suite(config: &SuiteConfig) -> Result<ExperimentReport> {
    let params = validate(config)?;
    let started = Instant::now();
    let started_unix_seconds = SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0);
    let checks = build_checks(config, params);
    let results: Vec<CheckResult> = checks.par_iter().map(Check::evaluate).collect();
    let count = |s| results.iter().filter(|r| r.status == s).count();
    let summary = Summary {
        passed: count(CheckStatus::Pass),
        failed: count(CheckStatus::Fail),
        skipped: count(CheckStatus::Skipped),
    };
    Ok(ExperimentReport {
        name: "verify".into(),
        tool: format!("ouh-core {}", env!("CARGO_PKG_VERSION")),
        config: config.clone(),
        gamma_sign: match config.gamma {
            g if g > 0.0 => "positive",
            g if g < 0.0 => "negative",
            _ => "zero",
        },
        summary,
        checks: results,
        environment: Environment {
            workers: rayon::current_num_threads(),
            started_unix_seconds,
            elapsed_seconds: started.elapsed().as_secs_f64(),
        },
    })
}

fn build_checks(config: &SuiteConfig, params: ProcessParams) -> Vec<Check<'_>> {
    let n = config.n_paths;
    let root = StreamKey::new(config.seed);
    let scale = 1.0 + config.weight_bias;
    let suite = TestFunctional::standard_suite(params.a());
    let mut checks: Vec<Check<'_>> = Vec::new();
    let key = move |name: &str| root.derive(name);

    for &t in &config.times {
        let name = format!("martingale/t={t}");
        let k = key(&name);
        checks.push(Check {
            name,
            identity: "E_P[X_t e^{gamma t}] = a",
            oracle: "starting point a",
            t: Some(t),
            functional: None,
            monte_carlo_paths: Some(n),
            run: Box::new(move || {
                let xs = map_paths(&k, n, |_, rng| {
                    sample_ou_exact(&params, t, rng).map(|x| martingale_value(&params, x, t))
                });
                let est = aggregate(xs.into_iter().collect::<Result<Vec<_>>>()?)?;
                Ok(Outcome::stderr(est.mean, params.a(), est.stderr))
            }),
        });

        let name = format!("unit_mass/t={t}");
        let k = key(&name);
        checks.push(Check {
            name,
            identity: "E_P[(X_{t^T0} / a) e^{gamma t}] = 1",
            oracle: "total mass 1",
            t: Some(t),
            functional: None,
            monte_carlo_paths: Some(n),
            run: Box::new(move || {
                let est = estimate_q_expectation_via_p(&params, &TestFunctional::ConstantOne, t, n, &k)?;
                Ok(Outcome::stderr(est.mean, 1.0, est.stderr))
            }),
        });

        let name = format!("survival_exact/t={t}");
        let k = key(&name);
        checks.push(Check {
            name,
            identity: "P(T0 > t) = erf(a / sqrt(2 tau(t)))",
            oracle: "closed-form survival",
            t: Some(t),
            functional: None,
            monte_carlo_paths: Some(n),
            run: Box::new(move || {
                let grid = TimeGrid::from_observations(&[t])?;
                let sampler = KilledOuSampler::new(params, &grid)?;
                let alive = map_paths(&k, n, |_, rng| f64::from(u8::from(!sampler.sample(rng).killed)));
                let est = aggregate(alive)?;
                Ok(Outcome::stderr(est.mean, survival_probability(&params, t)?, est.stderr))
            }),
        });

        for f in &suite {
            let f = *f;
            let fname = f.name();

            let name = format!("transport/t={t}/{fname}");
            let (kq, kp) = (key(&format!("{name}/q")), key(&format!("{name}/p")));
            checks.push(Check {
                name,
                identity: "E_P[f(X_t) 1{t<T0}] = E_Q[f(R_t) (a / R_t) e^{-gamma t}]",
                oracle: "direct killed-OU Monte Carlo",
                t: Some(t),
                functional: Some(fname.clone()),
                monte_carlo_paths: Some(n),
                run: Box::new(move || {
                    let via_q = estimate_killed_expectation_via_q_scaled(&params, &f, t, n, &kq, scale)?;
                    let direct = estimate_killed_expectation_direct(&params, &f, t, n, &kp)?;
                    Ok(Outcome::two_sample(&via_q, &direct))
                }),
            });

            let name = format!("semigroup/t={t}/{fname}");
            let k = key(&name);
            checks.push(Check {
                name,
                identity: "E_Q[f(R_t) (a / R_t) e^{-gamma t}] = integral of f p0_t(a, x) dx",
                oracle: "quadrature of the killed-OU density",
                t: Some(t),
                functional: Some(fname.clone()),
                monte_carlo_paths: Some(n),
                run: Box::new(move || {
                    let est = estimate_killed_expectation_via_q_scaled(&params, &f, t, n, &k, scale)?;
                    Ok(Outcome::stderr(est.mean, killed_expectation(&params, t, &f)?, est.stderr))
                }),
            });

            let name = format!("h_transform/t={t}/{fname}");
            let (kp, kq) = (key(&format!("{name}/p")), key(&format!("{name}/q")));
            checks.push(Check {
                name,
                identity: "E_P[f(X_t) (X_{t^T0} / a) e^{gamma t}] = E_Q[f(R_t)]",
                oracle: "direct radial-OU Monte Carlo",
                t: Some(t),
                functional: Some(fname.clone()),
                monte_carlo_paths: Some(n),
                run: Box::new(move || {
                    let via_p = estimate_q_expectation_via_p(&params, &f, t, n, &kp)?;
                    let direct = estimate_q_expectation_direct(&params, &f, t, n, &kq)?;
                    Ok(Outcome::two_sample(&via_p, &direct))
                }),
            });

            let name = format!("conditioning/t={t}/{fname}");
            let k = key(&name);
            checks.push(Check {
                name,
                identity: "E_Q[f(R_t) / R_t] = E_Q[1 / R_t] E_P[f(X_t) | t < T0]",
                oracle: "independent Monte Carlo of both sides",
                t: Some(t),
                functional: Some(fname),
                monte_carlo_paths: Some(n),
                run: Box::new(move || {
                    let g = conditional_identity_gap(&params, &f, t, n, &k)?;
                    let combined = g.lhs.stderr.hypot(g.rhs_stderr);
                    Ok(Outcome::stderr(g.lhs.mean, g.rhs, combined))
                }),
            });
        }

        checks.push(Check {
            name: format!("normalization_q/t={t}"),
            identity: "integral of q_t(a, x) dx = 1",
            oracle: "adaptive Gauss-Kronrod quadrature",
            t: Some(t),
            functional: None,
            monte_carlo_paths: None,
            run: Box::new(move || Ok(Outcome::absolute(radial_mass(&params, t)?, 1.0, QUAD_TOL))),
        });

        checks.push(Check {
            name: format!("normalization_p0/t={t}"),
            identity: "integral of p0_t(a, x) dx = S(t)",
            oracle: "adaptive Gauss-Kronrod quadrature",
            t: Some(t),
            functional: None,
            monte_carlo_paths: None,
            run: Box::new(move || {
                Ok(Outcome::absolute(killed_mass(&params, t)?, survival_probability(&params, t)?, QUAD_TOL))
            }),
        });

        checks.push(Check {
            name: format!("density_identity/t={t}"),
            identity: "p0_t(a, x) = (a / x) e^{-gamma t} q_t(a, x)",
            oracle: "pointwise on a 500-point log grid",
            t: Some(t),
            functional: None,
            monte_carlo_paths: None,
            run: Box::new(move || {
                let hi = support_upper(&params, t)?;
                let xs = abscissae(1e-3 * params.a(), hi, RESIDUAL_GRID_POINTS, Spacing::Log)?;
                let worst = xs.iter().try_fold(0.0f64, |m, &x| {
                    density_identity_relative_residual(&params, t, x).map(|r| m.max(r))
                })?;
                Ok(Outcome {
                    value: worst,
                    reference: 0.0,
                    gap: worst,
                    threshold: Threshold::Relative { limit: RESIDUAL_LIMIT },
                })
            }),
        });
    }

    let times = config.times.clone();
    let k = key("local_martingale");
    checks.push(Check {
        name: "local_martingale/curve".into(),
        identity: "E_Q[e^{-gamma t} / R_t] = S(t) / a",
        oracle: "closed-form S(t) / a",
        t: None,
        functional: None,
        monte_carlo_paths: Some(n),
        run: Box::new(move || {
            let curve = local_martingale_curve_scaled(&params, &times, n, &k, scale)?;
            let worst = curve
                .iter()
                .map(|p| Outcome::stderr(p.estimate.mean, p.closed_form, p.estimate.stderr))
                .max_by(|x, y| x.gap.total_cmp(&y.gap))
                .expect("times is nonempty");
            Ok(worst)
        }),
    });

    let times = config.times.clone();
    checks.push(Check {
        name: "local_martingale/monotone".into(),
        identity: "S(t) / a strictly decreasing in t and below 1 / a",
        oracle: "closed form",
        t: None,
        functional: None,
        monte_carlo_paths: None,
        run: Box::new(move || {
            let m = times
                .iter()
                .map(|&t| local_martingale_mean(&params, t))
                .collect::<Result<Vec<_>>>()?;
            let violations = m.windows(2).filter(|w| w[1] >= w[0]).count()
                + usize::from(m[0] >= 1.0 / params.a());
            Ok(Outcome::absolute(violations as f64, 0.0, 0.0))
        }),
    });

    let t_euler = config.times[config.times.len() / 2];
    let n_euler = config.euler_paths;
    let scheme = SchemeConfig::with_dt(config.dt);
    let (k_euler, k_exact) = (key("euler_radial/euler"), key("euler_radial/exact"));
    checks.push(Check {
        name: format!("euler_radial_ks/t={t_euler}"),
        identity: "Euler for dR = dB + dt / R - gamma R dt has the exact radial law",
        oracle: "exact radial sampler, two-sample KS at 1%",
        t: Some(t_euler),
        functional: None,
        monte_carlo_paths: Some(n_euler),
        run: Box::new(move || {
            let grid = TimeGrid::from_observations(&[t_euler])?;
            let euler = map_paths(&k_euler, n_euler, |_, rng| {
                euler_radial(&params, &grid, &scheme, rng).map(|p| p.terminal())
            })
            .into_iter()
            .collect::<Result<Vec<_>>>()?;
            let exact = map_paths(&k_exact, n_euler, |_, rng| sample_radial_exact(&params, t_euler, rng))
                .into_iter()
                .collect::<Result<Vec<_>>>()?;
            let d = ks_statistic(&euler, &exact)?;
            let limit = ks_critical_value(n_euler, Some(n_euler));
            Ok(Outcome {
                value: d,
                reference: limit,
                gap: d,
                threshold: Threshold::UpperBound { limit },
            })
        }),
    });

    let k_moment = key("euler_radial/moment");
    checks.push(Check {
        name: format!("euler_radial_moment/t={t_euler}"),
        identity: "E[R_t^2] = center^2 + 3 sigma2 under the Euler radial scheme",
        oracle: "radial transition moments",
        t: Some(t_euler),
        functional: None,
        monte_carlo_paths: Some(n_euler),
        run: Box::new(move || {
            let grid = TimeGrid::from_observations(&[t_euler])?;
            let r2 = map_paths(&k_moment, n_euler, |_, rng| {
                euler_radial(&params, &grid, &scheme, rng).map(|p| p.terminal().powi(2))
            })
            .into_iter()
            .collect::<Result<Vec<_>>>()?;
            let est = aggregate(r2)?;
            let target = radial_transition(&params, t_euler)?.second_moment();
            Ok(Outcome::stderr_with_allowance(
                est.mean,
                target,
                est.stderr,
                EULER_BIAS_COEFF * scheme.dt * t_euler,
            ))
        }),
    });

    checks
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quick(gamma: f64) -> SuiteConfig {
        SuiteConfig {
            gamma,
            n_paths: 20_000,
            euler_paths: 5_000,
            dt: 1e-2,
            ..SuiteConfig::default()
        }
    }

    #[test]
    fn small_suite_passes() {
        let report = run_suite(&quick(1.0)).unwrap();
        let failures: Vec<_> = report.failures().map(|c| &c.name).collect();
        assert!(report.passed(), "{failures:?}");
        assert_eq!(report.summary.skipped, 0);
        assert!(report.checks.iter().all(|c| !c.identity.is_empty() && !c.oracle.is_empty()));
    }

    #[test]
    fn tiny_sample_is_skipped_not_failed() {
        let config = SuiteConfig { n_paths: 10, euler_paths: 10, ..SuiteConfig::default() };
        let report = run_suite(&config).unwrap();
        assert_eq!(report.summary.failed, 0);
        assert!(report.summary.skipped > 0);
        let skipped = report.checks.iter().find(|c| c.status == CheckStatus::Skipped).unwrap();
        assert!(skipped.reason.as_deref().unwrap().starts_with("insufficient samples"));
        // Quadrature checks still run.
        assert!(report.checks.iter().any(|c| c.name.starts_with("normalization_q") && c.status == CheckStatus::Pass));
    }

    #[test]
    fn report_is_reproducible() {
        let a = run_suite(&quick(-0.5)).unwrap();
        let b = rayon::ThreadPoolBuilder::new()
            .num_threads(2)
            .build()
            .unwrap()
            .install(|| run_suite(&quick(-0.5)).unwrap());
        assert_eq!(a.to_reproducible_json(), b.to_reproducible_json());
        assert_eq!(a.to_csv(), b.to_csv());
        assert_eq!(a.gamma_sign, "negative");
    }

    #[test]
    fn invalid_config_is_rejected() {
        assert!(run_suite(&SuiteConfig { a: 0.0, ..SuiteConfig::default() }).is_err());
        assert!(run_suite(&SuiteConfig { times: vec![], ..SuiteConfig::default() }).is_err());
        assert!(run_suite(&SuiteConfig { times: vec![1.0, 0.5], ..SuiteConfig::default() }).is_err());
    }

    #[test]
    fn csv_quotes_names_with_commas() {
        let report = run_suite(&SuiteConfig { n_paths: 10, euler_paths: 10, ..SuiteConfig::default() }).unwrap();
        let csv = report.to_csv();
        assert!(csv.starts_with("# ouh-core"));
        assert!(csv.contains("\"transport/t=0.5/capped_polynomial(1,10)\""));
    }
}
