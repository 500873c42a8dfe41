//! Radon–Nikodym weights of the h-transform between the OU law `P` and the
//! radial OU law `Q`, and estimators that move expectations across it.
//!
//! On `F_t`, `dQ/dP = (X_{t ∧ T_0} / a) e^{gamma t}`; equivalently
//! `1{t < T_0} dP = (a / X_t) e^{-gamma t} dQ`. Every estimator here is a plain
//! average of bounded per-path terms.

use serde::Serialize;

use crate::closed_form::local_martingale_mean;
use crate::error::{invalid, Error, Result};
use crate::harness::{aggregate, MCEstimate};
use crate::killed::{KilledOuSampler, KilledPath, TimeGrid};
use crate::process::{check_time, radial_transition, ProcessParams};
use crate::stream::{map_paths, StreamKey};

/// Bounded test functions `f` applied to terminal values.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "tag", rename_all = "snake_case")]
pub enum TestFunctional {
    /// `1{x > c}`
    IndicatorAbove(f64),
    /// `1{x < c}`
    IndicatorBelow(f64),
    /// `min(x^degree, cap)` for `x >= 0`
    CappedPolynomial { degree: u32, cap: f64 },
    ConstantOne,
}

impl TestFunctional {
    /// Functionals used by the verification suite, scaled to the start `a`.
    pub fn standard_suite(a: f64) -> Vec<Self> {
        vec![
            Self::ConstantOne,
            Self::IndicatorAbove(a),
            Self::IndicatorBelow(0.5 * a),
            Self::CappedPolynomial { degree: 1, cap: 10.0 * a },
            Self::CappedPolynomial { degree: 2, cap: 4.0 * a * a },
        ]
    }

    /// Rejects anything that is not bounded.
    pub fn validate(&self) -> Result<()> {
        match *self {
            Self::IndicatorAbove(c) | Self::IndicatorBelow(c) if c.is_nan() => {
                Err(Error::UnboundedFunctional(format!("threshold is NaN in {}", self.name())))
            }
            Self::CappedPolynomial { cap, .. } if !(cap.is_finite() && cap > 0.0) => Err(
                Error::UnboundedFunctional(format!("cap must be finite and > 0, got {cap}")),
            ),
            _ => Ok(()),
        }
    }

    pub fn eval(&self, x: f64) -> f64 {
        match *self {
            Self::IndicatorAbove(c) => f64::from(u8::from(x > c)),
            Self::IndicatorBelow(c) => f64::from(u8::from(x < c)),
            Self::CappedPolynomial { degree, cap } => x.max(0.0).powi(degree as i32).min(cap),
            Self::ConstantOne => 1.0,
        }
    }

    /// Points where the functional is not smooth.
    pub fn breakpoints(&self) -> Vec<f64> {
        match *self {
            Self::IndicatorAbove(c) | Self::IndicatorBelow(c) if c.is_finite() => vec![c],
            Self::CappedPolynomial { degree, cap } if degree > 0 => {
                vec![cap.powf(1.0 / f64::from(degree))]
            }
            _ => vec![],
        }
    }

    pub fn name(&self) -> String {
        match *self {
            Self::IndicatorAbove(c) => format!("indicator_above({c})"),
            Self::IndicatorBelow(c) => format!("indicator_below({c})"),
            Self::CappedPolynomial { degree, cap } => format!("capped_polynomial({degree},{cap})"),
            Self::ConstantOne => "constant_one".into(),
        }
    }
}

/// A terminal value with its weight towards the other measure.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WeightedSample {
    pub value: f64,
    pub weight: f64,
}

/// `dQ/dP` on `F_t` evaluated on a killed path: `(X_{t ∧ T_0} / a) e^{gamma t}`.
pub fn forward_weight(params: &ProcessParams, grid: &TimeGrid, path: &KilledPath, t: f64) -> Result<f64> {
    let j = grid.index_of(t)?;
    Ok(path.values[j] / params.a() * (params.gamma() * t).exp())
}

/// `(a / r) e^{-gamma t}`, the weight turning `Q`-samples into killed `P`-samples.
pub fn inverse_weight(params: &ProcessParams, r_value: f64, t: f64) -> Result<f64> {
    if !(r_value > 0.0) {
        return Err(invalid("r_value", format!("must be > 0, got {r_value}")));
    }
    Ok(params.a() / r_value * (-params.gamma() * t).exp())
}

fn check_inputs(f: &TestFunctional, t: f64, n_paths: usize) -> Result<()> {
    f.validate()?;
    check_time(t)?;
    if n_paths < 2 {
        return Err(Error::InsufficientSamples(format!("need at least 2 paths, got {n_paths}")));
    }
    Ok(())
}

fn with_seed(est: MCEstimate, key: &StreamKey) -> MCEstimate {
    MCEstimate {
        seed: Some(*key),
        ..est
    }
}

fn radial_terminals(params: &ProcessParams, t: f64, n_paths: usize, key: &StreamKey) -> Result<Vec<f64>> {
    let law = radial_transition(params, t)?;
    Ok(map_paths(key, n_paths, |_, rng| crate::process::draw_radial(&law, rng)))
}

fn killed_terminals(params: &ProcessParams, t: f64, n_paths: usize, key: &StreamKey) -> Result<Vec<KilledPath>> {
    let grid = TimeGrid::from_observations(&[t])?;
    let sampler = KilledOuSampler::new(*params, &grid)?;
    Ok(map_paths(key, n_paths, |_, rng| sampler.sample(rng)))
}

/// `E_P[f(X_t) 1{t < T_0}]` from exact radial samples weighted by
/// [`inverse_weight`].
pub fn estimate_killed_expectation_via_q(
    params: &ProcessParams,
    f: &TestFunctional,
    t: f64,
    n_paths: usize,
    key: &StreamKey,
) -> Result<MCEstimate> {
    estimate_killed_expectation_via_q_scaled(params, f, t, n_paths, key, 1.0)
}

/// As [`estimate_killed_expectation_via_q`] with every weight multiplied by
/// `scale`. Only used to build negative controls.
#[doc(hidden)]
pub fn estimate_killed_expectation_via_q_scaled(
    params: &ProcessParams,
    f: &TestFunctional,
    t: f64,
    n_paths: usize,
    key: &StreamKey,
    scale: f64,
) -> Result<MCEstimate> {
    check_inputs(f, t, n_paths)?;
    if t == 0.0 {
        return Ok(with_seed(aggregate(vec![f.eval(params.a()); n_paths])?, key));
    }
    let rs = radial_terminals(params, t, n_paths, key)?;
    let terms = rs
        .iter()
        .map(|&r| inverse_weight(params, r, t).map(|w| scale * w * f.eval(r)))
        .collect::<Result<Vec<_>>>()?;
    Ok(with_seed(aggregate(terms)?, key))
}

/// `E_P[f(X_t) 1{t < T_0}]` by direct exact killed-OU simulation.
pub fn estimate_killed_expectation_direct(
    params: &ProcessParams,
    f: &TestFunctional,
    t: f64,
    n_paths: usize,
    key: &StreamKey,
) -> Result<MCEstimate> {
    check_inputs(f, t, n_paths)?;
    let paths = killed_terminals(params, t, n_paths, key)?;
    let terms = paths
        .iter()
        .map(|p| if p.killed { 0.0 } else { f.eval(p.terminal()) });
    Ok(with_seed(aggregate(terms)?, key))
}

/// Weighted terminal samples of the killed OU process.
pub fn weighted_samples_from_p(
    params: &ProcessParams,
    t: f64,
    n_paths: usize,
    key: &StreamKey,
) -> Result<Vec<WeightedSample>> {
    let grid = TimeGrid::from_observations(&[t])?;
    killed_terminals(params, t, n_paths, key)?
        .iter()
        .map(|p| {
            Ok(WeightedSample {
                value: p.terminal(),
                weight: forward_weight(params, &grid, p, t)?,
            })
        })
        .collect()
}

/// `E_Q[f(R_t)]` from killed OU paths weighted by [`forward_weight`].
/// Absorbed paths contribute 0.
pub fn estimate_q_expectation_via_p(
    params: &ProcessParams,
    f: &TestFunctional,
    t: f64,
    n_paths: usize,
    key: &StreamKey,
) -> Result<MCEstimate> {
    check_inputs(f, t, n_paths)?;
    let samples = weighted_samples_from_p(params, t, n_paths, key)?;
    let terms = samples.iter().map(|s| s.weight * f.eval(s.value));
    Ok(with_seed(aggregate(terms)?, key))
}

/// `E_Q[f(R_t)]` by direct exact radial sampling.
pub fn estimate_q_expectation_direct(
    params: &ProcessParams,
    f: &TestFunctional,
    t: f64,
    n_paths: usize,
    key: &StreamKey,
) -> Result<MCEstimate> {
    check_inputs(f, t, n_paths)?;
    let rs = radial_terminals(params, t, n_paths, key)?;
    Ok(with_seed(aggregate(rs.iter().map(|&r| f.eval(r)))?, key))
}

/// Both sides of `E_Q[f(R_t) / R_t] = E_Q[1 / R_t] E_P[f(X_t) | t < T_0]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct IdentityGap {
    pub lhs: MCEstimate,
    pub q_inverse: MCEstimate,
    pub p_conditional: MCEstimate,
    pub rhs: f64,
    pub rhs_stderr: f64,
    /// `(lhs - rhs) / combined stderr`.
    pub gap: f64,
}

/// Estimates the conditioning identity with each of the three factors on
/// its own substream and returns the discrepancy in combined standard errors.
pub fn conditional_identity_gap(
    params: &ProcessParams,
    f: &TestFunctional,
    t: f64,
    n_paths: usize,
    key: &StreamKey,
) -> Result<IdentityGap> {
    check_inputs(f, t, n_paths)?;
    if t == 0.0 {
        return Err(invalid("t", "conditioning needs t > 0"));
    }
    let lhs_key = key.derive("conditioning/lhs");
    let inv_key = key.derive("conditioning/q-inverse");
    let cond_key = key.derive("conditioning/p-conditional");

    let rs = radial_terminals(params, t, n_paths, &lhs_key)?;
    let lhs = with_seed(aggregate(rs.iter().map(|&r| f.eval(r) / r))?, &lhs_key);

    let rs = radial_terminals(params, t, n_paths, &inv_key)?;
    let q_inverse = with_seed(aggregate(rs.iter().map(|&r| 1.0 / r))?, &inv_key);

    let survivors: Vec<f64> = killed_terminals(params, t, n_paths, &cond_key)?
        .iter()
        .filter(|p| !p.killed)
        .map(|p| f.eval(p.terminal()))
        .collect();
    if survivors.len() < 2 {
        return Err(Error::InsufficientSamples(format!(
            "{} of {n_paths} killed paths survived to t={t}",
            survivors.len()
        )));
    }
    let p_conditional = with_seed(aggregate(survivors)?, &cond_key);

    let rhs = q_inverse.mean * p_conditional.mean;
    let rhs_stderr = ((p_conditional.mean * q_inverse.stderr).powi(2)
        + (q_inverse.mean * p_conditional.stderr).powi(2))
    .sqrt();
    let combined = (lhs.stderr.powi(2) + rhs_stderr.powi(2)).sqrt();
    let diff = lhs.mean - rhs;
    let gap = if combined > 0.0 { diff / combined } else if diff == 0.0 { 0.0 } else { f64::INFINITY };
    Ok(IdentityGap {
        lhs,
        q_inverse,
        p_conditional,
        rhs,
        rhs_stderr,
        gap,
    })
}

/// One point of the curve `m(t) = E_Q[e^{-gamma t} / R_t]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CurvePoint {
    pub t: f64,
    pub estimate: MCEstimate,
    /// `S(t) / a`.
    pub closed_form: f64,
}

/// Monte Carlo and closed-form values of `m(t)`; strictly decreasing from
/// `1 / a`, which is what makes `e^{-gamma t} / R_t` a strict local martingale.
pub fn local_martingale_curve(
    params: &ProcessParams,
    times: &[f64],
    n_paths: usize,
    key: &StreamKey,
) -> Result<Vec<CurvePoint>> {
    local_martingale_curve_scaled(params, times, n_paths, key, 1.0)
}

#[doc(hidden)]
pub fn local_martingale_curve_scaled(
    params: &ProcessParams,
    times: &[f64],
    n_paths: usize,
    key: &StreamKey,
    scale: f64,
) -> Result<Vec<CurvePoint>> {
    // Validates positivity and ordering.
    TimeGrid::from_observations(times)?;
    let inv_a = 1.0 / params.a();
    times
        .iter()
        .enumerate()
        .map(|(i, &t)| {
            let est = estimate_killed_expectation_via_q_scaled(
                params,
                &TestFunctional::ConstantOne,
                t,
                n_paths,
                &key.derive_index(i as u64),
                scale,
            )?;
            // a E_Q[e^{-gamma t} / R] estimates S(t); divide by a.
            Ok(CurvePoint {
                t,
                estimate: MCEstimate {
                    mean: est.mean * inv_a,
                    stderr: est.stderr * inv_a,
                    ..est
                },
                closed_form: local_martingale_mean(params, t)?,
            })
        })
        .collect()
}
