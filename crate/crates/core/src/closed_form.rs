//! Analytic oracles: killed-OU and radial-OU transition densities, survival
//! probability and the density-level h-transform identity.
//!
//! With `s = e^{gamma t}`, `tau = tau(t)` and `phi_v` the centred normal
//! density of variance `v`:
//!
//! ```text
//! p0_t(a, x) = s [phi_tau(x s - a) - phi_tau(x s + a)]          killed OU, x > 0
//! q_t(a, x)  = s (x s / a) [phi_tau(x s - a) - phi_tau(x s + a)] radial OU
//! S(t)       = 2 Phi(a / sqrt(tau)) - 1 = erf(a / sqrt(2 tau))
//! ```
//!
//! so that `p0 = (a / x) e^{-gamma t} q` pointwise. The killed density comes
//! from the reflection principle on the Doob clock; the radial density has a
//! second, independent route as the norm of a 3-d Gaussian, see
//! [`radial_density_from_law`].

use std::f64::consts::PI;
use std::fmt::Write as _;

use serde::Serialize;

use crate::error::{ensure_finite, invalid, Result};
use crate::format::sig17;
use crate::measure::TestFunctional;
use crate::process::{time_change, ProcessParams, RadialLaw};
use crate::quadrature::integrate_with_breaks;

/// Quadrature tolerance used for every normalization check.
pub const QUAD_TOL: f64 = 1e-8;

/// Standard deviations of the clock-space Gaussian kept inside the
/// integration range; the dropped tail is below `1e-18`.
const TAIL_SIGMAS: f64 = 9.0;

/// Centred normal density with the given variance.
pub fn gaussian_pdf(y: f64, variance: f64) -> Result<f64> {
    if !(variance > 0.0) || !variance.is_finite() {
        return Err(invalid("variance", format!("must be finite and > 0, got {variance}")));
    }
    Ok(pdf(y, variance))
}

#[inline]
fn pdf(y: f64, variance: f64) -> f64 {
    (-y * y / (2.0 * variance)).exp() / (2.0 * PI * variance).sqrt()
}

pub fn std_normal_cdf(z: f64) -> f64 {
    0.5 * libm::erfc(-z / std::f64::consts::SQRT_2)
}

/// `phi_v(y - c) - phi_v(y + c)` for `y, c >= 0`, written so that it keeps
/// full relative accuracy as `y c / v -> 0`.
#[inline]
fn reflected_pdf(y: f64, c: f64, v: f64) -> f64 {
    pdf(y - c, v) * -(-2.0 * y * c / v).exp_m1()
}

fn check_positive_time(t: f64) -> Result<()> {
    ensure_finite("t", t)?;
    if t <= 0.0 {
        return Err(invalid("t", format!("must be > 0, got {t}")));
    }
    Ok(())
}

fn check_abscissa(x: f64) -> Result<()> {
    ensure_finite("x", x)?;
    if x < 0.0 {
        return Err(invalid("x", format!("must be >= 0, got {x}")));
    }
    Ok(())
}

/// Clock value and `e^{gamma t}`.
fn clock(params: &ProcessParams, t: f64) -> Result<(f64, f64)> {
    check_positive_time(t)?;
    let tau = time_change(params, t)?;
    let s = (params.gamma() * t).exp();
    if !s.is_finite() || s == 0.0 {
        return Err(crate::Error::Range(format!("e^(gamma t) out of range at t={t}")));
    }
    Ok((tau, s))
}

/// `S(t) = P_a(T_0 > t)`.
pub fn survival_probability(params: &ProcessParams, t: f64) -> Result<f64> {
    let (tau, _) = clock(params, t)?;
    Ok(libm::erf(params.a() / (2.0 * tau).sqrt()))
}

/// Sub-probability density of `X_t` on `{t < T_0}` under `P`. Zero at `x = 0`.
pub fn killed_ou_density(params: &ProcessParams, t: f64, x: f64) -> Result<f64> {
    check_abscissa(x)?;
    let (tau, s) = clock(params, t)?;
    Ok(s * reflected_pdf(x * s, params.a(), tau))
}

/// Density of `R_t` under `Q`. Zero at `x = 0`.
pub fn radial_density(params: &ProcessParams, t: f64, x: f64) -> Result<f64> {
    check_abscissa(x)?;
    let (tau, s) = clock(params, t)?;
    let a = params.a();
    Ok(s * (x * s / a) * reflected_pdf(x * s, a, tau))
}

/// Density of `|V|`, `V ~ N((center, 0, 0), sigma2 I_3)`:
/// `(x / c) [phi_{sigma2}(x - c) - phi_{sigma2}(x + c)]`.
pub fn radial_density_from_law(law: &RadialLaw, x: f64) -> Result<f64> {
    check_abscissa(x)?;
    if !(law.sigma2 > 0.0) {
        return Err(invalid("sigma2", "radial law is degenerate"));
    }
    Ok((x / law.center) * reflected_pdf(x, law.center, law.sigma2))
}

/// `P_Q(R_t <= x)`, the BES(3) distribution function on the Doob clock.
pub fn radial_cdf(params: &ProcessParams, t: f64, x: f64) -> Result<f64> {
    check_abscissa(x)?;
    let (tau, s) = clock(params, t)?;
    let a = params.a();
    let y = x * s;
    let sd = tau.sqrt();
    let value = std_normal_cdf((y - a) / sd) + std_normal_cdf((y + a) / sd) - 1.0
        - (tau / a) * reflected_pdf(y, a, tau);
    Ok(value.clamp(0.0, 1.0))
}

/// `p0_t(a, x) - (a / x) e^{-gamma t} q_t(a, x)`.
pub fn density_identity_residual(params: &ProcessParams, t: f64, x: f64) -> Result<f64> {
    if x == 0.0 {
        return Err(invalid("x", "must be > 0"));
    }
    let p0 = killed_ou_density(params, t, x)?;
    let q = radial_density(params, t, x)?;
    Ok(p0 - (params.a() / x) * (-params.gamma() * t).exp() * q)
}

/// Residual relative to `p0`; 0 where both sides underflow.
pub fn density_identity_relative_residual(params: &ProcessParams, t: f64, x: f64) -> Result<f64> {
    let r = density_identity_residual(params, t, x)?;
    let p0 = killed_ou_density(params, t, x)?;
    Ok(if p0 == 0.0 { r.abs() } else { (r / p0).abs() })
}

/// `m(t) = E_Q[e^{-gamma t} / R_t] = S(t) / a`.
pub fn local_martingale_mean(params: &ProcessParams, t: f64) -> Result<f64> {
    Ok(survival_probability(params, t)? / params.a())
}

/// Upper end of the integration range in `x`: the clock-space Gaussian
/// mass beyond it is negligible against [`QUAD_TOL`].
pub fn support_upper(params: &ProcessParams, t: f64) -> Result<f64> {
    let (tau, s) = clock(params, t)?;
    Ok((params.a() + TAIL_SIGMAS * tau.sqrt()) / s)
}

fn integrate_on_support<F: Fn(f64) -> f64>(
    params: &ProcessParams,
    t: f64,
    f: &TestFunctional,
    density: F,
) -> Result<f64> {
    let hi = support_upper(params, t)?;
    let mut points = vec![0.0];
    points.extend(f.breakpoints().into_iter().filter(|&b| b > 0.0 && b < hi));
    points.push(hi);
    let q = integrate_with_breaks(|x| f.eval(x) * density(x), &points, QUAD_TOL * 1e-3, 0.0);
    Ok(q.value)
}

/// `E_P[f(X_t) 1{t < T_0}] = ∫ f p0`, by quadrature.
pub fn killed_expectation(params: &ProcessParams, t: f64, f: &TestFunctional) -> Result<f64> {
    f.validate()?;
    let (tau, s) = clock(params, t)?;
    let a = params.a();
    integrate_on_support(params, t, f, |x| s * reflected_pdf(x * s, a, tau))
}

/// `E_Q[f(R_t)] = ∫ f q`, by quadrature.
pub fn radial_expectation(params: &ProcessParams, t: f64, f: &TestFunctional) -> Result<f64> {
    f.validate()?;
    let (tau, s) = clock(params, t)?;
    let a = params.a();
    integrate_on_support(params, t, f, |x| s * (x * s / a) * reflected_pdf(x * s, a, tau))
}

/// `∫ p0` over `(0, ∞)`; equals [`survival_probability`].
pub fn killed_mass(params: &ProcessParams, t: f64) -> Result<f64> {
    killed_expectation(params, t, &TestFunctional::ConstantOne)
}

/// `∫ q` over `(0, ∞)`; equals 1.
pub fn radial_mass(params: &ProcessParams, t: f64) -> Result<f64> {
    radial_expectation(params, t, &TestFunctional::ConstantOne)
}

/// Spacing of a tabulation grid.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Spacing {
    Linear,
    Log,
}

/// Positive abscissae `min..=max` with `points` nodes.
pub fn abscissae(min: f64, max: f64, points: usize, spacing: Spacing) -> Result<Vec<f64>> {
    ensure_finite("x-min", min)?;
    ensure_finite("x-max", max)?;
    if min <= 0.0 {
        return Err(invalid("x-min", format!("must be > 0, got {min}")));
    }
    if max <= min {
        return Err(invalid("x-max", format!("must exceed x-min ({min}), got {max}")));
    }
    if points < 2 {
        return Err(invalid("points", format!("need at least 2, got {points}")));
    }
    let last = (points - 1) as f64;
    Ok((0..points)
        .map(|i| {
            let u = i as f64 / last;
            match spacing {
                Spacing::Linear => min + (max - min) * u,
                Spacing::Log => (min.ln() + (max.ln() - min.ln()) * u).exp(),
            }
        })
        .collect())
}

/// Tabulated density values.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DensityCurve {
    pub abscissae: Vec<f64>,
    pub values: Vec<f64>,
}

impl DensityCurve {
    pub fn tabulate<F>(abscissae: &[f64], density: F) -> Result<Self>
    where
        F: Fn(f64) -> Result<f64>,
    {
        if abscissae.windows(2).any(|w| w[1] <= w[0]) {
            return Err(invalid("abscissae", "must be strictly increasing"));
        }
        let values = abscissae.iter().map(|&x| density(x)).collect::<Result<Vec<_>>>()?;
        Ok(Self {
            abscissae: abscissae.to_vec(),
            values,
        })
    }

    /// Two-column `x,value` CSV with 17 significant digits.
    pub fn to_csv(&self, column: &str) -> String {
        let mut out = format!("x,{column}\n");
        for (x, v) in self.abscissae.iter().zip(&self.values) {
            let _ = writeln!(out, "{},{}", sig17(*x), sig17(*v));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::process::radial_transition;

    fn p(gamma: f64, a: f64) -> ProcessParams {
        ProcessParams::new(gamma, a).unwrap()
    }

    fn rel(x: f64, y: f64) -> f64 {
        ((x - y) / y).abs()
    }

    #[test]
    fn gaussian_pdf_values() {
        assert!(rel(gaussian_pdf(0.0, 1.0).unwrap(), 0.398_942_280_401_432_7) < 1e-15);
        assert!(rel(gaussian_pdf(1.0, 1.0).unwrap(), 0.241_970_724_519_143_37) < 1e-15);
        assert_eq!(gaussian_pdf(0.7, 2.0).unwrap(), gaussian_pdf(-0.7, 2.0).unwrap());
        assert!(gaussian_pdf(0.0, 0.0).is_err());
        assert!(gaussian_pdf(0.0, -1.0).is_err());
    }

    #[test]
    fn survival_values() {
        // Frozen from a 30-digit evaluation of erf(a / sqrt(2 tau)).
        let cases = [
            (1.0, 1.0, 1.0, 0.424_176_441_779_715_78),
            (1.0, 1.0, 0.5, 0.719_352_856_391_814_4),
            (-0.5, 1.0, 1.0, 0.791_523_805_544_146_8),
            (0.0, 1.0, 1.0, 0.682_689_492_137_085_9),
        ];
        for (g, a, t, s) in cases {
            assert!(rel(survival_probability(&p(g, a), t).unwrap(), s) < 1e-14);
        }
        assert!(survival_probability(&p(1.0, 1.0), 1e-12).unwrap() > 1.0 - 1e-12);
        assert_eq!(survival_probability(&p(1.0, 1e3), 1.0).unwrap(), 1.0);
        assert!(survival_probability(&p(1.0, 1.0), 0.0).is_err());
    }

    #[test]
    fn densities_vanish_at_the_boundary() {
        let params = p(1.0, 1.0);
        assert_eq!(killed_ou_density(&params, 1.0, 0.0).unwrap(), 0.0);
        assert_eq!(radial_density(&params, 1.0, 0.0).unwrap(), 0.0);
        assert!(killed_ou_density(&params, 1.0, 1e-9).unwrap() < 1e-8);
        assert!(killed_ou_density(&params, 1.0, -0.1).is_err());
    }

    #[test]
    fn gamma_zero_is_killed_brownian_motion() {
        let (a, t) = (0.8, 1.3);
        let params = p(0.0, a);
        for i in 1..50 {
            let x = 0.1 * i as f64;
            let reflection =
                (-(x - a).powi(2) / (2.0 * t)).exp() / (2.0 * PI * t).sqrt()
                    - (-(x + a).powi(2) / (2.0 * t)).exp() / (2.0 * PI * t).sqrt();
            assert!(rel(killed_ou_density(&params, t, x).unwrap(), reflection) < 1e-12);
        }
    }

    #[test]
    fn normalizations() {
        for &g in &[-0.5, 0.0, 1.0] {
            for &t in &[0.25, 1.0, 4.0] {
                for &a in &[0.5, 1.0, 3.0] {
                    let params = p(g, a);
                    assert!((radial_mass(&params, t).unwrap() - 1.0).abs() < QUAD_TOL);
                    let s = survival_probability(&params, t).unwrap();
                    assert!((killed_mass(&params, t).unwrap() - s).abs() < QUAD_TOL);
                }
            }
        }
    }

    #[test]
    fn killed_expectations_match_high_precision_values() {
        // 30-digit reference integrals of the killed density at a=1, t=1.
        let params = p(1.0, 1.0);
        let above = killed_expectation(&params, 1.0, &TestFunctional::IndicatorAbove(1.0)).unwrap();
        assert!((above - 0.149_436_652_686_118_1).abs() < 1e-10);
        let below = killed_expectation(&params, 1.0, &TestFunctional::IndicatorBelow(0.5)).unwrap();
        assert!((below - 0.097_232_199_290_535_63).abs() < 1e-10);
        let capped = TestFunctional::CappedPolynomial { degree: 1, cap: 10.0 };
        // E[X_t 1{t<T0}] = a e^{-gamma t} by optional stopping.
        assert!((killed_expectation(&params, 1.0, &capped).unwrap() - (-1.0f64).exp()).abs() < 1e-10);
        let params = p(-0.5, 1.0);
        let above = killed_expectation(&params, 1.0, &TestFunctional::IndicatorAbove(1.0)).unwrap();
        assert!((above - 0.668_003_529_598_347_6).abs() < 1e-10);
    }

    #[test]
    fn two_routes_to_the_radial_density_agree() {
        for &(g, a, t) in &[(1.0, 1.0, 1.0), (-0.5, 2.0, 0.7), (0.0, 0.5, 2.0), (2.0, 3.0, 0.3)] {
            let params = p(g, a);
            let law = radial_transition(&params, t).unwrap();
            for x in abscissae(0.01, 6.0, 400, Spacing::Linear).unwrap() {
                let direct = radial_density(&params, t, x).unwrap();
                let via_law = radial_density_from_law(&law, x).unwrap();
                if direct > 1e-300 {
                    assert!(rel(via_law, direct) < 1e-10, "g={g} a={a} t={t} x={x}");
                }
            }
        }
    }

    #[test]
    fn radial_cdf_is_the_integral_of_the_density() {
        let params = p(1.0, 1.0);
        for &x in &[0.1, 0.5, 1.0, 2.0] {
            let q = crate::quadrature::integrate(
                |y| radial_density(&params, 1.0, y).unwrap(),
                0.0,
                x,
                1e-13,
                0.0,
            );
            assert!((radial_cdf(&params, 1.0, x).unwrap() - q.value).abs() < 1e-11);
        }
    }

    #[test]
    fn identity_residual_examples() {
        assert!(density_identity_relative_residual(&p(1.0, 1.0), 1.0, 0.5).unwrap() < 1e-12);
        assert!(density_identity_relative_residual(&p(-0.5, 2.0), 0.7, 1.3).unwrap() < 1e-12);
        assert!(density_identity_relative_residual(&p(0.0, 1.7), 0.9, 0.4).unwrap() < 1e-15);
    }

    #[test]
    fn local_martingale_mean_decreases() {
        let params = p(1.0, 1.0);
        let m: Vec<f64> = [0.25, 0.5, 1.0, 2.0, 4.0]
            .iter()
            .map(|&t| local_martingale_mean(&params, t).unwrap())
            .collect();
        assert!(m.windows(2).all(|w| w[1] < w[0]));
        assert!(m[0] < 1.0);
    }

    #[test]
    fn abscissae_reject_nonpositive_min() {
        assert!(abscissae(0.0, 1.0, 10, Spacing::Log).is_err());
        assert!(abscissae(1.0, 1.0, 10, Spacing::Linear).is_err());
        assert!(abscissae(0.1, 1.0, 1, Spacing::Linear).is_err());
        let xs = abscissae(0.01, 100.0, 5, Spacing::Log).unwrap();
        assert!((xs[2] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn csv_has_17_significant_digits() {
        let curve = DensityCurve::tabulate(&[0.1, 0.2], |x| Ok(x / 3.0)).unwrap();
        let csv = curve.to_csv("q");
        let line = csv.lines().nth(1).unwrap();
        let value = line.split(',').nth(1).unwrap();
        assert_eq!(value.parse::<f64>().unwrap(), 0.1 / 3.0);
        assert_eq!(value, "3.3333333333333333e-2");
    }
}
