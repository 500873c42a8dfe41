//! Parameters, the Doob time change and exact transition laws.
//!
//! The OU process started at `a` with rate `gamma` satisfies
//! `dX = dB - gamma X dt` and admits the representation
//! `X_t = e^{-gamma t} (a + beta(tau(t)))` for a Brownian motion `beta`, where
//! `tau(t) = (e^{2 gamma t} - 1) / (2 gamma)`. Every law in this module is a
//! consequence of that time change. The radial process is the Euclidean norm
//! of a 3-dimensional OU process started at `(a, 0, 0)`.
//!
//! `gamma` may take either sign, and `gamma = 0` is the Brownian / BES(3)
//! case rather than a special code path.

use rand::Rng;
use rand_distr::StandardNormal;
use serde::Serialize;

use crate::error::{ensure_finite, invalid, Error, Result};

/// Below this value of `|2 gamma t|` the time change is evaluated by its
/// Taylor series.
pub const SERIES_THRESHOLD: f64 = 1e-4;

/// The pair `(gamma, a)` indexing the OU law `P` and the radial law `Q`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ProcessParams {
    gamma: f64,
    a: f64,
}

impl ProcessParams {
    pub fn new(gamma: f64, a: f64) -> Result<Self> {
        ensure_finite("gamma", gamma)?;
        ensure_finite("a", a)?;
        if a <= 0.0 {
            return Err(invalid("a", format!("starting point must be > 0, got {a}")));
        }
        Ok(Self { gamma, a })
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn a(&self) -> f64 {
        self.a
    }
}

/// Normal law `N(mean, variance)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GaussianLaw {
    pub mean: f64,
    pub variance: f64,
}

impl GaussianLaw {
    pub fn std_dev(&self) -> f64 {
        self.variance.sqrt()
    }
}

/// Law of `|V|` for `V ~ N((center, 0, 0), sigma2 I_3)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RadialLaw {
    pub center: f64,
    pub sigma2: f64,
}

impl RadialLaw {
    /// `E[R^2] = center^2 + 3 sigma2`.
    pub fn second_moment(&self) -> f64 {
        self.center * self.center + 3.0 * self.sigma2
    }
}

pub(crate) fn check_time(t: f64) -> Result<()> {
    ensure_finite("t", t)?;
    if t < 0.0 {
        return Err(invalid("t", format!("time must be >= 0, got {t}")));
    }
    Ok(())
}

fn exp_checked(x: f64, what: &str) -> Result<f64> {
    let v = x.exp();
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::Range(format!("{what}: exp({x}) overflows")))
    }
}

/// `(e^{x} - 1) / x` for `x = 2 gamma t`, times `t`.
fn scaled_expm1(rate: f64, t: f64) -> Result<f64> {
    let x = 2.0 * rate * t;
    if x.abs() < SERIES_THRESHOLD {
        Ok(t * (1.0 + x / 2.0 + x * x / 6.0 + x * x * x / 24.0))
    } else {
        let num = x.exp_m1();
        if !num.is_finite() {
            return Err(Error::Range(format!("exp({x}) overflows")));
        }
        Ok(num / (2.0 * rate))
    }
}

/// The Doob clock `tau(t) = (e^{2 gamma t} - 1) / (2 gamma)`.
///
/// Strictly increasing in `t`, `tau(0) = 0`, and `tau(t) = t` when
/// `gamma = 0`. For `gamma < 0` the clock saturates at `1 / (2 |gamma|)`.
pub fn time_change(params: &ProcessParams, t: f64) -> Result<f64> {
    check_time(t)?;
    scaled_expm1(params.gamma, t)
}

/// `e^{-2 gamma t} tau(t) = (1 - e^{-2 gamma t}) / (2 gamma)`, the variance
/// of `X_t` given `X_0`.
pub(crate) fn ou_variance(gamma: f64, t: f64) -> Result<f64> {
    scaled_expm1(-gamma, t)
}

/// Marginal law of `X_t` under `P` (unkilled).
pub fn ou_transition(params: &ProcessParams, t: f64) -> Result<GaussianLaw> {
    check_time(t)?;
    Ok(GaussianLaw {
        mean: params.a * exp_checked(-params.gamma * t, "mean decay")?,
        variance: ou_variance(params.gamma, t)?,
    })
}

/// Marginal law of `R_t` under `Q`.
pub fn radial_transition(params: &ProcessParams, t: f64) -> Result<RadialLaw> {
    let law = ou_transition(params, t)?;
    Ok(RadialLaw {
        center: law.mean,
        sigma2: law.variance,
    })
}

/// One exact draw of `X_t` under `P`. The value may be negative: this is the
/// free process, not the killed one.
pub fn sample_ou_exact<R: Rng + ?Sized>(params: &ProcessParams, t: f64, rng: &mut R) -> Result<f64> {
    let law = ou_transition(params, t)?;
    let z: f64 = rng.sample(StandardNormal);
    Ok(law.mean + law.std_dev() * z)
}

/// One exact draw of `R_t` under `Q`, as the norm of a 3-d Gaussian vector.
pub fn sample_radial_exact<R: Rng + ?Sized>(
    params: &ProcessParams,
    t: f64,
    rng: &mut R,
) -> Result<f64> {
    let law = radial_transition(params, t)?;
    Ok(draw_radial(&law, rng))
}

pub(crate) fn draw_radial<R: Rng + ?Sized>(law: &RadialLaw, rng: &mut R) -> f64 {
    let s = law.sigma2.sqrt();
    let x: f64 = law.center + s * rng.sample::<f64, _>(StandardNormal);
    let y: f64 = s * rng.sample::<f64, _>(StandardNormal);
    let z: f64 = s * rng.sample::<f64, _>(StandardNormal);
    (x * x + y * y + z * z).sqrt()
}

/// The `P`-martingale `x e^{gamma t}`.
pub fn martingale_value(params: &ProcessParams, x: f64, t: f64) -> f64 {
    x * (params.gamma * t).exp()
}
