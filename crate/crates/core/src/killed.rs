//! Path simulation on time grids.
//!
//! The exact killed-OU scheme runs a Brownian motion from `a` on the Doob
//! clock, maps it back with `e^{-gamma t}`, and decides absorption between
//! grid points with the Brownian-bridge crossing probability
//! `exp(-2 y_i y_{i+1} / (tau_{i+1} - tau_i))`. Killing is therefore exact in
//! distribution whatever the grid. The Euler schemes are the naive baselines:
//! sign-check killing for OU, and a guarded step for the singular `1/R`
//! drift of the radial process.

use rand::Rng;
use rand_distr::StandardNormal;
use serde::Serialize;

use crate::error::{ensure_finite, invalid, Error, Result};
use crate::process::{ou_variance, time_change, ProcessParams};

/// Observation times `0 = t_0 < t_1 < ... < t_n`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TimeGrid {
    times: Vec<f64>,
}

impl TimeGrid {
    pub fn new(times: Vec<f64>) -> Result<Self> {
        match times.first() {
            Some(&0.0) => {}
            Some(&t0) => return Err(Error::InvalidGrid(format!("must start at 0, starts at {t0}"))),
            None => return Err(Error::InvalidGrid("empty grid".into())),
        }
        if let Some(bad) = times.iter().find(|t| !t.is_finite()) {
            return Err(Error::InvalidGrid(format!("non-finite time {bad}")));
        }
        if let Some(w) = times.windows(2).find(|w| w[1] <= w[0]) {
            return Err(Error::InvalidGrid(format!(
                "times must be strictly increasing, found {} after {}",
                w[1], w[0]
            )));
        }
        Ok(Self { times })
    }

    /// `{0} ∪ observation_times`; the observation times must be positive and ascending.
    pub fn from_observations(observation_times: &[f64]) -> Result<Self> {
        let mut times = Vec::with_capacity(observation_times.len() + 1);
        times.push(0.0);
        times.extend_from_slice(observation_times);
        Self::new(times)
    }

    /// `n` equal intervals over `[0, horizon]`.
    pub fn uniform(horizon: f64, n: usize) -> Result<Self> {
        if n == 0 || !(horizon > 0.0) {
            return Err(Error::InvalidGrid(format!(
                "uniform grid needs n >= 1 and horizon > 0, got n={n}, horizon={horizon}"
            )));
        }
        Self::new((0..=n).map(|i| horizon * i as f64 / n as f64).collect())
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn horizon(&self) -> f64 {
        *self.times.last().expect("grid is never empty")
    }

    /// Index of `t` in the grid, matching to a relative tolerance of `1e-12`.
    pub fn index_of(&self, t: f64) -> Result<usize> {
        self.times
            .iter()
            .position(|&s| (s - t).abs() <= 1e-12 * t.abs().max(1.0))
            .ok_or(Error::TimeNotOnGrid(t))
    }
}

/// A path absorbed at 0.
///
/// `killing_index = Some(i)` means `T_0` fell in `(t_i, t_{i+1}]`; values at
/// indices `> i` are stored as 0, so `values[j]` is `X_{t_j ∧ T_0}`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct KilledPath {
    pub values: Vec<f64>,
    pub killing_index: Option<usize>,
    pub killed: bool,
}

impl KilledPath {
    /// Whether `T_0 > t_j`.
    pub fn alive_at(&self, j: usize) -> bool {
        self.killing_index.is_none_or(|k| j <= k)
    }

    pub fn terminal(&self) -> f64 {
        *self.values.last().expect("paths are never empty")
    }

    fn absorb_after(&mut self, interval: usize) {
        self.killing_index = Some(interval);
        self.killed = true;
        for v in &mut self.values[interval + 1..] {
            *v = 0.0;
        }
    }
}

/// A path that is never killed, with telemetry from the radial guard.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PathSample {
    pub values: Vec<f64>,
    /// Steps whose value had to be clamped to the positivity floor.
    pub clamp_count: usize,
    /// Base Euler sub-steps taken (0 for exact schemes).
    pub steps: usize,
}

impl PathSample {
    pub fn terminal(&self) -> f64 {
        *self.values.last().expect("paths are never empty")
    }
}

/// Euler scheme settings.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SchemeConfig {
    pub dt: f64,
    pub max_substep_depth: u32,
    pub positivity_floor: f64,
}

impl Default for SchemeConfig {
    fn default() -> Self {
        Self {
            dt: 1e-3,
            max_substep_depth: 8,
            positivity_floor: 1e-6,
        }
    }
}

impl SchemeConfig {
    pub fn with_dt(dt: f64) -> Self {
        Self {
            dt,
            ..Self::default()
        }
    }

    pub fn validate(&self, params: &ProcessParams) -> Result<()> {
        ensure_finite("dt", self.dt)?;
        if self.dt <= 0.0 {
            return Err(invalid("dt", format!("must be > 0, got {}", self.dt)));
        }
        if !(self.positivity_floor > 0.0 && self.positivity_floor < params.a()) {
            return Err(invalid(
                "positivity_floor",
                format!("must lie in (0, a = {}), got {}", params.a(), self.positivity_floor),
            ));
        }
        Ok(())
    }

    fn substeps(&self, interval: f64) -> (usize, f64) {
        let m = ((interval / self.dt) * (1.0 - 1e-12)).ceil().max(1.0) as usize;
        (m, interval / m as f64)
    }
}

/// Exact killed-OU sampler with the grid's clock values precomputed.
#[derive(Debug, Clone)]
pub struct KilledOuSampler {
    params: ProcessParams,
    clock: Vec<f64>,
    decay: Vec<f64>,
}

impl KilledOuSampler {
    pub fn new(params: ProcessParams, grid: &TimeGrid) -> Result<Self> {
        let clock = grid
            .times()
            .iter()
            .map(|&t| time_change(&params, t))
            .collect::<Result<Vec<_>>>()?;
        let decay = grid.times().iter().map(|&t| (-params.gamma() * t).exp()).collect::<Vec<_>>();
        if decay.iter().any(|d| !d.is_finite()) {
            return Err(Error::Range("e^{-gamma t} overflows on this grid".into()));
        }
        Ok(Self { params, clock, decay })
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> KilledPath {
        let n = self.clock.len();
        let mut path = KilledPath {
            values: vec![0.0; n],
            killing_index: None,
            killed: false,
        };
        let mut y = self.params.a();
        path.values[0] = y;
        for i in 0..n - 1 {
            let dtau = self.clock[i + 1] - self.clock[i];
            let z: f64 = rng.sample(StandardNormal);
            let next = y + dtau.sqrt() * z;
            let crossed = next <= 0.0 || {
                let u: f64 = rng.random();
                u < (-2.0 * y * next / dtau).exp()
            };
            if crossed {
                path.absorb_after(i);
                return path;
            }
            y = next;
            path.values[i + 1] = self.decay[i + 1] * y;
        }
        path
    }
}

/// Exact killed OU path on `grid`.
pub fn simulate_killed_ou_exact<R: Rng + ?Sized>(
    params: &ProcessParams,
    grid: &TimeGrid,
    rng: &mut R,
) -> Result<KilledPath> {
    Ok(KilledOuSampler::new(*params, grid)?.sample(rng))
}

/// Exact (free, unkilled) OU path from the Markov transition.
pub fn simulate_ou_exact_path<R: Rng + ?Sized>(
    params: &ProcessParams,
    grid: &TimeGrid,
    rng: &mut R,
) -> Result<PathSample> {
    let gamma = params.gamma();
    let mut values = Vec::with_capacity(grid.len());
    let mut x = params.a();
    values.push(x);
    for w in grid.times().windows(2) {
        let h = w[1] - w[0];
        let sd = ou_variance(gamma, h)?.sqrt();
        let z: f64 = rng.sample(StandardNormal);
        x = (-gamma * h).exp() * x + sd * z;
        values.push(x);
    }
    Ok(PathSample {
        values,
        clamp_count: 0,
        steps: 0,
    })
}

/// Exact radial OU path: the norm of a 3-d OU path advanced by its exact
/// Gaussian transition.
pub fn simulate_radial_exact_path<R: Rng + ?Sized>(
    params: &ProcessParams,
    grid: &TimeGrid,
    rng: &mut R,
) -> Result<PathSample> {
    let gamma = params.gamma();
    let mut v = [params.a(), 0.0, 0.0];
    let mut values = Vec::with_capacity(grid.len());
    values.push(params.a());
    for w in grid.times().windows(2) {
        let h = w[1] - w[0];
        let sd = ou_variance(gamma, h)?.sqrt();
        let decay = (-gamma * h).exp();
        for c in &mut v {
            let z: f64 = rng.sample(StandardNormal);
            *c = decay * *c + sd * z;
        }
        values.push((v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt());
    }
    Ok(PathSample {
        values,
        clamp_count: 0,
        steps: 0,
    })
}

/// One explicit Euler step of `dX = dB - gamma X dt`.
#[inline]
pub fn euler_ou_step(x: f64, gamma: f64, h: f64, dw: f64) -> f64 {
    x - gamma * x * h + dw
}

/// Euler–Maruyama for OU, killed at the first sub-step with value `<= 0`.
/// No bridge correction, so survival is biased upwards by `O(sqrt(dt))`.
pub fn euler_ou<R: Rng + ?Sized>(
    params: &ProcessParams,
    grid: &TimeGrid,
    scheme: &SchemeConfig,
    rng: &mut R,
) -> Result<KilledPath> {
    scheme.validate(params)?;
    let gamma = params.gamma();
    let mut path = KilledPath {
        values: vec![0.0; grid.len()],
        killing_index: None,
        killed: false,
    };
    let mut x = params.a();
    path.values[0] = x;
    for (i, w) in grid.times().windows(2).enumerate() {
        let (m, h) = scheme.substeps(w[1] - w[0]);
        let sh = h.sqrt();
        for _ in 0..m {
            let z: f64 = rng.sample(StandardNormal);
            x = euler_ou_step(x, gamma, h, sh * z);
            if x <= 0.0 {
                path.absorb_after(i);
                return Ok(path);
            }
        }
        path.values[i + 1] = x;
    }
    Ok(path)
}

/// Euler–Maruyama for OU without absorption.
pub fn euler_ou_free<R: Rng + ?Sized>(
    params: &ProcessParams,
    grid: &TimeGrid,
    scheme: &SchemeConfig,
    rng: &mut R,
) -> Result<PathSample> {
    scheme.validate(params)?;
    let gamma = params.gamma();
    let mut values = Vec::with_capacity(grid.len());
    let mut x = params.a();
    let mut steps = 0;
    values.push(x);
    for w in grid.times().windows(2) {
        let (m, h) = scheme.substeps(w[1] - w[0]);
        let sh = h.sqrt();
        for _ in 0..m {
            let z: f64 = rng.sample(StandardNormal);
            x = euler_ou_step(x, gamma, h, sh * z);
        }
        steps += m;
        values.push(x);
    }
    Ok(PathSample {
        values,
        clamp_count: 0,
        steps,
    })
}

/// Radial steps landing below this many `sqrt(h)` are refined.
const RETRY_SCALE: f64 = 0.5;

struct RadialStepper<'a, R: ?Sized> {
    gamma: f64,
    scheme: &'a SchemeConfig,
    rng: &'a mut R,
    clamps: usize,
}

impl<R: Rng + ?Sized> RadialStepper<'_, R> {
    /// Advance `r` over `h` with Brownian increment `dw`.
    ///
    /// The step is split in two when it starts or lands below
    /// `max(floor, sqrt(h) / 2)`, with the midpoint of the Brownian increment
    /// drawn from its bridge law so the driving path is preserved. Accepted
    /// steps thus start at `r >= sqrt(h) / 2`, which bounds the singular drift
    /// increment `h / r` by `2 sqrt(h)`. At the depth limit a non-positive
    /// proposal is clamped to the floor.
    fn advance(&mut self, r: f64, h: f64, dw: f64, depth: u32) -> f64 {
        let floor = self.scheme.positivity_floor;
        let scale = floor.max(RETRY_SCALE * h.sqrt());
        let can_split = depth < self.scheme.max_substep_depth;
        if !(can_split && r < scale) {
            let proposal = r + (1.0 / r - self.gamma * r) * h + dw;
            if proposal > scale || (!can_split && proposal > floor) {
                return proposal;
            }
            if !can_split {
                self.clamps += 1;
                return floor;
            }
        }
        let z: f64 = self.rng.sample(StandardNormal);
        let first = 0.5 * dw + 0.5 * h.sqrt() * z;
        let mid = self.advance(r, 0.5 * h, first, depth + 1);
        self.advance(mid, 0.5 * h, dw - first, depth + 1)
    }
}

/// Euler–Maruyama for `dR = dB + dt / R - gamma R dt`. Output is strictly
/// positive; clamps to the positivity floor are counted in the result.
pub fn euler_radial<R: Rng + ?Sized>(
    params: &ProcessParams,
    grid: &TimeGrid,
    scheme: &SchemeConfig,
    rng: &mut R,
) -> Result<PathSample> {
    scheme.validate(params)?;
    let mut stepper = RadialStepper {
        gamma: params.gamma(),
        scheme,
        rng,
        clamps: 0,
    };
    let mut values = Vec::with_capacity(grid.len());
    let mut r = params.a();
    let mut steps = 0;
    values.push(r);
    for w in grid.times().windows(2) {
        let (m, h) = scheme.substeps(w[1] - w[0]);
        let sh = h.sqrt();
        for _ in 0..m {
            let z: f64 = stepper.rng.sample(StandardNormal);
            r = stepper.advance(r, h, sh * z, 0);
        }
        steps += m;
        values.push(r);
    }
    Ok(PathSample {
        values,
        clamp_count: stepper.clamps,
        steps,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::closed_form::survival_probability;
    use crate::harness::aggregate;
    use crate::stream::{map_paths, StreamKey};

    fn p(gamma: f64, a: f64) -> ProcessParams {
        ProcessParams::new(gamma, a).unwrap()
    }

    #[test]
    fn grid_validation() {
        assert!(TimeGrid::new(vec![]).is_err());
        assert!(TimeGrid::new(vec![0.1, 0.2]).is_err());
        assert!(TimeGrid::new(vec![0.0, 0.5, 0.5]).is_err());
        assert!(TimeGrid::new(vec![0.0, f64::NAN]).is_err());
        assert!(TimeGrid::from_observations(&[1.0, 0.5]).is_err());
        let g = TimeGrid::uniform(1.0, 4).unwrap();
        assert_eq!(g.times(), &[0.0, 0.25, 0.5, 0.75, 1.0]);
        assert_eq!(g.index_of(0.75).unwrap(), 3);
        assert!(matches!(g.index_of(0.3), Err(Error::TimeNotOnGrid(_))));
    }

    #[test]
    fn scheme_validation() {
        let params = p(1.0, 1.0);
        assert!(SchemeConfig::with_dt(0.0).validate(&params).is_err());
        assert!(SchemeConfig::with_dt(-1.0).validate(&params).is_err());
        let bad_floor = SchemeConfig {
            positivity_floor: 2.0,
            ..SchemeConfig::default()
        };
        assert!(bad_floor.validate(&params).is_err());
    }

    #[test]
    fn absorbed_values_are_zero_after_killing() {
        let params = p(1.0, 0.2);
        let grid = TimeGrid::uniform(2.0, 20).unwrap();
        let key = StreamKey::new(5);
        let mut seen_kill = false;
        for i in 0..200 {
            let path = simulate_killed_ou_exact(&params, &grid, &mut key.path_rng(i)).unwrap();
            assert_eq!(path.values[0], 0.2);
            if let Some(k) = path.killing_index {
                seen_kill = true;
                assert!(path.killed);
                assert!(path.values[k + 1..].iter().all(|&v| v == 0.0));
                assert!(path.values[..=k].iter().all(|&v| v > 0.0));
                assert!(path.alive_at(k) && !path.alive_at(k + 1));
            } else {
                assert!(path.values.iter().all(|&v| v > 0.0));
            }
        }
        assert!(seen_kill);
    }

    fn exact_survival(params: &ProcessParams, grid: &TimeGrid, n: usize, seed: u64) -> (f64, f64) {
        let sampler = KilledOuSampler::new(*params, grid).unwrap();
        let alive = map_paths(&StreamKey::new(seed), n, |_, rng| {
            if sampler.sample(rng).killed { 0.0 } else { 1.0 }
        });
        let est = aggregate(alive).unwrap();
        (est.mean, est.stderr)
    }

    #[test]
    fn exact_survival_matches_closed_form() {
        let params = p(1.0, 1.0);
        let grid = TimeGrid::from_observations(&[1.0]).unwrap();
        let (s, se) = exact_survival(&params, &grid, 1_000_000, 1);
        let target = survival_probability(&params, 1.0).unwrap();
        assert!((s - target).abs() <= 4.0 * se, "{s} vs {target} (se {se})");
    }

    #[test]
    fn exact_survival_is_grid_independent() {
        let params = p(1.0, 1.0);
        let coarse = TimeGrid::uniform(1.0, 10).unwrap();
        let fine = TimeGrid::uniform(1.0, 1000).unwrap();
        let (s1, e1) = exact_survival(&params, &coarse, 200_000, 2);
        let (s2, e2) = exact_survival(&params, &fine, 200_000, 3);
        assert!((s1 - s2).abs() <= 4.0 * (e1 * e1 + e2 * e2).sqrt());
    }

    #[test]
    fn far_start_is_never_killed() {
        let (s, _) = exact_survival(&p(1.0, 50.0), &TimeGrid::from_observations(&[1.0]).unwrap(), 10_000, 4);
        assert_eq!(s, 1.0);
    }

    #[test]
    fn euler_free_mean_weak_error() {
        let params = p(1.0, 1.0);
        let grid = TimeGrid::from_observations(&[1.0]).unwrap();
        let scheme = SchemeConfig::with_dt(0.01);
        let xs = map_paths(&StreamKey::new(6), 100_000, |_, rng| {
            euler_ou_free(&params, &grid, &scheme, rng).unwrap().terminal()
        });
        let est = aggregate(xs).unwrap();
        assert!((est.mean - (-1.0f64).exp()).abs() < 0.01);
    }

    #[test]
    fn euler_weak_error_halves_with_dt() {
        // Couple Euler to the exact OU recursion on the same increments; the
        // mean difference is then the weak error with negligible noise.
        let gamma: f64 = 1.0;
        let n_paths = 20_000;
        let errors: Vec<f64> = [0.01, 0.005, 0.0025, 0.00125]
            .iter()
            .map(|&h: &f64| {
                let m = (1.0 / h).round() as usize;
                let decay = (-gamma * h).exp();
                let sd = ((1.0 - (-2.0 * gamma * h).exp()) / (2.0 * gamma)).sqrt();
                let diffs = map_paths(&StreamKey::new(7), n_paths, |_, rng| {
                    let (mut xe, mut xx) = (1.0, 1.0);
                    for _ in 0..m {
                        let z: f64 = rng.sample(StandardNormal);
                        xe = euler_ou_step(xe, gamma, h, h.sqrt() * z);
                        xx = decay * xx + sd * z;
                    }
                    xe - xx
                });
                aggregate(diffs).unwrap().mean.abs()
            })
            .collect();
        for w in errors.windows(2) {
            let ratio = w[0] / w[1];
            assert!((1.7..2.3).contains(&ratio), "{errors:?}");
        }
    }

    #[test]
    fn euler_brownian_survival_reflection() {
        // gamma = 0: survival of BM from a over [0, t] is erf(a / sqrt(2t)).
        let params = p(0.0, 1.0);
        let grid = TimeGrid::from_observations(&[1.0]).unwrap();
        let scheme = SchemeConfig::with_dt(1e-4);
        let alive = map_paths(&StreamKey::new(8), 20_000, |_, rng| {
            if euler_ou(&params, &grid, &scheme, rng).unwrap().killed { 0.0 } else { 1.0 }
        });
        let est = aggregate(alive).unwrap();
        let target = libm::erf(1.0 / 2f64.sqrt());
        // Discrete monitoring bias is about 0.58 sqrt(dt) in the starting point.
        assert!(est.mean >= target - 4.0 * est.stderr);
        assert!(est.mean - target < 0.01 + 4.0 * est.stderr);
    }

    #[test]
    fn euler_survival_bias_shrinks_like_sqrt_dt() {
        let params = p(1.0, 1.0);
        let grid = TimeGrid::from_observations(&[1.0]).unwrap();
        let target = survival_probability(&params, 1.0).unwrap();
        let gaps: Vec<f64> = [0.05, 0.02, 0.01, 0.005]
            .iter()
            .map(|&dt| {
                let scheme = SchemeConfig::with_dt(dt);
                let alive = map_paths(&StreamKey::new(11), 200_000, |_, rng| {
                    if euler_ou(&params, &grid, &scheme, rng).unwrap().killed { 0.0 } else { 1.0 }
                });
                let gap = aggregate(alive).unwrap().mean - target;
                // Sign-check killing misses excursions below 0 between steps.
                assert!((0.25..0.5).contains(&(gap / dt.sqrt())), "dt={dt} gap={gap}");
                gap
            })
            .collect();
        assert!(gaps.windows(2).all(|w| w[1] < w[0]), "{gaps:?}");
    }

    #[test]
    fn survivors_follow_the_normalized_killed_density() {
        use crate::closed_form::killed_ou_density;
        use crate::harness::{ks_critical_value, ks_statistic_cdf, Histogram};

        let params = p(1.0, 1.0);
        let t = 1.0;
        let s = survival_probability(&params, t).unwrap();
        let sampler = KilledOuSampler::new(params, &TimeGrid::uniform(t, 5).unwrap()).unwrap();
        let survivors: Vec<f64> = map_paths(&StreamKey::new(31), 200_000, |_, rng| sampler.sample(rng))
            .into_iter()
            .filter(|path| !path.killed)
            .map(|path| path.terminal())
            .collect();
        let n = survivors.len();

        // Reflected Gaussian CDF on the Brownian clock, by hand.
        let tau = 0.5 * (2f64.exp() - 1.0);
        let scale = t.exp();
        let phi = |z: f64| 0.5 * libm::erfc(-z / std::f64::consts::SQRT_2);
        let cdf = |x: f64| {
            let y = x * scale;
            (phi((y - 1.0) / tau.sqrt()) - phi(-1.0 / tau.sqrt()) - phi((y + 1.0) / tau.sqrt())
                + phi(1.0 / tau.sqrt()))
                / s
        };
        let d = ks_statistic_cdf(&survivors, cdf).unwrap();
        assert!(d < ks_critical_value(n, None), "D = {d}");

        let mut h = Histogram::new(0.0, 2.0, 20).unwrap();
        h.fill(survivors.iter().copied());
        for (c, got) in h.centers().iter().zip(h.density()) {
            let want = killed_ou_density(&params, t, *c).unwrap() / s;
            let se = (want * 0.1 / n as f64).sqrt() / 0.1;
            assert!((got - want).abs() <= 5.0 * se + 0.01, "x={c} {got} vs {want}");
        }
    }

    #[test]
    fn euler_radial_is_positive_and_rarely_clamps() {
        let params = p(1.0, 1.0);
        let grid = TimeGrid::uniform(1.0, 10).unwrap();
        let scheme = SchemeConfig::with_dt(1e-3);
        let paths = map_paths(&StreamKey::new(9), 5_000, |_, rng| {
            euler_radial(&params, &grid, &scheme, rng).unwrap()
        });
        let steps: usize = paths.iter().map(|p| p.steps).sum();
        let clamps: usize = paths.iter().map(|p| p.clamp_count).sum();
        assert_eq!(steps, 5_000 * 1000);
        assert!(paths.iter().all(|p| p.values.iter().all(|&v| v > 0.0)));
        assert!((clamps as f64) < 1e-3 * steps as f64);
    }

    #[test]
    fn exact_radial_path_second_moment() {
        let params = p(1.0, 1.0);
        let grid = TimeGrid::uniform(1.0, 4).unwrap();
        let r2 = map_paths(&StreamKey::new(10), 200_000, |_, rng| {
            simulate_radial_exact_path(&params, &grid, rng).unwrap().terminal().powi(2)
        });
        let est = aggregate(r2).unwrap();
        assert!((est.mean - 1.432_332_358_381_693_7).abs() <= 4.0 * est.stderr);
    }
}
