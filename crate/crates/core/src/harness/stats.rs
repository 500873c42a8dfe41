use std::cmp::Ordering;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::stream::StreamKey;

/// Coefficient `c(0.01)` of the asymptotic Kolmogorov–Smirnov critical value.
pub const KS_COEFF_1PCT: f64 = 1.63;

/// Sample mean with its standard error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MCEstimate {
    pub mean: f64,
    /// Sample standard deviation over `sqrt(n)`.
    pub stderr: f64,
    pub n: usize,
    /// Stream the samples were drawn from, when known.
    pub seed: Option<StreamKey>,
}

#[derive(Default)]
struct Neumaier {
    sum: f64,
    compensation: f64,
}

impl Neumaier {
    fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.compensation += (self.sum - t) + x;
        } else {
            self.compensation += (x - t) + self.sum;
        }
        self.sum = t;
    }

    fn total(&self) -> f64 {
        self.sum + self.compensation
    }
}

/// Mean and standard error by compensated two-pass summation.
pub fn aggregate<I: IntoIterator<Item = f64>>(samples: I) -> Result<MCEstimate> {
    let xs: Vec<f64> = samples.into_iter().collect();
    let n = xs.len();
    if n < 2 {
        return Err(Error::InsufficientSamples(format!("aggregate needs n >= 2, got {n}")));
    }
    let mut acc = Neumaier::default();
    xs.iter().for_each(|&x| acc.add(x));
    let mean = acc.total() / n as f64;
    let mut sq = Neumaier::default();
    xs.iter().for_each(|&x| sq.add((x - mean) * (x - mean)));
    let variance = sq.total() / (n - 1) as f64;
    Ok(MCEstimate {
        mean,
        stderr: (variance / n as f64).sqrt(),
        n,
        seed: None,
    })
}

fn sorted(xs: &[f64]) -> Result<Vec<f64>> {
    if xs.iter().any(|x| x.is_nan()) {
        return Err(Error::InvalidParameter {
            name: "sample",
            reason: "contains NaN".into(),
        });
    }
    let mut v = xs.to_vec();
    v.sort_by(|a, b| a.partial_cmp(b).unwrap_or(Ordering::Equal));
    Ok(v)
}

/// Two-sample statistic `sup_x |F_a(x) - F_b(x)|`.
pub fn ks_statistic(sample_a: &[f64], sample_b: &[f64]) -> Result<f64> {
    if sample_a.is_empty() || sample_b.is_empty() {
        return Err(Error::InsufficientSamples("KS statistic needs nonempty samples".into()));
    }
    let a = sorted(sample_a)?;
    let b = sorted(sample_b)?;
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let (mut i, mut j) = (0, 0);
    let mut d: f64 = 0.0;
    while i < a.len() && j < b.len() {
        let x = a[i].min(b[j]);
        while i < a.len() && a[i] <= x {
            i += 1;
        }
        while j < b.len() && b[j] <= x {
            j += 1;
        }
        d = d.max((i as f64 / na - j as f64 / nb).abs());
    }
    Ok(d)
}

/// One-sample statistic against a continuous distribution function.
pub fn ks_statistic_cdf<F: Fn(f64) -> f64>(sample: &[f64], cdf: F) -> Result<f64> {
    if sample.is_empty() {
        return Err(Error::InsufficientSamples("KS statistic needs a nonempty sample".into()));
    }
    let xs = sorted(sample)?;
    let n = xs.len() as f64;
    Ok(xs.iter().enumerate().fold(0.0f64, |d, (i, &x)| {
        let f = cdf(x);
        d.max(f - i as f64 / n).max((i + 1) as f64 / n - f)
    }))
}

/// 1% critical value `1.63 sqrt((n + m) / (n m))`; pass `m = None` for the
/// one-sample form `1.63 / sqrt(n)`.
pub fn ks_critical_value(n: usize, m: Option<usize>) -> f64 {
    let n = n as f64;
    match m {
        Some(m) => {
            let m = m as f64;
            KS_COEFF_1PCT * ((n + m) / (n * m)).sqrt()
        }
        None => KS_COEFF_1PCT / n.sqrt(),
    }
}

/// Equal-width histogram on `[lo, hi)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Histogram {
    pub lo: f64,
    pub hi: f64,
    pub counts: Vec<u64>,
    /// Samples that fell outside `[lo, hi)`.
    pub outside: u64,
}

impl Histogram {
    pub fn new(lo: f64, hi: f64, bins: usize) -> Result<Self> {
        if !(hi > lo) || bins == 0 || !lo.is_finite() || !hi.is_finite() {
            return Err(Error::InvalidParameter {
                name: "histogram",
                reason: format!("need finite lo < hi and bins >= 1, got [{lo}, {hi}) x {bins}"),
            });
        }
        Ok(Self { lo, hi, counts: vec![0; bins], outside: 0 })
    }

    pub fn fill<I: IntoIterator<Item = f64>>(&mut self, samples: I) {
        let width = self.bin_width();
        for x in samples {
            if x >= self.lo && x < self.hi {
                let k = (((x - self.lo) / width) as usize).min(self.counts.len() - 1);
                self.counts[k] += 1;
            } else {
                self.outside += 1;
            }
        }
    }

    pub fn bin_width(&self) -> f64 {
        (self.hi - self.lo) / self.counts.len() as f64
    }

    pub fn centers(&self) -> Vec<f64> {
        let w = self.bin_width();
        (0..self.counts.len()).map(|k| self.lo + (k as f64 + 0.5) * w).collect()
    }

    /// Counts normalized by the total sample count (inside and outside) and
    /// the bin width, so the bars estimate a probability density.
    pub fn density(&self) -> Vec<f64> {
        let total = self.counts.iter().sum::<u64>() + self.outside;
        let scale = 1.0 / (total.max(1) as f64 * self.bin_width());
        self.counts.iter().map(|&c| c as f64 * scale).collect()
    }
}
