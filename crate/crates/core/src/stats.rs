//! Empirical distributions, Kolmogorov–Smirnov tests and moment summaries.

use std::collections::BTreeMap;

use crate::error::{invalid, Result};

/// Sorted, finite, nonempty sample with free-form metadata.
#[derive(Debug, Clone, PartialEq)]
pub struct EmpiricalSample {
    values: Vec<f64>,
    pub meta: BTreeMap<String, String>,
}

impl EmpiricalSample {
    pub fn new(mut values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return invalid("empirical sample must be nonempty");
        }
        if values.iter().any(|v| v.is_nan()) {
            return invalid("empirical sample contains NaN");
        }
        values.sort_by(f64::total_cmp);
        Ok(Self { values, meta: BTreeMap::new() })
    }

    pub fn with_meta(mut self, key: impl Into<String>, value: impl ToString) -> Self {
        self.meta.insert(key.into(), value.to_string());
        self
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn min(&self) -> f64 {
        self.values[0]
    }

    pub fn max(&self) -> f64 {
        self.values[self.values.len() - 1]
    }

    /// Linear-interpolation quantile, `p` in `[0, 1]`.
    pub fn quantile(&self, p: f64) -> f64 {
        let pos = p.clamp(0.0, 1.0) * (self.len() - 1) as f64;
        let lo = pos.floor() as usize;
        let hi = pos.ceil() as usize;
        self.values[lo] + (pos - lo as f64) * (self.values[hi] - self.values[lo])
    }
}

/// Fraction of sample values `<= x`.
pub fn ecdf_at(s: &EmpiricalSample, x: f64) -> f64 {
    s.values.partition_point(|&v| v <= x) as f64 / s.len() as f64
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KsResult {
    pub statistic: f64,
    pub p_value: f64,
    pub n1: usize,
    /// `None` for a one-sample test.
    pub n2: Option<usize>,
}

/// `Q(x) = 2 sum_{k>=1} (-1)^{k-1} exp(-2 k^2 x^2)`, the limiting survival
/// function of `sqrt(n) D_n`.
pub fn kolmogorov_survival(x: f64) -> f64 {
    if x.is_nan() {
        return f64::NAN;
    }
    if x <= 0.0 {
        return 1.0;
    }
    if x < 1.0 {
        // The alternating series converges slowly here; use the dual theta
        // form of the CDF, `sqrt(2 pi)/x sum exp(-(2k-1)^2 pi^2 / (8 x^2))`.
        let c = std::f64::consts::PI * std::f64::consts::PI / (8.0 * x * x);
        let mut cdf = 0.0;
        for k in 1..=50u32 {
            let j = f64::from(2 * k - 1);
            let term = (-j * j * c).exp();
            cdf += term;
            if term < 1e-16 {
                break;
            }
        }
        cdf *= (2.0 * std::f64::consts::PI).sqrt() / x;
        return (1.0 - cdf).clamp(0.0, 1.0);
    }
    let mut sum = 0.0;
    let mut sign = 1.0;
    for k in 1..=100u32 {
        let kf = f64::from(k);
        let term = (-2.0 * kf * kf * x * x).exp();
        sum += sign * term;
        if term < 1e-12 {
            break;
        }
        sign = -sign;
    }
    (2.0 * sum).clamp(0.0, 1.0)
}

/// Two-sample statistic `sup_x |F_a(x) - F_b(x)|` by a merge scan, with the
/// asymptotic p-value `Q(D sqrt(n1 n2 / (n1 + n2)))`.
pub fn ks_two_sample(a: &EmpiricalSample, b: &EmpiricalSample) -> KsResult {
    let (x, y) = (a.values(), b.values());
    let (n1, n2) = (x.len(), y.len());
    let (mut i, mut j) = (0, 0);
    let mut d: f64 = 0.0;
    while i < n1 && j < n2 {
        let v = x[i].min(y[j]);
        while i < n1 && x[i] <= v {
            i += 1;
        }
        while j < n2 && y[j] <= v {
            j += 1;
        }
        d = d.max((i as f64 / n1 as f64 - j as f64 / n2 as f64).abs());
    }
    let en = (n1 as f64 * n2 as f64 / (n1 + n2) as f64).sqrt();
    KsResult { statistic: d, p_value: kolmogorov_survival(d * en), n1, n2: Some(n2) }
}

/// One-sample statistic against a nondecreasing CDF. Both one-sided limits of
/// the empirical CDF are compared at every distinct sample value, so step
/// CDFs are handled exactly.
pub fn ks_against_cdf(a: &EmpiricalSample, cdf: impl Fn(f64) -> f64) -> KsResult {
    let x = a.values();
    let n = x.len() as f64;
    let mut d: f64 = 0.0;
    let mut i = 0;
    while i < x.len() {
        let v = x[i];
        let below = i as f64 / n;
        while i < x.len() && x[i] == v {
            i += 1;
        }
        let at = i as f64 / n;
        d = d.max((cdf(v) - at).abs()).max((cdf(v.next_down()) - below).abs());
    }
    KsResult { statistic: d, p_value: kolmogorov_survival(d * n.sqrt()), n1: x.len(), n2: None }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Moments {
    pub mean: f64,
    /// Unbiased sample variance.
    pub variance: f64,
    pub standard_error: f64,
}

pub fn moment_summary(a: &EmpiricalSample) -> Result<Moments> {
    moments_of(a.values())
}

/// Moments of an unsorted slice; at least two values.
pub fn moments_of(x: &[f64]) -> Result<Moments> {
    if x.len() < 2 {
        return invalid("moments need at least two values");
    }
    let n = x.len() as f64;
    let mean = x.iter().sum::<f64>() / n;
    let variance = x.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1.0);
    Ok(Moments { mean, variance, standard_error: (variance / n).sqrt() })
}
