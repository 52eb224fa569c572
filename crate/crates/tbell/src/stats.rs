//! Normality diagnostics for the replicated statistic: a Kolmogorov–Smirnov
//! test against a fitted normal, and histogram data with a density overlay.
//!
//! The p-value uses the asymptotic Kolmogorov distribution
//! `Q(t) = 2 * sum_{k>=1} (-1)^(k-1) * exp(-2 k^2 t^2)` at `t = sqrt(n) * D`,
//! truncating the series once a term drops below 1e-10 and clamping to [0, 1].
//! Mean and standard deviation are estimated from the sample and no
//! Lilliefors-style correction is applied for that estimation, which biases
//! the p-value upward; reports carry this caveat.

use thiserror::Error;

use crate::real::Real;

/// Smallest sample size the KS test accepts; the asymptotic p-value is
/// meaningless below this.
pub const MIN_KS_SAMPLES: usize = 8;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum StatsError {
    #[error("need at least {min} samples, got {got}")]
    TooFewSamples { got: usize, min: usize },
    #[error("sample is degenerate (zero spread)")]
    DegenerateSample,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KsResult<F> {
    /// Two-sided sup distance between the empirical CDF and the fitted normal.
    pub statistic: F,
    pub p_value: F,
    pub n: usize,
    pub fitted_mean: F,
    pub fitted_sd: F,
}

/// Standard normal CDF via the complementary error function.
pub fn normal_cdf<F: Real>(z: F) -> F {
    F::lit(0.5) * (-z / F::lit(std::f64::consts::SQRT_2)).erfc()
}

/// Normal density with the given mean and standard deviation.
pub fn normal_pdf<F: Real>(x: F, mean: F, sd: F) -> F {
    let z = (x - mean) / sd;
    (-F::lit(0.5) * z * z).exp() / (sd * F::lit((2.0 * std::f64::consts::PI).sqrt()))
}

/// Sample mean and unbiased standard deviation (divisor n - 1).
/// The sd is zero when fewer than two samples are given.
pub fn fit_normal<F: Real>(samples: &[F]) -> (F, F) {
    let n = samples.len();
    let mean = samples.iter().copied().sum::<F>() / F::from_count(n.max(1));
    if n < 2 {
        return (mean, F::zero());
    }
    let ss: F = samples.iter().map(|&x| (x - mean) * (x - mean)).sum();
    (mean, (ss / F::from_count(n - 1)).sqrt())
}

/// Two-sided sup distance `max_i max(i/n - F(x_(i)), F(x_(i)) - (i-1)/n)`
/// between the empirical CDF of an ascending sample and a reference CDF.
pub fn ks_statistic_against<F: Real>(sorted: &[F], cdf: impl Fn(F) -> F) -> F {
    let n = F::from_count(sorted.len());
    let mut sup = F::zero();
    for (i, &x) in sorted.iter().enumerate() {
        let f = cdf(x);
        let upper = F::from_count(i + 1) / n - f;
        let lower = f - F::from_count(i) / n;
        sup = sup.max(upper).max(lower);
    }
    sup
}

/// Survival function of the Kolmogorov distribution, `Q(t) = P(K > t)`.
pub fn kolmogorov_q<F: Real>(t: F) -> F {
    if t <= F::zero() || t < F::lit(1e-4) {
        // Q is 1 to double precision anywhere below 1e-4
        return F::one();
    }
    let cutoff = F::lit(1e-10);
    let two = F::lit(2.0);
    let mut sum = F::zero();
    let mut sign = F::one();
    for k in 1..100_000 {
        let kf = F::from_int(k);
        let term = (-two * kf * kf * t * t).exp();
        if term < cutoff {
            break;
        }
        sum = sum + sign * term;
        sign = -sign;
    }
    (two * sum).min(F::one()).max(F::zero())
}

/// Tests the sample against a normal distribution with mean and sd estimated
/// from the sample itself.
pub fn ks_normality_test<F: Real>(samples: &[F]) -> Result<KsResult<F>, StatsError> {
    let n = samples.len();
    if n < MIN_KS_SAMPLES {
        return Err(StatsError::TooFewSamples {
            got: n,
            min: MIN_KS_SAMPLES,
        });
    }
    let (fitted_mean, fitted_sd) = fit_normal(samples);
    if fitted_sd <= F::zero() {
        return Err(StatsError::DegenerateSample);
    }
    let mut sorted = samples.to_vec();
    sorted.sort_unstable_by(|a, b| a.partial_cmp(b).expect("samples must be finite"));
    let statistic = ks_statistic_against(&sorted, |x| normal_cdf((x - fitted_mean) / fitted_sd));
    let p_value = kolmogorov_q(F::from_count(n).sqrt() * statistic);
    Ok(KsResult {
        statistic,
        p_value,
        n,
        fitted_mean,
        fitted_sd,
    })
}

/// Equal-width histogram over `[min, max]` with a fitted-normal density
/// overlay evaluated at bin midpoints.
#[derive(Debug, Clone, PartialEq)]
pub struct Histogram<F> {
    /// `bins + 1` edges; the first is the sample minimum, the last the maximum.
    pub bin_edges: Vec<F>,
    pub counts: Vec<u64>,
    pub density_overlay: Vec<F>,
}

pub fn histogram<F: Real>(samples: &[F], bins: usize) -> Result<Histogram<F>, StatsError> {
    assert!(bins >= 1, "need at least one bin");
    let Some(&first) = samples.first() else {
        return Err(StatsError::DegenerateSample);
    };
    let (min, max) = samples.iter().fold((first, first), |(lo, hi), &x| {
        (lo.min(x), hi.max(x))
    });
    if min.is_nan() || max.is_nan() || max <= min {
        return Err(StatsError::DegenerateSample);
    }
    let span = max - min;
    let bins_f = F::from_count(bins);
    let bin_edges: Vec<F> = (0..=bins)
        .map(|k| {
            if k == bins {
                max
            } else {
                min + span * F::from_count(k) / bins_f
            }
        })
        .collect();
    let mut counts = vec![0u64; bins];
    for &x in samples {
        let idx = ((x - min) / span * bins_f)
            .floor()
            .to_usize()
            .unwrap_or(0)
            .min(bins - 1);
        counts[idx] += 1;
    }
    let (mean, sd) = fit_normal(samples);
    let density_overlay = (0..bins)
        .map(|k| {
            let mid = (bin_edges[k] + bin_edges[k + 1]) / F::lit(2.0);
            normal_pdf(mid, mean, sd)
        })
        .collect();
    Ok(Histogram {
        bin_edges,
        counts,
        density_overlay,
    })
}
