//! Reproducible randomized pair assignment and the three experiment drivers:
//! the tau-grid sweep, Monte Carlo replication of the assignment draw, and the
//! ±delta neighborhood study.
//!
//! Reproducibility contract: every draw is a pure function of `(seed,
//! replicate_index)`. Each replicate gets its own ChaCha stream keyed by the
//! index, so results do not depend on thread count, scheduling, or call order,
//! and parallel runs are bit-identical to sequential ones.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::bell_estimator::{
    correlate_pairs, AssignmentSequence, BellResult, EstimatorError, PairLabel,
};
use crate::dichotomizer::{DichotomizerError, TauTriple, UMatrix};
use crate::real::Real;
use crate::Ms;

/// Root seed for all random pair assignments of one run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Seed(pub u64);

impl Seed {
    pub fn value(self) -> u64 {
        self.0
    }
}

impl Default for Seed {
    fn default() -> Self {
        Seed(12345)
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum ResampleError {
    #[error("grid axis {axis} is empty")]
    EmptyGrid { axis: u8 },
    #[error("grid axis {axis} offset {offset} outside (0, {t_m}]")]
    InvalidGrid { axis: u8, offset: Ms, t_m: Ms },
    #[error(transparent)]
    Window(#[from] DichotomizerError),
    #[error(transparent)]
    Estimator(#[from] EstimatorError),
}

/// Per-axis window offsets, relative to the start of each third.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TauGrid {
    pub offsets1: Vec<Ms>,
    pub offsets2: Vec<Ms>,
    pub offsets3: Vec<Ms>,
}

impl Default for TauGrid {
    /// 300..800 ms in 100 ms steps on every axis: 216 combinations.
    fn default() -> Self {
        let axis: Vec<Ms> = (3..=8).map(|k| k * 100).collect();
        Self::uniform(axis)
    }
}

impl TauGrid {
    pub fn uniform(offsets: Vec<Ms>) -> Self {
        Self {
            offsets1: offsets.clone(),
            offsets2: offsets.clone(),
            offsets3: offsets,
        }
    }

    pub fn combinations(&self) -> usize {
        self.offsets1.len() * self.offsets2.len() * self.offsets3.len()
    }

    fn validate(&self, t_m: Ms) -> Result<(), ResampleError> {
        for (axis, offsets) in [&self.offsets1, &self.offsets2, &self.offsets3]
            .into_iter()
            .enumerate()
        {
            let axis = axis as u8 + 1;
            if offsets.is_empty() {
                return Err(ResampleError::EmptyGrid { axis });
            }
            for &offset in offsets {
                if offset <= 0 || offset > t_m {
                    return Err(ResampleError::InvalidGrid { axis, offset, t_m });
                }
            }
        }
        Ok(())
    }
}

/// Uniform pair label per base time, drawn from the stream `replicate_index`
/// of a ChaCha generator seeded with `seed`.
pub fn random_assignment(n: usize, seed: Seed, replicate_index: u64) -> AssignmentSequence {
    let mut rng = ChaCha8Rng::seed_from_u64(seed.value());
    rng.set_stream(replicate_index);
    let labels = (0..n)
        .map(|_| match rng.random_range(0..3u8) {
            0 => PairLabel::P12,
            1 => PairLabel::P13,
            _ => PairLabel::P23,
        })
        .collect();
    AssignmentSequence::new(labels)
}

/// One grid combination with its estimate.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow<F> {
    pub off1: Ms,
    pub off2: Ms,
    pub off3: Ms,
    pub result: BellResult<F>,
}

/// Evaluates every grid combination, drawing one assignment sequence per
/// combination (`replicate_index` = combination ordinal, axis 3 fastest).
/// With `shared_assignment` every combination reuses replicate 0 instead.
pub fn sweep_grid<F, S>(
    u_source: S,
    grid: &TauGrid,
    t_m: Ms,
    seed: Seed,
    shared_assignment: bool,
) -> Result<Vec<SweepRow<F>>, ResampleError>
where
    F: Real,
    S: Fn(&TauTriple) -> Result<UMatrix, DichotomizerError> + Sync,
{
    grid.validate(t_m)?;
    let mut combos = Vec::with_capacity(grid.combinations());
    for &off1 in &grid.offsets1 {
        for &off2 in &grid.offsets2 {
            for &off3 in &grid.offsets3 {
                combos.push((combos.len() as u64, off1, off2, off3));
            }
        }
    }
    combos
        .par_iter()
        .map(|&(ordinal, off1, off2, off3)| {
            let taus = TauTriple::from_relative(off1, off2, off3, t_m)?;
            let u = u_source(&taus)?;
            let replicate = if shared_assignment { 0 } else { ordinal };
            let assignment = random_assignment(u.n(), seed, replicate);
            let result = correlate_pairs(&u, &assignment)?;
            Ok(SweepRow {
                off1,
                off2,
                off3,
                result,
            })
        })
        .collect()
}

/// Per-replicate estimates in replicate order. `None` marks a replicate whose
/// assignment left some pair empty.
pub fn monte_carlo_runs<F: Real>(u: &UMatrix, reps: u64, seed: Seed) -> Vec<Option<BellResult<F>>> {
    (0..reps)
        .into_par_iter()
        .map(|r| correlate_pairs(u, &random_assignment(u.n(), seed, r)).ok())
        .collect()
}

/// Distribution summary of the replicated statistic.
#[derive(Debug, Clone, PartialEq)]
pub struct MonteCarloSummary<F> {
    pub reps: u64,
    pub seed: Seed,
    /// Successful replicates' d values, in replicate order.
    pub d_values: Vec<F>,
    /// Replicates with `d > 1`.
    pub violations: usize,
    /// Replicates dropped because a pair subsample was empty.
    pub failures: usize,
    pub d_min: F,
    pub d_max: F,
    pub d_mean: F,
    /// Unbiased standard deviation; NaN with fewer than two successes.
    pub d_sd: F,
}

pub fn monte_carlo<F: Real>(u: &UMatrix, reps: u64, seed: Seed) -> MonteCarloSummary<F> {
    summarize_runs(&monte_carlo_runs(u, reps, seed), reps, seed)
}

/// Folds per-replicate results into a [`MonteCarloSummary`]. Sequential and
/// order-fixed, so summaries are byte-stable across thread counts.
pub fn summarize_runs<F: Real>(
    runs: &[Option<BellResult<F>>],
    reps: u64,
    seed: Seed,
) -> MonteCarloSummary<F> {
    assert!(reps >= 1, "need at least one replicate");
    let d_values: Vec<F> = runs.iter().flatten().map(|r| r.d).collect();
    let failures = runs.len() - d_values.len();
    let violations = d_values.iter().filter(|&&d| d > F::one()).count();
    let (mut d_min, mut d_max) = (F::infinity(), F::neg_infinity());
    let mut sum = F::zero();
    for &d in &d_values {
        d_min = d_min.min(d);
        d_max = d_max.max(d);
        sum = sum + d;
    }
    let count = d_values.len();
    let (d_min, d_max, d_mean) = if count == 0 {
        (F::nan(), F::nan(), F::nan())
    } else {
        (d_min, d_max, sum / F::from_count(count))
    };
    let d_sd = if count >= 2 {
        let ss: F = d_values
            .iter()
            .map(|&d| (d - d_mean) * (d - d_mean))
            .sum();
        (ss / F::from_count(count - 1)).sqrt()
    } else {
        F::nan()
    };
    MonteCarloSummary {
        reps,
        seed,
        d_values,
        violations,
        failures,
        d_min,
        d_max,
        d_mean,
        d_sd,
    }
}

/// Triples reachable by shifting each offset of `tau` by `-delta`, `0`, or
/// `+delta` (the unshifted triple excluded), keeping only triples that are
/// ordered and third-aligned for `t_m`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Neighborhood {
    pub triples: Vec<TauTriple>,
    /// Shift patterns discarded for leaving the valid range.
    pub dropped: usize,
}

pub fn neighborhood(tau: &TauTriple, delta: Ms, t_m: Ms) -> Neighborhood {
    debug_assert!(delta >= 0);
    let mut triples = Vec::new();
    let mut dropped = 0;
    if delta == 0 {
        return Neighborhood { triples, dropped };
    }
    let [t1, t2, t3] = tau.taus();
    for s1 in [-1, 0, 1] {
        for s2 in [-1, 0, 1] {
            for s3 in [-1, 0, 1] {
                if s1 == 0 && s2 == 0 && s3 == 0 {
                    continue;
                }
                match TauTriple::new(t1 + s1 * delta, t2 + s2 * delta, t3 + s3 * delta) {
                    Ok(t) if t.is_third_aligned(t_m) => triples.push(t),
                    _ => dropped += 1,
                }
            }
        }
    }
    Neighborhood { triples, dropped }
}
