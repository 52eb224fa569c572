//! Pairwise correlations under a pair assignment and the statistic
//! `d = |c12 - c13| + c23`.
//!
//! Products of ±1 values are accumulated in integer arithmetic and divided
//! exactly once per correlation, so each estimate carries a single rounding
//! step. On a common sample the per-row identity `|u1*u2 - u1*u3| + u2*u3 = 1`
//! bounds the integer numerator by the row count, which makes the full-sample
//! `d <= 1` hold exactly in floating point as well. Subsampled correlations
//! obey no such identity; values above 1 are the object of study.

use thiserror::Error;

use crate::dichotomizer::UMatrix;
use crate::real::Real;

/// One of the three column pairs of a [`UMatrix`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PairLabel {
    P12,
    P13,
    P23,
}

impl PairLabel {
    pub const ALL: [PairLabel; 3] = [PairLabel::P12, PairLabel::P13, PairLabel::P23];

    /// Zero-based column indices of the pair.
    pub fn columns(self) -> (usize, usize) {
        match self {
            PairLabel::P12 => (0, 1),
            PairLabel::P13 => (0, 2),
            PairLabel::P23 => (1, 2),
        }
    }

    fn slot(self) -> usize {
        match self {
            PairLabel::P12 => 0,
            PairLabel::P13 => 1,
            PairLabel::P23 => 2,
        }
    }
}

impl core::fmt::Display for PairLabel {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str(match self {
            PairLabel::P12 => "12",
            PairLabel::P13 => "13",
            PairLabel::P23 => "23",
        })
    }
}

/// Which pair of observables is read out at each base time.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AssignmentSequence {
    labels: Vec<PairLabel>,
}

impl AssignmentSequence {
    pub fn new(labels: Vec<PairLabel>) -> Self {
        Self { labels }
    }

    pub fn labels(&self) -> &[PairLabel] {
        &self.labels
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum EstimatorError {
    #[error("assignment length {got} does not match the {expected} matrix rows")]
    LengthMismatch { expected: usize, got: usize },
    #[error("subsample for pair {0} is empty")]
    EmptySubsample(PairLabel),
    #[error("correlation c{0} = {1} outside [-1, 1]")]
    DomainError(&'static str, f64),
}

/// Correlations, subsample sizes, and the combined statistic.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BellResult<F> {
    pub c12: F,
    pub c13: F,
    pub c23: F,
    pub n12: usize,
    pub n13: usize,
    pub n23: usize,
    pub d: F,
}

/// Estimates each pair correlation from the base times assigned to it.
/// Every pair must be assigned at least once.
pub fn correlate_pairs<F: Real>(
    u: &UMatrix,
    assignment: &AssignmentSequence,
) -> Result<BellResult<F>, EstimatorError> {
    if assignment.len() != u.n() {
        return Err(EstimatorError::LengthMismatch {
            expected: u.n(),
            got: assignment.len(),
        });
    }
    let mut sums = [0i64; 3];
    let mut counts = [0usize; 3];
    for (row, &label) in u.rows().iter().zip(assignment.labels()) {
        let (a, b) = label.columns();
        let slot = label.slot();
        sums[slot] += i64::from(row[a] * row[b]);
        counts[slot] += 1;
    }
    for label in PairLabel::ALL {
        if counts[label.slot()] == 0 {
            return Err(EstimatorError::EmptySubsample(label));
        }
    }
    let c = |slot: usize| F::from_int(sums[slot]) / F::from_count(counts[slot]);
    let (c12, c13, c23) = (c(0), c(1), c(2));
    Ok(BellResult {
        c12,
        c13,
        c23,
        n12: counts[0],
        n13: counts[1],
        n23: counts[2],
        d: (c12 - c13).abs() + c23,
    })
}

/// Correlations over every row for all three pairs. The statistic is computed
/// as `(|s12 - s13| + s23) / n` in one division, so `d <= 1` holds exactly.
pub fn full_sample_bell<F: Real>(u: &UMatrix) -> BellResult<F> {
    let n = u.n();
    assert!(n >= 1, "matrix must have at least one row");
    let mut sums = [0i64; 3];
    for row in u.rows() {
        sums[0] += i64::from(row[0] * row[1]);
        sums[1] += i64::from(row[0] * row[2]);
        sums[2] += i64::from(row[1] * row[2]);
    }
    let denom = F::from_count(n);
    BellResult {
        c12: F::from_int(sums[0]) / denom,
        c13: F::from_int(sums[1]) / denom,
        c23: F::from_int(sums[2]) / denom,
        n12: n,
        n13: n,
        n23: n,
        // |s12 - s13| + s23 <= n in exact integers, by the row identity
        d: F::from_int((sums[0] - sums[1]).abs() + sums[2]) / denom,
    }
}

/// `|c12 - c13| + c23` for externally supplied correlations, with a domain
/// check on the inputs (a small tolerance absorbs prior rounding).
pub fn d_statistic<F: Real>(c12: F, c13: F, c23: F) -> Result<F, EstimatorError> {
    let bound = F::one() + F::lit(1e-12);
    for (name, c) in [("12", c12), ("13", c13), ("23", c23)] {
        if c.is_nan() || c.abs() > bound {
            return Err(EstimatorError::DomainError(
                name,
                c.to_f64().unwrap_or(f64::NAN),
            ));
        }
    }
    Ok((c12 - c13).abs() + c23)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dichotomizer::TauTriple;
    use crate::Ms;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn matrix(rows: Vec<[i8; 3]>) -> UMatrix {
        let base: Vec<Ms> = (0..rows.len() as i64).map(|n| n * 2487).collect();
        let taus = TauTriple::new(800, 1429, 1958).unwrap();
        UMatrix::from_rows(rows, base, taus, 829)
    }

    #[test]
    fn identical_columns_give_perfect_correlations() {
        let u = matrix(vec![[1, 1, 1], [-1, -1, -1], [1, 1, 1], [-1, -1, -1]]);
        let labels = vec![
            PairLabel::P12,
            PairLabel::P13,
            PairLabel::P23,
            PairLabel::P12,
        ];
        let r: BellResult<f64> = correlate_pairs(&u, &AssignmentSequence::new(labels)).unwrap();
        assert_eq!((r.c12, r.c13, r.c23), (1.0, 1.0, 1.0));
        assert_eq!((r.n12, r.n13, r.n23), (2, 1, 1));
        assert_eq!(r.d, 1.0);
        let full: BellResult<f64> = full_sample_bell(&u);
        assert_eq!(full.d, 1.0);
        assert_eq!((full.n12, full.n13, full.n23), (4, 4, 4));
    }

    #[test]
    fn empty_pair_is_reported_in_order() {
        let u = matrix(vec![[1, 1, 1], [1, -1, 1]]);
        let r: Result<BellResult<f64>, _> = correlate_pairs(
            &u,
            &AssignmentSequence::new(vec![PairLabel::P23, PairLabel::P23]),
        );
        assert_eq!(r, Err(EstimatorError::EmptySubsample(PairLabel::P12)));
        let r: Result<BellResult<f64>, _> = correlate_pairs(
            &u,
            &AssignmentSequence::new(vec![PairLabel::P12, PairLabel::P12]),
        );
        assert_eq!(r, Err(EstimatorError::EmptySubsample(PairLabel::P13)));
    }

    #[test]
    fn length_mismatch_is_an_error() {
        let u = matrix(vec![[1, 1, 1]]);
        let r: Result<BellResult<f64>, _> =
            correlate_pairs(&u, &AssignmentSequence::new(vec![]));
        assert_eq!(
            r,
            Err(EstimatorError::LengthMismatch {
                expected: 1,
                got: 0
            })
        );
    }

    #[test]
    fn d_statistic_checks_domain() {
        assert_eq!(d_statistic(0.12, 0.0, 1.0), Ok(1.12));
        assert_eq!(d_statistic(-0.5, 0.5, -0.25), Ok(0.75));
        assert!(matches!(
            d_statistic(1.5, 0.0, 0.0),
            Err(EstimatorError::DomainError("12", _))
        ));
        assert!(d_statistic(f64::NAN, 0.0, 0.0).is_err());
    }

    #[test]
    fn full_sample_bound_is_exact_over_random_matrices() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..500 {
            let n = rng.random_range(1..200);
            let rows: Vec<[i8; 3]> = (0..n)
                .map(|_| [0; 3].map(|_| if rng.random_bool(0.5) { 1 } else { -1 }))
                .collect();
            let r: BellResult<f64> = full_sample_bell(&matrix(rows));
            assert!(r.d <= 1.0, "full-sample d = {} exceeds 1", r.d);
            assert!(((r.c12 - r.c13).abs() + r.c23 - r.d).abs() <= 1e-15);
        }
    }

    proptest! {
        #[test]
        fn permuting_rows_with_labels_changes_nothing(
            rows in proptest::collection::vec(proptest::array::uniform3(prop_oneof![Just(1i8), Just(-1i8)]), 3..60),
            seed in 0u64..1_000,
        ) {
            let n = rows.len();
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let labels: Vec<PairLabel> = (0..n)
                .map(|i| PairLabel::ALL[if i < 3 { i } else { rng.random_range(0..3) }])
                .collect();
            // a fixed pseudo-random permutation
            let mut perm: Vec<usize> = (0..n).collect();
            for i in (1..n).rev() {
                perm.swap(i, rng.random_range(0..=i));
            }
            let u = matrix(rows.clone());
            let r1: BellResult<f64> =
                correlate_pairs(&u, &AssignmentSequence::new(labels.clone())).unwrap();
            let u2 = matrix(perm.iter().map(|&i| rows[i]).collect());
            let labels2: Vec<PairLabel> = perm.iter().map(|&i| labels[i]).collect();
            let r2: BellResult<f64> =
                correlate_pairs(&u2, &AssignmentSequence::new(labels2)).unwrap();
            // integer accumulation makes this exact, not approximate
            prop_assert_eq!(r1, r2);
        }

        #[test]
        fn correlations_stay_in_range(
            rows in proptest::collection::vec(proptest::array::uniform3(prop_oneof![Just(1i8), Just(-1i8)]), 1..80),
        ) {
            let u = matrix(rows);
            let r: BellResult<f64> = full_sample_bell(&u);
            for c in [r.c12, r.c13, r.c23] {
                prop_assert!((-1.0..=1.0).contains(&c));
            }
            prop_assert!(r.d <= 1.0);
            prop_assert!(r.d >= -3.0);
        }
    }
}
