//! Bell-type inequality tests on event-time series.
//!
//! The pipeline: take a strictly increasing series of event times in integer
//! milliseconds (parsed from a file or synthesized), measure the mean
//! inter-event interval `t_M`, anchor a cycle at every base time
//! `t_n = multiplier * n * t_M`, split each cycle into three thirds of length
//! `t_M`, and dichotomize: `U(a) = +1` when the window `(start of third a,
//! t_n + tau_a]` contains an event, else `-1`. Correlating the three pairs
//! over a common sample and forming `D = |c12 - c13| + c23` can never exceed 1
//! — that is a per-row arithmetic identity. When each base time instead
//! contributes to exactly one randomly chosen pair, the subsampled `D` is free
//! to exceed 1, and this crate measures how often and by how much: a full
//! offset-grid sweep, Monte Carlo over assignment draws, neighborhood
//! stability checks, and a KS normality diagnostic of the replicated
//! statistic.
//!
//! Timestamps stay in exact integer arithmetic (`Ms`); correlations and test
//! statistics are generic over the [`Real`] scalar, with `f64` aliases below.

pub mod bell_estimator;
pub mod cli;
pub mod dichotomizer;
pub mod event_series;
pub mod real;
pub mod resampler;
pub mod stats;
pub mod synthgen;

/// Event time or interval in integer milliseconds.
pub type Ms = i64;

pub use bell_estimator::{
    correlate_pairs, d_statistic, full_sample_bell, AssignmentSequence, BellResult, PairLabel,
};
pub use dichotomizer::{
    third_index, u_matrix, u_value, window_for, TauTriple, UMatrix, Window,
};
pub use event_series::{
    base_times, parse_event_file, series_stats, EventSeries, Format, SeriesStats,
};
pub use real::Real;
pub use resampler::{
    monte_carlo, monte_carlo_runs, neighborhood, random_assignment, summarize_runs, sweep_grid,
    MonteCarloSummary, Neighborhood, Seed, SweepRow, TauGrid,
};
pub use stats::{
    histogram, kolmogorov_q, ks_normality_test, ks_statistic_against, normal_cdf, Histogram,
    KsResult,
};
pub use synthgen::{generate, heartbeat_like, poisson_expected_bell, ProcessKind, ProcessSpec};

/// Double-precision aliases for the default pipeline.
pub type BellResult64 = BellResult<f64>;
pub type SweepRow64 = SweepRow<f64>;
pub type MonteCarloSummary64 = MonteCarloSummary<f64>;
pub type KsResult64 = KsResult<f64>;
pub type Histogram64 = Histogram<f64>;
