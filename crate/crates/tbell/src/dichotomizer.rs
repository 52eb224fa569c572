//! Windowed dichotomization: each cycle starting at a base time splits into
//! three thirds of length `t_m`, one observation window per third, and the
//! observable is +1 exactly when the window contains an event.
//!
//! Windows are half-open on the left and closed on the right, `(start, end]`.
//! An event sitting exactly on a window's start belongs to the previous third,
//! and growing an offset by one millisecond can only add events. Membership is
//! decided in exact integer arithmetic; there is no floating point anywhere in
//! this module.

use thiserror::Error;

use crate::event_series::EventSeries;
use crate::Ms;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum DichotomizerError {
    #[error("offset {tau} ms outside (0, {max}] for t_m = {t_m} ms")]
    OutOfRange { tau: Ms, t_m: Ms, max: Ms },
    #[error("offsets must satisfy 0 < tau1 <= tau2 <= tau3 (got {0}, {1}, {2})")]
    InvalidTriple(Ms, Ms, Ms),
}

/// Which third of the cycle an offset falls in: 1 for `(0, t_m]`, 2 for
/// `(t_m, 2*t_m]`, 3 for `(2*t_m, 3*t_m]`. Boundary values belong to the
/// lower third.
pub fn third_index(tau: Ms, t_m: Ms) -> Result<u8, DichotomizerError> {
    if t_m <= 0 || tau <= 0 || tau > 3 * t_m {
        return Err(DichotomizerError::OutOfRange {
            tau,
            t_m,
            max: 3 * t_m.max(0),
        });
    }
    Ok(if tau <= t_m {
        1
    } else if tau <= 2 * t_m {
        2
    } else {
        3
    })
}

/// The three window-defining offsets, in milliseconds from a base time.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TauTriple {
    tau1: Ms,
    tau2: Ms,
    tau3: Ms,
}

impl TauTriple {
    pub fn new(tau1: Ms, tau2: Ms, tau3: Ms) -> Result<Self, DichotomizerError> {
        if 0 < tau1 && tau1 <= tau2 && tau2 <= tau3 {
            Ok(Self { tau1, tau2, tau3 })
        } else {
            Err(DichotomizerError::InvalidTriple(tau1, tau2, tau3))
        }
    }

    /// Builds from offsets relative to the start of each third.
    pub fn from_relative(off1: Ms, off2: Ms, off3: Ms, t_m: Ms) -> Result<Self, DichotomizerError> {
        Self::new(off1, t_m + off2, 2 * t_m + off3)
    }

    pub fn taus(&self) -> [Ms; 3] {
        [self.tau1, self.tau2, self.tau3]
    }

    /// True when each offset lands in its own third of the cycle, which is
    /// what makes the three windows pairwise disjoint.
    pub fn is_third_aligned(&self, t_m: Ms) -> bool {
        third_index(self.tau1, t_m) == Ok(1)
            && third_index(self.tau2, t_m) == Ok(2)
            && third_index(self.tau3, t_m) == Ok(3)
    }

    /// Offsets relative to the start of each third: `(tau1, tau2 - t_m, tau3 - 2*t_m)`.
    pub fn relative_offsets(&self, t_m: Ms) -> [Ms; 3] {
        [self.tau1, self.tau2 - t_m, self.tau3 - 2 * t_m]
    }
}

/// Half-open observation interval `(start, end]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Window {
    pub start: Ms,
    pub end: Ms,
}

/// Window for offset `tau` anchored at base time `t_n`: it starts where the
/// third containing `tau` starts and ends at `t_n + tau`.
pub fn window_for(t_n: Ms, tau: Ms, t_m: Ms) -> Result<Window, DichotomizerError> {
    let third = third_index(tau, t_m)?;
    Ok(Window {
        start: t_n + Ms::from(third - 1) * t_m,
        end: t_n + tau,
    })
}

/// +1 when at least one event lies in `(window.start, window.end]`, else -1.
/// Binary search; O(log n) in the series length.
pub fn u_value(series: &EventSeries, window: Window) -> i8 {
    debug_assert!(window.start < window.end);
    let times = series.times();
    let i = times.partition_point(|&t| t <= window.start);
    if i < times.len() && times[i] <= window.end {
        1
    } else {
        -1
    }
}

/// N x 3 table of dichotomic values, one row per base time.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UMatrix {
    values: Vec<[i8; 3]>,
    base_times: Vec<Ms>,
    taus: TauTriple,
    t_m: Ms,
}

impl UMatrix {
    /// Builds from precomputed rows. Every entry must be -1 or +1 and there
    /// must be exactly one row per base time.
    pub fn from_rows(values: Vec<[i8; 3]>, base_times: Vec<Ms>, taus: TauTriple, t_m: Ms) -> Self {
        assert_eq!(values.len(), base_times.len(), "one row per base time");
        assert!(
            values.iter().flatten().all(|&v| v == 1 || v == -1),
            "entries must be -1 or +1"
        );
        Self {
            values,
            base_times,
            taus,
            t_m,
        }
    }

    pub fn n(&self) -> usize {
        self.values.len()
    }

    pub fn rows(&self) -> &[[i8; 3]] {
        &self.values
    }

    pub fn row(&self, n: usize) -> [i8; 3] {
        self.values[n]
    }

    pub fn base_times(&self) -> &[Ms] {
        &self.base_times
    }

    pub fn taus(&self) -> &TauTriple {
        &self.taus
    }

    pub fn t_m(&self) -> Ms {
        self.t_m
    }
}

/// Evaluates all three windows at every base time.
pub fn u_matrix(
    series: &EventSeries,
    base_times: &[Ms],
    taus: &TauTriple,
    t_m: Ms,
) -> Result<UMatrix, DichotomizerError> {
    // window shape per column, shifted by each base time
    let mut spans = [(0, 0); 3];
    for (a, &tau) in taus.taus().iter().enumerate() {
        let w = window_for(0, tau, t_m)?;
        spans[a] = (w.start, w.end);
    }
    let values = base_times
        .iter()
        .map(|&t_n| {
            spans.map(|(s, e)| {
                u_value(
                    series,
                    Window {
                        start: t_n + s,
                        end: t_n + e,
                    },
                )
            })
        })
        .collect();
    Ok(UMatrix {
        values,
        base_times: base_times.to_vec(),
        taus: *taus,
        t_m,
    })
}
