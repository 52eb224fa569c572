//! Event-time series: parsing, validation, summary statistics, and the
//! base-time grid that anchors each observation cycle.
//!
//! A series is a strictly increasing sequence of event timestamps in integer
//! milliseconds. Input files carry one event per line as either cumulative
//! times, inter-event intervals, or an interval/cumulative column pair; blank
//! lines and `#` comments are skipped, and fields may be separated by
//! whitespace or commas.

use thiserror::Error;

use crate::Ms;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SeriesError {
    #[error("input contains no events")]
    EmptyInput,
    #[error("line {0}: event time does not strictly increase")]
    NonMonotone(usize),
    #[error("line {0}: malformed line")]
    MalformedLine(usize),
    #[error("line {0}: interval and cumulative columns disagree")]
    InconsistentColumns(usize),
    #[error("need at least two events")]
    TooFewEvents,
    #[error("record shorter than one full cycle")]
    NoFullCycle,
    #[error("invalid parameter: {0}")]
    InvalidParameter(&'static str),
}

/// Text layout of a series file.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    /// One cumulative timestamp per line.
    Cumulative,
    /// One inter-event interval per line; the first value is the first event time.
    Intervals,
    /// Interval and cumulative columns; the cumulative column is authoritative
    /// and the first row's interval is ignored (it has no predecessor).
    TwoColumn,
}

/// Strictly increasing event timestamps in milliseconds from record start.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EventSeries {
    times: Vec<Ms>,
    source_label: String,
}

impl EventSeries {
    pub fn new(times: Vec<Ms>, source_label: impl Into<String>) -> Result<Self, SeriesError> {
        if times.is_empty() {
            return Err(SeriesError::EmptyInput);
        }
        if times[0] < 0 {
            return Err(SeriesError::MalformedLine(1));
        }
        for i in 1..times.len() {
            if times[i] <= times[i - 1] {
                return Err(SeriesError::NonMonotone(i + 1));
            }
        }
        Ok(Self {
            times,
            source_label: source_label.into(),
        })
    }

    pub fn times(&self) -> &[Ms] {
        &self.times
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    /// Always false: an `EventSeries` holds at least one event by construction.
    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn first(&self) -> Ms {
        self.times[0]
    }

    pub fn last(&self) -> Ms {
        *self.times.last().expect("series is non-empty")
    }

    pub fn source_label(&self) -> &str {
        &self.source_label
    }

    pub fn with_source_label(mut self, label: impl Into<String>) -> Self {
        self.source_label = label.into();
        self
    }

    /// Serializes as cumulative single-column text, one event per line.
    /// `parse_event_file(series.to_text(), Format::Cumulative)` recovers the
    /// same timestamps (the label is not part of the text form).
    pub fn to_text(&self) -> String {
        let mut out = String::with_capacity(self.times.len() * 8);
        for t in &self.times {
            out.push_str(&t.to_string());
            out.push('\n');
        }
        out
    }
}

/// Parses a series file. Line numbers in errors are 1-based and refer to the
/// raw file, counting comments and blanks.
pub fn parse_event_file(content: &str, format: Format) -> Result<EventSeries, SeriesError> {
    let mut times: Vec<Ms> = Vec::new();
    for (idx, raw) in content.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut tokens = line
            .split(|c: char| c.is_whitespace() || c == ',')
            .filter(|t| !t.is_empty());
        let parse = |tok: Option<&str>| -> Result<Ms, SeriesError> {
            tok.and_then(|t| t.parse::<Ms>().ok())
                .ok_or(SeriesError::MalformedLine(line_no))
        };
        let time = match format {
            Format::Cumulative => {
                let t = parse(tokens.next())?;
                if tokens.next().is_some() {
                    return Err(SeriesError::MalformedLine(line_no));
                }
                t
            }
            Format::Intervals => {
                let gap = parse(tokens.next())?;
                if tokens.next().is_some() {
                    return Err(SeriesError::MalformedLine(line_no));
                }
                times.last().copied().unwrap_or(0) + gap
            }
            Format::TwoColumn => {
                let interval = parse(tokens.next())?;
                let cumulative = parse(tokens.next())?;
                if tokens.next().is_some() {
                    return Err(SeriesError::MalformedLine(line_no));
                }
                if let Some(&prev) = times.last() {
                    if cumulative - prev != interval {
                        return Err(SeriesError::InconsistentColumns(line_no));
                    }
                }
                cumulative
            }
        };
        if time < 0 {
            return Err(SeriesError::MalformedLine(line_no));
        }
        if let Some(&prev) = times.last() {
            if time <= prev {
                return Err(SeriesError::NonMonotone(line_no));
            }
        }
        times.push(time);
    }
    if times.is_empty() {
        return Err(SeriesError::EmptyInput);
    }
    Ok(EventSeries {
        times,
        source_label: String::new(),
    })
}

/// Event count, rounded mean inter-event interval, and record duration.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SeriesStats {
    pub count: usize,
    /// Mean inter-event interval `duration / (count - 1)`, rounded half-up to
    /// the nearest millisecond.
    pub t_m: Ms,
    pub duration: Ms,
}

pub fn series_stats(series: &EventSeries) -> Result<SeriesStats, SeriesError> {
    let count = series.len();
    if count < 2 {
        return Err(SeriesError::TooFewEvents);
    }
    let duration = series.last() - series.first();
    let gaps = (count - 1) as Ms;
    // integer round-half-up; duration >= gaps since times strictly increase
    let t_m = (duration + gaps / 2) / gaps;
    Ok(SeriesStats {
        count,
        t_m,
        duration,
    })
}

/// Base times `t_n = multiplier * n * t_m` for every cycle that fits: all `n`
/// with `t_n + multiplier * t_m <= last event time`, so each kept cycle is
/// fully covered by the record.
pub fn base_times(series: &EventSeries, t_m: Ms, multiplier: i64) -> Result<Vec<Ms>, SeriesError> {
    if t_m <= 0 {
        return Err(SeriesError::InvalidParameter("t_m must be positive"));
    }
    if multiplier < 1 {
        return Err(SeriesError::InvalidParameter("multiplier must be at least 1"));
    }
    let stride = multiplier
        .checked_mul(t_m)
        .ok_or(SeriesError::InvalidParameter("cycle length overflows"))?;
    let last = series.last();
    if stride > last {
        return Err(SeriesError::NoFullCycle);
    }
    let n_max = (last - stride) / stride;
    Ok((0..=n_max).map(|n| n * stride).collect())
}
