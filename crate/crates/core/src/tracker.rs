//! CiteScore Tracker: the annual formula evaluated for the current citing
//! year on earlier cutoffs, rebuilt once per month.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use chrono::{Datelike, NaiveDate};
use rayon::prelude::*;

use crate::index::{CitationIndex, SourceId};
use crate::metrics::{self, MetricsError};
use crate::score::CiteScore;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TrackerError {
    #[error(transparent)]
    Metrics(#[from] MetricsError),
    #[error("schedule dates must be strictly increasing ({0} follows {1})")]
    UnsortedSchedule(NaiveDate, NaiveDate),
    #[error("schedule start {from} is after end {to}")]
    EmptyRange { from: YearMonth, to: YearMonth },
    #[error("invalid month {0:?}: expected YYYY-MM")]
    BadMonth(String),
    #[error("day of month must be within 1..=31, got {0}")]
    BadDay(u32),
}

/// Calendar month, parsed from `YYYY-MM`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct YearMonth {
    pub year: i32,
    pub month: u32,
}

impl YearMonth {
    pub fn new(year: i32, month: u32) -> Option<Self> {
        (1..=12).contains(&month).then_some(YearMonth { year, month })
    }

    fn next(self) -> Self {
        if self.month == 12 {
            YearMonth { year: self.year + 1, month: 1 }
        } else {
            YearMonth { year: self.year, month: self.month + 1 }
        }
    }

    pub fn last_day(self) -> NaiveDate {
        let next = self.next();
        NaiveDate::from_ymd_opt(next.year, next.month, 1).expect("valid month start").pred_opt().expect("date in range")
    }

    /// `day` of this month, clamped to the month's length.
    pub fn day(self, day: u32) -> NaiveDate {
        let last = self.last_day();
        NaiveDate::from_ymd_opt(self.year, self.month, day.min(last.day())).expect("clamped day")
    }
}

impl fmt::Display for YearMonth {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:04}-{:02}", self.year, self.month)
    }
}

impl FromStr for YearMonth {
    type Err = TrackerError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || TrackerError::BadMonth(s.to_string());
        let (y, m) = s.split_once('-').ok_or_else(bad)?;
        if y.len() != 4 || m.len() != 2 || !(y.bytes().chain(m.bytes())).all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        YearMonth::new(y.parse().map_err(|_| bad())?, m.parse().map_err(|_| bad())?).ok_or_else(bad)
    }
}

/// One date per month from `from` to `to` inclusive: the last calendar day by
/// default, or `day` clamped to the month length.
pub fn monthly_schedule(from: YearMonth, to: YearMonth, day: Option<u32>) -> Result<Vec<NaiveDate>, TrackerError> {
    if from > to {
        return Err(TrackerError::EmptyRange { from, to });
    }
    if let Some(d) = day {
        if !(1..=31).contains(&d) {
            return Err(TrackerError::BadDay(d));
        }
    }
    let mut out = Vec::new();
    let mut m = from;
    while m <= to {
        out.push(day.map_or_else(|| m.last_day(), |d| m.day(d)));
        m = m.next();
    }
    Ok(out)
}

fn check_sorted(schedule: &[NaiveDate]) -> Result<(), TrackerError> {
    match schedule.windows(2).find(|w| w[0] >= w[1]) {
        Some(w) => Err(TrackerError::UnsortedSchedule(w[1], w[0])),
        None => Ok(()),
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TrackerPoint {
    pub as_of: NaiveDate,
    pub citations: u64,
    pub documents: u64,
    /// `None` while the title is not yet scoreable.
    pub value: Option<CiteScore>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TrackerSeries {
    pub source_id: SourceId,
    pub tracker_year: i32,
    pub points: Vec<TrackerPoint>,
}

impl TrackerSeries {
    pub fn first_present(&self) -> Option<&TrackerPoint> {
        self.points.iter().find(|p| p.value.is_some())
    }
}

/// A present point in the tracker output file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TrackerRow {
    pub source_id: SourceId,
    pub tracker_year: i32,
    pub as_of: NaiveDate,
    pub citations: u64,
    pub documents: u64,
    pub value: CiteScore,
}

/// CiteScore of `tracker_year` on the index as of `as_of`, behind the same
/// eligibility gate as the annual metric.
pub fn tracker_value(
    index: &CitationIndex,
    source_id: SourceId,
    tracker_year: i32,
    as_of: NaiveDate,
) -> Result<Option<CiteScore>, MetricsError> {
    let snap = index.snapshot(as_of);
    if !metrics::is_eligible(&snap, source_id, tracker_year)? {
        return Ok(None);
    }
    metrics::citescore(&snap, source_id, tracker_year).map(Some)
}

pub fn tracker_series(
    index: &CitationIndex,
    source_id: SourceId,
    tracker_year: i32,
    schedule: &[NaiveDate],
) -> Result<TrackerSeries, TrackerError> {
    check_sorted(schedule)?;
    let points = schedule
        .par_iter()
        .map(|&as_of| {
            let snap = index.snapshot(as_of);
            let citations = metrics::citations_a(&snap, source_id, tracker_year)?;
            let documents = metrics::documents_b(&snap, source_id, tracker_year)?;
            let value = if metrics::is_eligible(&snap, source_id, tracker_year)? {
                Some(metrics::citescore(&snap, source_id, tracker_year)?)
            } else {
                None
            };
            Ok(TrackerPoint { as_of, citations, documents, value })
        })
        .collect::<Result<Vec<_>, MetricsError>>()?;
    Ok(TrackerSeries { source_id, tracker_year, points })
}

/// Present tracker points for every scoreable title, sorted by source id
/// then date.
pub fn tracker_table(
    index: &CitationIndex,
    tracker_year: i32,
    schedule: &[NaiveDate],
) -> Result<Vec<TrackerRow>, TrackerError> {
    check_sorted(schedule)?;
    let per_date: Vec<Vec<TrackerRow>> = schedule
        .par_iter()
        .map(|&as_of| {
            let snap = index.snapshot(as_of);
            metrics::eligible_tallies(&snap, tracker_year)
                .into_iter()
                .map(|(idx, t)| TrackerRow {
                    source_id: index.source(idx).source_id,
                    tracker_year,
                    as_of,
                    citations: t.citations,
                    documents: t.documents,
                    value: t.citescore().expect("eligible titles have documents"),
                })
                .collect()
        })
        .collect();
    let mut rows: Vec<TrackerRow> = per_date.into_iter().flatten().collect();
    rows.sort_by_key(|r| (r.source_id, r.as_of));
    Ok(rows)
}

/// Rank agreement between one monthly build and the final annual values.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvergencePoint {
    pub as_of: NaiveDate,
    /// Titles scored both at `as_of` and in the final build.
    pub sources: usize,
    /// Spearman correlation of the two score vectors; `None` with fewer than
    /// two shared titles or a constant vector.
    pub spearman: Option<f64>,
}

/// Monthly-vs-final rank correlation for `tracker_year`, where the final
/// values come from the snapshot at `final_cutoff`.
pub fn convergence_report(
    index: &CitationIndex,
    tracker_year: i32,
    schedule: &[NaiveDate],
    final_cutoff: NaiveDate,
) -> Result<Vec<ConvergencePoint>, TrackerError> {
    check_sorted(schedule)?;
    let final_snap = index.snapshot(final_cutoff);
    let final_scores: HashMap<SourceId, CiteScore> = metrics::compute_annual(&final_snap, tracker_year)
        .metrics
        .into_iter()
        .map(|r| (r.source_id, r.citescore))
        .collect();
    let rows = tracker_table(index, tracker_year, schedule)?;
    Ok(schedule
        .iter()
        .map(|&as_of| {
            let pairs: Vec<(f64, f64)> = rows
                .iter()
                .filter(|r| r.as_of == as_of)
                .filter_map(|r| final_scores.get(&r.source_id).map(|f| (r.value.to_f64(), f.to_f64())))
                .collect();
            let (a, b): (Vec<f64>, Vec<f64>) = pairs.into_iter().unzip();
            ConvergencePoint { as_of, sources: a.len(), spearman: spearman(&a, &b) }
        })
        .collect())
}

fn average_ranks(xs: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..xs.len()).collect();
    order.sort_by(|&i, &j| xs[i].total_cmp(&xs[j]));
    let mut ranks = vec![0.0; xs.len()];
    let mut start = 0;
    while start < order.len() {
        let mut end = start + 1;
        while end < order.len() && xs[order[end]] == xs[order[start]] {
            end += 1;
        }
        let avg = (start + end + 1) as f64 / 2.0;
        for &i in &order[start..end] {
            ranks[i] = avg;
        }
        start = end;
    }
    ranks
}

pub(crate) fn spearman(a: &[f64], b: &[f64]) -> Option<f64> {
    if a.len() < 2 {
        return None;
    }
    let (ra, rb) = (average_ranks(a), average_ranks(b));
    let n = ra.len() as f64;
    let (ma, mb) = (ra.iter().sum::<f64>() / n, rb.iter().sum::<f64>() / n);
    let cov: f64 = ra.iter().zip(&rb).map(|(x, y)| (x - ma) * (y - mb)).sum();
    let va: f64 = ra.iter().map(|x| (x - ma).powi(2)).sum();
    let vb: f64 = rb.iter().map(|y| (y - mb).powi(2)).sum();
    (va > 0.0 && vb > 0.0).then(|| cov / (va * vb).sqrt())
}
