//! Within-category standing: percentile, quartile and competition rank.

use std::fmt;

use super::MetricsError;

/// CiteScore quartile band. `Q1` is the top band (percentiles 75..=99).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Quartile {
    Q1,
    Q2,
    Q3,
    Q4,
}

impl Quartile {
    pub fn number(self) -> u8 {
        match self {
            Quartile::Q1 => 1,
            Quartile::Q2 => 2,
            Quartile::Q3 => 3,
            Quartile::Q4 => 4,
        }
    }
}

impl fmt::Display for Quartile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.number().fmt(f)
    }
}

/// `floor(((below + 0.5 * equal) / total) * 100)` in integer arithmetic.
///
/// With `equal >= 1` and `below + equal <= total` the result is at most 99.
pub fn percentile_from_counts(below: u64, equal: u64, total: u64) -> Result<u8, MetricsError> {
    if equal == 0 || below + equal > total {
        return Err(MetricsError::InvalidCounts { below, equal, total });
    }
    let p = (200 * below + 100 * equal) / (2 * total);
    assert!(p <= 99, "percentile {p} outside 0..=99");
    Ok(p as u8)
}

/// Percentile of `x` among the scored titles of one category. `x` must be one
/// of `scores`.
pub fn percentile<T: Ord>(scores: &[T], x: &T) -> Result<u8, MetricsError> {
    let below = scores.iter().filter(|s| *s < x).count() as u64;
    let equal = scores.iter().filter(|s| *s == x).count() as u64;
    if equal == 0 {
        return Err(MetricsError::ScoreNotInCategory);
    }
    percentile_from_counts(below, equal, scores.len() as u64)
}

pub fn quartile(percentile: u8) -> Result<Quartile, MetricsError> {
    match percentile {
        75..=99 => Ok(Quartile::Q1),
        50..=74 => Ok(Quartile::Q2),
        25..=49 => Ok(Quartile::Q3),
        0..=24 => Ok(Quartile::Q4),
        p => Err(MetricsError::PercentileOutOfRange(p)),
    }
}

/// Competition ranking by descending score: ties share the smallest rank and
/// the next distinct score skips past them. Returned in input order as
/// `(rank, n)`.
pub fn rank_in_category<T: Ord>(scores: &[T]) -> Vec<(u32, u32)> {
    let n = scores.len() as u32;
    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&a, &b| scores[b].cmp(&scores[a]));
    let mut ranks = vec![(0, n); scores.len()];
    let mut rank = 1;
    for (pos, &i) in order.iter().enumerate() {
        if pos > 0 && scores[order[pos - 1]] != scores[i] {
            rank = pos as u32 + 1;
        }
        ranks[i] = (rank, n);
    }
    ranks
}

/// Percentile and rank for every member of a category in one sorted pass.
/// Equivalent to calling [`percentile`] and [`rank_in_category`] per member.
pub(crate) fn category_standings<T: Ord + Copy>(scores: &[T]) -> Vec<(u32, u8)> {
    let n = scores.len();
    let mut sorted: Vec<T> = scores.to_vec();
    sorted.sort_unstable();
    scores
        .iter()
        .map(|x| {
            let below = sorted.partition_point(|s| s < x);
            let not_above = sorted.partition_point(|s| s <= x);
            let rank = (n - not_above) as u32 + 1;
            let p = percentile_from_counts(below as u64, (not_above - below) as u64, n as u64)
                .expect("member score present in its own category");
            (rank, p)
        })
        .collect()
}
