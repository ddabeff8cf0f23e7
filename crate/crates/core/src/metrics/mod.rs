//! Annual CiteScore metrics over an index snapshot.
//!
//! For CiteScore year `Y` the cited window is sort years `Y-3..=Y-1` and the
//! citing year is `Y`. Articles-in-press never count on either side.
//! Publications of earlier titles in a rename chain are attributed to the
//! current title.

mod standing;

pub use standing::{percentile, percentile_from_counts, quartile, rank_in_category, Quartile};

use std::collections::BTreeMap;

use chrono::NaiveDate;
use rayon::prelude::*;

use crate::index::{AsjcCode, IndexSnapshot, PubIdx, PublicationRecord, SourceId, SourceIdx};
use crate::score::CiteScore;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum MetricsError {
    #[error("unknown source {0}")]
    UnknownSource(SourceId),
    #[error("source {source_id} has no documents in the cited window of {year}")]
    NotEligible { source_id: SourceId, year: i32 },
    #[error("score is not a member of the category")]
    ScoreNotInCategory,
    #[error("percentile {0} outside 0..=99")]
    PercentileOutOfRange(u8),
    #[error("invalid percentile counts below={below} equal={equal} total={total}")]
    InvalidCounts { below: u64, equal: u64, total: u64 },
}

/// Per-source, per-year CiteScore row.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MetricsRow {
    pub source_id: SourceId,
    pub title: String,
    pub citescore_year: i32,
    pub citescore: CiteScore,
    pub citations: u64,
    pub documents: u64,
    pub percent_cited: u8,
}

/// Standing of one source within one of its ASJC categories.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CategoryStanding {
    pub source_id: SourceId,
    pub asjc_code: AsjcCode,
    pub rank: u32,
    pub n_in_category: u32,
    pub percentile: u8,
    pub quartile: Quartile,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AnnualMetrics {
    pub year: i32,
    pub cutoff: NaiveDate,
    pub metrics: Vec<MetricsRow>,
    pub standings: Vec<CategoryStanding>,
}

/// Numerator, denominator and cited-document count for one attributed slot.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub(crate) struct Tally {
    pub citations: u64,
    pub documents: u64,
    pub cited_documents: u64,
}

impl Tally {
    pub fn citescore(&self) -> Option<CiteScore> {
        CiteScore::from_ratio(self.citations, self.documents)
    }

    pub fn percent_cited(&self) -> Option<u8> {
        (self.documents > 0).then(|| {
            ((200 * self.cited_documents + self.documents) / (2 * self.documents)) as u8
        })
    }
}

fn in_cited_window(p: &PublicationRecord, year: i32) -> bool {
    !p.is_article_in_press && (year - 3..year).contains(&p.sort_year)
}

/// One pass over the snapshot, attributing each publication's source to a
/// slot (or to none).
pub(crate) fn tally<F>(snap: &IndexSnapshot<'_>, year: i32, n_slots: usize, slot_of: F) -> Vec<Tally>
where
    F: Fn(SourceIdx) -> Option<usize>,
{
    let index = snap.index();
    let mut tallies = vec![Tally::default(); n_slots];
    let cited_slot = |p: PubIdx| -> Option<usize> {
        in_cited_window(index.publication(p), year)
            .then(|| slot_of(index.pub_source(p)))
            .flatten()
    };

    for &p in snap.visible_publications() {
        if let Some(slot) = cited_slot(p) {
            tallies[slot].documents += 1;
        }
    }

    let mut counted = vec![false; index.publications().len()];
    for &(citing, cited) in snap.visible_links() {
        let from = index.publication(citing);
        if from.sort_year != year || from.is_article_in_press {
            continue;
        }
        if let Some(slot) = cited_slot(cited) {
            let t = &mut tallies[slot];
            t.citations += 1;
            if !counted[cited.get()] {
                counted[cited.get()] = true;
                t.cited_documents += 1;
            }
        }
    }
    tallies
}

fn chain_tally(snap: &IndexSnapshot<'_>, source_id: SourceId, year: i32) -> Result<Tally, MetricsError> {
    let index = snap.index();
    let idx = index.source_idx(source_id).ok_or(MetricsError::UnknownSource(source_id))?;
    let members: Vec<SourceIdx> = index.chain_members(idx).collect();
    Ok(tally(snap, year, 1, |s| members.contains(&s).then_some(0))[0])
}

/// Documents (B): non-AIP publications of the title chain in the cited window.
pub fn documents_b(snap: &IndexSnapshot<'_>, source_id: SourceId, year: i32) -> Result<u64, MetricsError> {
    Ok(chain_tally(snap, source_id, year)?.documents)
}

/// Citations (A): links from citing-year publications to the chain's
/// documents in the cited window.
pub fn citations_a(snap: &IndexSnapshot<'_>, source_id: SourceId, year: i32) -> Result<u64, MetricsError> {
    Ok(chain_tally(snap, source_id, year)?.citations)
}

pub fn citescore(snap: &IndexSnapshot<'_>, source_id: SourceId, year: i32) -> Result<CiteScore, MetricsError> {
    chain_tally(snap, source_id, year)?
        .citescore()
        .ok_or(MetricsError::NotEligible { source_id, year })
}

/// Share of denominator documents cited at least once by the numerator's
/// links, as a rounded integer percentage.
pub fn percent_cited(snap: &IndexSnapshot<'_>, source_id: SourceId, year: i32) -> Result<u8, MetricsError> {
    chain_tally(snap, source_id, year)?
        .percent_cited()
        .ok_or(MetricsError::NotEligible { source_id, year })
}

/// Static gate, independent of the year: actively indexed, serial, and the
/// current title of its chain.
pub(crate) fn is_scoreable_title(snap: &IndexSnapshot<'_>, idx: SourceIdx) -> bool {
    let s = snap.index().source(idx);
    s.is_actively_indexed && s.source_type.is_serial() && snap.index().is_chain_terminal(idx)
}

pub fn is_eligible(snap: &IndexSnapshot<'_>, source_id: SourceId, year: i32) -> Result<bool, MetricsError> {
    let idx = snap.index().source_idx(source_id).ok_or(MetricsError::UnknownSource(source_id))?;
    Ok(is_scoreable_title(snap, idx) && chain_tally(snap, source_id, year)?.documents >= 1)
}

/// Tallies of every eligible current title, keyed by dense source index and
/// ordered by source id.
pub(crate) fn eligible_tallies(snap: &IndexSnapshot<'_>, year: i32) -> Vec<(SourceIdx, Tally)> {
    let index = snap.index();
    let n = index.sources().len();
    let tallies = tally(snap, year, n, |s| Some(index.terminal_of(s).get()));
    tallies
        .into_iter()
        .enumerate()
        .map(|(i, t)| (SourceIdx(i as u32), t))
        .filter(|(idx, t)| t.documents >= 1 && is_scoreable_title(snap, *idx))
        .collect()
}

/// Full metrics basket for `year` over `snap`: one row per eligible title and
/// one standing per (title, ASJC code), both sorted by source id then code.
pub fn compute_annual(snap: &IndexSnapshot<'_>, year: i32) -> AnnualMetrics {
    let index = snap.index();
    let eligible = eligible_tallies(snap, year);

    let metrics: Vec<MetricsRow> = eligible
        .iter()
        .map(|&(idx, t)| {
            let source = index.source(idx);
            MetricsRow {
                source_id: source.source_id,
                title: source.title.clone(),
                citescore_year: year,
                citescore: t.citescore().expect("eligible titles have documents"),
                citations: t.citations,
                documents: t.documents,
                percent_cited: t.percent_cited().expect("eligible titles have documents"),
            }
        })
        .collect();

    let mut categories: BTreeMap<AsjcCode, Vec<(SourceId, CiteScore)>> = BTreeMap::new();
    for row in &metrics {
        let source = index.source_by_id(row.source_id).expect("row source is indexed");
        for &code in &source.asjc_codes {
            categories.entry(code).or_default().push((row.source_id, row.citescore));
        }
    }

    let mut standings: Vec<CategoryStanding> = categories
        .into_par_iter()
        .flat_map_iter(|(code, members)| {
            let scores: Vec<CiteScore> = members.iter().map(|&(_, s)| s).collect();
            let n = scores.len() as u32;
            standing::category_standings(&scores)
                .into_iter()
                .zip(members)
                .map(move |((rank, p), (source_id, _))| CategoryStanding {
                    source_id,
                    asjc_code: code,
                    rank,
                    n_in_category: n,
                    percentile: p,
                    quartile: quartile(p).expect("percentile within 0..=99"),
                })
                .collect::<Vec<_>>()
        })
        .collect();
    standings.sort_by_key(|s| (s.source_id, s.asjc_code));

    AnnualMetrics { year, cutoff: snap.cutoff(), metrics, standings }
}
