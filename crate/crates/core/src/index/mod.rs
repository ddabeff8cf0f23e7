//! In-memory citation index: sources, publications and resolved citation
//! links, plus load-date snapshots and title-change chains.

mod ingest;
mod snapshot;

pub(crate) use ingest::parse_load_date;
pub use ingest::{ingest, ingest_files, FileReport, IngestReport, Ingested, Rejection};
pub use snapshot::IndexSnapshot;

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;
use std::str::FromStr;

use chrono::NaiveDate;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SourceId(pub u64);

impl fmt::Display for SourceId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct PubId(pub String);

impl fmt::Display for PubId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for PubId {
    fn from(s: &str) -> Self {
        PubId(s.to_string())
    }
}

/// Four-digit All Science Journal Classification code.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "u64", into = "u64")]
pub struct AsjcCode(u16);

impl AsjcCode {
    pub fn new(code: u64) -> Option<Self> {
        (1000..=9999).contains(&code).then_some(AsjcCode(code as u16))
    }

    pub fn get(self) -> u16 {
        self.0
    }
}

impl TryFrom<u64> for AsjcCode {
    type Error = String;

    fn try_from(code: u64) -> Result<Self, Self::Error> {
        AsjcCode::new(code).ok_or_else(|| format!("asjc code {code} is not a 4-digit code"))
    }
}

impl From<AsjcCode> for u64 {
    fn from(code: AsjcCode) -> u64 {
        u64::from(code.0)
    }
}

impl fmt::Display for AsjcCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DocType {
    Article,
    Review,
    ConferencePaper,
    Editorial,
    Letter,
    Note,
    ShortSurvey,
    Erratum,
    BookChapter,
    Other,
}

impl DocType {
    pub const ALL: [DocType; 10] = [
        DocType::Article,
        DocType::Review,
        DocType::ConferencePaper,
        DocType::Editorial,
        DocType::Letter,
        DocType::Note,
        DocType::ShortSurvey,
        DocType::Erratum,
        DocType::BookChapter,
        DocType::Other,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            DocType::Article => "article",
            DocType::Review => "review",
            DocType::ConferencePaper => "conference-paper",
            DocType::Editorial => "editorial",
            DocType::Letter => "letter",
            DocType::Note => "note",
            DocType::ShortSurvey => "short-survey",
            DocType::Erratum => "erratum",
            DocType::BookChapter => "book-chapter",
            DocType::Other => "other",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SourceType {
    Journal,
    BookSeries,
    TradeJournal,
    ConferenceProceedingsSerial,
    StandaloneBook,
    StandaloneProceedings,
}

impl SourceType {
    pub const ALL: [SourceType; 6] = [
        SourceType::Journal,
        SourceType::BookSeries,
        SourceType::TradeJournal,
        SourceType::ConferenceProceedingsSerial,
        SourceType::StandaloneBook,
        SourceType::StandaloneProceedings,
    ];

    /// Serial venues can carry metrics; stand-alone books and proceedings cannot.
    pub fn is_serial(self) -> bool {
        !matches!(self, SourceType::StandaloneBook | SourceType::StandaloneProceedings)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            SourceType::Journal => "journal",
            SourceType::BookSeries => "book-series",
            SourceType::TradeJournal => "trade-journal",
            SourceType::ConferenceProceedingsSerial => "conference-proceedings-serial",
            SourceType::StandaloneBook => "standalone-book",
            SourceType::StandaloneProceedings => "standalone-proceedings",
        }
    }
}

impl FromStr for SourceType {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        SourceType::ALL
            .into_iter()
            .find(|t| t.as_str() == s)
            .ok_or_else(|| format!("unknown source type {s:?}"))
    }
}

/// One indexed document.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PublicationRecord {
    pub pub_id: PubId,
    pub source_id: SourceId,
    pub sort_year: i32,
    pub load_date: NaiveDate,
    pub doc_type: DocType,
    pub is_article_in_press: bool,
}

/// A resolved citing -> cited edge.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct CitationLink {
    pub citing_pub_id: PubId,
    pub cited_pub_id: PubId,
}

/// A serial title.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SourceRecord {
    pub source_id: SourceId,
    pub title: String,
    pub source_type: SourceType,
    pub asjc_codes: BTreeSet<AsjcCode>,
    pub is_actively_indexed: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub predecessor_source_id: Option<SourceId>,
}

/// Dense position of a source inside a [`CitationIndex`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SourceIdx(pub(crate) u32);

/// Dense position of a publication inside a [`CitationIndex`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PubIdx(pub(crate) u32);

impl SourceIdx {
    pub fn get(self) -> usize {
        self.0 as usize
    }
}

impl PubIdx {
    pub fn get(self) -> usize {
        self.0 as usize
    }
}

/// Referential-integrity failures that abort ingestion.
#[derive(Debug, thiserror::Error)]
pub enum IndexError {
    #[error("duplicate source_id {0}")]
    DuplicateSource(SourceId),
    #[error("duplicate pub_id {0:?}")]
    DuplicatePublication(PubId),
    #[error("source {source_id} names unknown predecessor {predecessor}")]
    UnknownPredecessor { source_id: SourceId, predecessor: SourceId },
    #[error("sources {first} and {second} both name {predecessor} as predecessor")]
    SplitTitle { predecessor: SourceId, first: SourceId, second: SourceId },
    #[error("title chain through source {0} is cyclic")]
    CyclicChain(SourceId),
    #[error("unknown source {0}")]
    UnknownSource(SourceId),
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

/// Why a single publication or link record was refused.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RejectReason {
    UnknownSource(SourceId),
    DanglingEndpoint(PubId),
    SelfCitation,
    CitingArticleInPress(PubId),
}

impl fmt::Display for RejectReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RejectReason::UnknownSource(id) => write!(f, "unknown source_id {id}"),
            RejectReason::DanglingEndpoint(id) => write!(f, "link endpoint {id} is not indexed"),
            RejectReason::SelfCitation => f.write_str("publication cites itself"),
            RejectReason::CitingArticleInPress(id) => {
                write!(f, "article-in-press {id} cannot give citations")
            }
        }
    }
}

/// Outcome of offering one record to an [`IndexBuilder`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Admission {
    Accepted,
    /// Duplicate citation pair folded into the existing link.
    Collapsed,
    Rejected(RejectReason),
}

/// Ingestion-time view of the index. Sources are fixed at construction so
/// that every later record can be checked as it arrives.
#[derive(Debug)]
pub struct IndexBuilder {
    sources: Vec<SourceRecord>,
    source_pos: HashMap<SourceId, SourceIdx>,
    predecessor: Vec<Option<SourceIdx>>,
    successor: Vec<Option<SourceIdx>>,
    publications: Vec<PublicationRecord>,
    pub_pos: HashMap<PubId, PubIdx>,
    pub_source: Vec<SourceIdx>,
    links: Vec<(PubIdx, PubIdx)>,
    link_set: HashSet<(PubIdx, PubIdx)>,
}

impl IndexBuilder {
    /// Validates source uniqueness and title chains (linear, acyclic, known
    /// predecessors).
    pub fn new(sources: impl IntoIterator<Item = SourceRecord>) -> Result<Self, IndexError> {
        let mut sources: Vec<SourceRecord> = sources.into_iter().collect();
        sources.sort_by_key(|s| s.source_id);
        if let Some(w) = sources.windows(2).find(|w| w[0].source_id == w[1].source_id) {
            return Err(IndexError::DuplicateSource(w[0].source_id));
        }
        let source_pos: HashMap<SourceId, SourceIdx> = sources
            .iter()
            .enumerate()
            .map(|(i, s)| (s.source_id, SourceIdx(i as u32)))
            .collect();

        let mut predecessor = vec![None; sources.len()];
        let mut successor: Vec<Option<SourceIdx>> = vec![None; sources.len()];
        for (i, s) in sources.iter().enumerate() {
            let Some(pred_id) = s.predecessor_source_id else { continue };
            let pred = *source_pos.get(&pred_id).ok_or(IndexError::UnknownPredecessor {
                source_id: s.source_id,
                predecessor: pred_id,
            })?;
            if let Some(other) = successor[pred.get()] {
                return Err(IndexError::SplitTitle {
                    predecessor: pred_id,
                    first: sources[other.get()].source_id,
                    second: s.source_id,
                });
            }
            successor[pred.get()] = Some(SourceIdx(i as u32));
            predecessor[i] = Some(pred);
        }

        // With at most one predecessor and one successor per node, any cycle
        // is a ring with no terminal; walking predecessors from every node
        // detects it within n steps.
        for start in 0..sources.len() {
            let mut cur = start;
            for _ in 0..=sources.len() {
                match predecessor[cur] {
                    Some(p) if p.get() == start => {
                        return Err(IndexError::CyclicChain(sources[start].source_id))
                    }
                    Some(p) => cur = p.get(),
                    None => break,
                }
            }
        }

        Ok(IndexBuilder {
            sources,
            source_pos,
            predecessor,
            successor,
            publications: Vec::new(),
            pub_pos: HashMap::new(),
            pub_source: Vec::new(),
            links: Vec::new(),
            link_set: HashSet::new(),
        })
    }

    pub fn add_publication(&mut self, record: PublicationRecord) -> Result<Admission, IndexError> {
        if self.pub_pos.contains_key(&record.pub_id) {
            return Err(IndexError::DuplicatePublication(record.pub_id));
        }
        let Some(&src) = self.source_pos.get(&record.source_id) else {
            // Remember the id so a later duplicate is still caught.
            self.pub_pos.insert(record.pub_id, PubIdx(u32::MAX));
            return Ok(Admission::Rejected(RejectReason::UnknownSource(record.source_id)));
        };
        let idx = PubIdx(self.publications.len() as u32);
        self.pub_pos.insert(record.pub_id.clone(), idx);
        self.pub_source.push(src);
        self.publications.push(record);
        Ok(Admission::Accepted)
    }

    pub fn add_link(&mut self, link: CitationLink) -> Admission {
        let lookup = |id: &PubId| self.pub_pos.get(id).copied().filter(|p| p.0 != u32::MAX);
        let Some(citing) = lookup(&link.citing_pub_id) else {
            return Admission::Rejected(RejectReason::DanglingEndpoint(link.citing_pub_id));
        };
        let Some(cited) = lookup(&link.cited_pub_id) else {
            return Admission::Rejected(RejectReason::DanglingEndpoint(link.cited_pub_id));
        };
        if citing == cited {
            return Admission::Rejected(RejectReason::SelfCitation);
        }
        if self.publications[citing.get()].is_article_in_press {
            return Admission::Rejected(RejectReason::CitingArticleInPress(link.citing_pub_id));
        }
        if !self.link_set.insert((citing, cited)) {
            return Admission::Collapsed;
        }
        self.links.push((citing, cited));
        Admission::Accepted
    }

    pub fn build(self) -> CitationIndex {
        let terminal = (0..self.sources.len())
            .map(|i| {
                let mut cur = i;
                while let Some(next) = self.successor[cur] {
                    cur = next.get();
                }
                SourceIdx(cur as u32)
            })
            .collect();
        CitationIndex {
            sources: self.sources,
            source_pos: self.source_pos,
            predecessor: self.predecessor,
            successor: self.successor,
            terminal,
            publications: self.publications,
            pub_source: self.pub_source,
            links: self.links,
        }
    }
}

/// Queryable, append-only citation index.
#[derive(Debug, Clone)]
pub struct CitationIndex {
    sources: Vec<SourceRecord>,
    source_pos: HashMap<SourceId, SourceIdx>,
    predecessor: Vec<Option<SourceIdx>>,
    successor: Vec<Option<SourceIdx>>,
    terminal: Vec<SourceIdx>,
    publications: Vec<PublicationRecord>,
    pub_source: Vec<SourceIdx>,
    links: Vec<(PubIdx, PubIdx)>,
}

impl CitationIndex {
    /// Builds an index from in-memory records, failing on the first rejected
    /// record. Intended for hand-built corpora; file input goes through
    /// [`ingest`].
    pub fn from_records(
        sources: impl IntoIterator<Item = SourceRecord>,
        publications: impl IntoIterator<Item = PublicationRecord>,
        links: impl IntoIterator<Item = CitationLink>,
    ) -> Result<Self, BuildError> {
        let mut builder = IndexBuilder::new(sources)?;
        for p in publications {
            let id = p.pub_id.clone();
            if let Admission::Rejected(reason) = builder.add_publication(p)? {
                return Err(BuildError::Rejected { record: id.0, reason });
            }
        }
        for l in links {
            let record = format!("{} -> {}", l.citing_pub_id, l.cited_pub_id);
            if let Admission::Rejected(reason) = builder.add_link(l) {
                return Err(BuildError::Rejected { record, reason });
            }
        }
        Ok(builder.build())
    }

    pub fn sources(&self) -> &[SourceRecord] {
        &self.sources
    }

    pub fn publications(&self) -> &[PublicationRecord] {
        &self.publications
    }

    pub fn link_count(&self) -> usize {
        self.links.len()
    }

    pub fn links(&self) -> impl Iterator<Item = CitationLink> + '_ {
        self.links.iter().map(|&(a, b)| CitationLink {
            citing_pub_id: self.publications[a.get()].pub_id.clone(),
            cited_pub_id: self.publications[b.get()].pub_id.clone(),
        })
    }

    pub fn source_idx(&self, id: SourceId) -> Option<SourceIdx> {
        self.source_pos.get(&id).copied()
    }

    pub fn source(&self, idx: SourceIdx) -> &SourceRecord {
        &self.sources[idx.get()]
    }

    pub fn source_by_id(&self, id: SourceId) -> Option<&SourceRecord> {
        self.source_idx(id).map(|i| self.source(i))
    }

    pub fn publication(&self, idx: PubIdx) -> &PublicationRecord {
        &self.publications[idx.get()]
    }

    pub(crate) fn pub_source(&self, idx: PubIdx) -> SourceIdx {
        self.pub_source[idx.get()]
    }

    pub(crate) fn raw_links(&self) -> &[(PubIdx, PubIdx)] {
        &self.links
    }

    /// Current title at the end of the chain containing `idx`.
    pub fn terminal_of(&self, idx: SourceIdx) -> SourceIdx {
        self.terminal[idx.get()]
    }

    /// True when no later title succeeds this source.
    pub fn is_chain_terminal(&self, idx: SourceIdx) -> bool {
        self.successor[idx.get()].is_none()
    }

    pub fn predecessor_of(&self, idx: SourceIdx) -> Option<SourceIdx> {
        self.predecessor[idx.get()]
    }

    /// The source itself plus every earlier title it succeeded. Successors are
    /// never included.
    pub fn resolve_title_chain(&self, id: SourceId) -> Result<BTreeSet<SourceId>, IndexError> {
        let idx = self.source_idx(id).ok_or(IndexError::UnknownSource(id))?;
        Ok(self.chain_members(idx).map(|i| self.source(i).source_id).collect())
    }

    pub(crate) fn chain_members(&self, idx: SourceIdx) -> impl Iterator<Item = SourceIdx> + '_ {
        std::iter::successors(Some(idx), |&i| self.predecessor[i.get()])
    }

    pub fn snapshot(&self, cutoff: NaiveDate) -> IndexSnapshot<'_> {
        IndexSnapshot::new(self, cutoff)
    }
}

#[derive(Debug, thiserror::Error)]
pub enum BuildError {
    #[error(transparent)]
    Index(#[from] IndexError),
    #[error("record {record} rejected: {reason}")]
    Rejected { record: String, reason: RejectReason },
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;

    pub fn source(id: u64, pred: Option<u64>) -> SourceRecord {
        SourceRecord {
            source_id: SourceId(id),
            title: format!("Source {id}"),
            source_type: SourceType::Journal,
            asjc_codes: [AsjcCode::new(1100).unwrap()].into(),
            is_actively_indexed: true,
            predecessor_source_id: pred.map(SourceId),
        }
    }

    pub fn publication(id: &str, source: u64, year: i32, load: &str) -> PublicationRecord {
        PublicationRecord {
            pub_id: id.into(),
            source_id: SourceId(source),
            sort_year: year,
            load_date: load.parse().unwrap(),
            doc_type: DocType::Article,
            is_article_in_press: false,
        }
    }

    pub fn link(citing: &str, cited: &str) -> CitationLink {
        CitationLink { citing_pub_id: citing.into(), cited_pub_id: cited.into() }
    }

    fn chain_index() -> CitationIndex {
        // 1 -> 2 -> 3 with 3 current; 4 standalone.
        CitationIndex::from_records(
            [source(3, Some(2)), source(1, None), source(2, Some(1)), source(4, None)],
            [],
            [],
        )
        .unwrap()
    }

    #[test]
    fn chain_without_predecessor_is_identity() {
        let idx = chain_index();
        assert_eq!(idx.resolve_title_chain(SourceId(4)).unwrap(), [SourceId(4)].into());
    }

    #[test]
    fn chain_resolves_predecessors_only() {
        let idx = chain_index();
        let ids = |v: &[u64]| v.iter().copied().map(SourceId).collect::<BTreeSet<_>>();
        assert_eq!(idx.resolve_title_chain(SourceId(3)).unwrap(), ids(&[1, 2, 3]));
        assert_eq!(idx.resolve_title_chain(SourceId(2)).unwrap(), ids(&[1, 2]));
        assert_eq!(idx.resolve_title_chain(SourceId(1)).unwrap(), ids(&[1]));
        assert!(matches!(
            idx.resolve_title_chain(SourceId(99)),
            Err(IndexError::UnknownSource(SourceId(99)))
        ));
    }

    #[test]
    fn terminal_chains_partition_sources() {
        let idx = chain_index();
        let mut seen = Vec::new();
        for (i, s) in idx.sources().iter().enumerate() {
            if idx.is_chain_terminal(SourceIdx(i as u32)) {
                seen.extend(idx.resolve_title_chain(s.source_id).unwrap());
            }
        }
        seen.sort();
        let all: Vec<_> = idx.sources().iter().map(|s| s.source_id).collect();
        assert_eq!(seen, all);
    }

    #[test]
    fn cycles_are_rejected() {
        let err = IndexBuilder::new([source(1, Some(3)), source(2, Some(1)), source(3, Some(2))])
            .unwrap_err();
        assert!(matches!(err, IndexError::CyclicChain(_)), "{err}");
        let err = IndexBuilder::new([source(1, Some(1))]).unwrap_err();
        assert!(matches!(err, IndexError::CyclicChain(SourceId(1))));
    }

    #[test]
    fn splits_and_unknown_predecessors_are_rejected() {
        let err = IndexBuilder::new([source(1, None), source(2, Some(1)), source(3, Some(1))])
            .unwrap_err();
        assert!(matches!(err, IndexError::SplitTitle { .. }));
        let err = IndexBuilder::new([source(2, Some(1))]).unwrap_err();
        assert!(matches!(err, IndexError::UnknownPredecessor { .. }));
        let err = IndexBuilder::new([source(2, None), source(2, None)]).unwrap_err();
        assert!(matches!(err, IndexError::DuplicateSource(SourceId(2))));
    }

    #[test]
    fn link_admission_rules() {
        let mut b = IndexBuilder::new([source(1, None)]).unwrap();
        b.add_publication(publication("a", 1, 2016, "2016-03-01")).unwrap();
        let mut aip = publication("b", 1, 2017, "2017-03-01");
        aip.is_article_in_press = true;
        b.add_publication(aip).unwrap();
        b.add_publication(publication("c", 1, 2017, "2017-03-01")).unwrap();

        assert_eq!(b.add_link(link("c", "a")), Admission::Accepted);
        assert_eq!(b.add_link(link("c", "a")), Admission::Collapsed);
        assert_eq!(b.add_link(link("c", "b")), Admission::Accepted);
        assert_eq!(b.add_link(link("a", "a")), Admission::Rejected(RejectReason::SelfCitation));
        assert!(matches!(
            b.add_link(link("b", "a")),
            Admission::Rejected(RejectReason::CitingArticleInPress(_))
        ));
        assert!(matches!(
            b.add_link(link("c", "zzz")),
            Admission::Rejected(RejectReason::DanglingEndpoint(_))
        ));
        assert_eq!(b.build().link_count(), 2);
    }

    #[test]
    fn duplicate_pub_id_is_fatal_even_after_rejection() {
        let mut b = IndexBuilder::new([source(1, None)]).unwrap();
        let r = b.add_publication(publication("a", 9, 2016, "2016-03-01")).unwrap();
        assert_eq!(r, Admission::Rejected(RejectReason::UnknownSource(SourceId(9))));
        assert!(matches!(
            b.add_publication(publication("a", 1, 2016, "2016-03-01")),
            Err(IndexError::DuplicatePublication(_))
        ));
        // the rejected record must not resolve as a link endpoint
        assert!(matches!(b.add_link(link("a", "a")), Admission::Rejected(_)));
    }
}
