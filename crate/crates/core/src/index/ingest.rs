//! Line-delimited JSON ingestion.
//!
//! Each file holds one JSON object per line. Blank lines are skipped. A line
//! that does not parse, or whose fields have the wrong shape, is rejected with
//! its 1-based line number and ingestion continues. Referential problems are
//! split in two: dangling references reject the record, while duplicate
//! identifiers and broken title chains abort the whole run.

use std::collections::{BTreeMap, BTreeSet};
use std::fs::File;
use std::io::{BufRead, BufReader};
use std::path::Path;

use chrono::NaiveDate;
use serde::de::{DeserializeOwned, IgnoredAny};
use serde::Deserialize;

use super::{
    Admission, AsjcCode, CitationIndex, CitationLink, DocType, IndexBuilder, IndexError, PubId,
    PublicationRecord, SourceId, SourceRecord, SourceType,
};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rejection {
    pub line: usize,
    pub reason: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct FileReport {
    pub accepted: usize,
    pub collapsed: usize,
    pub rejected: Vec<Rejection>,
    pub unknown_fields: BTreeSet<String>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct IngestReport {
    pub sources: FileReport,
    pub publications: FileReport,
    pub links: FileReport,
}

impl IngestReport {
    pub fn accepted(&self) -> (usize, usize, usize) {
        (self.sources.accepted, self.publications.accepted, self.links.accepted)
    }

    pub fn total_rejected(&self) -> usize {
        self.sources.rejected.len() + self.publications.rejected.len() + self.links.rejected.len()
    }

    /// Human-readable warnings, one per rejected line or ignored field.
    pub fn warnings(&self) -> Vec<String> {
        let mut out = Vec::new();
        for (name, file) in [
            ("sources", &self.sources),
            ("publications", &self.publications),
            ("links", &self.links),
        ] {
            for r in &file.rejected {
                out.push(format!("{name}:{}: rejected: {}", r.line, r.reason));
            }
            if !file.unknown_fields.is_empty() {
                let fields: Vec<_> = file.unknown_fields.iter().map(String::as_str).collect();
                out.push(format!("{name}: ignored unknown fields: {}", fields.join(", ")));
            }
            if file.collapsed > 0 {
                out.push(format!("{name}: collapsed {} duplicate citation pairs", file.collapsed));
            }
        }
        out
    }
}

#[derive(Debug)]
pub struct Ingested {
    pub index: CitationIndex,
    pub report: IngestReport,
}

#[derive(Deserialize)]
struct SourceLine {
    source_id: u64,
    title: String,
    source_type: SourceType,
    asjc_codes: Vec<u64>,
    is_actively_indexed: bool,
    #[serde(default)]
    predecessor_source_id: Option<u64>,
    #[serde(flatten)]
    extra: BTreeMap<String, IgnoredAny>,
}

#[derive(Deserialize)]
struct PublicationLine {
    pub_id: String,
    source_id: u64,
    sort_year: i32,
    load_date: String,
    doc_type: DocType,
    is_article_in_press: bool,
    #[serde(flatten)]
    extra: BTreeMap<String, IgnoredAny>,
}

#[derive(Deserialize)]
struct LinkLine {
    citing_pub_id: String,
    cited_pub_id: String,
    #[serde(flatten)]
    extra: BTreeMap<String, IgnoredAny>,
}

/// Strict `YYYY-MM-DD`; chrono alone would accept unpadded fields.
pub(crate) fn parse_load_date(s: &str) -> Option<NaiveDate> {
    let b = s.as_bytes();
    let shape_ok = b.len() == 10
        && b[4] == b'-'
        && b[7] == b'-'
        && b.iter().enumerate().all(|(i, c)| i == 4 || i == 7 || c.is_ascii_digit());
    if !shape_ok {
        return None;
    }
    let y = s[0..4].parse().ok()?;
    let m = s[5..7].parse().ok()?;
    let d = s[8..10].parse().ok()?;
    NaiveDate::from_ymd_opt(y, m, d)
}

fn lines<R: BufRead>(reader: R) -> impl Iterator<Item = Result<(usize, Result<String, String>), std::io::Error>> {
    reader
        .split(b'\n')
        .enumerate()
        .map(|(i, chunk)| {
            let mut bytes = chunk?;
            if bytes.last() == Some(&b'\r') {
                bytes.pop();
            }
            let text = String::from_utf8(bytes).map_err(|_| "line is not valid UTF-8".to_string());
            Ok((i + 1, text))
        })
        .filter(|r| !matches!(r, Ok((_, Ok(t))) if t.trim().is_empty()))
}

fn parse_line<T: DeserializeOwned>(text: Result<String, String>) -> Result<T, String> {
    serde_json::from_str(&text?).map_err(|e| e.to_string())
}

fn io_err(path: &str) -> impl Fn(std::io::Error) -> IndexError + '_ {
    move |source| IndexError::Io { path: path.to_string(), source }
}

/// Reads the three record streams into an index.
pub fn ingest(
    sources: impl BufRead,
    publications: impl BufRead,
    links: impl BufRead,
) -> Result<Ingested, IndexError> {
    let mut report = IngestReport::default();

    let mut source_records = Vec::new();
    for item in lines(sources) {
        let (line, text) = item.map_err(io_err("sources"))?;
        let parsed = parse_line::<SourceLine>(text).and_then(|s| {
            let asjc_codes = s
                .asjc_codes
                .iter()
                .map(|&c| AsjcCode::try_from(c))
                .collect::<Result<BTreeSet<_>, _>>()?;
            let record = SourceRecord {
                source_id: SourceId(s.source_id),
                title: s.title,
                source_type: s.source_type,
                asjc_codes,
                is_actively_indexed: s.is_actively_indexed,
                predecessor_source_id: s.predecessor_source_id.map(SourceId),
            };
            Ok((record, s.extra))
        });
        match parsed {
            Ok((record, extra)) => {
                report.sources.unknown_fields.extend(extra.into_keys());
                report.sources.accepted += 1;
                source_records.push(record);
            }
            Err(reason) => report.sources.rejected.push(Rejection { line, reason }),
        }
    }
    let mut builder = IndexBuilder::new(source_records)?;

    for item in lines(publications) {
        let (line, text) = item.map_err(io_err("publications"))?;
        let parsed = parse_line::<PublicationLine>(text).and_then(|p| {
            if p.pub_id.is_empty() {
                return Err("pub_id is empty".to_string());
            }
            let load_date = parse_load_date(&p.load_date)
                .ok_or_else(|| format!("load_date {:?} is not a valid YYYY-MM-DD date", p.load_date))?;
            let record = PublicationRecord {
                pub_id: PubId(p.pub_id),
                source_id: SourceId(p.source_id),
                sort_year: p.sort_year,
                load_date,
                doc_type: p.doc_type,
                is_article_in_press: p.is_article_in_press,
            };
            Ok((record, p.extra))
        });
        let file = &mut report.publications;
        match parsed {
            Ok((record, extra)) => {
                file.unknown_fields.extend(extra.into_keys());
                tally(file, line, builder.add_publication(record)?);
            }
            Err(reason) => file.rejected.push(Rejection { line, reason }),
        }
    }

    for item in lines(links) {
        let (line, text) = item.map_err(io_err("links"))?;
        let file = &mut report.links;
        match parse_line::<LinkLine>(text) {
            Ok(l) => {
                file.unknown_fields.extend(l.extra.into_keys());
                let link = CitationLink {
                    citing_pub_id: PubId(l.citing_pub_id),
                    cited_pub_id: PubId(l.cited_pub_id),
                };
                tally(file, line, builder.add_link(link));
            }
            Err(reason) => file.rejected.push(Rejection { line, reason }),
        }
    }

    Ok(Ingested { index: builder.build(), report })
}

fn tally(file: &mut FileReport, line: usize, admission: Admission) {
    match admission {
        Admission::Accepted => file.accepted += 1,
        Admission::Collapsed => file.collapsed += 1,
        Admission::Rejected(reason) => {
            file.rejected.push(Rejection { line, reason: reason.to_string() })
        }
    }
}

/// [`ingest`] over files on disk.
pub fn ingest_files(
    sources: impl AsRef<Path>,
    publications: impl AsRef<Path>,
    links: impl AsRef<Path>,
) -> Result<Ingested, IndexError> {
    let open = |p: &Path| {
        File::open(p)
            .map(BufReader::new)
            .map_err(|source| IndexError::Io { path: p.display().to_string(), source })
    };
    ingest(open(sources.as_ref())?, open(publications.as_ref())?, open(links.as_ref())?)
}
