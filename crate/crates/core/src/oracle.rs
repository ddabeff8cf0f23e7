//! Brute-force reference computation of the annual metrics, used to check
//! the engine differentially.
//!
//! Nothing here calls into `index`, `metrics`, `score` or `output`: records
//! are read as untyped JSON, dates are compared as validated `YYYY-MM-DD`
//! strings, chains are found by scanning, category standings by nested
//! loops, and the CSV is written by hand.

use std::collections::{HashMap, HashSet};

use serde_json::Value;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("oracle: {0}")]
pub struct OracleError(String);

/// Both annual files, in the same format the engine writes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleOutput {
    pub metrics_csv: String,
    pub standings_csv: String,
}

struct Source {
    id: u64,
    title: String,
    kind: String,
    codes: Vec<u64>,
    active: bool,
    predecessor: Option<u64>,
}

struct Publication {
    source: u64,
    year: i64,
    load_date: String,
    in_press: bool,
}

const SOURCE_KINDS: [&str; 6] = [
    "journal",
    "book-series",
    "trade-journal",
    "conference-proceedings-serial",
    "standalone-book",
    "standalone-proceedings",
];
const SCOREABLE_KINDS: [&str; 4] = ["journal", "book-series", "trade-journal", "conference-proceedings-serial"];
const DOC_TYPES: [&str; 10] = [
    "article",
    "review",
    "conference-paper",
    "editorial",
    "letter",
    "note",
    "short-survey",
    "erratum",
    "book-chapter",
    "other",
];

/// Non-blank lines as JSON objects; `None` marks a line that must be rejected.
fn records(file: &[u8]) -> Vec<Option<serde_json::Map<String, Value>>> {
    let mut out = Vec::new();
    for raw in file.split(|&b| b == b'\n') {
        let raw = raw.strip_suffix(b"\r").unwrap_or(raw);
        let Ok(text) = std::str::from_utf8(raw) else {
            out.push(None);
            continue;
        };
        if text.trim().is_empty() {
            continue;
        }
        match serde_json::from_str::<Value>(text) {
            Ok(Value::Object(map)) => out.push(Some(map)),
            _ => out.push(None),
        }
    }
    out
}

fn is_leap(y: u32) -> bool {
    (y.is_multiple_of(4) && !y.is_multiple_of(100)) || y.is_multiple_of(400)
}

fn valid_date(s: &str) -> bool {
    let parts: Vec<&str> = s.split('-').collect();
    if parts.len() != 3 || parts[0].len() != 4 || parts[1].len() != 2 || parts[2].len() != 2 {
        return false;
    }
    if !parts.iter().all(|p| p.chars().all(|c| c.is_ascii_digit())) {
        return false;
    }
    let y: u32 = parts[0].parse().unwrap();
    let m: u32 = parts[1].parse().unwrap();
    let d: u32 = parts[2].parse().unwrap();
    let days = match m {
        1 | 3 | 5 | 7 | 8 | 10 | 12 => 31,
        4 | 6 | 9 | 11 => 30,
        2 if is_leap(y) => 29,
        2 => 28,
        _ => return false,
    };
    (1..=days).contains(&d)
}

fn parse_source(m: &serde_json::Map<String, Value>) -> Option<Source> {
    let id = m.get("source_id")?.as_u64()?;
    let title = m.get("title")?.as_str()?.to_string();
    let kind = m.get("source_type")?.as_str()?.to_string();
    if !SOURCE_KINDS.contains(&kind.as_str()) {
        return None;
    }
    let mut codes = Vec::new();
    for c in m.get("asjc_codes")?.as_array()? {
        let c = c.as_u64()?;
        if !(1000..=9999).contains(&c) {
            return None;
        }
        if !codes.contains(&c) {
            codes.push(c);
        }
    }
    let active = m.get("is_actively_indexed")?.as_bool()?;
    let predecessor = match m.get("predecessor_source_id") {
        None | Some(Value::Null) => None,
        Some(v) => Some(v.as_u64()?),
    };
    Some(Source { id, title, kind, codes, active, predecessor })
}

fn parse_publication(m: &serde_json::Map<String, Value>) -> Option<(String, Publication)> {
    let id = m.get("pub_id")?.as_str()?.to_string();
    let source = m.get("source_id")?.as_u64()?;
    let year = m.get("sort_year")?.as_i64()?;
    if year < i64::from(i32::MIN) || year > i64::from(i32::MAX) {
        return None;
    }
    let load_date = m.get("load_date")?.as_str()?.to_string();
    let doc_type = m.get("doc_type")?.as_str()?;
    let in_press = m.get("is_article_in_press")?.as_bool()?;
    if id.is_empty() || !valid_date(&load_date) || !DOC_TYPES.contains(&doc_type) {
        return None;
    }
    Some((id, Publication { source, year, load_date, in_press }))
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n', '\r']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// Hundredths of `a / b`, rounded on the third decimal digit.
fn two_places(a: u64, b: u64) -> String {
    let thousandths = u128::from(a) * 1000 / u128::from(b);
    let mut hundredths = thousandths / 10;
    if thousandths % 10 >= 5 {
        hundredths += 1;
    }
    format!("{}.{:02}", hundredths / 100, hundredths % 100)
}

fn whole_percent(part: u64, whole: u64) -> u64 {
    let tenths = part * 1000 / whole;
    tenths / 10 + u64::from(tenths % 10 >= 5)
}

/// Recomputes the metrics and standings files for `year` on the index as of
/// `cutoff` (`YYYY-MM-DD`, inclusive), straight from the raw record files.
pub fn oracle_metrics(
    sources: &[u8],
    publications: &[u8],
    links: &[u8],
    year: i32,
    cutoff: &str,
) -> Result<OracleOutput, OracleError> {
    if !valid_date(cutoff) {
        return Err(OracleError(format!("bad cutoff {cutoff:?}")));
    }
    let year = i64::from(year);

    let mut all_sources: Vec<Source> = Vec::new();
    for m in records(sources).into_iter().flatten() {
        if let Some(s) = parse_source(&m) {
            if all_sources.iter().any(|o| o.id == s.id) {
                return Err(OracleError(format!("duplicate source {}", s.id)));
            }
            all_sources.push(s);
        }
    }
    for s in &all_sources {
        if let Some(p) = s.predecessor {
            if !all_sources.iter().any(|o| o.id == p) {
                return Err(OracleError(format!("unknown predecessor {p}")));
            }
            if all_sources.iter().filter(|o| o.predecessor == Some(p)).count() > 1 {
                return Err(OracleError(format!("title {p} has two successors")));
            }
        }
    }
    let by_id: HashMap<u64, &Source> = all_sources.iter().map(|s| (s.id, s)).collect();
    let find = |id: u64| by_id[&id];
    // Walk each chain back to its origin; more steps than sources means a loop.
    for s in &all_sources {
        let mut cur = s;
        let mut steps = 0;
        while let Some(p) = cur.predecessor {
            cur = find(p);
            steps += 1;
            if steps > all_sources.len() {
                return Err(OracleError(format!("cyclic chain at {}", s.id)));
            }
        }
    }
    let successor_of = |id: u64| all_sources.iter().find(|o| o.predecessor == Some(id)).map(|o| o.id);
    let mut current_title: HashMap<u64, u64> = HashMap::new();
    for s in &all_sources {
        let mut cur = s.id;
        while let Some(next) = successor_of(cur) {
            cur = next;
        }
        current_title.insert(s.id, cur);
    }

    let mut pubs: HashMap<String, Publication> = HashMap::new();
    let mut seen_ids: HashSet<String> = HashSet::new();
    for m in records(publications).into_iter().flatten() {
        let Some((id, p)) = parse_publication(&m) else { continue };
        if !seen_ids.insert(id.clone()) {
            return Err(OracleError(format!("duplicate pub_id {id}")));
        }
        if current_title.contains_key(&p.source) {
            pubs.insert(id, p);
        }
    }

    let mut edges: HashSet<(String, String)> = HashSet::new();
    for m in records(links).into_iter().flatten() {
        let (Some(a), Some(b)) = (
            m.get("citing_pub_id").and_then(Value::as_str),
            m.get("cited_pub_id").and_then(Value::as_str),
        ) else {
            continue;
        };
        let (Some(citing), Some(_)) = (pubs.get(a), pubs.get(b)) else { continue };
        if a == b || citing.in_press {
            continue;
        }
        edges.insert((a.to_string(), b.to_string()));
    }

    // Cutoff filter.
    let loaded = |p: &Publication| p.load_date.as_str() <= cutoff;
    let in_window = |p: &Publication| !p.in_press && p.year >= year - 3 && p.year < year;

    let mut documents: HashMap<u64, u64> = HashMap::new();
    for p in pubs.values() {
        if loaded(p) && in_window(p) {
            *documents.entry(current_title[&p.source]).or_insert(0) += 1;
        }
    }
    let mut citations: HashMap<u64, u64> = HashMap::new();
    let mut cited_docs: HashMap<u64, HashSet<&str>> = HashMap::new();
    for (a, b) in &edges {
        let (from, to) = (&pubs[a], &pubs[b]);
        if !loaded(from) || !loaded(to) {
            continue;
        }
        if from.year == year && !from.in_press && in_window(to) {
            let title = current_title[&to.source];
            *citations.entry(title).or_insert(0) += 1;
            cited_docs.entry(title).or_default().insert(b.as_str());
        }
    }

    let mut scored: Vec<(u64, u64, u64, usize)> = Vec::new(); // (id, A, B, cited)
    for s in &all_sources {
        let is_current = successor_of(s.id).is_none();
        let b = documents.get(&s.id).copied().unwrap_or(0);
        if s.active && SCOREABLE_KINDS.contains(&s.kind.as_str()) && is_current && b > 0 {
            let a = citations.get(&s.id).copied().unwrap_or(0);
            let c = cited_docs.get(&s.id).map_or(0, HashSet::len);
            scored.push((s.id, a, b, c));
        }
    }
    scored.sort();

    let mut metrics_csv = String::from("source_id,title,year,citescore,citations,documents,percent_cited\n");
    for &(id, a, b, c) in &scored {
        metrics_csv.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            id,
            csv_field(&find(id).title),
            year,
            two_places(a, b),
            a,
            b,
            whole_percent(c as u64, b)
        ));
    }

    // Score keys compare as integers of hundredths.
    let key = |a: u64, b: u64| -> u128 {
        let t = u128::from(a) * 1000 / u128::from(b);
        t / 10 + u128::from(t % 10 >= 5)
    };
    let mut rows: Vec<(u64, u64, String)> = Vec::new();
    for &(id, a, b, _) in &scored {
        let mine = key(a, b);
        for &code in &find(id).codes {
            let peers: Vec<u128> = scored
                .iter()
                .filter(|(other, ..)| find(*other).codes.contains(&code))
                .map(|&(_, oa, ob, _)| key(oa, ob))
                .collect();
            let n = peers.len() as u64;
            let lower = peers.iter().filter(|&&k| k < mine).count() as u64;
            let same = peers.iter().filter(|&&k| k == mine).count() as u64;
            let higher = peers.iter().filter(|&&k| k > mine).count() as u64;
            let pct = (2 * lower + same) * 50 / n;
            let q = if pct >= 75 {
                1
            } else if pct >= 50 {
                2
            } else if pct >= 25 {
                3
            } else {
                4
            };
            rows.push((id, code, format!("{id},{code},{},{n},{pct},{q}\n", higher + 1)));
        }
    }
    rows.sort();
    let mut standings_csv = String::from("source_id,asjc_code,rank,n_in_category,percentile,quartile\n");
    for (_, _, line) in rows {
        standings_csv.push_str(&line);
    }

    Ok(OracleOutput { metrics_csv, standings_csv })
}
