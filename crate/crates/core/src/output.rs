//! CSV output files. Every file has a header row, `\n` line endings, and
//! fields quoted only when they contain a comma, quote or line break.

use crate::metrics::{AnnualMetrics, CategoryStanding, MetricsRow};
use crate::tracker::TrackerRow;

pub const METRICS_HEADER: [&str; 7] =
    ["source_id", "title", "year", "citescore", "citations", "documents", "percent_cited"];
pub const STANDINGS_HEADER: [&str; 6] =
    ["source_id", "asjc_code", "rank", "n_in_category", "percentile", "quartile"];
pub const TRACKER_HEADER: [&str; 6] =
    ["source_id", "tracker_year", "as_of_date", "citations", "documents", "tracker_value"];

fn write_csv<I, R>(header: &[&str], rows: I) -> String
where
    I: IntoIterator<Item = R>,
    R: IntoIterator<Item = String>,
{
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .quote_style(csv::QuoteStyle::Necessary)
        .from_writer(Vec::new());
    w.write_record(header).expect("in-memory csv write");
    for row in rows {
        w.write_record(row.into_iter().collect::<Vec<_>>()).expect("in-memory csv write");
    }
    String::from_utf8(w.into_inner().expect("in-memory csv flush")).expect("csv of utf-8 fields")
}

pub fn metrics_csv(rows: &[MetricsRow]) -> String {
    write_csv(
        &METRICS_HEADER,
        rows.iter().map(|r| {
            [
                r.source_id.to_string(),
                r.title.clone(),
                r.citescore_year.to_string(),
                r.citescore.to_string(),
                r.citations.to_string(),
                r.documents.to_string(),
                r.percent_cited.to_string(),
            ]
        }),
    )
}

pub fn standings_csv(rows: &[CategoryStanding]) -> String {
    write_csv(
        &STANDINGS_HEADER,
        rows.iter().map(|s| {
            [
                s.source_id.to_string(),
                s.asjc_code.to_string(),
                s.rank.to_string(),
                s.n_in_category.to_string(),
                s.percentile.to_string(),
                s.quartile.to_string(),
            ]
        }),
    )
}

pub fn tracker_csv(rows: &[TrackerRow]) -> String {
    write_csv(
        &TRACKER_HEADER,
        rows.iter().map(|r| {
            [
                r.source_id.to_string(),
                r.tracker_year.to_string(),
                r.as_of.format("%Y-%m-%d").to_string(),
                r.citations.to_string(),
                r.documents.to_string(),
                r.value.to_string(),
            ]
        }),
    )
}

/// Both annual files for one computation.
pub fn annual_csv(annual: &AnnualMetrics) -> (String, String) {
    (metrics_csv(&annual.metrics), standings_csv(&annual.standings))
}
