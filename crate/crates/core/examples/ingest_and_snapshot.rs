//! Load the three record files and look at the index as of a few dates.
//!
//! `cargo run --example ingest_and_snapshot [DIR]` reads `sources.jsonl`,
//! `publications.jsonl` and `links.jsonl` from DIR, or from a freshly
//! generated corpus when DIR is omitted.

use std::path::PathBuf;

use chrono::NaiveDate;
use citescore::corpus::{self, CorpusConfig, CorpusFiles};
use citescore::index::ingest_files;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let _tmp;
    let dir = match std::env::args().nth(1) {
        Some(d) => PathBuf::from(d),
        None => {
            _tmp = tempfile::tempdir()?;
            let c = corpus::generate(&CorpusConfig { n_journals: 10, ..CorpusConfig::default() })?;
            c.to_files().write_dir(_tmp.path())?;
            _tmp.path().to_path_buf()
        }
    };

    let got = ingest_files(
        dir.join(CorpusFiles::SOURCES),
        dir.join(CorpusFiles::PUBLICATIONS),
        dir.join(CorpusFiles::LINKS),
    )?;
    let (s, p, l) = got.report.accepted();
    println!("accepted {s} sources, {p} publications, {l} links; {} rejected", got.report.total_rejected());
    for w in got.report.warnings() {
        eprintln!("warning: {w}");
    }

    for cutoff in ["2014-05-31", "2017-05-31", "2018-04-30", "2020-12-31"] {
        let snap = got.index.snapshot(NaiveDate::parse_from_str(cutoff, "%Y-%m-%d")?);
        println!("{cutoff}: {:>6} publications {:>7} links", snap.publication_count(), snap.link_count());
    }
    Ok(())
}
