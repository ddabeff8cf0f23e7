//! A journal that changed its title keeps one score: publications of all
//! earlier titles count under the current one.

use std::collections::BTreeSet;

use chrono::NaiveDate;
use citescore::index::*;
use citescore::metrics::compute_annual;

fn source(id: u64, title: &str, pred: Option<u64>) -> SourceRecord {
    SourceRecord {
        source_id: SourceId(id),
        title: title.to_string(),
        source_type: SourceType::Journal,
        asjc_codes: BTreeSet::from([AsjcCode::new(2600).unwrap()]),
        is_actively_indexed: true,
        predecessor_source_id: pred.map(SourceId),
    }
}

fn publication(id: &str, src: u64, year: i32) -> PublicationRecord {
    PublicationRecord {
        pub_id: PubId(id.to_string()),
        source_id: SourceId(src),
        sort_year: year,
        load_date: NaiveDate::from_ymd_opt(year, 3, 1).unwrap(),
        doc_type: DocType::Article,
        is_article_in_press: false,
    }
}

fn main() {
    let sources = vec![
        source(1, "Annals of Old Topics", None),
        source(2, "Annals of Topics", Some(1)),
        source(3, "Topics Letters", Some(2)),
    ];
    let pubs = vec![
        publication("a14", 1, 2014),
        publication("b15", 2, 2015),
        publication("c16", 3, 2016),
        publication("c17", 3, 2017),
        publication("c17b", 3, 2017),
    ];
    let links = [("c17", "a14"), ("c17", "b15"), ("c17b", "b15"), ("c17b", "c16")]
        .map(|(a, b)| CitationLink { citing_pub_id: PubId(a.into()), cited_pub_id: PubId(b.into()) });
    let index = CitationIndex::from_records(sources, pubs, links).unwrap();

    println!("chain of 3: {:?}", index.resolve_title_chain(SourceId(3)).unwrap());
    println!("chain of 2: {:?}", index.resolve_title_chain(SourceId(2)).unwrap());

    let annual = compute_annual(&index.snapshot(NaiveDate::from_ymd_opt(2018, 4, 30).unwrap()), 2017);
    for r in &annual.metrics {
        println!("{} {:?}: {} = {}/{}", r.source_id.0, r.title, r.citescore, r.citations, r.documents);
    }
}
