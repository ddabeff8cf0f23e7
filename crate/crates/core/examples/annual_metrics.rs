//! CiteScore, citations, documents and percent cited for one year.

use chrono::NaiveDate;
use citescore::corpus::{self, CorpusConfig};
use citescore::metrics::compute_annual;
use citescore::output;

fn main() {
    let corpus = corpus::generate(&CorpusConfig { seed: 3, n_journals: 8, ..CorpusConfig::default() }).unwrap();
    let index = corpus.index().unwrap();

    let snap = index.snapshot(NaiveDate::from_ymd_opt(2018, 4, 30).unwrap());
    let annual = compute_annual(&snap, 2017);
    print!("{}", output::metrics_csv(&annual.metrics));

    let best = annual.metrics.iter().max_by_key(|r| r.citescore).unwrap();
    println!("\nhighest: {} with {} ({} / {})", best.title, best.citescore, best.citations, best.documents);
}
