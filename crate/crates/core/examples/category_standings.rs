//! Rank, percentile and quartile within subject categories, first on a
//! hand-made score list and then on a generated corpus.

use chrono::NaiveDate;
use citescore::corpus::{self, CorpusConfig};
use citescore::metrics::{compute_annual, percentile, quartile, rank_in_category};
use citescore::score::CiteScore;

fn main() {
    let scores: Vec<CiteScore> = [512, 340, 340, 275, 90, 0].map(CiteScore::from_hundredths).to_vec();
    let ranks = rank_in_category(&scores);
    for (score, (rank, n)) in scores.iter().zip(&ranks) {
        let p = percentile(&scores, score).unwrap();
        println!("{score:>6}  rank {rank}/{n}  percentile {p:>2}  Q{}", quartile(p).unwrap());
    }

    let corpus = corpus::generate(&CorpusConfig { seed: 11, n_journals: 40, n_categories: 3, ..Default::default() })
        .unwrap();
    let index = corpus.index().unwrap();
    let annual = compute_annual(&index.snapshot(NaiveDate::from_ymd_opt(2017, 5, 31).unwrap()), 2016);
    let q1 = annual.standings.iter().filter(|s| s.quartile.number() == 1).count();
    println!("\n2016: {} standings across {} titles, {q1} in Q1", annual.standings.len(), annual.metrics.len());
}
