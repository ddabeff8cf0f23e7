//! Monthly CiteScore Tracker for one title, converging on the annual value.

use chrono::NaiveDate;
use citescore::corpus::{self, CorpusConfig};
use citescore::metrics::compute_annual;
use citescore::tracker::{convergence_report, monthly_schedule, tracker_series, YearMonth};

fn main() {
    let corpus = corpus::generate(&CorpusConfig { seed: 5, n_journals: 25, ..CorpusConfig::default() }).unwrap();
    let index = corpus.index().unwrap();
    let schedule = monthly_schedule(YearMonth::new(2018, 1).unwrap(), YearMonth::new(2019, 5).unwrap(), None).unwrap();
    let cutoff = NaiveDate::from_ymd_opt(2019, 5, 31).unwrap();

    let annual = compute_annual(&index.snapshot(cutoff), 2018);
    let row = &annual.metrics[0];
    let series = tracker_series(&index, row.source_id, 2018, &schedule).unwrap();
    println!("{} ({}), annual 2018 CiteScore {}", row.title, row.source_id.0, row.citescore);
    for p in &series.points {
        let v = p.value.map_or("-".to_string(), |v| v.to_string());
        println!("  {}  {:>4} / {:<3} {v}", p.as_of, p.citations, p.documents);
    }

    println!("\nrank agreement with the final values:");
    for c in convergence_report(&index, 2018, &schedule, cutoff).unwrap() {
        println!("  {}  {:>3} titles  rho {}", c.as_of, c.sources, c.spearman.map_or("-".into(), |r| format!("{r:.3}")));
    }
}
