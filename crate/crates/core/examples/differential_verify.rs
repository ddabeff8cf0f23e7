//! Engine against the brute-force oracle over a batch of seeds.

use chrono::NaiveDate;
use citescore::corpus::{self, CorpusConfig};
use citescore::metrics::compute_annual;
use citescore::oracle::oracle_metrics;
use citescore::{output, verify};

fn main() {
    let cutoff = NaiveDate::from_ymd_opt(2018, 4, 30).unwrap();
    let mut failures = 0;
    for seed in 0..20 {
        let c = corpus::generate(&CorpusConfig { seed, n_journals: 30, ..Default::default() }).unwrap();
        let files = c.to_files();
        let (metrics, standings) = output::annual_csv(&compute_annual(&c.index().unwrap().snapshot(cutoff), 2017));
        let oracle = oracle_metrics(
            files.sources.as_bytes(),
            files.publications.as_bytes(),
            files.links.as_bytes(),
            2017,
            "2018-04-30",
        )
        .unwrap();

        let mut diff = verify::diff_rows("metrics.csv", &metrics, &oracle.metrics_csv);
        diff.extend(verify::diff_rows("standings.csv", &standings, &oracle.standings_csv));
        if !diff.is_empty() {
            failures += 1;
            print!("seed {seed}\n{}", verify::report(&diff));
        }
    }
    println!("{failures} of 20 seeds differ");

    // A tampered row is caught.
    let tampered = verify::diff_rows("metrics.csv", "h\n1,a\n2,b\n", "h\n1,a\n2,c\n");
    print!("{}", verify::report(&tampered));
}
