#![allow(dead_code)]

use std::path::Path;
use std::process::{Command, Output};

use chrono::NaiveDate;
use citescore::corpus::{self, Corpus, CorpusConfig};
use citescore::index::{ingest, CitationIndex};
use citescore::metrics::compute_annual;
use citescore::output;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn date(s: &str) -> NaiveDate {
    NaiveDate::parse_from_str(s, "%Y-%m-%d").unwrap()
}

pub struct RawFiles {
    pub sources: Vec<u8>,
    pub pubs: Vec<u8>,
    pub links: Vec<u8>,
}

impl RawFiles {
    pub fn from_corpus(c: &Corpus) -> Self {
        let f = c.to_files();
        RawFiles { sources: f.sources.into_bytes(), pubs: f.publications.into_bytes(), links: f.links.into_bytes() }
    }

    pub fn index(&self) -> CitationIndex {
        ingest(&self.sources[..], &self.pubs[..], &self.links[..]).expect("ingest").index
    }

    pub fn write(&self, dir: &Path) {
        std::fs::write(dir.join("sources.jsonl"), &self.sources).unwrap();
        std::fs::write(dir.join("publications.jsonl"), &self.pubs).unwrap();
        std::fs::write(dir.join("links.jsonl"), &self.links).unwrap();
    }
}

/// A corpus configuration drawn from `seed`, covering small and mid-sized
/// corpora with every optional feature switched on at varying rates.
pub fn random_config(seed: u64) -> CorpusConfig {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
    let first_year = rng.random_range(2008..=2013);
    let min = rng.random_range(1..=6);
    CorpusConfig {
        seed,
        n_journals: rng.random_range(2..=120),
        first_year,
        last_year: first_year + rng.random_range(3..=8),
        pubs_per_journal_per_year: corpus::PubsPerYear { min, max: min + rng.random_range(0..=10) },
        citation_rate: rng.random_range(0.2..8.0),
        aip_fraction: rng.random_range(0.0..0.3),
        rename_probability: rng.random_range(0.0..0.4),
        n_categories: rng.random_range(1..=10),
        inactive_fraction: rng.random_range(0.0..0.1),
        non_serial_fraction: rng.random_range(0.0..0.15),
        late_start_fraction: rng.random_range(0.0..0.3),
        ..CorpusConfig::default()
    }
}

/// Appends records every loader must reject or collapse: garbage, a
/// dangling link, a self-citation and a repeated pair.
pub fn add_noise(files: &mut RawFiles) {
    files.pubs.extend_from_slice(b"{not json\n\n{\"pub_id\":\"x\"}\n");
    let first_link = files.links.split(|&b| b == b'\n').next().unwrap_or_default().to_vec();
    files.links.extend_from_slice(b"{\"citing_pub_id\":\"nope\",\"cited_pub_id\":\"nope-2\"}\n");
    if !first_link.is_empty() {
        files.links.extend_from_slice(&first_link);
        files.links.push(b'\n');
    }
    files.links.extend_from_slice(b"[1,2,3]\n");
}

pub fn engine_csv(index: &CitationIndex, year: i32, cutoff: NaiveDate) -> (String, String) {
    output::annual_csv(&compute_annual(&index.snapshot(cutoff), year))
}

pub fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_citescore"))
}

pub fn input_args(dir: &Path) -> Vec<String> {
    let p = |n: &str| dir.join(n).display().to_string();
    vec![
        "--sources".into(),
        p("sources.jsonl"),
        "--pubs".into(),
        p("publications.jsonl"),
        "--links".into(),
        p("links.jsonl"),
    ]
}

pub fn run_bin(args: &[String]) -> Output {
    bin().args(args).output().expect("run citescore")
}

pub fn manifest(dir: &Path) -> serde_json::Value {
    serde_json::from_str(&std::fs::read_to_string(dir.join("manifest.json")).unwrap()).unwrap()
}

pub fn small_corpus(seed: u64) -> Corpus {
    corpus::generate(&CorpusConfig { seed, n_journals: 12, ..CorpusConfig::default() }).unwrap()
}
