//! Seeded synthetic corpora: journals with subject categories and optional
//! renames, publications with a short/long indexing-lag mixture, and
//! citation links with journal-level preferential attachment.
//!
//! The same seed and configuration always produce byte-identical files.

use std::collections::HashSet;
use std::fs;
use std::path::Path;

use chrono::{Days, NaiveDate};
use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{LogNormal, Poisson};
use serde::{Deserialize, Serialize};

use crate::index::{
    AsjcCode, BuildError, CitationIndex, CitationLink, DocType, PubId, PublicationRecord, SourceId,
    SourceRecord, SourceType,
};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("invalid corpus config: {0}")]
pub struct ConfigError(String);

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PubsPerYear {
    pub min: u32,
    pub max: u32,
}

/// Indexing delay between publication and load date.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct LagModel {
    pub short_days: [u32; 2],
    pub long_days: [u32; 2],
    /// Probability that a publication takes the long lag.
    pub long_weight: f64,
}

impl Default for LagModel {
    fn default() -> Self {
        LagModel { short_days: [1, 14], long_days: [30, 300], long_weight: 0.05 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct CorpusConfig {
    pub seed: u64,
    pub n_journals: usize,
    pub first_year: i32,
    pub last_year: i32,
    pub pubs_per_journal_per_year: PubsPerYear,
    /// Mean outgoing references per non-AIP publication (Poisson).
    pub citation_rate: f64,
    pub lag_model: LagModel,
    /// Probability that a publication of the last year is an article-in-press.
    pub aip_fraction: f64,
    /// Per-journal probability of one title change inside the span.
    pub rename_probability: f64,
    pub n_categories: u32,
    pub inactive_fraction: f64,
    /// Share of sources typed as stand-alone books or proceedings.
    pub non_serial_fraction: f64,
    /// Share of journals that start publishing after `first_year`.
    pub late_start_fraction: f64,
}

impl Default for CorpusConfig {
    fn default() -> Self {
        CorpusConfig {
            seed: 0,
            n_journals: 50,
            first_year: 2010,
            last_year: 2019,
            pubs_per_journal_per_year: PubsPerYear { min: 2, max: 12 },
            citation_rate: 4.0,
            lag_model: LagModel::default(),
            aip_fraction: 0.1,
            rename_probability: 0.1,
            n_categories: 6,
            inactive_fraction: 0.03,
            non_serial_fraction: 0.05,
            late_start_fraction: 0.15,
        }
    }
}

impl CorpusConfig {
    pub fn validate(&self) -> Result<(), ConfigError> {
        let err = |m: String| Err(ConfigError(m));
        for (name, p) in [
            ("lag_model.long_weight", self.lag_model.long_weight),
            ("aip_fraction", self.aip_fraction),
            ("rename_probability", self.rename_probability),
            ("inactive_fraction", self.inactive_fraction),
            ("non_serial_fraction", self.non_serial_fraction),
            ("late_start_fraction", self.late_start_fraction),
        ] {
            if !(0.0..=1.0).contains(&p) {
                return err(format!("{name} = {p} is not a probability"));
            }
        }
        if self.first_year > self.last_year {
            return err(format!("year span {}..{} is empty", self.first_year, self.last_year));
        }
        if !(1..=9000).contains(&self.first_year) || !(1..=9000).contains(&self.last_year) {
            return err("years must lie within 1..=9000".into());
        }
        if self.n_journals == 0 || self.n_journals > 100_000 {
            return err(format!("n_journals = {} outside 1..=100000", self.n_journals));
        }
        let PubsPerYear { min, max } = self.pubs_per_journal_per_year;
        if min > max || max > 10_000 {
            return err(format!("pubs_per_journal_per_year {min}..{max} is not a valid range"));
        }
        if !self.citation_rate.is_finite() || !(0.0..=1000.0).contains(&self.citation_rate) {
            return err(format!("citation_rate = {} outside 0..=1000", self.citation_rate));
        }
        for (name, [lo, hi]) in [("short_days", self.lag_model.short_days), ("long_days", self.lag_model.long_days)] {
            if lo > hi || hi > 3650 {
                return err(format!("lag_model.{name} {lo}..{hi} is not a valid range"));
            }
        }
        if !(1..=9000).contains(&self.n_categories) {
            return err(format!("n_categories = {} outside 1..=9000", self.n_categories));
        }
        Ok(())
    }
}

/// Generated records, in file order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Corpus {
    pub sources: Vec<SourceRecord>,
    pub publications: Vec<PublicationRecord>,
    pub links: Vec<CitationLink>,
}

/// The three line-delimited files of a corpus.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CorpusFiles {
    pub sources: String,
    pub publications: String,
    pub links: String,
}

impl CorpusFiles {
    pub const SOURCES: &'static str = "sources.jsonl";
    pub const PUBLICATIONS: &'static str = "publications.jsonl";
    pub const LINKS: &'static str = "links.jsonl";

    pub fn write_dir(&self, dir: &Path) -> std::io::Result<()> {
        fs::create_dir_all(dir)?;
        fs::write(dir.join(Self::SOURCES), &self.sources)?;
        fs::write(dir.join(Self::PUBLICATIONS), &self.publications)?;
        fs::write(dir.join(Self::LINKS), &self.links)
    }
}

fn jsonl<T: Serialize>(records: &[T]) -> String {
    let mut out = String::new();
    for r in records {
        out.push_str(&serde_json::to_string(r).expect("records serialize"));
        out.push('\n');
    }
    out
}

impl Corpus {
    pub fn to_files(&self) -> CorpusFiles {
        CorpusFiles {
            sources: jsonl(&self.sources),
            publications: jsonl(&self.publications),
            links: jsonl(&self.links),
        }
    }

    pub fn index(&self) -> Result<CitationIndex, BuildError> {
        CitationIndex::from_records(self.sources.clone(), self.publications.clone(), self.links.clone())
    }
}

const SERIAL_TYPES: [(SourceType, u32); 4] = [
    (SourceType::Journal, 85),
    (SourceType::BookSeries, 5),
    (SourceType::TradeJournal, 5),
    (SourceType::ConferenceProceedingsSerial, 5),
];

const DOC_TYPES: [(DocType, u32); 10] = [
    (DocType::Article, 70),
    (DocType::Review, 10),
    (DocType::ConferencePaper, 8),
    (DocType::Editorial, 3),
    (DocType::Letter, 3),
    (DocType::Note, 2),
    (DocType::ShortSurvey, 1),
    (DocType::Erratum, 1),
    (DocType::BookChapter, 1),
    (DocType::Other, 1),
];

const TITLE_STEMS: [&str; 8] = [
    "Journal of Applied Studies",
    "Annals of Theory, Series",
    "Review Letters in",
    "Transactions on",
    "\"Frontiers\" in",
    "Proceedings of the Symposium on",
    "Bulletin of",
    "Trade Notes for",
];

struct Journal {
    weight: f64,
    start_year: i32,
    /// (first year under this title, source id), oldest first.
    titles: Vec<(i32, SourceId)>,
}

impl Journal {
    fn source_for(&self, year: i32) -> SourceId {
        self.titles.iter().rev().find(|(from, _)| *from <= year).unwrap_or(&self.titles[0]).1
    }
}

fn pick<T: Copy>(rng: &mut ChaCha8Rng, table: &[(T, u32)]) -> T {
    let dist = WeightedIndex::new(table.iter().map(|(_, w)| *w)).expect("static weights");
    table[dist.sample(rng)].0
}

fn random_date_in(rng: &mut ChaCha8Rng, year: i32) -> NaiveDate {
    let start = NaiveDate::from_ymd_opt(year, 1, 1).expect("year in range");
    let end = NaiveDate::from_ymd_opt(year, 12, 31).expect("year in range");
    let span = (end - start).num_days() as u64;
    start + Days::new(rng.random_range(0..=span))
}

pub fn generate(config: &CorpusConfig) -> Result<Corpus, ConfigError> {
    config.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let weight_dist = LogNormal::new(0.0, 1.0).expect("static parameters");

    let mut sources = Vec::new();
    let mut journals = Vec::with_capacity(config.n_journals);
    for j in 0..config.n_journals {
        let current = SourceId(100_000 + 10 * j as u64);
        let source_type = if rng.random_bool(config.non_serial_fraction) {
            if rng.random_bool(0.5) { SourceType::StandaloneBook } else { SourceType::StandaloneProceedings }
        } else {
            pick(&mut rng, &SERIAL_TYPES)
        };
        let is_actively_indexed = !rng.random_bool(config.inactive_fraction);
        let n_codes = rng.random_range(1..=3u32).min(config.n_categories);
        let mut codes = std::collections::BTreeSet::new();
        while codes.len() < n_codes as usize {
            let code = 1000 + rng.random_range(0..config.n_categories);
            codes.insert(AsjcCode::new(u64::from(code)).expect("code within 1000..=9999"));
        }
        let start_year = if config.first_year < config.last_year && rng.random_bool(config.late_start_fraction) {
            rng.random_range(config.first_year + 1..=config.last_year)
        } else {
            config.first_year
        };
        let stem = TITLE_STEMS[rng.random_range(0..TITLE_STEMS.len())];
        let title = format!("{stem} Topic {j}");

        let rename_year = (start_year < config.last_year && rng.random_bool(config.rename_probability))
            .then(|| rng.random_range(start_year + 1..=config.last_year));
        let mut titles = Vec::new();
        let predecessor = rename_year.map(|_| SourceId(current.0 + 1));
        if let Some(pred) = predecessor {
            titles.push((start_year, pred));
            sources.push(SourceRecord {
                source_id: pred,
                title: format!("{title} (former title)"),
                source_type,
                asjc_codes: codes.clone(),
                is_actively_indexed: false,
                predecessor_source_id: None,
            });
        }
        titles.push((rename_year.unwrap_or(start_year), current));
        sources.push(SourceRecord {
            source_id: current,
            title,
            source_type,
            asjc_codes: codes,
            is_actively_indexed,
            predecessor_source_id: predecessor,
        });
        journals.push(Journal { weight: weight_dist.sample(&mut rng), start_year, titles });
    }

    let years: Vec<i32> = (config.first_year..=config.last_year).collect();
    let year_slot = |y: i32| (y - config.first_year) as usize;
    // by_year[y][j] = positions in `publications` of journal j's year-y output
    let mut by_year: Vec<Vec<Vec<usize>>> = vec![vec![Vec::new(); journals.len()]; years.len()];
    let mut publications = Vec::new();
    let PubsPerYear { min, max } = config.pubs_per_journal_per_year;
    let LagModel { short_days, long_days, long_weight } = config.lag_model;
    for (j, journal) in journals.iter().enumerate() {
        for &year in years.iter().filter(|&&y| y >= journal.start_year) {
            let source_id = journal.source_for(year);
            for n in 0..rng.random_range(min..=max) {
                let published = random_date_in(&mut rng, year);
                let [lo, hi] = if rng.random_bool(long_weight) { long_days } else { short_days };
                let load_date = published + Days::new(u64::from(rng.random_range(lo..=hi)));
                let is_article_in_press = year == config.last_year && rng.random_bool(config.aip_fraction);
                by_year[year_slot(year)][j].push(publications.len());
                publications.push(PublicationRecord {
                    pub_id: PubId(format!("{source_id}-{year}-{n:04}")),
                    source_id,
                    sort_year: year,
                    load_date,
                    doc_type: pick(&mut rng, &DOC_TYPES),
                    is_article_in_press,
                });
            }
        }
    }

    // Per year, a weighted choice over journals that published that year.
    let year_dists: Vec<Option<(Vec<usize>, WeightedIndex<f64>)>> = by_year
        .iter()
        .map(|per_journal| {
            let active: Vec<usize> = (0..journals.len()).filter(|&j| !per_journal[j].is_empty()).collect();
            let weights: Vec<f64> = active.iter().map(|&j| journals[j].weight).collect();
            WeightedIndex::new(weights).ok().map(|d| (active, d))
        })
        .collect();

    let mut links = Vec::new();
    let refs = (config.citation_rate > 0.0).then(|| Poisson::new(config.citation_rate).expect("positive rate"));
    for (citing, p) in publications.iter().enumerate() {
        let Some(refs) = &refs else { break };
        if p.is_article_in_press {
            continue;
        }
        let n_refs = refs.sample(&mut rng) as usize;
        let lo = (p.sort_year - 4).max(config.first_year);
        let mut seen = HashSet::new();
        for _ in 0..n_refs {
            let ty = rng.random_range(lo..=p.sort_year);
            let Some((active, dist)) = &year_dists[year_slot(ty)] else { continue };
            let j = active[dist.sample(&mut rng)];
            let pool = &by_year[year_slot(ty)][j];
            let cited = pool[rng.random_range(0..pool.len())];
            if cited != citing && seen.insert(cited) {
                links.push(CitationLink {
                    citing_pub_id: p.pub_id.clone(),
                    cited_pub_id: publications[cited].pub_id.clone(),
                });
            }
        }
    }

    Ok(Corpus { sources, publications, links })
}
