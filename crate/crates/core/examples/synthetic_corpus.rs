//! Generate a seeded corpus from a TOML configuration and summarise it.

use citescore::corpus::{self, CorpusConfig};

const CONFIG: &str = r#"
seed = 42
n_journals = 200
first_year = 2012
last_year = 2019
citation_rate = 5.0
aip_fraction = 0.08
rename_probability = 0.1

[pubs_per_journal_per_year]
min = 4
max = 20
"#;

fn main() {
    let config: CorpusConfig = toml::from_str(CONFIG).unwrap();
    let c = corpus::generate(&config).unwrap();
    let renamed = c.sources.iter().filter(|s| s.predecessor_source_id.is_some()).count();
    let aip = c.publications.iter().filter(|p| p.is_article_in_press).count();
    println!("{} sources ({renamed} renamed), {} publications ({aip} in press), {} links",
        c.sources.len(), c.publications.len(), c.links.len());

    let again = corpus::generate(&config).unwrap();
    println!("same seed, same files: {}", c.to_files() == again.to_files());

    if let Some(dir) = std::env::args().nth(1) {
        c.to_files().write_dir(std::path::Path::new(&dir)).unwrap();
        println!("written to {dir}");
    }
}
