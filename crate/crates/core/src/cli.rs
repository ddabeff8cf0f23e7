//! `citescore` command line.
//!
//! Exit codes: 0 ok, 1 data error, 2 usage error, 3 verification mismatch.
//! Data files go to `--out`; diagnostics go to stderr and never into data
//! outputs.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use chrono::NaiveDate;
use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::corpus::{self, CorpusConfig, CorpusFiles};
use crate::cutoffs::{CutoffOrigin, CutoffTable};
use crate::index::{ingest, parse_load_date, Ingested};
use crate::manifest::RunManifest;
use crate::metrics::compute_annual;
use crate::oracle::oracle_metrics;
use crate::output;
use crate::tracker::{self, YearMonth};
use crate::verify;

pub const METRICS_FILE: &str = "metrics.csv";
pub const STANDINGS_FILE: &str = "standings.csv";
pub const TRACKER_FILE: &str = "tracker.csv";
pub const CONVERGENCE_FILE: &str = "convergence.csv";
pub const ORACLE_METRICS_FILE: &str = "oracle_metrics.csv";
pub const ORACLE_STANDINGS_FILE: &str = "oracle_standings.csv";
pub const VERIFY_REPORT_FILE: &str = "verify_report.txt";

#[derive(Debug, Parser)]
#[command(name = "citescore", version, about = "CiteScore metrics over a load-dated citation index")]
struct Cli {
    /// Suppress warnings on stderr.
    #[arg(long, global = true)]
    quiet: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Annual metrics and category standings for one CiteScore year.
    Compute(ComputeArgs),
    /// Monthly CiteScore Tracker series for one tracker year.
    Tracker(TrackerArgs),
    /// Write a seeded synthetic corpus.
    Generate(GenerateArgs),
    /// Run the engine and the brute-force oracle and compare their outputs.
    Verify(VerifyArgs),
    /// Print record counts of a snapshot as JSON.
    SnapshotInfo(SnapshotInfoArgs),
}

#[derive(Debug, Args)]
struct InputArgs {
    #[arg(long)]
    sources: PathBuf,
    #[arg(long)]
    pubs: PathBuf,
    #[arg(long)]
    links: PathBuf,
}

#[derive(Debug, Args)]
struct CutoffArgs {
    /// Snapshot cutoff (inclusive); defaults to the cutoff table entry.
    #[arg(long, value_parser = parse_date)]
    cutoff: Option<NaiveDate>,
    /// Alternative year -> cutoff table (TOML).
    #[arg(long)]
    cutoff_table: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Metrics,
    Standings,
    Both,
}

#[derive(Debug, Args)]
struct ComputeArgs {
    #[command(flatten)]
    input: InputArgs,
    #[arg(long)]
    year: i32,
    #[command(flatten)]
    cutoff: CutoffArgs,
    #[arg(long)]
    out: PathBuf,
    #[arg(long, value_enum, default_value = "both")]
    format: Format,
}

#[derive(Debug, Args)]
struct TrackerArgs {
    #[command(flatten)]
    input: InputArgs,
    #[arg(long)]
    year: i32,
    /// First month, YYYY-MM.
    #[arg(long)]
    from: String,
    /// Last month, YYYY-MM.
    #[arg(long)]
    to: String,
    /// Day of month for each build; defaults to the last calendar day.
    #[arg(long)]
    day: Option<u32>,
    #[arg(long)]
    out: PathBuf,
    /// Also write monthly-vs-final rank correlations.
    #[arg(long)]
    report: bool,
    #[arg(long)]
    cutoff_table: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct GenerateArgs {
    /// Corpus configuration (TOML); individual flags override it.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    journals: Option<usize>,
    #[arg(long)]
    first_year: Option<i32>,
    #[arg(long)]
    last_year: Option<i32>,
    #[arg(long)]
    pubs_min: Option<u32>,
    #[arg(long)]
    pubs_max: Option<u32>,
    #[arg(long)]
    citation_rate: Option<f64>,
    #[arg(long)]
    aip_fraction: Option<f64>,
    #[arg(long)]
    rename_probability: Option<f64>,
    #[arg(long)]
    categories: Option<u32>,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    #[command(flatten)]
    input: InputArgs,
    #[arg(long)]
    year: i32,
    #[command(flatten)]
    cutoff: CutoffArgs,
    #[arg(long)]
    out: PathBuf,
    /// Corrupt this 1-based data row of the engine's metrics output before
    /// comparing (harness self-test).
    #[arg(long, hide = true)]
    inject_fault: Option<usize>,
}

#[derive(Debug, Args)]
struct SnapshotInfoArgs {
    #[command(flatten)]
    input: InputArgs,
    /// CiteScore year whose default cutoff to use when --cutoff is absent.
    #[arg(long, required_unless_present = "cutoff")]
    year: Option<i32>,
    #[command(flatten)]
    cutoff: CutoffArgs,
}

fn parse_date(s: &str) -> Result<NaiveDate, String> {
    parse_load_date(s).ok_or_else(|| format!("{s:?} is not a valid YYYY-MM-DD date"))
}

#[derive(Debug)]
enum Failure {
    Data(String),
    Usage(String),
    Mismatch,
}

impl Failure {
    fn code(&self) -> i32 {
        match self {
            Failure::Data(_) => 1,
            Failure::Usage(_) => 2,
            Failure::Mismatch => 3,
        }
    }
}

fn data<E: std::fmt::Display>(e: E) -> Failure {
    Failure::Data(e.to_string())
}

struct Ctx<'a> {
    quiet: bool,
    stdout: &'a mut dyn Write,
    stderr: &'a mut dyn Write,
}

impl Ctx<'_> {
    fn warn(&mut self, msg: &str) {
        if !self.quiet {
            let _ = writeln!(self.stderr, "warning: {msg}");
        }
    }
}

/// Parses `args` (program name first) and runs the command, returning the
/// process exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(stdout, "{e}");
                    0
                }
                _ => {
                    let _ = write!(stderr, "{}", e.render());
                    2
                }
            };
        }
    };
    let mut ctx = Ctx { quiet: cli.quiet, stdout, stderr };
    let result = match cli.command {
        Command::Compute(a) => cmd_compute(&mut ctx, a),
        Command::Tracker(a) => cmd_tracker(&mut ctx, a),
        Command::Generate(a) => cmd_generate(&mut ctx, a),
        Command::Verify(a) => cmd_verify(&mut ctx, a),
        Command::SnapshotInfo(a) => cmd_snapshot_info(&mut ctx, a),
    };
    match result {
        Ok(()) => 0,
        Err(f) => {
            match &f {
                Failure::Data(m) => {
                    let _ = writeln!(ctx.stderr, "error: {m}");
                }
                Failure::Usage(m) => {
                    let _ = writeln!(ctx.stderr, "error: {m}\n\nFor more information, try '--help'.");
                }
                Failure::Mismatch => {
                    let _ = writeln!(ctx.stderr, "error: engine and oracle outputs differ");
                }
            }
            f.code()
        }
    }
}

struct Loaded {
    sources: Vec<u8>,
    pubs: Vec<u8>,
    links: Vec<u8>,
}

fn read(path: &Path) -> Result<Vec<u8>, Failure> {
    fs::read(path).map_err(|e| Failure::Data(format!("{}: {e}", path.display())))
}

fn load(input: &InputArgs, manifest: &mut RunManifest) -> Result<Loaded, Failure> {
    let loaded = Loaded { sources: read(&input.sources)?, pubs: read(&input.pubs)?, links: read(&input.links)? };
    manifest.input("sources", &input.sources, &loaded.sources);
    manifest.input("publications", &input.pubs, &loaded.pubs);
    manifest.input("links", &input.links, &loaded.links);
    Ok(loaded)
}

fn build_index(ctx: &mut Ctx<'_>, loaded: &Loaded, manifest: &mut RunManifest) -> Result<Ingested, Failure> {
    let got = ingest(&loaded.sources[..], &loaded.pubs[..], &loaded.links[..]).map_err(data)?;
    for w in got.report.warnings() {
        ctx.warn(&w);
    }
    let (s, p, l) = got.report.accepted();
    manifest.set("accepted_sources", s);
    manifest.set("accepted_publications", p);
    manifest.set("accepted_links", l);
    manifest.set("rejected_records", got.report.total_rejected());
    Ok(got)
}

fn cutoff_table(path: Option<&Path>, manifest: &mut RunManifest) -> Result<CutoffTable, Failure> {
    match path {
        None => {
            manifest.set("cutoff_table", "bundled");
            Ok(CutoffTable::bundled())
        }
        Some(p) => {
            let bytes = read(p)?;
            manifest.input("cutoff_table", p, &bytes);
            manifest.set("cutoff_table", p.display());
            let text = String::from_utf8(bytes).map_err(|_| Failure::Usage("cutoff table is not UTF-8".into()))?;
            CutoffTable::from_toml(&text).map_err(|e| Failure::Usage(e.to_string()))
        }
    }
}

fn resolve_cutoff(args: &CutoffArgs, year: Option<i32>, manifest: &mut RunManifest) -> Result<NaiveDate, Failure> {
    let (cutoff, origin) = match (args.cutoff, year) {
        (Some(d), _) => (d, CutoffOrigin::Flag),
        (None, Some(y)) => cutoff_table(args.cutoff_table.as_deref(), manifest)?
            .cutoff_for(y)
            .map_err(|e| Failure::Usage(e.to_string()))?,
        (None, None) => return Err(Failure::Usage("either --cutoff or --year is required".into())),
    };
    manifest.set("cutoff", cutoff.format("%Y-%m-%d"));
    manifest.set("cutoff_origin", origin);
    Ok(cutoff)
}

fn create_out(dir: &Path) -> Result<(), Failure> {
    fs::create_dir_all(dir).map_err(|e| Failure::Data(format!("{}: {e}", dir.display())))
}

fn io<E: std::fmt::Display>(e: E) -> Failure {
    Failure::Data(format!("writing output: {e}"))
}

fn cmd_compute(ctx: &mut Ctx<'_>, a: ComputeArgs) -> Result<(), Failure> {
    let mut manifest = RunManifest::new("compute");
    manifest.set("year", a.year);
    manifest.set("format", format!("{:?}", a.format).to_lowercase());
    let cutoff = resolve_cutoff(&a.cutoff, Some(a.year), &mut manifest)?;
    let loaded = load(&a.input, &mut manifest)?;
    let got = build_index(ctx, &loaded, &mut manifest)?;
    create_out(&a.out)?;

    let annual = compute_annual(&got.index.snapshot(cutoff), a.year);
    if a.format != Format::Standings {
        manifest.write_output(&a.out, "metrics", METRICS_FILE, output::metrics_csv(&annual.metrics).as_bytes()).map_err(io)?;
    }
    if a.format != Format::Metrics {
        let standings = output::standings_csv(&annual.standings);
        manifest.write_output(&a.out, "standings", STANDINGS_FILE, standings.as_bytes()).map_err(io)?;
    }
    manifest.write(&a.out).map_err(io)
}

fn cmd_tracker(ctx: &mut Ctx<'_>, a: TrackerArgs) -> Result<(), Failure> {
    let usage = |e: tracker::TrackerError| Failure::Usage(e.to_string());
    let from: YearMonth = a.from.parse().map_err(usage)?;
    let to: YearMonth = a.to.parse().map_err(usage)?;
    let schedule = tracker::monthly_schedule(from, to, a.day).map_err(usage)?;

    let mut manifest = RunManifest::new("tracker");
    manifest.set("tracker_year", a.year);
    manifest.set("from", from);
    manifest.set("to", to);
    manifest.set("day", a.day.map_or_else(|| "last".to_string(), |d| d.to_string()));
    manifest.set("schedule_points", schedule.len());
    let final_cutoff = if a.report {
        let (d, origin) = cutoff_table(a.cutoff_table.as_deref(), &mut manifest)?
            .cutoff_for(a.year)
            .map_err(|e| Failure::Usage(e.to_string()))?;
        manifest.set("final_cutoff", d.format("%Y-%m-%d"));
        manifest.set("final_cutoff_origin", origin);
        Some(d)
    } else {
        None
    };
    let loaded = load(&a.input, &mut manifest)?;
    let got = build_index(ctx, &loaded, &mut manifest)?;
    create_out(&a.out)?;

    let rows = tracker::tracker_table(&got.index, a.year, &schedule).map_err(data)?;
    manifest.write_output(&a.out, "tracker", TRACKER_FILE, output::tracker_csv(&rows).as_bytes()).map_err(io)?;
    if let Some(final_cutoff) = final_cutoff {
        let report = tracker::convergence_report(&got.index, a.year, &schedule, final_cutoff).map_err(data)?;
        let mut csv = String::from("as_of_date,sources,spearman\n");
        for p in report {
            let rho = p.spearman.map_or_else(String::new, |r| format!("{r:.4}"));
            csv.push_str(&format!("{},{},{}\n", p.as_of.format("%Y-%m-%d"), p.sources, rho));
        }
        manifest.write_output(&a.out, "convergence", CONVERGENCE_FILE, csv.as_bytes()).map_err(io)?;
    }
    manifest.write(&a.out).map_err(io)
}

fn cmd_generate(_ctx: &mut Ctx<'_>, a: GenerateArgs) -> Result<(), Failure> {
    let mut manifest = RunManifest::new("generate");
    let mut config = match &a.config {
        Some(p) => {
            let bytes = read(p)?;
            manifest.input("config", p, &bytes);
            let text = String::from_utf8(bytes).map_err(|_| Failure::Usage("config is not UTF-8".into()))?;
            toml::from_str(&text).map_err(|e| Failure::Usage(format!("{}: {e}", p.display())))?
        }
        None => CorpusConfig::default(),
    };
    macro_rules! apply {
        ($($flag:ident => $($field:ident).+),* $(,)?) => {
            $(if let Some(v) = a.$flag { config.$($field).+ = v; })*
        };
    }
    apply!(
        seed => seed,
        journals => n_journals,
        first_year => first_year,
        last_year => last_year,
        pubs_min => pubs_per_journal_per_year.min,
        pubs_max => pubs_per_journal_per_year.max,
        citation_rate => citation_rate,
        aip_fraction => aip_fraction,
        rename_probability => rename_probability,
        categories => n_categories,
    );
    let corpus = corpus::generate(&config).map_err(|e| Failure::Usage(e.to_string()))?;
    for (key, value) in flatten_config(&config) {
        manifest.set(&key, value);
    }
    create_out(&a.out)?;
    let files = corpus.to_files();
    manifest.write_output(&a.out, "sources", CorpusFiles::SOURCES, files.sources.as_bytes()).map_err(io)?;
    manifest.write_output(&a.out, "publications", CorpusFiles::PUBLICATIONS, files.publications.as_bytes()).map_err(io)?;
    manifest.write_output(&a.out, "links", CorpusFiles::LINKS, files.links.as_bytes()).map_err(io)?;
    manifest.write(&a.out).map_err(io)
}

fn flatten_config(config: &CorpusConfig) -> BTreeMap<String, String> {
    fn walk(prefix: &str, v: &serde_json::Value, out: &mut BTreeMap<String, String>) {
        match v {
            serde_json::Value::Object(m) => {
                for (k, v) in m {
                    let key = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                    walk(&key, v, out);
                }
            }
            other => {
                out.insert(prefix.to_string(), other.to_string());
            }
        }
    }
    let mut out = BTreeMap::new();
    walk("", &serde_json::to_value(config).expect("config serializes"), &mut out);
    out
}

fn corrupt_row(csv: &str, row: usize) -> String {
    csv.lines()
        .enumerate()
        .map(|(i, line)| if i == row { format!("{line},corrupted\n") } else { format!("{line}\n") })
        .collect()
}

fn cmd_verify(ctx: &mut Ctx<'_>, a: VerifyArgs) -> Result<(), Failure> {
    let mut manifest = RunManifest::new("verify");
    manifest.set("year", a.year);
    let cutoff = resolve_cutoff(&a.cutoff, Some(a.year), &mut manifest)?;
    let loaded = load(&a.input, &mut manifest)?;
    let got = build_index(ctx, &loaded, &mut manifest)?;
    create_out(&a.out)?;

    let (mut metrics, standings) = output::annual_csv(&compute_annual(&got.index.snapshot(cutoff), a.year));
    if let Some(row) = a.inject_fault {
        manifest.set("inject_fault", row);
        metrics = corrupt_row(&metrics, row);
    }
    manifest.write_output(&a.out, "metrics", METRICS_FILE, metrics.as_bytes()).map_err(io)?;
    manifest.write_output(&a.out, "standings", STANDINGS_FILE, standings.as_bytes()).map_err(io)?;

    let cutoff_str = cutoff.format("%Y-%m-%d").to_string();
    let (mismatches, report) = match oracle_metrics(&loaded.sources, &loaded.pubs, &loaded.links, a.year, &cutoff_str) {
        Ok(o) => {
            manifest.write_output(&a.out, "oracle_metrics", ORACLE_METRICS_FILE, o.metrics_csv.as_bytes()).map_err(io)?;
            manifest
                .write_output(&a.out, "oracle_standings", ORACLE_STANDINGS_FILE, o.standings_csv.as_bytes())
                .map_err(io)?;
            let mut m = verify::diff_rows(METRICS_FILE, &metrics, &o.metrics_csv);
            m.extend(verify::diff_rows(STANDINGS_FILE, &standings, &o.standings_csv));
            let report = verify::report(&m);
            (m.len(), report)
        }
        Err(e) => (1, format!("{e}\n")),
    };
    manifest.set("mismatching_rows", mismatches);
    manifest.write_output(&a.out, "report", VERIFY_REPORT_FILE, report.as_bytes()).map_err(io)?;
    manifest.write(&a.out).map_err(io)?;
    if mismatches > 0 {
        return Err(Failure::Mismatch);
    }
    Ok(())
}

fn cmd_snapshot_info(ctx: &mut Ctx<'_>, a: SnapshotInfoArgs) -> Result<(), Failure> {
    let mut manifest = RunManifest::new("snapshot-info");
    let cutoff = resolve_cutoff(&a.cutoff, a.year, &mut manifest)?;
    let loaded = load(&a.input, &mut manifest)?;
    let got = build_index(ctx, &loaded, &mut manifest)?;
    let snap = got.index.snapshot(cutoff);

    let mut by_year: BTreeMap<String, usize> = BTreeMap::new();
    let mut in_press = 0;
    for p in snap.publications() {
        *by_year.entry(p.sort_year.to_string()).or_default() += 1;
        in_press += usize::from(p.is_article_in_press);
    }
    let info = serde_json::json!({
        "cutoff": cutoff.format("%Y-%m-%d").to_string(),
        "cutoff_origin": manifest.config["cutoff_origin"],
        "sources": snap.sources().len(),
        "publications": snap.publication_count(),
        "links": snap.link_count(),
        "articles_in_press": in_press,
        "publications_by_sort_year": by_year,
    });
    writeln!(ctx.stdout, "{}", serde_json::to_string_pretty(&info).expect("json")).map_err(io)
}
