mod common;

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use common::*;

fn args(parts: &[&str]) -> Vec<String> {
    parts.iter().map(|s| s.to_string()).collect()
}

fn generated(dir: &Path, seed: u64) -> std::path::PathBuf {
    let out = dir.join(format!("corpus{seed}"));
    let o = run_bin(&args(&["generate", "--seed", &seed.to_string(), "--journals", "30", "--out", out.to_str().unwrap()]));
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    out
}

fn command(cmd: &str, corpus: &Path, out: &Path, extra: &[&str]) -> std::process::Output {
    let mut a = vec![cmd.to_string()];
    a.extend(input_args(corpus));
    a.extend(args(extra));
    a.extend(["--out".to_string(), out.display().to_string()]);
    run_bin(&a)
}

#[test]
fn generate_then_verify_succeeds() {
    let dir = tempfile::tempdir().unwrap();
    let corpus = generated(dir.path(), 7);
    for year in 2012..=2019 {
        let out = dir.path().join(format!("v{year}"));
        let o = command("verify", &corpus, &out, &["--year", &year.to_string()]);
        assert_eq!(o.status.code(), Some(0), "{year}: {}", String::from_utf8_lossy(&o.stderr));
        assert!(fs::read_to_string(out.join("verify_report.txt")).unwrap().contains("identical"));
        assert_eq!(fs::read(out.join("metrics.csv")).unwrap(), fs::read(out.join("oracle_metrics.csv")).unwrap());
    }
}

#[test]
fn corrupted_row_is_reported() {
    let dir = tempfile::tempdir().unwrap();
    let corpus = generated(dir.path(), 3);
    let out = dir.path().join("v");
    let o = command("verify", &corpus, &out, &["--year", "2016", "--inject-fault", "2"]);
    assert_eq!(o.status.code(), Some(3));
    let report = fs::read_to_string(out.join("verify_report.txt")).unwrap();
    assert!(report.starts_with("1 mismatching rows"), "{report}");
    assert!(report.contains("metrics.csv:3\n"), "{report}");
    assert!(report.contains(",corrupted"), "{report}");
    assert_eq!(manifest(&out)["config"]["mismatching_rows"], "1");
}

#[test]
fn generated_digests_do_not_depend_on_output_location() {
    let dir = tempfile::tempdir().unwrap();
    let a = manifest(&generated(&dir.path().join("a"), 7));
    let b = manifest(&generated(&dir.path().join("b"), 7));
    assert_eq!(a["outputs"], b["outputs"]);
    assert_eq!(a["config"]["seed"], "7");
    assert_eq!(a["config"]["n_journals"], "30");
}

#[test]
fn compute_writes_data_files_and_nothing_on_stdout() {
    let dir = tempfile::tempdir().unwrap();
    let corpus = generated(dir.path(), 1);
    let out = dir.path().join("c");
    let o = command("compute", &corpus, &out, &["--year", "2016"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let metrics = fs::read_to_string(out.join("metrics.csv")).unwrap();
    assert!(metrics.starts_with("source_id,title,year,citescore,citations,documents,percent_cited\n"));
    assert!(out.join("standings.csv").exists());
    let m = manifest(&out);
    assert_eq!(m["command"], "compute");
    assert_eq!(m["config"]["cutoff"], "2017-05-31");
    assert_eq!(m["inputs"].as_array().unwrap().len(), 3);
    assert_eq!(m["outputs"].as_array().unwrap().len(), 2);
}

#[test]
fn explicit_cutoff_and_custom_table() {
    let dir = tempfile::tempdir().unwrap();
    let corpus = generated(dir.path(), 2);
    let out = dir.path().join("flag");
    assert!(command("compute", &corpus, &out, &["--year", "2017", "--cutoff", "2018-01-15"]).status.success());
    assert_eq!(manifest(&out)["config"]["cutoff"], "2018-01-15");
    assert_eq!(manifest(&out)["config"]["cutoff_origin"], "flag");

    let table = dir.path().join("table.toml");
    fs::write(&table, "default_month_day = \"06-30\"\n[years]\n2017 = \"2018-03-31\"\n").unwrap();
    for (year, want) in [("2017", "2018-03-31"), ("2016", "2017-06-30")] {
        let out = dir.path().join(format!("t{year}"));
        let o = command("compute", &corpus, &out, &["--year", year, "--cutoff-table", table.to_str().unwrap()]);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
        assert_eq!(manifest(&out)["config"]["cutoff"], want);
    }
}

#[test]
fn format_selects_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let corpus = generated(dir.path(), 2);
    let out = dir.path().join("m");
    assert!(command("compute", &corpus, &out, &["--year", "2017", "--format", "metrics"]).status.success());
    assert!(out.join("metrics.csv").exists());
    assert!(!out.join("standings.csv").exists());
}

#[test]
fn usage_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let corpus = generated(dir.path(), 4);
    let out = dir.path().join("u");
    let o = command("compute", &corpus, &out, &[]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("--year"));
    assert_eq!(command("tracker", &corpus, &out, &["--year", "2018", "--from", "2019-05", "--to", "2019-04"]).status.code(), Some(2));
    assert_eq!(command("tracker", &corpus, &out, &["--year", "2018", "--from", "2019-13", "--to", "2019-14"]).status.code(), Some(2));
    assert_eq!(command("compute", &corpus, &out, &["--year", "2017", "--cutoff", "2017-02-30"]).status.code(), Some(2));
    assert_eq!(run_bin(&args(&["frobnicate"])).status.code(), Some(2));
    assert_eq!(run_bin(&args(&["generate", "--journals", "0", "--out", out.to_str().unwrap()])).status.code(), Some(2));
    assert_eq!(run_bin(&args(&["--help"])).status.code(), Some(0));
}

#[test]
fn hard_ingest_errors_exit_1() {
    let dir = tempfile::tempdir().unwrap();
    let corpus = generated(dir.path(), 5);
    let pubs = corpus.join("publications.jsonl");
    let text = fs::read_to_string(&pubs).unwrap();
    let first = text.lines().next().unwrap().to_string();
    fs::write(&pubs, format!("{text}{first}\n")).unwrap();
    let o = command("compute", &corpus, &dir.path().join("e"), &["--year", "2017"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("error"));

    let o = command("compute", &dir.path().join("missing"), &dir.path().join("e2"), &["--year", "2017"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn warnings_go_to_stderr_unless_quiet() {
    let dir = tempfile::tempdir().unwrap();
    let corpus = dir.path().join("noisy");
    fs::create_dir_all(&corpus).unwrap();
    let mut files = RawFiles::from_corpus(&small_corpus(9));
    add_noise(&mut files);
    files.write(&corpus);

    let o = command("compute", &corpus, &dir.path().join("a"), &["--year", "2017"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&o.stderr).contains("warning"));
    let o = command("compute", &corpus, &dir.path().join("b"), &["--year", "2017", "--quiet"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stderr.is_empty());
    assert_eq!(
        fs::read(dir.path().join("a/metrics.csv")).unwrap(),
        fs::read(dir.path().join("b/metrics.csv")).unwrap()
    );
    let o = command("verify", &corpus, &dir.path().join("v"), &["--year", "2017", "--quiet"]);
    assert_eq!(o.status.code(), Some(0));
}

fn read_tracker(path: &Path) -> BTreeMap<String, Vec<(String, String)>> {
    let mut series: BTreeMap<String, Vec<(String, String)>> = BTreeMap::new();
    let text = fs::read_to_string(path).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), "source_id,tracker_year,as_of_date,citations,documents,tracker_value");
    for line in lines {
        let f: Vec<&str> = line.split(',').collect();
        series.entry(f[0].to_string()).or_default().push((f[2].to_string(), f[5].to_string()));
    }
    series
}

#[test]
fn tracker_month_end_schedule() {
    let dir = tempfile::tempdir().unwrap();
    let corpus = generated(dir.path(), 11);
    let out = dir.path().join("t");
    let o = command("tracker", &corpus, &out, &["--year", "2018", "--from", "2018-06", "--to", "2019-04", "--report"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let series = read_tracker(&out.join("tracker.csv"));
    assert!(!series.is_empty());
    let full: Vec<_> = series.values().filter(|s| s.len() == 11).collect();
    assert!(series.values().all(|s| s.len() <= 11));
    assert!(!full.is_empty());
    let dates: Vec<&str> = full[0].iter().map(|(d, _)| d.as_str()).collect();
    assert_eq!(dates[0], "2018-06-30");
    assert_eq!(dates[8], "2019-02-28");
    assert_eq!(dates[10], "2019-04-30");
    let m = manifest(&out);
    assert_eq!(m["config"]["schedule_points"], "11");
    assert_eq!(m["config"]["final_cutoff"], "2019-05-31");
    let convergence = fs::read_to_string(out.join("convergence.csv")).unwrap();
    assert_eq!(convergence.lines().count(), 12);
}

#[test]
fn final_tracker_point_matches_compute() {
    let dir = tempfile::tempdir().unwrap();
    let corpus = generated(dir.path(), 12);
    let t = dir.path().join("t");
    assert!(command("tracker", &corpus, &t, &["--year", "2017", "--from", "2021-10", "--to", "2021-12"]).status.success());
    let c = dir.path().join("c");
    assert!(command("compute", &corpus, &c, &["--year", "2017", "--cutoff", "2021-12-31"]).status.success());

    let tracker: BTreeMap<String, String> = read_tracker(&t.join("tracker.csv"))
        .into_iter()
        .map(|(id, s)| (id, s.last().unwrap().1.clone()))
        .collect();
    let mut annual = BTreeMap::new();
    let mut reader = csv::Reader::from_path(c.join("metrics.csv")).unwrap();
    for row in reader.records() {
        let row = row.unwrap();
        annual.insert(row[0].to_string(), row[3].to_string());
    }
    assert_eq!(tracker, annual);
}

#[test]
fn snapshot_info_reports_counts() {
    let dir = tempfile::tempdir().unwrap();
    let corpus = generated(dir.path(), 6);
    let mut a = vec!["snapshot-info".to_string()];
    a.extend(input_args(&corpus));
    a.extend(args(&["--year", "2015"]));
    let o = run_bin(&a);
    assert_eq!(o.status.code(), Some(0));
    let info: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(info["cutoff"], "2016-05-31");
    assert_eq!(info["cutoff_origin"], "table");
    assert!(info["publications"].as_u64().unwrap() > 0);
    assert!(info["publications_by_sort_year"].get("2019").is_none());

    let mut late = a.clone();
    late.truncate(late.len() - 2);
    late.extend(args(&["--cutoff", "2030-01-01"]));
    let all: serde_json::Value = serde_json::from_slice(&run_bin(&late).stdout).unwrap();
    let pubs = fs::read_to_string(corpus.join("publications.jsonl")).unwrap().lines().count() as u64;
    assert_eq!(all["publications"].as_u64().unwrap(), pubs);
    assert!(all["links"].as_u64().unwrap() > info["links"].as_u64().unwrap());
}

#[test]
fn generate_from_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("corpus.toml");
    fs::write(&config, "seed = 21\nn_journals = 8\nfirst_year = 2012\nlast_year = 2016\n").unwrap();
    let out = dir.path().join("g");
    let o = run_bin(&args(&["generate", "--config", config.to_str().unwrap(), "--journals", "5", "--out", out.to_str().unwrap()]));
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let m = manifest(&out);
    assert_eq!(m["config"]["seed"], "21");
    assert_eq!(m["config"]["n_journals"], "5");
    assert_eq!(m["config"]["last_year"], "2016");
    assert_eq!(m["inputs"][0]["role"], "config");

    fs::write(&config, "n_journals = \"many\"\n").unwrap();
    let o = run_bin(&args(&["generate", "--config", config.to_str().unwrap(), "--out", out.to_str().unwrap()]));
    assert_eq!(o.status.code(), Some(2));
}
