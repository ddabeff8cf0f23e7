//! Line-level comparison of engine and oracle output files.

use std::fmt::Write;

/// Rows listed in a diff report.
pub const REPORT_LIMIT: usize = 50;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RowMismatch {
    pub file: String,
    /// 1-based line number, header included.
    pub line: usize,
    pub engine: Option<String>,
    pub oracle: Option<String>,
}

pub fn diff_rows(file: &str, engine: &str, oracle: &str) -> Vec<RowMismatch> {
    let (e, o): (Vec<&str>, Vec<&str>) = (engine.lines().collect(), oracle.lines().collect());
    let mut out: Vec<RowMismatch> = (0..e.len().max(o.len()))
        .filter(|&i| e.get(i) != o.get(i))
        .map(|i| RowMismatch {
            file: file.to_string(),
            line: i + 1,
            engine: e.get(i).map(|s| s.to_string()),
            oracle: o.get(i).map(|s| s.to_string()),
        })
        .collect();
    // A trailing-newline difference leaves every line equal.
    if out.is_empty() && engine != oracle {
        out.push(RowMismatch { file: file.to_string(), line: e.len().max(o.len()), engine: None, oracle: None });
    }
    out
}

pub fn report(mismatches: &[RowMismatch]) -> String {
    let mut s = String::new();
    if mismatches.is_empty() {
        s.push_str("engine and oracle outputs are identical\n");
        return s;
    }
    let _ = writeln!(s, "{} mismatching rows; showing up to {REPORT_LIMIT}", mismatches.len());
    for m in mismatches.iter().take(REPORT_LIMIT) {
        let _ = writeln!(s, "{}:{}", m.file, m.line);
        let _ = writeln!(s, "  engine: {}", m.engine.as_deref().unwrap_or("<missing>"));
        let _ = writeln!(s, "  oracle: {}", m.oracle.as_deref().unwrap_or("<missing>"));
    }
    s
}
