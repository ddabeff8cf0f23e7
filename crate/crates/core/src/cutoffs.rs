//! Year -> snapshot cutoff table.
//!
//! The bundled table lives in `cutoffs.toml` at the crate root; a different
//! file with the same layout can be loaded at run time.

use std::collections::BTreeMap;
use std::fmt;

use chrono::{Datelike, NaiveDate};
use serde::Deserialize;

use crate::index::parse_load_date;

pub const BUNDLED_TABLE: &str = include_str!("../cutoffs.toml");

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CutoffError {
    #[error("cutoff table: {0}")]
    Parse(String),
    #[error("cutoff table: bad date {value:?} for {key}")]
    BadDate { key: String, value: String },
    #[error("no default cutoff exists for year {0}")]
    OutOfRange(i32),
}

/// Where an effective cutoff came from; recorded in run manifests.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CutoffOrigin {
    Flag,
    Table,
    DefaultRule,
}

impl fmt::Display for CutoffOrigin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CutoffOrigin::Flag => "flag",
            CutoffOrigin::Table => "table",
            CutoffOrigin::DefaultRule => "default-rule",
        })
    }
}

#[derive(Deserialize)]
struct RawTable {
    default_month_day: String,
    #[serde(default)]
    years: BTreeMap<String, String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CutoffTable {
    default_month: u32,
    default_day: u32,
    years: BTreeMap<i32, NaiveDate>,
}

impl CutoffTable {
    pub fn bundled() -> Self {
        Self::from_toml(BUNDLED_TABLE).expect("bundled cutoff table is valid")
    }

    pub fn from_toml(text: &str) -> Result<Self, CutoffError> {
        let raw: RawTable = toml::from_str(text).map_err(|e| CutoffError::Parse(e.to_string()))?;
        let bad = |key: &str, value: &str| CutoffError::BadDate { key: key.to_string(), value: value.to_string() };
        // Validate month-day against a leap year so 02-29 is allowed.
        let probe = parse_load_date(&format!("2000-{}", raw.default_month_day))
            .filter(|_| raw.default_month_day.len() == 5)
            .ok_or_else(|| bad("default_month_day", &raw.default_month_day))?;
        let mut years = BTreeMap::new();
        for (key, value) in &raw.years {
            let year: i32 = key.parse().map_err(|_| CutoffError::Parse(format!("year key {key:?}")))?;
            years.insert(year, parse_load_date(value).ok_or_else(|| bad(key, value))?);
        }
        Ok(CutoffTable { default_month: probe.month(), default_day: probe.day(), years })
    }

    /// Effective cutoff for CiteScore `year`.
    pub fn cutoff_for(&self, year: i32) -> Result<(NaiveDate, CutoffOrigin), CutoffError> {
        if let Some(&d) = self.years.get(&year) {
            return Ok((d, CutoffOrigin::Table));
        }
        let next = year.checked_add(1).ok_or(CutoffError::OutOfRange(year))?;
        // 02-29 in a non-leap year falls back to 02-28.
        NaiveDate::from_ymd_opt(next, self.default_month, self.default_day)
            .or_else(|| NaiveDate::from_ymd_opt(next, self.default_month, self.default_day - 1))
            .map(|d| (d, CutoffOrigin::DefaultRule))
            .ok_or(CutoffError::OutOfRange(year))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d(s: &str) -> NaiveDate {
        s.parse().unwrap()
    }

    #[test]
    fn bundled_historic_years() {
        let t = CutoffTable::bundled();
        for y in 2011..=2016 {
            let (date, origin) = t.cutoff_for(y).unwrap();
            assert_eq!(date, NaiveDate::from_ymd_opt(y + 1, 5, 31).unwrap());
            assert_eq!(origin, CutoffOrigin::Table);
        }
        assert_eq!(t.cutoff_for(2017).unwrap(), (d("2018-04-30"), CutoffOrigin::Table));
    }

    #[test]
    fn unlisted_years_follow_default_rule() {
        let t = CutoffTable::bundled();
        assert_eq!(t.cutoff_for(2018).unwrap(), (d("2019-05-31"), CutoffOrigin::DefaultRule));
        assert_eq!(t.cutoff_for(2005).unwrap(), (d("2006-05-31"), CutoffOrigin::DefaultRule));
    }

    #[test]
    fn custom_tables() {
        let t = CutoffTable::from_toml("default_month_day = \"02-29\"\n[years]\n2020 = \"2021-01-15\"\n").unwrap();
        assert_eq!(t.cutoff_for(2020).unwrap().0, d("2021-01-15"));
        assert_eq!(t.cutoff_for(2018).unwrap().0, d("2019-02-28"));
        assert_eq!(t.cutoff_for(2019).unwrap().0, d("2020-02-29"));
        assert!(CutoffTable::from_toml("default_month_day = \"13-01\"").is_err());
        assert!(CutoffTable::from_toml("default_month_day = \"05-31\"\n[years]\n2020 = \"2021-02-30\"\n").is_err());
        assert!(CutoffTable::from_toml("nonsense").is_err());
    }
}
