//! Fixed-point CiteScore values.
//!
//! A CiteScore is stored as an integer count of hundredths, so `A / B` is
//! rounded exactly once, from the exact rational, and never passes through
//! binary floating point.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

/// A non-negative decimal with exactly two fractional digits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub struct CiteScore {
    hundredths: u64,
}

impl CiteScore {
    pub const ZERO: CiteScore = CiteScore { hundredths: 0 };

    pub const fn from_hundredths(hundredths: u64) -> Self {
        CiteScore { hundredths }
    }

    pub const fn hundredths(self) -> u64 {
        self.hundredths
    }

    /// `citations / documents` rounded half away from zero to two places.
    ///
    /// Returns `None` when `documents` is zero.
    pub fn from_ratio(citations: u64, documents: u64) -> Option<Self> {
        if documents == 0 {
            return None;
        }
        // floor((100a / b) + 1/2) == floor((200a + b) / 2b); both operands are
        // non-negative so half-up and half-away-from-zero coincide.
        let num = 200u128 * u128::from(citations) + u128::from(documents);
        let den = 2u128 * u128::from(documents);
        let hundredths = u64::try_from(num / den).expect("citescore exceeds u64 hundredths");
        Some(CiteScore { hundredths })
    }

    pub fn to_f64(self) -> f64 {
        self.hundredths as f64 / 100.0
    }
}

impl fmt::Display for CiteScore {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}.{:02}", self.hundredths / 100, self.hundredths % 100)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid citescore literal {0:?}: expected digits '.' two digits")]
pub struct ParseCiteScoreError(String);

impl FromStr for CiteScore {
    type Err = ParseCiteScoreError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || ParseCiteScoreError(s.to_string());
        let (int, frac) = s.split_once('.').ok_or_else(err)?;
        let digits = |p: &str| !p.is_empty() && p.bytes().all(|b| b.is_ascii_digit());
        if !digits(int) || frac.len() != 2 || !digits(frac) {
            return Err(err());
        }
        let int: u64 = int.parse().map_err(|_| err())?;
        let frac: u64 = frac.parse().map_err(|_| err())?;
        int.checked_mul(100)
            .and_then(|h| h.checked_add(frac))
            .map(CiteScore::from_hundredths)
            .ok_or_else(err)
    }
}

impl From<CiteScore> for String {
    fn from(score: CiteScore) -> Self {
        score.to_string()
    }
}

impl TryFrom<String> for CiteScore {
    type Error = ParseCiteScoreError;

    fn try_from(s: String) -> Result<Self, Self::Error> {
        s.parse()
    }
}
