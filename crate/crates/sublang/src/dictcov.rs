//! Dictionary coverage coding and the derived coverage/frequency statistics.
//!
//! A term is coded against a specialized-dictionary headword list:
//!
//! - `0` not found,
//! - `1` a single-token headword matches the term exactly,
//! - `2` a multi-token headword's first token matches the term,
//! - `3` a single-token headword is an inflectional variant of the term.
//!
//! Priority is fixed 1 > 2 > 3. The variant rules are a small fixed suffix
//! set (singular/plural, y/ies, -ed/-ing with de-doubling or a restored
//! final e), an auditable approximation of the human judgment the coding was
//! originally done with.

use std::collections::BTreeSet;
use std::fs;
use std::path::Path;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum DictcovError {
    #[error("coverage sample is empty")]
    EmptySample,
    #[error("failed to read {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
}

/// Extracted headwords of one specialized dictionary. A headword is one or
/// more lowercase tokens separated by single spaces.
#[derive(Debug, Clone, Default)]
pub struct HeadwordList {
    single: BTreeSet<String>,
    phrase_first: BTreeSet<String>,
    entries: BTreeSet<String>,
}

impl HeadwordList {
    pub fn new<I, S>(headwords: I) -> HeadwordList
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let mut list = HeadwordList::default();
        for hw in headwords {
            let normalized = normalize_headword(hw.as_ref());
            if normalized.is_empty() {
                continue;
            }
            match normalized.split_once(' ') {
                None => {
                    list.single.insert(normalized.clone());
                }
                Some((first, _)) => {
                    list.phrase_first.insert(first.to_owned());
                }
            }
            list.entries.insert(normalized);
        }
        list
    }

    /// One headword (possibly multi-word) per line; `#` starts a comment.
    pub fn from_path(path: &Path) -> Result<HeadwordList, DictcovError> {
        let text = fs::read_to_string(path).map_err(|source| DictcovError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Ok(HeadwordList::new(
            text.lines().filter(|l| !l.trim_start().starts_with('#')),
        ))
    }

    pub fn entries(&self) -> impl Iterator<Item = &str> {
        self.entries.iter().map(String::as_str)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

fn normalize_headword(raw: &str) -> String {
    raw.to_lowercase().split_whitespace().collect::<Vec<_>>().join(" ")
}

/// A term's dictionary status.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum CoverageCode {
    NotInDict = 0,
    ExactMatch = 1,
    PhraseStart = 2,
    Variant = 3,
}

impl CoverageCode {
    pub const ALL: [CoverageCode; 4] = [
        CoverageCode::NotInDict,
        CoverageCode::ExactMatch,
        CoverageCode::PhraseStart,
        CoverageCode::Variant,
    ];

    pub fn as_index(self) -> usize {
        self as usize
    }

    pub fn label(self) -> &'static str {
        match self {
            CoverageCode::NotInDict => "Not in Dict.",
            CoverageCode::ExactMatch => "Exact Match",
            CoverageCode::PhraseStart => "Start of Phrase",
            CoverageCode::Variant => "Term Variant",
        }
    }
}

/// Codes one term against the headword list with priority 1 > 2 > 3.
pub fn code_term(term: &str, headwords: &HeadwordList) -> CoverageCode {
    if headwords.single.contains(term) {
        return CoverageCode::ExactMatch;
    }
    if headwords.phrase_first.contains(term) {
        return CoverageCode::PhraseStart;
    }
    if headwords.single.iter().any(|hw| variant_match(term, hw)) {
        return CoverageCode::Variant;
    }
    CoverageCode::NotInDict
}

/// True iff `a` and `b` are related by one of the inflectional suffix rules:
/// trailing "s"/"es" add/remove, "y" <-> "ies", or trailing "ed"/"ing"
/// removal with optional final-consonant de-doubling or a restored final
/// "e". Symmetric in its arguments.
pub fn variant_match(a: &str, b: &str) -> bool {
    a == b || inflected_from(a, b) || inflected_from(b, a)
}

/// True iff `long` is an inflected form of the base `short`.
fn inflected_from(long: &str, short: &str) -> bool {
    if let Some(stem) = long.strip_suffix("ies") {
        if format!("{stem}y") == short {
            return true;
        }
    }
    if let Some(stem) = long.strip_suffix("es") {
        if stem == short {
            return true;
        }
    }
    if let Some(stem) = long.strip_suffix('s') {
        if stem == short {
            return true;
        }
    }
    for suffix in ["ed", "ing"] {
        if let Some(stem) = long.strip_suffix(suffix) {
            if stem == short {
                return true;
            }
            if format!("{stem}e") == short {
                return true;
            }
            if ends_with_doubled_consonant(stem) && stem[..stem.len() - 1] == *short {
                return true;
            }
        }
    }
    false
}

fn ends_with_doubled_consonant(stem: &str) -> bool {
    let mut chars = stem.chars().rev();
    match (chars.next(), chars.next()) {
        (Some(last), Some(prev)) => {
            last == prev && last.is_alphabetic() && !"aeiou".contains(last)
        }
        _ => false,
    }
}

/// Per-code counts, percentages, mean frequencies, and percent change of
/// each mean versus the not-in-dictionary mean.
#[derive(Debug, Clone, PartialEq)]
pub struct CoverageReport {
    pub counts: [usize; 4],
    pub percentages: [f64; 4],
    pub mean_frequency: [Option<f64>; 4],
    /// Whole-percent change versus the code-0 mean; `None` when either mean
    /// is undefined.
    pub pct_change_from_not_in_dict: [Option<i64>; 4],
}

/// Codes a `(term, frequency)` sample and aggregates the Tables 2/3 style
/// statistics.
pub fn coverage_report(
    sample: &[(String, u64)],
    headwords: &HeadwordList,
) -> Result<CoverageReport, DictcovError> {
    if sample.is_empty() {
        return Err(DictcovError::EmptySample);
    }
    let mut counts = [0usize; 4];
    let mut freq_sums = [0u64; 4];
    for (term, freq) in sample {
        let code = code_term(term, headwords).as_index();
        counts[code] += 1;
        freq_sums[code] += freq;
    }
    let total = sample.len() as f64;
    let percentages = counts.map(|c| 100.0 * c as f64 / total);
    let mut mean_frequency = [None; 4];
    for i in 0..4 {
        if counts[i] > 0 {
            mean_frequency[i] = Some(freq_sums[i] as f64 / counts[i] as f64);
        }
    }
    Ok(CoverageReport {
        counts,
        percentages,
        mean_frequency,
        pct_change_from_not_in_dict: percent_change_row(&mean_frequency),
    })
}

fn percent_change_row(means: &[Option<f64>; 4]) -> [Option<i64>; 4] {
    let mut row = [None; 4];
    let Some(base) = means[0] else {
        return row;
    };
    if base == 0.0 {
        return row;
    }
    for i in 0..4 {
        if let Some(mean) = means[i] {
            row[i] = Some((100.0 * (mean - base) / base).round() as i64);
        }
    }
    row
}

/// Percent change of `mean` versus `base`, rounded to a whole percent.
pub fn percent_change(base: f64, mean: f64) -> i64 {
    (100.0 * (mean - base) / base).round() as i64
}
