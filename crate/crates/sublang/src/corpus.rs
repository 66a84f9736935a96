//! Corpus ingestion: tokenization, stopword filtering, and immutable
//! per-discipline term frequency tables.
//!
//! The corpus file format is line-delimited JSON, one record per line with
//! string fields `id`, `discipline`, `title`, and `abstract`. The stopword
//! file holds one lowercase token per line; blank lines and lines starting
//! with `#` are ignored.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("corpus contains no documents")]
    EmptyCorpus,
    #[error("corpus must contain at least 2 disciplines, found {0}")]
    TooFewDisciplines(usize),
    #[error("duplicate document id {0:?}")]
    DuplicateDocumentId(String),
    #[error("document {id:?} has an empty id or discipline label")]
    MissingLabel { id: String },
    #[error("document {id:?} contains invalid token {token:?}")]
    InvalidToken { id: String, token: String },
    #[error("unknown discipline {0:?}")]
    UnknownDiscipline(String),
    #[error("sample size {requested} exceeds vocabulary size {vocabulary}")]
    SampleTooLarge { requested: usize, vocabulary: usize },
    #[error("sample size must be positive")]
    ZeroSample,
    #[error("{path}:{line}: {message}")]
    Parse {
        path: String,
        line: usize,
        message: String,
    },
    #[error("failed to read {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
}

/// Which document fields feed the frequency tables.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum FieldMode {
    TitleOnly,
    AbstractOnly,
    Both,
}

impl fmt::Display for FieldMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldMode::TitleOnly => write!(f, "title"),
            FieldMode::AbstractOnly => write!(f, "abstract"),
            FieldMode::Both => write!(f, "both"),
        }
    }
}

/// Lowercase tokens; splits on anything that is not a letter, digit, or an
/// internal hyphen/apostrophe. Leading and trailing hyphens/apostrophes are
/// stripped and empty tokens dropped.
pub fn tokenize(raw_text: &str) -> Vec<String> {
    raw_text
        .to_lowercase()
        .split(|c: char| !(c.is_alphanumeric() || c == '-' || c == '\''))
        .map(|piece| piece.trim_matches(|c| c == '-' || c == '\''))
        .filter(|piece| !piece.is_empty())
        .map(str::to_owned)
        .collect()
}

fn valid_token(token: &str) -> bool {
    !token.is_empty()
        && !token.chars().any(char::is_whitespace)
        && *token == token.to_lowercase()
}

/// One title+abstract record with a discipline label; the unit of
/// classification.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Document {
    pub id: String,
    pub discipline: String,
    pub title_terms: Vec<String>,
    pub abstract_terms: Vec<String>,
}

impl Document {
    /// Builds a document from raw text fields, tokenizing the title and
    /// abstract.
    pub fn from_text(id: &str, discipline: &str, title: &str, abstract_text: &str) -> Document {
        Document {
            id: id.to_owned(),
            discipline: discipline.to_owned(),
            title_terms: tokenize(title),
            abstract_terms: tokenize(abstract_text),
        }
    }

    /// Tokens of the fields selected by `mode`, in document order.
    pub fn terms(&self, mode: FieldMode) -> impl Iterator<Item = &str> {
        let title = matches!(mode, FieldMode::TitleOnly | FieldMode::Both);
        let abs = matches!(mode, FieldMode::AbstractOnly | FieldMode::Both);
        self.title_terms
            .iter()
            .filter(move |_| title)
            .chain(self.abstract_terms.iter().filter(move |_| abs))
            .map(String::as_str)
    }

    fn validate(&self) -> Result<(), CorpusError> {
        if self.id.is_empty() || self.discipline.is_empty() {
            return Err(CorpusError::MissingLabel {
                id: self.id.clone(),
            });
        }
        for token in self.title_terms.iter().chain(&self.abstract_terms) {
            if !valid_token(token) {
                return Err(CorpusError::InvalidToken {
                    id: self.id.clone(),
                    token: token.clone(),
                });
            }
        }
        Ok(())
    }
}

#[derive(Deserialize)]
struct RawRecord {
    id: String,
    discipline: String,
    title: String,
    #[serde(rename = "abstract")]
    abstract_text: String,
}

/// Reads a line-delimited JSON corpus file.
pub fn read_documents(path: &Path) -> Result<Vec<Document>, CorpusError> {
    let text = fs::read_to_string(path).map_err(|source| CorpusError::Io {
        path: path.display().to_string(),
        source,
    })?;
    let mut docs = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let raw: RawRecord =
            serde_json::from_str(line).map_err(|e| CorpusError::Parse {
                path: path.display().to_string(),
                line: lineno + 1,
                message: e.to_string(),
            })?;
        docs.push(Document::from_text(
            &raw.id,
            &raw.discipline,
            &raw.title,
            &raw.abstract_text,
        ));
    }
    Ok(docs)
}

/// A set of lowercase tokens excluded from all frequency tables.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct StopwordList {
    terms: BTreeSet<String>,
}

impl StopwordList {
    pub fn empty() -> StopwordList {
        StopwordList::default()
    }

    pub fn new<I, S>(terms: I) -> StopwordList
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        StopwordList {
            terms: terms.into_iter().map(|s| s.into().to_lowercase()).collect(),
        }
    }

    /// One token per line; `#` starts a comment line.
    pub fn from_path(path: &Path) -> Result<StopwordList, CorpusError> {
        let text = fs::read_to_string(path).map_err(|source| CorpusError::Io {
            path: path.display().to_string(),
            source,
        })?;
        let mut terms = BTreeSet::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            if line.chars().any(char::is_whitespace) {
                return Err(CorpusError::Parse {
                    path: path.display().to_string(),
                    line: lineno + 1,
                    message: format!("stopword entries are single tokens, got {line:?}"),
                });
            }
            terms.insert(line.to_lowercase());
        }
        Ok(StopwordList { terms })
    }

    pub fn contains(&self, term: &str) -> bool {
        self.terms.contains(term)
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }
}

/// Per-discipline and global term-count tables; the learned state everything
/// else reads. Immutable once built and safe for concurrent reads.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FrequencyModel {
    disciplines: Vec<String>,
    per_db: BTreeMap<String, BTreeMap<String, u64>>,
    global: BTreeMap<String, u64>,
    mode: FieldMode,
    stopwords: StopwordList,
}

impl FrequencyModel {
    pub fn disciplines(&self) -> &[String] {
        &self.disciplines
    }

    pub fn mode(&self) -> FieldMode {
        self.mode
    }

    pub fn stopwords(&self) -> &StopwordList {
        &self.stopwords
    }

    /// Count of `term` in `discipline`; zero when absent.
    pub fn count(&self, discipline: &str, term: &str) -> u64 {
        self.per_db
            .get(discipline)
            .and_then(|t| t.get(term))
            .copied()
            .unwrap_or(0)
    }

    /// Total count of `term` across all disciplines; zero when absent.
    pub fn global_count(&self, term: &str) -> u64 {
        self.global.get(term).copied().unwrap_or(0)
    }

    /// Distinct terms of one discipline with their counts, in term order.
    pub fn discipline_vocabulary(
        &self,
        discipline: &str,
    ) -> Result<impl Iterator<Item = (&str, u64)>, CorpusError> {
        let table = self
            .per_db
            .get(discipline)
            .ok_or_else(|| CorpusError::UnknownDiscipline(discipline.to_owned()))?;
        Ok(table.iter().map(|(t, &c)| (t.as_str(), c)))
    }

    /// All distinct terms with their global counts, in term order.
    pub fn global_vocabulary(&self) -> impl Iterator<Item = (&str, u64)> {
        self.global.iter().map(|(t, &c)| (t.as_str(), c))
    }

    /// Total token count across all tables.
    pub fn total_tokens(&self) -> u64 {
        self.global.values().sum()
    }

    /// Total token count for one discipline.
    pub fn discipline_tokens(&self, discipline: &str) -> u64 {
        self.per_db
            .get(discipline)
            .map(|t| t.values().sum())
            .unwrap_or(0)
    }

    pub fn write_json(&self, path: &Path) -> Result<(), CorpusError> {
        let text = serde_json::to_string_pretty(self).expect("model serializes");
        fs::write(path, text).map_err(|source| CorpusError::Io {
            path: path.display().to_string(),
            source,
        })
    }

    pub fn read_json(path: &Path) -> Result<FrequencyModel, CorpusError> {
        let text = fs::read_to_string(path).map_err(|source| CorpusError::Io {
            path: path.display().to_string(),
            source,
        })?;
        serde_json::from_str(&text).map_err(|e| CorpusError::Parse {
            path: path.display().to_string(),
            line: 0,
            message: e.to_string(),
        })
    }
}

/// Builds the frequency tables from `documents` using the fields selected by
/// `mode`, with stopwords excluded. Disciplines are registered in order of
/// first appearance.
pub fn build_model(
    documents: &[Document],
    stopwords: &StopwordList,
    mode: FieldMode,
) -> Result<FrequencyModel, CorpusError> {
    if documents.is_empty() {
        return Err(CorpusError::EmptyCorpus);
    }
    let mut seen_ids = BTreeSet::new();
    let mut disciplines: Vec<String> = Vec::new();
    let mut per_db: BTreeMap<String, BTreeMap<String, u64>> = BTreeMap::new();
    let mut global: BTreeMap<String, u64> = BTreeMap::new();

    for doc in documents {
        doc.validate()?;
        if !seen_ids.insert(doc.id.clone()) {
            return Err(CorpusError::DuplicateDocumentId(doc.id.clone()));
        }
        if !per_db.contains_key(&doc.discipline) {
            disciplines.push(doc.discipline.clone());
            per_db.insert(doc.discipline.clone(), BTreeMap::new());
        }
        let table = per_db.get_mut(&doc.discipline).expect("just inserted");
        for term in doc.terms(mode) {
            if stopwords.contains(term) {
                continue;
            }
            *table.entry(term.to_owned()).or_insert(0) += 1;
            *global.entry(term.to_owned()).or_insert(0) += 1;
        }
    }

    if disciplines.len() < 2 {
        return Err(CorpusError::TooFewDisciplines(disciplines.len()));
    }

    let model = FrequencyModel {
        disciplines,
        per_db,
        global,
        mode,
        stopwords: stopwords.clone(),
    };
    debug_assert!(conservation_holds(&model));
    Ok(model)
}

fn conservation_holds(model: &FrequencyModel) -> bool {
    model.global.iter().all(|(term, &total)| {
        let sum: u64 = model
            .disciplines
            .iter()
            .map(|d| model.count(d, term))
            .sum();
        sum == total
    })
}

/// Every n-th term of the frequency-sorted vocabulary of one discipline.
///
/// Terms are sorted by descending frequency (ties lexicographic ascending);
/// the stride is `floor(V / k)` starting at index 0, truncated to `k` terms.
pub fn systematic_sample(
    model: &FrequencyModel,
    discipline: &str,
    k: usize,
) -> Result<Vec<String>, CorpusError> {
    if k == 0 {
        return Err(CorpusError::ZeroSample);
    }
    let mut terms: Vec<(String, u64)> = model
        .discipline_vocabulary(discipline)?
        .map(|(t, c)| (t.to_owned(), c))
        .collect();
    if k > terms.len() {
        return Err(CorpusError::SampleTooLarge {
            requested: k,
            vocabulary: terms.len(),
        });
    }
    terms.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
    let stride = terms.len() / k;
    Ok(terms
        .iter()
        .step_by(stride.max(1))
        .take(k)
        .map(|(t, _)| t.clone())
        .collect())
}
