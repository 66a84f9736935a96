//! Leave-one-out discipline classification by summed Poisson percentiles.
//!
//! Each document is scored against every discipline: for each distinct
//! non-stopword term the document's own occurrences are subtracted from the
//! home-discipline and global counts before the percentile is computed, so
//! the document never contributes to its own classification. Terms whose
//! adjusted global count is zero have an indeterminate percentile and are
//! skipped; documents left with no usable terms take a fallback assignment.

use std::collections::BTreeMap;
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::corpus::{Document, FieldMode, FrequencyModel};
use crate::poisson::{self, PoissonError};

/// Predicted label used by the `Unclassified` fallback policy; always
/// counted as an error in accuracy.
pub const UNCLASSIFIED_LABEL: &str = "⟂";

#[derive(Debug, Error)]
pub enum ClassifyError {
    #[error("document {id:?}: scoring mode {requested} does not match model mode {model}")]
    ModeMismatch {
        id: String,
        requested: FieldMode,
        model: FieldMode,
    },
    #[error(
        "document {id:?} is inconsistent with the model: term {term:?} occurs {in_doc} times \
         but discipline {discipline:?} only counts {in_model}"
    )]
    InconsistentDocument {
        id: String,
        term: String,
        discipline: String,
        in_doc: u64,
        in_model: u64,
    },
    #[error(transparent)]
    Poisson(#[from] PoissonError),
}

/// How documents with no usable terms are assigned.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FallbackPolicy {
    /// Assign the reserved sink label, counted incorrect.
    Unclassified,
    /// Assign a uniformly random discipline from a seeded deterministic
    /// generator.
    Random { seed: u64 },
}

/// Scoring options.
#[derive(Debug, Clone, Copy)]
pub struct ScoreOptions {
    pub mode: FieldMode,
    pub fallback: FallbackPolicy,
    /// When set, each term's percentile is weighted by its in-document
    /// occurrence count instead of contributing once.
    pub token_multiplicity: bool,
}

impl ScoreOptions {
    pub fn new(mode: FieldMode) -> ScoreOptions {
        ScoreOptions {
            mode,
            fallback: FallbackPolicy::Unclassified,
            token_multiplicity: false,
        }
    }
}

/// Per-document scoring result.
#[derive(Debug, Clone)]
pub struct DocumentScore {
    pub doc_id: String,
    pub actual: String,
    /// Summed percentile weight per discipline, in registered order.
    pub weights: Vec<(String, f64)>,
    pub predicted: String,
    pub usable_terms: usize,
    pub fallback_used: bool,
}

/// Deterministic fallback assignment for a document with no usable terms.
pub fn fallback_assign(doc_id: &str, policy: FallbackPolicy, disciplines: &[String]) -> String {
    match policy {
        FallbackPolicy::Unclassified => UNCLASSIFIED_LABEL.to_owned(),
        FallbackPolicy::Random { seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed ^ fnv1a(doc_id.as_bytes()));
            let idx = rng.random_range(0..disciplines.len());
            disciplines[idx].clone()
        }
    }
}

fn fnv1a(bytes: &[u8]) -> u64 {
    let mut hash: u64 = 0xcbf29ce484222325;
    for &b in bytes {
        hash ^= b as u64;
        hash = hash.wrapping_mul(0x100000001b3);
    }
    hash
}

/// Scores one document against every discipline with leave-one-out count
/// adjustment. The document must be part of the model.
pub fn score_document(
    doc: &Document,
    model: &FrequencyModel,
    options: &ScoreOptions,
) -> Result<DocumentScore, ClassifyError> {
    if options.mode != model.mode() {
        return Err(ClassifyError::ModeMismatch {
            id: doc.id.clone(),
            requested: options.mode,
            model: model.mode(),
        });
    }
    let disciplines = model.disciplines();
    let n = disciplines.len() as f64;

    let mut doc_counts: BTreeMap<&str, u64> = BTreeMap::new();
    for term in doc.terms(options.mode) {
        if !model.stopwords().contains(term) {
            *doc_counts.entry(term).or_insert(0) += 1;
        }
    }

    let mut weights = vec![0.0f64; disciplines.len()];
    let mut usable_terms = 0usize;
    for (term, &in_doc) in &doc_counts {
        let home_count = model.count(&doc.discipline, term);
        if in_doc > home_count {
            return Err(ClassifyError::InconsistentDocument {
                id: doc.id.clone(),
                term: (*term).to_owned(),
                discipline: doc.discipline.clone(),
                in_doc,
                in_model: home_count,
            });
        }
        let adjusted_global = model.global_count(term) - in_doc;
        if adjusted_global == 0 {
            // Indeterminate percentile: the term occurs nowhere else.
            continue;
        }
        usable_terms += 1;
        let lambda = adjusted_global as f64 / n;
        let multiplier = if options.token_multiplicity {
            in_doc as f64
        } else {
            1.0
        };
        for (i, discipline) in disciplines.iter().enumerate() {
            let count = if discipline == &doc.discipline {
                home_count - in_doc
            } else {
                model.count(discipline, term)
            };
            weights[i] += multiplier * poisson::percentile(count, lambda)?;
        }
    }

    let (predicted, fallback_used) = if usable_terms == 0 {
        (
            fallback_assign(&doc.id, options.fallback, disciplines),
            true,
        )
    } else {
        (disciplines[argmax(&weights)].clone(), false)
    };

    Ok(DocumentScore {
        doc_id: doc.id.clone(),
        actual: doc.discipline.clone(),
        weights: disciplines
            .iter()
            .cloned()
            .zip(weights.iter().copied())
            .collect(),
        predicted,
        usable_terms,
        fallback_used,
    })
}

/// Index of the maximum weight; ties broken by registered discipline order.
fn argmax(weights: &[f64]) -> usize {
    let mut best = 0;
    for (i, w) in weights.iter().enumerate().skip(1) {
        if *w > weights[best] {
            best = i;
        }
    }
    best
}

/// N x (N+1) confusion counts indexed (actual, predicted), with a trailing
/// column for unclassified documents.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfusionMatrix {
    labels: Vec<String>,
    counts: Vec<Vec<u64>>,
    unclassified: Vec<u64>,
}

impl ConfusionMatrix {
    pub fn new(labels: &[String]) -> ConfusionMatrix {
        ConfusionMatrix {
            labels: labels.to_vec(),
            counts: vec![vec![0; labels.len()]; labels.len()],
            unclassified: vec![0; labels.len()],
        }
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    fn index(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn record(&mut self, actual: &str, predicted: &str) {
        let row = self.index(actual).expect("actual label registered");
        match self.index(predicted) {
            Some(col) => self.counts[row][col] += 1,
            None => self.unclassified[row] += 1,
        }
    }

    pub fn count(&self, actual: &str, predicted: &str) -> u64 {
        let row = self.index(actual).expect("actual label registered");
        match self.index(predicted) {
            Some(col) => self.counts[row][col],
            None => self.unclassified[row],
        }
    }

    pub fn row_sum(&self, actual: &str) -> u64 {
        let row = self.index(actual).expect("actual label registered");
        self.counts[row].iter().sum::<u64>() + self.unclassified[row]
    }

    pub fn total(&self) -> u64 {
        self.labels.iter().map(|l| self.row_sum(l)).sum()
    }

    /// Correct classifications on the diagonal divided by the total.
    pub fn accuracy(&self) -> f64 {
        let trace: u64 = (0..self.labels.len()).map(|i| self.counts[i][i]).sum();
        let total = self.total();
        if total == 0 {
            0.0
        } else {
            trace as f64 / total as f64
        }
    }

    pub fn per_discipline_accuracy(&self) -> Vec<(String, f64)> {
        self.labels
            .iter()
            .enumerate()
            .map(|(i, label)| {
                let row_sum = self.row_sum(label);
                let acc = if row_sum == 0 {
                    0.0
                } else {
                    self.counts[i][i] as f64 / row_sum as f64
                };
                (label.clone(), acc)
            })
            .collect()
    }
}

impl fmt::Display for ConfusionMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "actual\\predicted")?;
        for label in &self.labels {
            write!(f, "\t{label}")?;
        }
        writeln!(f, "\t{UNCLASSIFIED_LABEL}")?;
        for (i, label) in self.labels.iter().enumerate() {
            write!(f, "{label}")?;
            for count in &self.counts[i] {
                write!(f, "\t{count}")?;
            }
            writeln!(f, "\t{}", self.unclassified[i])?;
        }
        Ok(())
    }
}

/// Scores every document and aggregates the confusion matrix.
pub fn classify_all(
    model: &FrequencyModel,
    documents: &[Document],
    options: &ScoreOptions,
) -> Result<(Vec<DocumentScore>, ConfusionMatrix), ClassifyError> {
    let mut matrix = ConfusionMatrix::new(model.disciplines());
    let mut scores = Vec::with_capacity(documents.len());
    for doc in documents {
        let score = score_document(doc, model, options)?;
        matrix.record(&score.actual, &score.predicted);
        scores.push(score);
    }
    Ok((scores, matrix))
}
