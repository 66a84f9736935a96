//! Poisson-percentile term ranking within a discipline.
//!
//! Each term occurring at least once in the target discipline is ranked by
//! the cumulative probability of its in-discipline count under the rate
//! implied by its cross-discipline average. High percentiles flag terms used
//! more often than their collection-wide frequency predicts.

use std::cmp::Ordering;
use std::collections::BTreeSet;

use thiserror::Error;

use crate::corpus::{CorpusError, FrequencyModel};
use crate::poisson::{self, PoissonError};

#[derive(Debug, Error)]
pub enum RankError {
    #[error(transparent)]
    Corpus(#[from] CorpusError),
    #[error(transparent)]
    Poisson(#[from] PoissonError),
    #[error("k must be positive")]
    ZeroK,
    #[error("ranked list has {available} terms after filtering, need at least {needed}")]
    TooFewTerms { available: usize, needed: usize },
}

/// A term with its in-discipline count, cross-discipline average rate, and
/// Poisson percentile.
#[derive(Debug, Clone, PartialEq)]
pub struct RankedTerm {
    pub term: String,
    pub count_in_db: u64,
    pub lambda: f64,
    pub percentile: f64,
}

/// All terms of one discipline sorted by descending percentile, ties by
/// descending count, then lexicographic term.
#[derive(Debug, Clone)]
pub struct RankedList {
    pub discipline: String,
    pub entries: Vec<RankedTerm>,
}

fn rank_order(a: &RankedTerm, b: &RankedTerm) -> Ordering {
    b.percentile
        .partial_cmp(&a.percentile)
        .unwrap_or(Ordering::Equal)
        .then_with(|| b.count_in_db.cmp(&a.count_in_db))
        .then_with(|| a.term.cmp(&b.term))
}

/// Ranks every term occurring at least once in `discipline`. The rate is the
/// term's global count divided by the number of disciplines.
pub fn rank_terms(model: &FrequencyModel, discipline: &str) -> Result<RankedList, RankError> {
    let n = model.disciplines().len() as f64;
    let mut entries = Vec::new();
    for (term, count) in model.discipline_vocabulary(discipline)? {
        let lambda = model.global_count(term) as f64 / n;
        entries.push(RankedTerm {
            term: term.to_owned(),
            count_in_db: count,
            lambda,
            percentile: poisson::percentile(count, lambda)?,
        });
    }
    entries.sort_by(rank_order);
    Ok(RankedList {
        discipline: discipline.to_owned(),
        entries,
    })
}

/// First and last `k` entries of the ranked list, optionally restricted to a
/// filter set of terms first.
pub fn top_bottom(
    ranked: &RankedList,
    k: usize,
    filter: Option<&BTreeSet<String>>,
) -> Result<(Vec<RankedTerm>, Vec<RankedTerm>), RankError> {
    if k == 0 {
        return Err(RankError::ZeroK);
    }
    let kept: Vec<&RankedTerm> = ranked
        .entries
        .iter()
        .filter(|e| filter.is_none_or(|f| f.contains(&e.term)))
        .collect();
    if kept.len() < 2 * k {
        return Err(RankError::TooFewTerms {
            available: kept.len(),
            needed: 2 * k,
        });
    }
    let top = kept[..k].iter().map(|e| (*e).clone()).collect();
    let bottom = kept[kept.len() - k..].iter().map(|e| (*e).clone()).collect();
    Ok((top, bottom))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{build_model, Document, FieldMode, StopwordList};

    fn model_from(specs: &[(&str, &str, &str)]) -> FrequencyModel {
        let docs: Vec<Document> = specs
            .iter()
            .enumerate()
            .map(|(i, (disc, title, abs))| {
                Document::from_text(&format!("d{i}"), disc, title, abs)
            })
            .collect();
        build_model(&docs, &StopwordList::empty(), FieldMode::Both).unwrap()
    }

    #[test]
    fn concentrated_term_ranks_near_top() {
        // "signal" occurs 10 times in A and nowhere else; 8 disciplines.
        let mut specs = vec![("A", "", "signal signal signal signal signal signal signal signal signal signal noise")];
        for d in ["B", "C", "D", "E", "F", "G", "H"] {
            specs.push((d, "", "noise"));
        }
        let model = model_from(&specs);
        let ranked = rank_terms(&model, "A").unwrap();
        let signal = ranked.entries.iter().find(|e| e.term == "signal").unwrap();
        assert!((signal.lambda - 1.25).abs() < 1e-12);
        assert!(signal.percentile >= 0.99999);
        assert_eq!(ranked.entries[0].term, "signal");
        // "noise" is spread evenly, so it sits below.
        let noise = ranked.entries.iter().find(|e| e.term == "noise").unwrap();
        assert!(noise.percentile < signal.percentile);
    }

    #[test]
    fn even_spread_gives_identical_percentiles() {
        // "common" occurs exactly twice in each of 4 disciplines.
        let specs = vec![
            ("A", "", "common common alpha"),
            ("B", "", "common common beta"),
            ("C", "", "common common gamma"),
            ("D", "", "common common delta"),
        ];
        let model = model_from(&specs);
        let mut percentiles = Vec::new();
        for d in ["A", "B", "C", "D"] {
            let ranked = rank_terms(&model, d).unwrap();
            let e = ranked.entries.iter().find(|e| e.term == "common").unwrap();
            percentiles.push(e.percentile);
        }
        for p in &percentiles[1..] {
            assert_eq!(*p, percentiles[0]);
        }
    }

    #[test]
    fn absent_terms_are_not_ranked() {
        let specs = vec![("A", "", "alpha"), ("B", "", "beta beta")];
        let model = model_from(&specs);
        let ranked = rank_terms(&model, "A").unwrap();
        assert!(ranked.entries.iter().all(|e| e.term != "beta"));
        assert_eq!(ranked.entries.len(), 1);
    }

    #[test]
    fn every_vocabulary_term_appears_once() {
        let specs = vec![("A", "x y z", "x q"), ("B", "", "y r")];
        let model = model_from(&specs);
        let ranked = rank_terms(&model, "A").unwrap();
        let mut terms: Vec<&str> = ranked.entries.iter().map(|e| e.term.as_str()).collect();
        terms.sort();
        assert_eq!(terms, vec!["q", "x", "y", "z"]);
    }

    #[test]
    fn ranking_is_deterministic() {
        let specs = vec![("A", "", "a b c d e f g a b c"), ("B", "", "a b h")];
        let model = model_from(&specs);
        let r1 = rank_terms(&model, "A").unwrap();
        let r2 = rank_terms(&model, "A").unwrap();
        assert_eq!(r1.entries, r2.entries);
    }

    #[test]
    fn top_bottom_slices() {
        let specs = vec![("A", "", "a a a a b b b c c d"), ("B", "", "b c d d d d")];
        let model = model_from(&specs);
        let ranked = rank_terms(&model, "A").unwrap();
        let (top, bottom) = top_bottom(&ranked, 1, None).unwrap();
        assert_eq!(top[0].term, ranked.entries[0].term);
        assert_eq!(bottom[0].term, ranked.entries.last().unwrap().term);

        let filter: BTreeSet<String> = ["a", "d"].iter().map(|s| s.to_string()).collect();
        let (ftop, fbottom) = top_bottom(&ranked, 1, Some(&filter)).unwrap();
        assert_eq!(ftop[0].term, "a");
        assert_eq!(fbottom[0].term, "d");

        match top_bottom(&ranked, 3, Some(&filter)) {
            Err(RankError::TooFewTerms { available: 2, needed: 6 }) => {}
            other => panic!("expected TooFewTerms, got {other:?}"),
        }
    }

    #[test]
    fn unknown_discipline_errors() {
        let specs = vec![("A", "", "a"), ("B", "", "b")];
        let model = model_from(&specs);
        assert!(rank_terms(&model, "Z").is_err());
    }
}
