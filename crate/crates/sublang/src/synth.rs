//! Seeded synthetic corpus generator.
//!
//! Produces a labeled corpus with planted per-discipline signature
//! vocabularies over a shared Zipfian background, so classification and
//! leave-one-out behavior can be exercised reproducibly without the original
//! source abstracts. The same seed always yields the same corpus.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::corpus::Document;

#[derive(Debug, Clone)]
pub struct SynthConfig {
    pub disciplines: usize,
    pub docs_per_discipline: usize,
    /// Distinct signature terms planted per discipline.
    pub signature_vocab: usize,
    /// Signature terms drawn into each document.
    pub signature_terms_per_doc: usize,
    /// Mean occurrences per drawn signature term (Poisson rate).
    pub signature_rate: f64,
    /// Shared background vocabulary size.
    pub background_vocab: usize,
    /// Zipf exponent for background term draws.
    pub zipf_exponent: f64,
    /// Background tokens per abstract.
    pub background_tokens_per_doc: usize,
    pub seed: u64,
}

impl Default for SynthConfig {
    fn default() -> SynthConfig {
        SynthConfig {
            disciplines: 8,
            docs_per_discipline: 50,
            signature_vocab: 30,
            signature_terms_per_doc: 5,
            signature_rate: 3.0,
            background_vocab: 200,
            zipf_exponent: 1.1,
            background_tokens_per_doc: 30,
            seed: 0,
        }
    }
}

/// Generates the corpus described by `config`.
pub fn generate(config: &SynthConfig) -> Vec<Document> {
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let zipf = ZipfSampler::new(config.background_vocab, config.zipf_exponent);
    let mut docs = Vec::with_capacity(config.disciplines * config.docs_per_discipline);
    for d in 0..config.disciplines {
        let discipline = format!("disc{d}");
        for n in 0..config.docs_per_discipline {
            let mut title_terms = Vec::new();
            let mut abstract_terms = Vec::new();

            // Two signature terms anchor the title, with two background
            // tokens alongside.
            for _ in 0..2 {
                let s = rng.random_range(0..config.signature_vocab);
                title_terms.push(format!("sig{d}x{s}"));
            }
            for _ in 0..2 {
                title_terms.push(format!("bg{}", zipf.sample(&mut rng)));
            }

            for _ in 0..config.signature_terms_per_doc {
                let s = rng.random_range(0..config.signature_vocab);
                let count = sample_poisson(&mut rng, config.signature_rate);
                for _ in 0..count {
                    abstract_terms.push(format!("sig{d}x{s}"));
                }
            }
            for _ in 0..config.background_tokens_per_doc {
                abstract_terms.push(format!("bg{}", zipf.sample(&mut rng)));
            }

            docs.push(Document {
                id: format!("disc{d}-{n:03}"),
                discipline: discipline.clone(),
                title_terms,
                abstract_terms,
            });
        }
    }
    docs
}

/// Knuth's method; fine for the small rates used here.
fn sample_poisson(rng: &mut impl Rng, lambda: f64) -> u64 {
    let threshold = (-lambda).exp();
    let mut k = 0u64;
    let mut p = 1.0;
    loop {
        p *= rng.random::<f64>();
        if p <= threshold {
            return k;
        }
        k += 1;
    }
}

/// Inverse-CDF Zipf sampler over ranks `0..n` with weight `1/(rank+1)^s`.
struct ZipfSampler {
    cumulative: Vec<f64>,
}

impl ZipfSampler {
    fn new(n: usize, exponent: f64) -> ZipfSampler {
        let mut cumulative = Vec::with_capacity(n);
        let mut total = 0.0;
        for rank in 0..n {
            total += 1.0 / ((rank + 1) as f64).powf(exponent);
            cumulative.push(total);
        }
        ZipfSampler { cumulative }
    }

    fn sample(&self, rng: &mut impl Rng) -> usize {
        let total = *self.cumulative.last().expect("non-empty vocabulary");
        let u = rng.random::<f64>() * total;
        self.cumulative.partition_point(|&c| c < u)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{build_model, FieldMode, StopwordList};

    #[test]
    fn generation_is_deterministic() {
        let config = SynthConfig::default();
        let a = generate(&config);
        let b = generate(&config);
        assert_eq!(a, b);
    }

    #[test]
    fn different_seeds_differ() {
        let a = generate(&SynthConfig::default());
        let b = generate(&SynthConfig {
            seed: 1,
            ..SynthConfig::default()
        });
        assert_ne!(a, b);
    }

    #[test]
    fn shape_and_labels() {
        let config = SynthConfig::default();
        let docs = generate(&config);
        assert_eq!(docs.len(), 400);
        let model = build_model(&docs, &StopwordList::empty(), FieldMode::Both).unwrap();
        assert_eq!(model.disciplines().len(), 8);
        for d in model.disciplines() {
            assert_eq!(docs.iter().filter(|doc| &doc.discipline == d).count(), 50);
        }
    }

    #[test]
    fn signature_terms_stay_in_their_discipline() {
        let docs = generate(&SynthConfig::default());
        let model = build_model(&docs, &StopwordList::empty(), FieldMode::Both).unwrap();
        // A disc0 signature term never occurs in disc1's table.
        for (term, _) in model.discipline_vocabulary("disc1").unwrap() {
            assert!(!term.starts_with("sig0x"), "leaked term {term}");
        }
    }

    #[test]
    fn zipf_sampler_prefers_low_ranks() {
        let sampler = ZipfSampler::new(100, 1.1);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let mut low = 0;
        for _ in 0..10_000 {
            if sampler.sample(&mut rng) < 10 {
                low += 1;
            }
        }
        assert!(low > 4_000, "only {low} of 10000 draws in the top 10 ranks");
    }
}
