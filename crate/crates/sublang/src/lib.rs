//! Corpus analytics for specialized vocabularies.
//!
//! The library builds per-discipline term frequency tables from labeled
//! title/abstract records and provides:
//!
//! - Poisson percentile computation ([`poisson`]) and percentile-based term
//!   ranking within a discipline ([`ranking`]);
//! - dictionary coverage coding of terms against specialized headword lists,
//!   with coverage and frequency reports ([`dictcov`]);
//! - usage-based sublanguage measures (M_u, M_delta) and set-overlap
//!   distinctiveness measures ([`measures`]);
//! - leave-one-out classification of documents into disciplines by summed
//!   Poisson percentiles ([`classify`]);
//! - a seeded synthetic corpus generator for reproducible end-to-end runs
//!   ([`synth`]).

pub mod classify;
pub mod corpus;
pub mod dictcov;
pub mod measures;
pub mod poisson;
pub mod ranking;
pub mod synth;

pub use corpus::{Document, FieldMode, FrequencyModel, StopwordList};
pub use poisson::{percentile, pmf};
