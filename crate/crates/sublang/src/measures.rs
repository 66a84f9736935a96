//! Sublanguage measures over human sense annotations and term sets.
//!
//! Annotated occurrences fall into four categories: same/different sense
//! crossed with sublanguage/general usage (SSL, SG, DSL, DG). From the
//! category counts this module computes the sublanguage-usage fraction
//! `M_u`, the top/bottom log-ratio `M_delta`, set-overlap distinctiveness
//! measures, and per-group usage profiles (mean and variance of the
//! category percentages).
//!
//! The annotation file is comma-delimited with columns
//! `discipline,slice,term,category,count` where slice is `top` or `bottom`
//! and category one of `SSL|SG|DSL|DG`. Lines starting with `#` are ignored.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::fs;
use std::path::Path;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum MeasureError {
    #[error("measure undefined: {0}")]
    Undefined(String),
    #[error("discipline {discipline:?} has no {slice} slice annotations")]
    MissingSlice { discipline: String, slice: Slice },
    #[error("discipline {0:?} is not covered by the grouping")]
    UngroupedDiscipline(String),
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

/// Human-assigned sense category for one annotated occurrence.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum UsageCategory {
    Ssl,
    Sg,
    Dsl,
    Dg,
}

impl UsageCategory {
    pub const ALL: [UsageCategory; 4] = [
        UsageCategory::Ssl,
        UsageCategory::Sg,
        UsageCategory::Dsl,
        UsageCategory::Dg,
    ];

    pub fn label(self) -> &'static str {
        match self {
            UsageCategory::Ssl => "SSL",
            UsageCategory::Sg => "SG",
            UsageCategory::Dsl => "DSL",
            UsageCategory::Dg => "DG",
        }
    }

    pub fn parse(s: &str) -> Option<UsageCategory> {
        match s.to_ascii_uppercase().as_str() {
            "SSL" => Some(UsageCategory::Ssl),
            "SG" => Some(UsageCategory::Sg),
            "DSL" => Some(UsageCategory::Dsl),
            "DG" => Some(UsageCategory::Dg),
            _ => None,
        }
    }
}

/// Which end of the percentile ranking a term slice came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Slice {
    Top,
    Bottom,
}

impl fmt::Display for Slice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Slice::Top => write!(f, "top"),
            Slice::Bottom => write!(f, "bottom"),
        }
    }
}

/// SSL/SG/DSL/DG occurrence counts (or percentages) for one slice.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct UsageCounts {
    pub ssl: f64,
    pub sg: f64,
    pub dsl: f64,
    pub dg: f64,
}

impl UsageCounts {
    pub fn new(ssl: f64, sg: f64, dsl: f64, dg: f64) -> UsageCounts {
        UsageCounts { ssl, sg, dsl, dg }
    }

    pub fn total(&self) -> f64 {
        self.ssl + self.sg + self.dsl + self.dg
    }

    pub fn get(&self, category: UsageCategory) -> f64 {
        match category {
            UsageCategory::Ssl => self.ssl,
            UsageCategory::Sg => self.sg,
            UsageCategory::Dsl => self.dsl,
            UsageCategory::Dg => self.dg,
        }
    }

    fn add(&mut self, category: UsageCategory, count: f64) {
        match category {
            UsageCategory::Ssl => self.ssl += count,
            UsageCategory::Sg => self.sg += count,
            UsageCategory::Dsl => self.dsl += count,
            UsageCategory::Dg => self.dg += count,
        }
    }

    /// Category values rescaled to percentages summing to 100.
    pub fn as_percentages(&self) -> Result<UsageCounts, MeasureError> {
        let total = self.total();
        if total <= 0.0 {
            return Err(MeasureError::Undefined(
                "cannot convert zero-total usage counts to percentages".into(),
            ));
        }
        Ok(UsageCounts::new(
            100.0 * self.ssl / total,
            100.0 * self.sg / total,
            100.0 * self.dsl / total,
            100.0 * self.dg / total,
        ))
    }
}

/// Fraction of occurrences used in a sublanguage sense:
/// `(SSL + DSL) / (SSL + SG + DSL + DG)`.
pub fn m_u(counts: &UsageCounts) -> Result<f64, MeasureError> {
    let total = counts.total();
    if total <= 0.0 {
        return Err(MeasureError::Undefined(
            "M_u requires a positive total occurrence count".into(),
        ));
    }
    Ok((counts.ssl + counts.dsl) / total)
}

/// Log-ratio of the top-slice to bottom-slice usage fractions:
/// `ln(mu_top / mu_bottom)`.
pub fn m_delta(mu_top: f64, mu_bottom: f64) -> Result<f64, MeasureError> {
    if mu_top <= 0.0 || mu_bottom <= 0.0 {
        return Err(MeasureError::Undefined(format!(
            "M_delta requires positive M_u values, got top={mu_top}, bottom={mu_bottom}"
        )));
    }
    // Computed as a log difference so that swapping the arguments negates
    // the result exactly.
    Ok(mu_top.ln() - mu_bottom.ln())
}

/// One minus the fraction of sublanguage terms found in the general term
/// set.
pub fn distinctiveness_general(
    sl_terms: &BTreeSet<String>,
    general_terms: &BTreeSet<String>,
) -> Result<f64, MeasureError> {
    distinctiveness_pairwise(sl_terms, general_terms)
}

/// Asymmetric distinctiveness of term set `x` from term set `y`:
/// one minus the fraction of `x` found in `y`.
pub fn distinctiveness_pairwise(
    sl_x: &BTreeSet<String>,
    sl_y: &BTreeSet<String>,
) -> Result<f64, MeasureError> {
    if sl_x.is_empty() {
        return Err(MeasureError::Undefined(
            "distinctiveness requires a non-empty source term set".into(),
        ));
    }
    let overlap = sl_x.intersection(sl_y).count();
    Ok(1.0 - overlap as f64 / sl_x.len() as f64)
}

/// Population vs sample variance in usage profiles.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VarianceKind {
    Population,
    Sample,
}

/// Per-category mean and variance of the percentage values across one group
/// of disciplines, for one slice.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct CategoryStats {
    /// Indexed by `UsageCategory::ALL` order (SSL, SG, DSL, DG).
    pub mean: [f64; 4],
    pub variance: [f64; 4],
}

/// Group-level usage statistics for the top and bottom slices.
#[derive(Debug, Clone, PartialEq)]
pub struct GroupProfile {
    pub disciplines: Vec<String>,
    pub top: CategoryStats,
    pub bottom: CategoryStats,
}

/// Usage statistics per discipline group.
#[derive(Debug, Clone, PartialEq)]
pub struct UsageProfile {
    pub groups: Vec<GroupProfile>,
}

/// Per-discipline top/bottom usage annotations.
pub type Annotations = BTreeMap<String, BTreeMap<Slice, UsageCounts>>;

/// Reads the comma-delimited annotation file described in the module docs,
/// summing counts per (discipline, slice, category).
pub fn read_annotations(path: &Path) -> Result<Annotations, MeasureError> {
    let text = fs::read_to_string(path).map_err(|source| MeasureError::Io {
        path: path.display().to_string(),
        source,
    })?;
    let mut annotations: Annotations = BTreeMap::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let parse_err = |message: String| MeasureError::Parse {
            path: path.display().to_string(),
            line: lineno + 1,
            message,
        };
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        if fields.len() != 5 {
            return Err(parse_err(format!(
                "expected 5 comma-separated fields, found {}",
                fields.len()
            )));
        }
        let discipline = fields[0].to_owned();
        let slice = match fields[1].to_ascii_lowercase().as_str() {
            "top" => Slice::Top,
            "bottom" => Slice::Bottom,
            other => return Err(parse_err(format!("unknown slice {other:?}"))),
        };
        let category = UsageCategory::parse(fields[3])
            .ok_or_else(|| parse_err(format!("unknown category {:?}", fields[3])))?;
        let count: f64 = fields[4]
            .parse()
            .map_err(|_| parse_err(format!("invalid count {:?}", fields[4])))?;
        if count < 0.0 || !count.is_finite() {
            return Err(parse_err(format!("count must be non-negative, got {count}")));
        }
        annotations
            .entry(discipline)
            .or_default()
            .entry(slice)
            .or_default()
            .add(category, count);
    }
    Ok(annotations)
}

/// Aggregates per-discipline annotations into per-group, per-slice category
/// means and variances of the percentage values.
///
/// `grouping` must cover every annotated discipline; every discipline must
/// carry both slices.
pub fn usage_profile(
    annotations: &Annotations,
    grouping: &[Vec<String>],
    variance: VarianceKind,
) -> Result<UsageProfile, MeasureError> {
    let grouped: BTreeSet<&String> = grouping.iter().flatten().collect();
    for discipline in annotations.keys() {
        if !grouped.contains(discipline) {
            return Err(MeasureError::UngroupedDiscipline(discipline.clone()));
        }
    }
    let mut groups = Vec::new();
    for group in grouping {
        let mut top_pcts = Vec::new();
        let mut bottom_pcts = Vec::new();
        for discipline in group {
            let slices = annotations.get(discipline).ok_or_else(|| {
                MeasureError::MissingSlice {
                    discipline: discipline.clone(),
                    slice: Slice::Top,
                }
            })?;
            for (slice, sink) in [(Slice::Top, &mut top_pcts), (Slice::Bottom, &mut bottom_pcts)] {
                let counts = slices.get(&slice).ok_or_else(|| MeasureError::MissingSlice {
                    discipline: discipline.clone(),
                    slice,
                })?;
                sink.push(counts.as_percentages()?);
            }
        }
        groups.push(GroupProfile {
            disciplines: group.clone(),
            top: category_stats(&top_pcts, variance),
            bottom: category_stats(&bottom_pcts, variance),
        });
    }
    Ok(UsageProfile { groups })
}

fn category_stats(percentages: &[UsageCounts], kind: VarianceKind) -> CategoryStats {
    let n = percentages.len() as f64;
    let mut stats = CategoryStats::default();
    if percentages.is_empty() {
        return stats;
    }
    for (i, category) in UsageCategory::ALL.iter().enumerate() {
        let values: Vec<f64> = percentages.iter().map(|p| p.get(*category)).collect();
        let mean = values.iter().sum::<f64>() / n;
        let ss: f64 = values.iter().map(|v| (v - mean) * (v - mean)).sum();
        let var = match kind {
            VarianceKind::Population => ss / n,
            VarianceKind::Sample if percentages.len() > 1 => ss / (n - 1.0),
            VarianceKind::Sample => 0.0,
        };
        stats.mean[i] = mean;
        stats.variance[i] = var;
    }
    stats
}

/// Reads a term-set file: one term per line, `#` comments allowed.
pub fn read_term_set(path: &Path) -> Result<BTreeSet<String>, MeasureError> {
    let text = fs::read_to_string(path).map_err(|source| MeasureError::Io {
        path: path.display().to_string(),
        source,
    })?;
    Ok(text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(|l| l.to_lowercase())
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(terms: &[&str]) -> BTreeSet<String> {
        terms.iter().map(|t| t.to_string()).collect()
    }

    #[test]
    fn m_u_published_values() {
        let sci = UsageCounts::new(61.7, 20.2, 12.1, 6.0);
        assert!((m_u(&sci).unwrap() - 0.738).abs() < 1e-9);
        let hum = UsageCounts::new(9.9, 77.7, 0.0, 12.3);
        assert!((m_u(&hum).unwrap() - 0.099).abs() < 1e-3);
    }

    #[test]
    fn m_u_zero_sl_usage() {
        let counts = UsageCounts::new(0.0, 5.0, 0.0, 7.0);
        assert_eq!(m_u(&counts).unwrap(), 0.0);
    }

    #[test]
    fn m_u_undefined_on_zero_total() {
        assert!(m_u(&UsageCounts::default()).is_err());
    }

    #[test]
    fn m_delta_published_rows() {
        assert!((m_delta(0.953, 0.289).unwrap() - 1.193).abs() < 1e-3);
        assert!((m_delta(0.172, 0.640).unwrap() - (-1.314)).abs() < 1e-3);
        assert_eq!(m_delta(0.42, 0.42).unwrap(), 0.0);
    }

    #[test]
    fn m_delta_rejects_nonpositive() {
        assert!(m_delta(0.0, 0.5).is_err());
        assert!(m_delta(0.5, -1.0).is_err());
    }

    #[test]
    fn distinctiveness_values() {
        // 404 of 1000 terms found in the general dictionary.
        let sl: BTreeSet<String> = (0..1000).map(|i| format!("t{i}")).collect();
        let general: BTreeSet<String> = (0..404).map(|i| format!("t{i}")).collect();
        let d = distinctiveness_general(&sl, &general).unwrap();
        assert!((d - 0.596).abs() < 1e-12);
        assert_eq!(distinctiveness_general(&sl, &sl).unwrap(), 0.0);
        assert_eq!(
            distinctiveness_general(&set(&["a"]), &set(&["b"])).unwrap(),
            1.0
        );
    }

    #[test]
    fn distinctiveness_is_asymmetric() {
        let x = set(&["a", "b", "c", "d"]);
        let y = set(&["c", "d", "e"]);
        assert_eq!(distinctiveness_pairwise(&x, &y).unwrap(), 0.5);
        let d_yx = distinctiveness_pairwise(&y, &x).unwrap();
        assert!((d_yx - 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn distinctiveness_rejects_empty_source() {
        assert!(distinctiveness_pairwise(&BTreeSet::new(), &set(&["a"])).is_err());
    }

    fn annotations_for(entries: &[(&str, Slice, UsageCounts)]) -> Annotations {
        let mut map: Annotations = BTreeMap::new();
        for (disc, slice, counts) in entries {
            map.entry(disc.to_string()).or_default().insert(*slice, *counts);
        }
        map
    }

    #[test]
    fn single_discipline_group_has_zero_variance() {
        let annotations = annotations_for(&[
            ("phys", Slice::Top, UsageCounts::new(60.0, 20.0, 10.0, 10.0)),
            ("phys", Slice::Bottom, UsageCounts::new(10.0, 40.0, 20.0, 30.0)),
        ]);
        let grouping = vec![vec!["phys".to_string()]];
        let profile = usage_profile(&annotations, &grouping, VarianceKind::Population).unwrap();
        assert_eq!(profile.groups[0].top.mean, [60.0, 20.0, 10.0, 10.0]);
        assert_eq!(profile.groups[0].top.variance, [0.0; 4]);
        assert_eq!(profile.groups[0].bottom.mean, [10.0, 40.0, 20.0, 30.0]);
    }

    #[test]
    fn identical_disciplines_have_zero_variance() {
        let counts = UsageCounts::new(25.0, 25.0, 25.0, 25.0);
        let annotations = annotations_for(&[
            ("a", Slice::Top, counts),
            ("a", Slice::Bottom, counts),
            ("b", Slice::Top, counts),
            ("b", Slice::Bottom, counts),
        ]);
        let grouping = vec![vec!["a".to_string(), "b".to_string()]];
        let profile = usage_profile(&annotations, &grouping, VarianceKind::Population).unwrap();
        assert_eq!(profile.groups[0].top.variance, [0.0; 4]);
    }

    #[test]
    fn profile_means_sum_to_hundred() {
        let annotations = annotations_for(&[
            ("a", Slice::Top, UsageCounts::new(3.0, 1.0, 5.0, 1.0)),
            ("a", Slice::Bottom, UsageCounts::new(1.0, 1.0, 1.0, 1.0)),
            ("b", Slice::Top, UsageCounts::new(7.0, 2.0, 0.0, 1.0)),
            ("b", Slice::Bottom, UsageCounts::new(0.0, 9.0, 0.0, 1.0)),
        ]);
        let grouping = vec![vec!["a".to_string(), "b".to_string()]];
        let profile = usage_profile(&annotations, &grouping, VarianceKind::Population).unwrap();
        for stats in [&profile.groups[0].top, &profile.groups[0].bottom] {
            let sum: f64 = stats.mean.iter().sum();
            assert!((sum - 100.0).abs() < 1e-9);
        }
    }

    #[test]
    fn profile_mean_and_variance_by_hand() {
        // Two disciplines with SSL percentages 60 and 40:
        // mean 50, population variance 100, sample variance 200.
        let annotations = annotations_for(&[
            ("a", Slice::Top, UsageCounts::new(60.0, 40.0, 0.0, 0.0)),
            ("a", Slice::Bottom, UsageCounts::new(50.0, 50.0, 0.0, 0.0)),
            ("b", Slice::Top, UsageCounts::new(40.0, 60.0, 0.0, 0.0)),
            ("b", Slice::Bottom, UsageCounts::new(50.0, 50.0, 0.0, 0.0)),
        ]);
        let grouping = vec![vec!["a".to_string(), "b".to_string()]];
        let pop = usage_profile(&annotations, &grouping, VarianceKind::Population).unwrap();
        assert_eq!(pop.groups[0].top.mean[0], 50.0);
        assert_eq!(pop.groups[0].top.variance[0], 100.0);
        let samp = usage_profile(&annotations, &grouping, VarianceKind::Sample).unwrap();
        assert_eq!(samp.groups[0].top.variance[0], 200.0);
    }

    #[test]
    fn profile_errors() {
        let annotations = annotations_for(&[
            ("a", Slice::Top, UsageCounts::new(1.0, 1.0, 1.0, 1.0)),
        ]);
        // Missing bottom slice.
        let grouping = vec![vec!["a".to_string()]];
        assert!(matches!(
            usage_profile(&annotations, &grouping, VarianceKind::Population),
            Err(MeasureError::MissingSlice { .. })
        ));
        // Discipline not covered by the grouping.
        let empty_grouping: Vec<Vec<String>> = vec![];
        assert!(matches!(
            usage_profile(&annotations, &empty_grouping, VarianceKind::Population),
            Err(MeasureError::UngroupedDiscipline(_))
        ));
    }
}
