//! Command-line front end for the sublang corpus analytics library.
//!
//! Commands mirror the analysis pipeline: `synth` generates a reproducible
//! corpus, `ingest` builds frequency tables, `sample`/`rank`/`code` work on
//! one discipline's vocabulary, `measure` computes the sublanguage measures,
//! `classify` runs leave-one-out classification, and `report` renders the
//! summaries of earlier runs.
//!
//! Every command accepts `--config <file.toml>` supplying default paths;
//! command-line flags override the config file. The `SUBLANG_OUT`
//! environment variable overrides the output directory.

use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use sublang::classify::{classify_all, ConfusionMatrix, FallbackPolicy, ScoreOptions};
use sublang::corpus::{self, FieldMode, FrequencyModel, StopwordList};
use sublang::dictcov::{self, CoverageCode, HeadwordList};
use sublang::measures::{self, Slice, UsageCategory, VarianceKind};
use sublang::ranking;
use sublang::synth::{self, SynthConfig};

#[derive(Parser)]
#[command(name = "sublang", version, about = "Sublanguage corpus analytics")]
struct Cli {
    /// TOML config file supplying default paths and options.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ModeArg {
    Title,
    Abstract,
    Both,
}

impl From<ModeArg> for FieldMode {
    fn from(mode: ModeArg) -> FieldMode {
        match mode {
            ModeArg::Title => FieldMode::TitleOnly,
            ModeArg::Abstract => FieldMode::AbstractOnly,
            ModeArg::Both => FieldMode::Both,
        }
    }
}

/// Optional defaults loaded from `--config`.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RunConfig {
    corpus: Option<PathBuf>,
    stopwords: Option<PathBuf>,
    model: Option<PathBuf>,
    annotations: Option<PathBuf>,
    /// Per-discipline specialized headword files.
    headwords: Option<BTreeMap<String, PathBuf>>,
    /// General-dictionary headword file.
    general: Option<PathBuf>,
    mode: Option<String>,
    fallback: Option<String>,
    out: Option<PathBuf>,
    seed: Option<u64>,
}

impl RunConfig {
    fn load(path: Option<&Path>) -> Result<RunConfig> {
        let Some(path) = path else {
            return Ok(RunConfig::default());
        };
        let text = fs::read_to_string(path)
            .with_context(|| format!("failed to read config {}", path.display()))?;
        toml::from_str(&text).with_context(|| format!("invalid config {}", path.display()))
    }

    fn mode(&self) -> Result<Option<FieldMode>> {
        self.mode
            .as_deref()
            .map(|m| match m {
                "title" => Ok(FieldMode::TitleOnly),
                "abstract" => Ok(FieldMode::AbstractOnly),
                "both" => Ok(FieldMode::Both),
                other => bail!("config: unknown mode {other:?}"),
            })
            .transpose()
    }
}

/// Flags shared by commands that need a frequency model.
#[derive(Args, Debug)]
struct ModelArgs {
    /// Serialized model from a previous `ingest` run.
    #[arg(long)]
    model: Option<PathBuf>,
    /// Corpus file (line-delimited JSON records).
    #[arg(long)]
    corpus: Option<PathBuf>,
    /// Stopword file, one token per line.
    #[arg(long)]
    stopwords: Option<PathBuf>,
    /// Fields feeding the frequency tables.
    #[arg(long, value_enum)]
    mode: Option<ModeArg>,
}

impl ModelArgs {
    fn resolve_mode(&self, config: &RunConfig) -> Result<FieldMode> {
        if let Some(mode) = self.mode {
            return Ok(mode.into());
        }
        Ok(config.mode()?.unwrap_or(FieldMode::Both))
    }

    fn load_stopwords(&self, config: &RunConfig) -> Result<StopwordList> {
        match self.stopwords.as_deref().or(config.stopwords.as_deref()) {
            Some(path) => Ok(StopwordList::from_path(path)?),
            None => Ok(StopwordList::empty()),
        }
    }

    fn load_model(&self, config: &RunConfig) -> Result<FrequencyModel> {
        if let Some(path) = self.model.as_deref().or(config.model.as_deref()) {
            return Ok(FrequencyModel::read_json(path)?);
        }
        let corpus_path = self
            .corpus
            .as_deref()
            .or(config.corpus.as_deref())
            .ok_or_else(|| anyhow!("either --model or --corpus is required"))?;
        let documents = corpus::read_documents(corpus_path)?;
        let stopwords = self.load_stopwords(config)?;
        Ok(corpus::build_model(
            &documents,
            &stopwords,
            self.resolve_mode(config)?,
        )?)
    }
}

#[derive(Subcommand)]
enum Command {
    /// Generate a seeded synthetic corpus with planted vocabularies.
    Synth {
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, default_value_t = 8)]
        disciplines: usize,
        #[arg(long, default_value_t = 50)]
        docs_per_discipline: usize,
        /// Corpus file to write.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Build frequency tables and write the serialized model.
    Ingest {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Systematic sample of a discipline's frequency-sorted vocabulary.
    Sample {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long)]
        discipline: String,
        #[arg(short = 'k', long)]
        k: usize,
    },
    /// Rank a discipline's terms by Poisson percentile.
    Rank {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long)]
        discipline: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Code sampled terms against a specialized headword list.
    Code {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long)]
        discipline: String,
        /// Headword file; falls back to the config's per-discipline table.
        #[arg(long)]
        headwords: Option<PathBuf>,
        /// Systematic sample size; whole vocabulary when omitted.
        #[arg(long)]
        sample_size: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Usage measures (M_u, M_delta, profiles) and distinctiveness.
    Measure {
        /// Annotation file: discipline,slice,term,category,count rows.
        #[arg(long)]
        annotations: Option<PathBuf>,
        /// Comma-separated discipline group; repeatable. Ungiven
        /// disciplines form one trailing group.
        #[arg(long = "group")]
        groups: Vec<String>,
        /// Use sample instead of population variance in profiles.
        #[arg(long)]
        sample_variance: bool,
        /// Named term-set files `NAME=PATH`; repeatable.
        #[arg(long = "sl-terms", value_parser = parse_named_path)]
        sl_terms: Vec<(String, PathBuf)>,
        /// General-dictionary term-set file.
        #[arg(long)]
        general: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Leave-one-out classification of every corpus document.
    Classify {
        #[command(flatten)]
        model: ModelArgs,
        /// `unclassified` or `random:<seed>`.
        #[arg(long)]
        fallback: Option<String>,
        /// Weight each term by its in-document occurrence count.
        #[arg(long)]
        token_multiplicity: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Render the summaries written by earlier commands.
    Report {
        /// Directory holding *_summary.json artifacts.
        #[arg(long)]
        dir: Option<PathBuf>,
    },
}

fn parse_named_path(raw: &str) -> Result<(String, PathBuf), String> {
    raw.split_once('=')
        .map(|(name, path)| (name.to_owned(), PathBuf::from(path)))
        .ok_or_else(|| format!("expected NAME=PATH, got {raw:?}"))
}

fn parse_fallback(raw: Option<&str>, config: &RunConfig) -> Result<FallbackPolicy> {
    let raw = match raw.or(config.fallback.as_deref()) {
        Some(raw) => raw,
        None => return Ok(FallbackPolicy::Unclassified),
    };
    if raw == "unclassified" {
        return Ok(FallbackPolicy::Unclassified);
    }
    if let Some(seed) = raw.strip_prefix("random:") {
        let seed: u64 = seed
            .parse()
            .map_err(|_| anyhow!("invalid fallback seed {seed:?}"))?;
        return Ok(FallbackPolicy::Random { seed });
    }
    if raw == "random" {
        if let Some(seed) = config.seed {
            return Ok(FallbackPolicy::Random { seed });
        }
        bail!("fallback `random` requires a seed (use random:<seed> or set seed in the config)");
    }
    bail!("unknown fallback policy {raw:?} (expected unclassified or random:<seed>)")
}

/// Output directory resolution: SUBLANG_OUT env var beats the flag, which
/// beats the config file.
fn out_dir(flag: Option<&Path>, config: &RunConfig) -> Option<PathBuf> {
    if let Ok(env) = std::env::var("SUBLANG_OUT") {
        if !env.is_empty() {
            return Some(PathBuf::from(env));
        }
    }
    flag.map(Path::to_path_buf).or_else(|| config.out.clone())
}

fn write_artifact(dir: &Path, name: &str, contents: &str) -> Result<()> {
    fs::create_dir_all(dir)?;
    let path = dir.join(name);
    fs::write(&path, contents).with_context(|| format!("failed to write {}", path.display()))?;
    Ok(())
}

fn main() {
    if let Err(err) = run() {
        eprintln!("error: {err:#}");
        std::process::exit(1);
    }
}

fn run() -> Result<()> {
    let cli = Cli::parse();
    let config = RunConfig::load(cli.config.as_deref())?;
    match cli.command {
        Command::Synth {
            seed,
            disciplines,
            docs_per_discipline,
            out,
        } => cmd_synth(&config, seed, disciplines, docs_per_discipline, out.as_deref()),
        Command::Ingest { model, out } => cmd_ingest(&config, &model, out.as_deref()),
        Command::Sample {
            model,
            discipline,
            k,
        } => cmd_sample(&config, &model, &discipline, k),
        Command::Rank {
            model,
            discipline,
            out,
        } => cmd_rank(&config, &model, &discipline, out.as_deref()),
        Command::Code {
            model,
            discipline,
            headwords,
            sample_size,
            out,
        } => cmd_code(
            &config,
            &model,
            &discipline,
            headwords.as_deref(),
            sample_size,
            out.as_deref(),
        ),
        Command::Measure {
            annotations,
            groups,
            sample_variance,
            sl_terms,
            general,
            out,
        } => cmd_measure(
            &config,
            annotations.as_deref(),
            &groups,
            sample_variance,
            &sl_terms,
            general.as_deref(),
            out.as_deref(),
        ),
        Command::Classify {
            model,
            fallback,
            token_multiplicity,
            out,
        } => cmd_classify(
            &config,
            &model,
            fallback.as_deref(),
            token_multiplicity,
            out.as_deref(),
        ),
        Command::Report { dir } => cmd_report(&config, dir.as_deref()),
    }
}

fn cmd_synth(
    config: &RunConfig,
    seed: Option<u64>,
    disciplines: usize,
    docs_per_discipline: usize,
    out: Option<&Path>,
) -> Result<()> {
    let synth_config = SynthConfig {
        disciplines,
        docs_per_discipline,
        seed: seed.or(config.seed).unwrap_or(0),
        ..SynthConfig::default()
    };
    let docs = synth::generate(&synth_config);
    let mut lines = String::new();
    for doc in &docs {
        let record = serde_json::json!({
            "id": doc.id,
            "discipline": doc.discipline,
            "title": doc.title_terms.join(" "),
            "abstract": doc.abstract_terms.join(" "),
        });
        lines.push_str(&record.to_string());
        lines.push('\n');
    }
    match out.or(config.corpus.as_deref()) {
        Some(path) => {
            if let Some(parent) = path.parent() {
                if !parent.as_os_str().is_empty() {
                    fs::create_dir_all(parent)?;
                }
            }
            fs::write(path, &lines)?;
            eprintln!("wrote {} documents to {}", docs.len(), path.display());
        }
        None => print!("{lines}"),
    }
    Ok(())
}

#[derive(Serialize, Deserialize)]
struct IngestSummary {
    mode: String,
    stopwords: usize,
    disciplines: Vec<DisciplineStats>,
    total_documents: usize,
    total_tokens: u64,
}

#[derive(Serialize, Deserialize)]
struct DisciplineStats {
    name: String,
    documents: usize,
    tokens: u64,
}

fn cmd_ingest(config: &RunConfig, args: &ModelArgs, out: Option<&Path>) -> Result<()> {
    let corpus_path = args
        .corpus
        .as_deref()
        .or(config.corpus.as_deref())
        .ok_or_else(|| anyhow!("--corpus is required"))?;
    let documents = corpus::read_documents(corpus_path)?;
    let stopwords = args.load_stopwords(config)?;
    let mode = args.resolve_mode(config)?;
    let model = corpus::build_model(&documents, &stopwords, mode)?;

    let summary = IngestSummary {
        mode: mode.to_string(),
        stopwords: stopwords.len(),
        disciplines: model
            .disciplines()
            .iter()
            .map(|d| DisciplineStats {
                name: d.clone(),
                documents: documents.iter().filter(|doc| &doc.discipline == d).count(),
                tokens: model.discipline_tokens(d),
            })
            .collect(),
        total_documents: documents.len(),
        total_tokens: model.total_tokens(),
    };
    print_ingest_summary(&summary);

    if let Some(dir) = out_dir(out, config) {
        fs::create_dir_all(&dir)?;
        model.write_json(&dir.join("model.json"))?;
        write_artifact(
            &dir,
            "ingest_summary.json",
            &serde_json::to_string_pretty(&summary)?,
        )?;
        eprintln!("wrote model.json and ingest_summary.json to {}", dir.display());
    }
    Ok(())
}

fn print_ingest_summary(summary: &IngestSummary) {
    println!("discipline\tdocuments\ttokens");
    for d in &summary.disciplines {
        println!("{}\t{}\t{}", d.name, d.documents, d.tokens);
    }
    println!(
        "combined\t{}\t{}",
        summary.total_documents, summary.total_tokens
    );
}

fn cmd_sample(config: &RunConfig, args: &ModelArgs, discipline: &str, k: usize) -> Result<()> {
    let model = args.load_model(config)?;
    for term in corpus::systematic_sample(&model, discipline, k)? {
        println!("{term}");
    }
    Ok(())
}

fn rank_table(ranked: &ranking::RankedList) -> String {
    let mut table = String::from("term\tcount\tlambda\tpercentile\trank\n");
    for (i, entry) in ranked.entries.iter().enumerate() {
        table.push_str(&format!(
            "{}\t{}\t{:.6}\t{:.10}\t{}\n",
            entry.term,
            entry.count_in_db,
            entry.lambda,
            entry.percentile,
            i + 1
        ));
    }
    table
}

fn cmd_rank(
    config: &RunConfig,
    args: &ModelArgs,
    discipline: &str,
    out: Option<&Path>,
) -> Result<()> {
    let model = args.load_model(config)?;
    let ranked = ranking::rank_terms(&model, discipline)?;
    let table = rank_table(&ranked);
    print!("{table}");
    if let Some(dir) = out_dir(out, config) {
        write_artifact(&dir, &format!("rank_{discipline}.tsv"), &table)?;
    }
    Ok(())
}

#[derive(Serialize, Deserialize)]
struct CoverageSummary {
    discipline: String,
    sample_size: usize,
    codes: Vec<CodeStats>,
}

#[derive(Serialize, Deserialize)]
struct CodeStats {
    code: u8,
    label: String,
    terms: usize,
    percent: f64,
    mean_frequency: Option<f64>,
    pct_change_from_not_in_dict: Option<i64>,
}

fn cmd_code(
    config: &RunConfig,
    args: &ModelArgs,
    discipline: &str,
    headwords: Option<&Path>,
    sample_size: Option<usize>,
    out: Option<&Path>,
) -> Result<()> {
    let model = args.load_model(config)?;
    let headword_path = headwords
        .map(Path::to_path_buf)
        .or_else(|| {
            config
                .headwords
                .as_ref()
                .and_then(|table| table.get(discipline).cloned())
        })
        .ok_or_else(|| anyhow!("--headwords is required (or a config headwords entry)"))?;
    let headwords = HeadwordList::from_path(&headword_path)?;

    let terms: Vec<String> = match sample_size {
        Some(k) => corpus::systematic_sample(&model, discipline, k)?,
        None => model
            .discipline_vocabulary(discipline)?
            .map(|(t, _)| t.to_owned())
            .collect(),
    };
    let sample: Vec<(String, u64)> = terms
        .into_iter()
        .map(|t| {
            let freq = model.count(discipline, &t);
            (t, freq)
        })
        .collect();
    let report = dictcov::coverage_report(&sample, &headwords)?;

    let mut body = String::from("term\tfrequency\tcode\n");
    for (term, freq) in &sample {
        let code = dictcov::code_term(term, &headwords);
        body.push_str(&format!("{term}\t{freq}\t{}\n", code.as_index()));
    }
    body.push('\n');
    body.push_str("code\tlabel\tterms\tpercent\tmean_frequency\tpct_change\n");
    let summary = CoverageSummary {
        discipline: discipline.to_owned(),
        sample_size: sample.len(),
        codes: CoverageCode::ALL
            .iter()
            .map(|code| {
                let i = code.as_index();
                body.push_str(&format!(
                    "{}\t{}\t{}\t{:.1}\t{}\t{}\n",
                    i,
                    code.label(),
                    report.counts[i],
                    report.percentages[i],
                    report.mean_frequency[i]
                        .map(|m| format!("{m:.2}"))
                        .unwrap_or_else(|| "-".into()),
                    report.pct_change_from_not_in_dict[i]
                        .map(|c| format!("{c:+}%"))
                        .unwrap_or_else(|| "-".into()),
                ));
                CodeStats {
                    code: i as u8,
                    label: code.label().to_owned(),
                    terms: report.counts[i],
                    percent: report.percentages[i],
                    mean_frequency: report.mean_frequency[i],
                    pct_change_from_not_in_dict: report.pct_change_from_not_in_dict[i],
                }
            })
            .collect(),
    };
    print!("{body}");
    if let Some(dir) = out_dir(out, config) {
        write_artifact(&dir, &format!("coverage_{discipline}.tsv"), &body)?;
        write_artifact(
            &dir,
            "coverage_summary.json",
            &serde_json::to_string_pretty(&summary)?,
        )?;
    }
    Ok(())
}

#[derive(Serialize, Deserialize)]
struct MeasureSummary {
    rows: Vec<MeasureRow>,
    groups: Vec<GroupSummary>,
    distinctiveness_general: Vec<(String, f64)>,
    distinctiveness_pairwise: Vec<(String, String, f64)>,
}

#[derive(Serialize, Deserialize)]
struct MeasureRow {
    discipline: String,
    mu_top: f64,
    mu_bottom: f64,
    m_delta: f64,
}

#[derive(Serialize, Deserialize)]
struct GroupSummary {
    disciplines: Vec<String>,
    top_mean: Vec<f64>,
    top_var: Vec<f64>,
    bottom_mean: Vec<f64>,
    bottom_var: Vec<f64>,
}

fn cmd_measure(
    config: &RunConfig,
    annotations: Option<&Path>,
    groups: &[String],
    sample_variance: bool,
    sl_terms: &[(String, PathBuf)],
    general: Option<&Path>,
    out: Option<&Path>,
) -> Result<()> {
    let mut summary = MeasureSummary {
        rows: Vec::new(),
        groups: Vec::new(),
        distinctiveness_general: Vec::new(),
        distinctiveness_pairwise: Vec::new(),
    };

    if let Some(path) = annotations.or(config.annotations.as_deref()) {
        let annotations = measures::read_annotations(path)?;

        // Per-discipline M_u / M_delta rows (Table 5 shape).
        println!("discipline\tmu_top\tmu_bottom\tm_delta");
        for (discipline, slices) in &annotations {
            let top = slices
                .get(&Slice::Top)
                .ok_or_else(|| anyhow!("discipline {discipline:?} has no top slice"))?;
            let bottom = slices
                .get(&Slice::Bottom)
                .ok_or_else(|| anyhow!("discipline {discipline:?} has no bottom slice"))?;
            let mu_top = measures::m_u(top)?;
            let mu_bottom = measures::m_u(bottom)?;
            let m_delta = measures::m_delta(mu_top, mu_bottom)?;
            println!("{discipline}\t{mu_top:.3}\t{mu_bottom:.3}\t{m_delta:.3}");
            summary.rows.push(MeasureRow {
                discipline: discipline.clone(),
                mu_top,
                mu_bottom,
                m_delta,
            });
        }

        // Grouped usage profile (Table 4 shape).
        let mut grouping: Vec<Vec<String>> = groups
            .iter()
            .map(|g| g.split(',').map(|s| s.trim().to_owned()).collect())
            .collect();
        let grouped: BTreeSet<String> = grouping.iter().flatten().cloned().collect();
        let rest: Vec<String> = annotations
            .keys()
            .filter(|d| !grouped.contains(*d))
            .cloned()
            .collect();
        if !rest.is_empty() {
            grouping.push(rest);
        }
        let kind = if sample_variance {
            VarianceKind::Sample
        } else {
            VarianceKind::Population
        };
        let profile = measures::usage_profile(&annotations, &grouping, kind)?;
        for group in &profile.groups {
            println!("\ngroup: {}", group.disciplines.join(", "));
            println!("slice\tcategory\tave%\tvar");
            for (slice, stats) in [("top", &group.top), ("bottom", &group.bottom)] {
                for (i, category) in UsageCategory::ALL.iter().enumerate() {
                    println!(
                        "{slice}\t{}\t{:.1}\t{:.1}",
                        category.label(),
                        stats.mean[i],
                        stats.variance[i]
                    );
                }
            }
            summary.groups.push(GroupSummary {
                disciplines: group.disciplines.clone(),
                top_mean: group.top.mean.to_vec(),
                top_var: group.top.variance.to_vec(),
                bottom_mean: group.bottom.mean.to_vec(),
                bottom_var: group.bottom.variance.to_vec(),
            });
        }
    }

    // Distinctiveness over term-set files.
    let mut named_sets: Vec<(String, BTreeSet<String>)> = Vec::new();
    for (name, path) in sl_terms {
        named_sets.push((name.clone(), measures::read_term_set(path)?));
    }
    if let Some(general_path) = general.or(config.general.as_deref()) {
        let general_set = measures::read_term_set(general_path)?;
        if !named_sets.is_empty() {
            println!("\nsublanguage\tD_general");
            for (name, set) in &named_sets {
                let d = measures::distinctiveness_general(set, &general_set)?;
                println!("{name}\t{d:.3}");
                summary.distinctiveness_general.push((name.clone(), d));
            }
        }
    }
    if named_sets.len() > 1 {
        println!("\nfrom\tto\tD_pairwise");
        for (name_x, set_x) in &named_sets {
            for (name_y, set_y) in &named_sets {
                if name_x == name_y {
                    continue;
                }
                let d = measures::distinctiveness_pairwise(set_x, set_y)?;
                println!("{name_x}\t{name_y}\t{d:.3}");
                summary
                    .distinctiveness_pairwise
                    .push((name_x.clone(), name_y.clone(), d));
            }
        }
    }

    if let Some(dir) = out_dir(out, config) {
        write_artifact(
            &dir,
            "measure_summary.json",
            &serde_json::to_string_pretty(&summary)?,
        )?;
    }
    Ok(())
}

#[derive(Serialize, Deserialize)]
struct ClassifySummary {
    mode: String,
    fallback: String,
    token_multiplicity: bool,
    overall_accuracy: f64,
    per_discipline: Vec<DisciplineAccuracy>,
    labels: Vec<String>,
    confusion: Vec<Vec<u64>>,
    fallback_documents: usize,
}

#[derive(Serialize, Deserialize)]
struct DisciplineAccuracy {
    name: String,
    documents: u64,
    accuracy: f64,
}

fn confusion_rows(matrix: &ConfusionMatrix) -> Vec<Vec<u64>> {
    let labels = matrix.labels();
    labels
        .iter()
        .map(|actual| {
            let mut row: Vec<u64> = labels
                .iter()
                .map(|predicted| matrix.count(actual, predicted))
                .collect();
            row.push(matrix.count(actual, sublang::classify::UNCLASSIFIED_LABEL));
            row
        })
        .collect()
}

fn cmd_classify(
    config: &RunConfig,
    args: &ModelArgs,
    fallback: Option<&str>,
    token_multiplicity: bool,
    out: Option<&Path>,
) -> Result<()> {
    let corpus_path = args
        .corpus
        .as_deref()
        .or(config.corpus.as_deref())
        .ok_or_else(|| anyhow!("--corpus is required"))?;
    let documents = corpus::read_documents(corpus_path)?;
    let stopwords = args.load_stopwords(config)?;
    let mode = args.resolve_mode(config)?;
    let model = corpus::build_model(&documents, &stopwords, mode)?;
    let fallback = parse_fallback(fallback, config)?;
    let options = ScoreOptions {
        mode,
        fallback,
        token_multiplicity,
    };
    let (scores, matrix) = classify_all(&model, &documents, &options)?;

    let mut scores_tsv =
        String::from("doc_id\tactual\tpredicted\tusable_terms\tfallback_used\n");
    for score in &scores {
        scores_tsv.push_str(&format!(
            "{}\t{}\t{}\t{}\t{}\n",
            score.doc_id, score.actual, score.predicted, score.usable_terms, score.fallback_used
        ));
    }

    println!("{matrix}");
    println!("discipline\tdocuments\taccuracy");
    let mut per_discipline = Vec::new();
    for (name, accuracy) in matrix.per_discipline_accuracy() {
        let docs = matrix.row_sum(&name);
        println!("{name}\t{docs}\t{:.1}%", accuracy * 100.0);
        per_discipline.push(DisciplineAccuracy {
            name,
            documents: docs,
            accuracy,
        });
    }
    println!(
        "overall\t{}\t{:.1}%",
        matrix.total(),
        matrix.accuracy() * 100.0
    );

    let summary = ClassifySummary {
        mode: mode.to_string(),
        fallback: match fallback {
            FallbackPolicy::Unclassified => "unclassified".into(),
            FallbackPolicy::Random { seed } => format!("random:{seed}"),
        },
        token_multiplicity,
        overall_accuracy: matrix.accuracy(),
        per_discipline,
        labels: matrix.labels().to_vec(),
        confusion: confusion_rows(&matrix),
        fallback_documents: scores.iter().filter(|s| s.fallback_used).count(),
    };
    if let Some(dir) = out_dir(out, config) {
        write_artifact(&dir, "scores.tsv", &scores_tsv)?;
        write_artifact(&dir, "confusion.tsv", &matrix.to_string())?;
        write_artifact(
            &dir,
            "classify_summary.json",
            &serde_json::to_string_pretty(&summary)?,
        )?;
    }
    Ok(())
}

fn cmd_report(config: &RunConfig, dir: Option<&Path>) -> Result<()> {
    let dir = out_dir(dir, config).ok_or_else(|| anyhow!("--dir is required"))?;
    let mut found = false;

    if let Ok(text) = fs::read_to_string(dir.join("ingest_summary.json")) {
        let summary: IngestSummary = serde_json::from_str(&text)?;
        println!("== corpus ({} mode) ==", summary.mode);
        print_ingest_summary(&summary);
        found = true;
    }
    if let Ok(text) = fs::read_to_string(dir.join("coverage_summary.json")) {
        let summary: CoverageSummary = serde_json::from_str(&text)?;
        println!(
            "\n== dictionary coverage: {} ({} terms) ==",
            summary.discipline, summary.sample_size
        );
        println!("code\tlabel\tterms\tpercent\tmean_freq\tchange");
        for c in &summary.codes {
            println!(
                "{}\t{}\t{}\t{:.1}%\t{}\t{}",
                c.code,
                c.label,
                c.terms,
                c.percent,
                c.mean_frequency
                    .map(|m| format!("{m:.2}"))
                    .unwrap_or_else(|| "-".into()),
                c.pct_change_from_not_in_dict
                    .map(|p| format!("{p:+}%"))
                    .unwrap_or_else(|| "-".into())
            );
        }
        found = true;
    }
    if let Ok(text) = fs::read_to_string(dir.join("measure_summary.json")) {
        let summary: MeasureSummary = serde_json::from_str(&text)?;
        if !summary.rows.is_empty() {
            println!("\n== sublanguage measures ==");
            println!("discipline\tmu_top\tmu_bottom\tm_delta");
            for row in &summary.rows {
                println!(
                    "{}\t{:.3}\t{:.3}\t{:.3}",
                    row.discipline, row.mu_top, row.mu_bottom, row.m_delta
                );
            }
        }
        if !summary.distinctiveness_general.is_empty() {
            println!("\nsublanguage\tD_general");
            for (name, d) in &summary.distinctiveness_general {
                println!("{name}\t{d:.3}");
            }
        }
        found = true;
    }
    if let Ok(text) = fs::read_to_string(dir.join("classify_summary.json")) {
        let summary: ClassifySummary = serde_json::from_str(&text)?;
        println!(
            "\n== classification ({} mode, fallback {}) ==",
            summary.mode, summary.fallback
        );
        println!("discipline\tdocuments\taccuracy");
        for d in &summary.per_discipline {
            println!("{}\t{}\t{:.1}%", d.name, d.documents, d.accuracy * 100.0);
        }
        println!("overall accuracy: {:.1}%", summary.overall_accuracy * 100.0);
        found = true;
    }

    if !found {
        bail!("no summary artifacts found in {}", dir.display());
    }
    Ok(())
}
