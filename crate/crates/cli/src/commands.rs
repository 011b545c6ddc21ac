use std::collections::BTreeMap;
use std::fs;
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::Args;
use serde_json::{json, Value};

use scamsift_core::bundle;
use scamsift_core::config::RunConfig;
use scamsift_core::ensemble::VoteMode;
use scamsift_core::eval::{
    corpus_stats, render_corpus_stats, render_rankings, render_tag_table,
};
use scamsift_core::features::OccupationLexicon;
use scamsift_core::pipeline;
use scamsift_core::profile::{
    explode_or_values, load_corpus, write_corpus, LabelPolicy, Profile, SplitRatios,
};
use scamsift_core::real::to_f64;
use scamsift_core::similarity::SimilarityBaseline;

/// Honor SCAMSIFT_THREADS as a cap on worker parallelism.
pub fn init_thread_pool() {
    if let Ok(value) = std::env::var("SCAMSIFT_THREADS") {
        if let Ok(threads) = value.parse::<usize>() {
            let _ = rayon::ThreadPoolBuilder::new()
                .num_threads(threads.max(1))
                .build_global();
        }
    }
}

fn load_caption_sidecar(path: &Path) -> Result<BTreeMap<String, Vec<String>>> {
    let text = fs::read_to_string(path)
        .with_context(|| format!("reading caption sidecar {}", path.display()))?;
    let map: BTreeMap<String, Vec<String>> =
        serde_json::from_str(&text).context("caption sidecar must be {image-id: [captions]}")?;
    Ok(map)
}

/// Resolve an "images" list into a "captions" list via the sidecar (the
/// first, most probable caption per image) and drop the raw image ids.
fn attach_captions(record: &mut Value, sidecar: &BTreeMap<String, Vec<String>>) {
    let Some(obj) = record.as_object_mut() else {
        return;
    };
    let images = obj.remove("images");
    if obj.contains_key("captions") {
        return;
    }
    let Some(Value::Array(images)) = images else {
        return;
    };
    let captions: Vec<String> = images
        .iter()
        .filter_map(Value::as_str)
        .filter_map(|id| sidecar.get(id).and_then(|c| c.first()).cloned())
        .collect();
    if !captions.is_empty() {
        obj.insert("captions".into(), json!(captions));
    }
}

#[derive(Args)]
pub struct IngestArgs {
    /// Raw JSON-lines corpus (may contain 'or'-valued fields).
    #[arg(long)]
    corpus: PathBuf,
    /// Caption sidecar JSON: {image-id: [caption strings]}.
    #[arg(long)]
    captions: Option<PathBuf>,
    /// Canonical corpus output path.
    #[arg(long)]
    out: PathBuf,
    /// Skip malformed lines instead of failing on the first one.
    #[arg(long)]
    lenient: bool,
    /// Cap on the 'or'-value Cartesian product per record.
    #[arg(long, default_value_t = 64)]
    explode_cap: usize,
}

pub fn ingest(args: IngestArgs) -> Result<()> {
    let sidecar = match &args.captions {
        Some(path) => load_caption_sidecar(path)?,
        None => BTreeMap::new(),
    };
    let file = fs::File::open(&args.corpus)
        .with_context(|| format!("opening {}", args.corpus.display()))?;

    let mut profiles: Vec<Profile> = Vec::new();
    let mut skipped = 0usize;
    for (idx, line) in BufReader::new(file).lines().enumerate() {
        let lineno = idx + 1;
        let line = line.context("reading corpus")?;
        if line.trim().is_empty() {
            continue;
        }
        let parsed: Result<Vec<Profile>> = (|| {
            let mut record: Value = serde_json::from_str(&line)
                .map_err(|e| scamsift_core::Error::Parse {
                    line: lineno,
                    message: e.to_string(),
                })?;
            attach_captions(&mut record, &sidecar);
            Ok(explode_or_values(
                &record,
                lineno,
                args.explode_cap,
                LabelPolicy::Required,
            )?)
        })();
        match parsed {
            Ok(variants) => profiles.extend(variants),
            Err(error) if args.lenient => {
                eprintln!("warning: skipping line {lineno}: {error:#}");
                skipped += 1;
            }
            Err(error) => return Err(error),
        }
    }

    write_corpus(&args.out, &profiles)?;
    let scam = profiles.iter().filter(|p| p.is_scam()).count();
    let groups = scamsift_core::profile::variant_groups(&profiles).len();
    let summary = json!({
        "profiles": profiles.len(),
        "scam": scam,
        "real": profiles.len() - scam,
        "variant_groups": groups,
        "skipped_lines": skipped,
    });
    println!("{summary}");
    Ok(())
}

#[derive(Args)]
pub struct StatsArgs {
    #[arg(long)]
    corpus: PathBuf,
    /// Optional JSON report path.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Occupation lexicon override.
    #[arg(long)]
    lexicon: Option<PathBuf>,
}

pub fn stats(args: StatsArgs) -> Result<()> {
    let profiles = load_corpus(&args.corpus, LabelPolicy::Required)?;
    let lexicon = match &args.lexicon {
        Some(path) => OccupationLexicon::load(path)?,
        None => OccupationLexicon::default_lexicon(),
    };
    let stats = corpus_stats(&profiles, &lexicon);
    print!("{}", render_corpus_stats(&stats));
    if let Some(out) = &args.out {
        let mut text = serde_json::to_string_pretty(&stats)?;
        text.push('\n');
        fs::write(out, text).with_context(|| format!("writing {}", out.display()))?;
    }
    Ok(())
}

fn parse_ratios(text: &str) -> Result<SplitRatios> {
    let parts: Vec<f64> = text
        .split(',')
        .map(|p| p.trim().parse::<f64>())
        .collect::<std::result::Result<_, _>>()
        .context("ratios must be three comma-separated numbers, e.g. 0.6,0.2,0.2")?;
    if parts.len() != 3 {
        bail!("ratios must have exactly three parts (train,test,validation)");
    }
    Ok(SplitRatios {
        train: parts[0],
        test: parts[1],
        validation: parts[2],
    })
}

fn parse_mode(text: &str) -> Result<VoteMode> {
    match text {
        "simple" | "simple-vote" => Ok(VoteMode::Simple),
        "weighted" | "weighted-vote" => Ok(VoteMode::Weighted),
        other => bail!("unknown vote mode '{other}' (use simple|weighted)"),
    }
}

#[derive(Args)]
pub struct TrainArgs {
    /// Canonical labeled corpus (from `ingest`).
    #[arg(long)]
    corpus: PathBuf,
    /// Bundle output directory.
    #[arg(long)]
    out: PathBuf,
    /// JSON config file; flags below override its fields.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    /// Train,test,validation split ratios over variant groups.
    #[arg(long)]
    ratios: Option<String>,
    /// simple | weighted.
    #[arg(long)]
    mode: Option<String>,
    /// Occupation lexicon override (JSON mapping category to patterns).
    #[arg(long)]
    lexicon: Option<PathBuf>,
    /// Caption stoplist override (one word per line).
    #[arg(long)]
    stoplist: Option<PathBuf>,
}

fn resolve_config(args: &TrainArgs) -> Result<RunConfig> {
    let mut config = match &args.config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::default(),
    };
    if let Some(seed) = args.seed {
        config.seed = seed;
    }
    if let Some(ratios) = &args.ratios {
        config.ratios = parse_ratios(ratios)?;
    }
    if let Some(mode) = &args.mode {
        config.mode = parse_mode(mode)?;
    }
    if let Some(path) = &args.lexicon {
        config.lexicon_path = Some(path.clone());
    }
    if let Some(path) = &args.stoplist {
        config.stoplist_path = Some(path.clone());
    }
    config.validate()?;
    Ok(config)
}

pub fn train(args: TrainArgs) -> Result<()> {
    let config = resolve_config(&args)?;
    let corpus = load_corpus(&args.corpus, LabelPolicy::Required)?;
    let output = pipeline::train(&corpus, &config)?;
    bundle::save(&args.out, &output.bundle)?;
    bundle::save_split_files(&args.out, &output.split)?;

    let mut cv_lines = String::new();
    for (component, summary) in &output.bundle.cv_train {
        cv_lines.push_str(&format!(
            "  {component:<13} f1 {:.3} +/- {:.3}\n",
            to_f64(summary.mean.f1),
            to_f64(summary.stddev.f1)
        ));
    }
    print!(
        "trained bundle written to {}\n\
         partitions: train {} / test {} / validation {}\n\
         {}-fold CV (training partition):\n{}",
        args.out.display(),
        output.split.train.len(),
        output.split.test.len(),
        output.split.validation.len(),
        config.train_folds,
        cv_lines
    );
    if let Some(cv) = &output.bundle.cv_test_ensemble {
        println!(
            "{}-fold CV of the stacker (test partition): f1 {:.3} +/- {:.3}",
            config.test_folds,
            to_f64(cv.mean.f1),
            to_f64(cv.stddev.f1)
        );
    }
    Ok(())
}

#[derive(Args)]
pub struct EvaluateArgs {
    /// Bundle directory from `train`.
    #[arg(long)]
    bundle: PathBuf,
    /// Labeled held-out corpus (e.g. the bundle's validation split).
    #[arg(long)]
    corpus: PathBuf,
    /// Report output directory.
    #[arg(long)]
    out: PathBuf,
    /// Override the similarity baseline's shingle width.
    #[arg(long)]
    shingle_k: Option<usize>,
    /// Override the similarity baseline's decision threshold.
    #[arg(long)]
    jaccard_threshold: Option<f64>,
}

pub fn evaluate(args: EvaluateArgs) -> Result<()> {
    let mut trained = bundle::load(&args.bundle)?;
    if args.shingle_k.is_some() || args.jaccard_threshold.is_some() {
        let k = args.shingle_k.unwrap_or(trained.similarity.k);
        let threshold = args
            .jaccard_threshold
            .unwrap_or(trained.similarity.threshold);
        trained.similarity = SimilarityBaseline::fit(
            trained.similarity.reference_texts.clone(),
            k,
            threshold,
            trained.similarity.granularity,
        );
    }
    let eval = load_corpus(&args.corpus, LabelPolicy::Required)?;
    let (report, decisions) = pipeline::evaluate(&trained, &eval)?;

    fs::create_dir_all(&args.out)
        .with_context(|| format!("creating {}", args.out.display()))?;
    // echo the bundle's config so the report directory is self-describing
    let mut config_echo = serde_json::to_string_pretty(&trained.config)?;
    config_echo.push('\n');
    fs::write(args.out.join("config.json"), config_echo)?;
    let table = report.render_table();
    fs::write(args.out.join("results_table.txt"), &table)?;
    let mut report_json = serde_json::to_string_pretty(&report)?;
    report_json.push('\n');
    fs::write(args.out.join("report.json"), report_json)?;
    if let Some(csv) = report.roc_csv() {
        fs::write(args.out.join("roc.csv"), csv)?;
    }
    if let Some(tags) = &report.tag_recall {
        fs::write(args.out.join("tag_recall.txt"), render_tag_table(tags))?;
    }
    if let Some(rankings) = &report.rankings {
        fs::write(args.out.join("feature_rankings.txt"), render_rankings(rankings))?;
    }
    let mut lines = String::new();
    for d in &decisions {
        lines.push_str(&serde_json::to_string(&d)?);
        lines.push('\n');
    }
    fs::write(args.out.join("decisions.jsonl"), lines)?;

    print!("{table}");
    println!("reports written to {}", args.out.display());
    Ok(())
}

#[derive(Args)]
pub struct PredictArgs {
    #[arg(long)]
    bundle: PathBuf,
    /// Profiles to score; the label field is optional here.
    #[arg(long)]
    corpus: PathBuf,
    /// Output JSON-lines path (stdout when omitted).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Decision threshold override on the ensemble score.
    #[arg(long)]
    threshold: Option<f64>,
}

pub fn predict(args: PredictArgs) -> Result<()> {
    let trained = bundle::load(&args.bundle)?;
    let profiles = load_corpus(&args.corpus, LabelPolicy::Optional)?;
    let decisions = pipeline::predict(&trained, &profiles, args.threshold);
    let mut lines = String::new();
    for d in &decisions {
        lines.push_str(&serde_json::to_string(&d)?);
        lines.push('\n');
    }
    match &args.out {
        Some(path) => fs::write(path, lines)
            .with_context(|| format!("writing {}", path.display()))?,
        None => std::io::stdout().write_all(lines.as_bytes())?,
    }
    Ok(())
}

#[derive(Args)]
pub struct TuneArgs {
    #[arg(long)]
    bundle: PathBuf,
    /// Labeled tuning corpus.
    #[arg(long)]
    corpus: PathBuf,
    /// Recall-vs-precision weight in F_beta.
    #[arg(long)]
    beta: f64,
    /// Optional JSON output path.
    #[arg(long)]
    out: Option<PathBuf>,
}

pub fn tune(args: TuneArgs) -> Result<()> {
    let trained = bundle::load(&args.bundle)?;
    let profiles = load_corpus(&args.corpus, LabelPolicy::Required)?;
    let report = pipeline::tune(&trained, &profiles, args.beta)?;
    let mut text = serde_json::to_string_pretty(&report)?;
    text.push('\n');
    if let Some(out) = &args.out {
        fs::write(out, &text).with_context(|| format!("writing {}", out.display()))?;
    }
    print!("{text}");
    Ok(())
}
