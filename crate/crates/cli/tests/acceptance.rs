//! Acceptance suite: one test per criterion, each printing a PASS/FAIL
//! line. Run with `cargo test --test acceptance -- --nocapture` to see the
//! lines on success.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::Instant;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use sha2::{Digest, Sha256};

use scamsift_core::classifiers::naive_bayes::{permute_values, NaiveBayes, NaiveBayesParams};
use scamsift_core::classifiers::{LinearSvm, LinearSvmParams, RandomForest, RandomForestParams, RbfSvm, RbfSvmParams};
use scamsift_core::config::RunConfig;
use scamsift_core::eval::{f_beta, metrics, roc_points, ConfusionMatrix};
use scamsift_core::features::demographics::{FieldKind, FieldSpec, FieldValue};
use scamsift_core::pipeline::{self, sweep_thresholds};
use scamsift_core::profile::{
    group_k_folds, load_corpus, split_dataset, Label, LabelPolicy, Profile, SplitRatios,
};
use scamsift_core::similarity::{jaccard, shingle};
use scamsift_core::synthetic::{generate_profiles, raw_corpus_text, SyntheticConfig};

fn verdict(criterion: u32, name: &str, pass: bool, detail: &str) {
    println!(
        "ACCEPTANCE {criterion:>2} ({name}): {} {detail}",
        if pass { "PASS" } else { "FAIL" }
    );
    assert!(pass, "criterion {criterion} ({name}) failed: {detail}");
}

fn scamsift() -> Command {
    Command::new(env!("CARGO_BIN_EXE_scamsift"))
}

fn median(values: &mut [f64]) -> f64 {
    values.sort_by(|a, b| a.partial_cmp(b).unwrap());
    values[values.len() / 2]
}

#[test]
fn acceptance_01_metrics_oracle() {
    let start = Instant::now();
    let m1 = metrics::<f64>(&ConfusionMatrix::new(2834, 78, 40, 1021)).unwrap();
    let m2 = metrics::<f64>(&ConfusionMatrix::new(2872, 499, 2, 600)).unwrap();
    let close = |a: f64, b: f64| (a - b).abs() <= 1e-3;
    let pass = close(m1.precision, 0.962)
        && close(m1.recall, 0.929)
        && close(m1.f1, 0.945)
        && close(m1.accuracy, 0.970)
        && close(m2.precision, 0.997)
        && close(m2.recall, 0.546)
        && close(m2.f1, 0.705)
        && close(m2.accuracy, 0.874)
        && start.elapsed().as_secs_f64() < 1.0;
    verdict(
        1,
        "metrics oracle",
        pass,
        &format!(
            "weighted-vote row ({:.3},{:.3},{:.3},{:.3}), captions row ({:.3},{:.3},{:.3},{:.3}), {:.3}s",
            m1.precision, m1.recall, m1.f1, m1.accuracy,
            m2.precision, m2.recall, m2.f1, m2.accuracy,
            start.elapsed().as_secs_f64()
        ),
    );
}

/// 1,000 profiles: 200 groups of 3 variants plus 400 singletons.
fn grouped_corpus_1000() -> Vec<Profile> {
    let blank = |id: String, group: String, scam: bool| Profile {
        id,
        variant_group: group,
        age: Some(30),
        gender: None,
        ethnicity: None,
        marital_status: None,
        occupation_raw: None,
        country: None,
        latitude: None,
        longitude: None,
        captions: Vec::new(),
        description: None,
        label: Some(if scam { Label::Scam } else { Label::Real }),
        tags: Vec::new(),
    };
    let mut corpus = Vec::new();
    for g in 0..200 {
        for v in 0..3 {
            corpus.push(blank(format!("m{g}#{v}"), format!("m{g}"), true));
        }
    }
    for s in 0..400 {
        corpus.push(blank(format!("s{s}"), format!("s{s}"), s % 3 == 0));
    }
    corpus
}

#[test]
fn acceptance_02_split_fold_integrity() {
    let start = Instant::now();
    let corpus = grouped_corpus_1000();
    let total_groups = 600usize;
    let mut violations = Vec::new();

    for seed in 0..100u64 {
        let split = split_dataset(&corpus, SplitRatios::default(), seed).unwrap();

        let sizes: Vec<usize> = [&split.train, &split.test, &split.validation]
            .iter()
            .map(|part| {
                let mut groups = std::collections::BTreeSet::new();
                for p in part.iter() {
                    groups.insert(p.variant_group.clone());
                }
                groups.len()
            })
            .collect();
        if sizes.iter().sum::<usize>() != total_groups {
            violations.push(format!("seed {seed}: groups not partitioned"));
        }
        let targets = [0.6, 0.2, 0.2];
        for (i, (&size, &ratio)) in sizes.iter().zip(&targets).enumerate() {
            if (size as f64 - ratio * total_groups as f64).abs() > 1.0 {
                violations.push(format!("seed {seed}: partition {i} has {size} groups"));
            }
        }
        let n = split.train.len() + split.test.len() + split.validation.len();
        if n != corpus.len() {
            violations.push(format!("seed {seed}: profile counts do not cover"));
        }
        let mut home: BTreeMap<&str, u8> = BTreeMap::new();
        for (tag, part) in [(0u8, &split.train), (1, &split.test), (2, &split.validation)] {
            for p in part.iter() {
                if *home.entry(p.variant_group.as_str()).or_insert(tag) != tag {
                    violations.push(format!("seed {seed}: group {} straddles split", p.variant_group));
                }
            }
        }

        let folds = group_k_folds(&split.train, 10, seed).unwrap();
        let mut group_fold: BTreeMap<&str, usize> = BTreeMap::new();
        for p in &split.train {
            let f = folds.fold(&p.id);
            if *group_fold.entry(p.variant_group.as_str()).or_insert(f) != f {
                violations.push(format!("seed {seed}: group {} straddles fold", p.variant_group));
            }
        }
    }
    let elapsed = start.elapsed().as_secs_f64();
    let pass = violations.is_empty() && elapsed < 10.0;
    verdict(
        2,
        "split/fold integrity",
        pass,
        &format!("100 seeds, {} violations, {elapsed:.2}s", violations.len()),
    );
}

#[test]
fn acceptance_03_naive_bayes_oracle() {
    let start = Instant::now();
    let fields = vec![FieldSpec {
        name: "gender".into(),
        kind: FieldKind::Categorical,
        offset: 0,
        arity: 2,
    }];
    let rows = vec![
        (vec![FieldValue::Category(0)], Label::Scam),
        (vec![FieldValue::Category(0)], Label::Scam),
        (vec![FieldValue::Category(1)], Label::Real),
        (vec![FieldValue::Category(1)], Label::Real),
    ];
    let nb = NaiveBayes::<f64>::train(&fields, &rows, NaiveBayesParams::default()).unwrap();
    let posterior = nb.posterior_scam(&[FieldValue::Category(0)]);
    let oracle_ok = (posterior - 0.75).abs() < 1e-9;

    // permutation invariance on a richer model
    let fields = vec![
        FieldSpec { name: "age".into(), kind: FieldKind::Numeric, offset: 0, arity: 1 },
        FieldSpec { name: "gender".into(), kind: FieldKind::Categorical, offset: 1, arity: 2 },
        FieldSpec { name: "country".into(), kind: FieldKind::Categorical, offset: 3, arity: 4 },
        FieldSpec { name: "lat".into(), kind: FieldKind::Numeric, offset: 7, arity: 1 },
    ];
    let mut rng = ChaCha20Rng::seed_from_u64(3);
    let rows: Vec<(Vec<FieldValue<f64>>, Label)> = (0..60)
        .map(|i| {
            let scam = i % 2 == 0;
            let age = if scam { rng.gen_range(20.0..35.0) } else { rng.gen_range(35.0..60.0) };
            (
                vec![
                    FieldValue::Numeric(age),
                    FieldValue::Category(rng.gen_range(0..2)),
                    FieldValue::Category(rng.gen_range(0..4)),
                    FieldValue::Numeric(rng.gen_range(-80.0..80.0)),
                ],
                if scam { Label::Scam } else { Label::Real },
            )
        })
        .collect();
    let nb = NaiveBayes::<f64>::train(&fields, &rows, NaiveBayesParams::default()).unwrap();
    let probe = vec![
        FieldValue::Numeric(28.0),
        FieldValue::Category(1),
        FieldValue::Missing,
        FieldValue::Numeric(40.0),
    ];
    let reference = nb.posterior_scam(&probe);
    let mut invariant = true;
    for order in [[3usize, 1, 0, 2], [2, 0, 3, 1], [1, 3, 2, 0], [3, 2, 1, 0]] {
        let permuted = nb.permuted(&order);
        let p = permuted.posterior_scam(&permute_values(&probe, &order));
        if (p - reference).abs() >= 1e-12 {
            invariant = false;
        }
    }
    let elapsed = start.elapsed().as_secs_f64();
    let pass = oracle_ok && invariant && elapsed < 1.0;
    verdict(
        3,
        "Naive Bayes oracle",
        pass,
        &format!("posterior {posterior:.12}, permutation-invariant: {invariant}, {elapsed:.3}s"),
    );
}

#[test]
fn acceptance_04_svm_sanity() {
    let start = Instant::now();
    let dense = |values: &[f64]| -> Vec<(u32, f64)> {
        values.iter().enumerate().map(|(i, &v)| (i as u32, v)).collect()
    };

    // margin-1 separable set of 20 points in 2d
    let mut rows = Vec::new();
    let mut labels = Vec::new();
    for i in 0..10 {
        rows.push(dense(&[1.0 + 0.2 * i as f64, 0.3 * i as f64]));
        labels.push(true);
        rows.push(dense(&[-1.0 - 0.2 * i as f64, 0.3 * i as f64]));
        labels.push(false);
    }
    let linear = LinearSvm::train(&rows, &labels, 2, LinearSvmParams::default(), 7).unwrap();
    let linear_correct = rows
        .iter()
        .zip(&labels)
        .filter(|(x, &y)| (linear.decision(x) > 0.0) == y)
        .count();

    let monotone = linear
        .objective_history
        .windows(2)
        .all(|w| w[1] <= w[0] + 1e-6);

    // 200-point concentric rings, linearly inseparable
    let mut ring_rows = Vec::new();
    let mut ring_labels = Vec::new();
    for i in 0..200 {
        let angle = std::f64::consts::TAU * i as f64 / 200.0;
        let radius = if i % 2 == 0 { 1.0 } else { 3.0 };
        ring_rows.push(dense(&[radius * angle.cos(), radius * angle.sin()]));
        ring_labels.push(i % 2 != 0);
    }
    let rbf = RbfSvm::train(
        &ring_rows,
        &ring_labels,
        2,
        RbfSvmParams {
            c: 10.0,
            gamma: Some(0.5),
            ..Default::default()
        },
        42,
    )
    .unwrap();
    let rbf_correct = ring_rows
        .iter()
        .zip(&ring_labels)
        .filter(|(x, &y)| (rbf.decision(x) > 0.0) == y)
        .count();

    let elapsed = start.elapsed().as_secs_f64();
    let pass = linear_correct == 20 && monotone && rbf_correct >= 190 && elapsed < 30.0;
    verdict(
        4,
        "SVM sanity",
        pass,
        &format!(
            "linear {linear_correct}/20, objective monotone: {monotone}, rbf {rbf_correct}/200, {elapsed:.2}s"
        ),
    );
}

#[test]
fn acceptance_05_shingling_oracle() {
    let start = Instant::now();
    let mut rng = ChaCha20Rng::seed_from_u64(11);
    let alphabet: Vec<char> = "abcdef ghij".chars().collect();
    let mut mismatches = 0usize;
    for pair in 0..200 {
        let k = [3usize, 5, 8][pair % 3];
        let mut text = |max_len: usize| -> String {
            let len = rng.gen_range(0..=max_len);
            (0..len).map(|_| alphabet[rng.gen_range(0..alphabet.len())]).collect()
        };
        let a = text(100);
        let b = text(100);
        let fast: f64 = jaccard(&shingle(&a, k), &shingle(&b, k)).unwrap();
        let brute = brute_force_jaccard(&a, &b, k);
        if fast != brute {
            mismatches += 1;
        }
    }
    let elapsed = start.elapsed().as_secs_f64();
    let pass = mismatches == 0 && elapsed < 5.0;
    verdict(
        5,
        "shingling oracle",
        pass,
        &format!("200 pairs, {mismatches} mismatches, {elapsed:.2}s"),
    );
}

fn brute_force_jaccard(a: &str, b: &str, k: usize) -> f64 {
    fn subs(text: &str, k: usize) -> Vec<String> {
        let mut normalized = String::new();
        let mut space = false;
        for ch in text.chars() {
            if ch.is_whitespace() {
                space = !normalized.is_empty();
            } else {
                if space {
                    normalized.push(' ');
                    space = false;
                }
                normalized.extend(ch.to_lowercase());
            }
        }
        let chars: Vec<char> = normalized.chars().collect();
        let mut all = Vec::new();
        if chars.len() >= k {
            for start in 0..=(chars.len() - k) {
                all.push(chars[start..start + k].iter().collect::<String>());
            }
        }
        all.sort();
        all.dedup();
        all
    }
    let sa = subs(a, k);
    let sb = subs(b, k);
    if sa.is_empty() && sb.is_empty() {
        return 0.0;
    }
    let mut intersection = 0;
    for x in &sa {
        if sb.iter().any(|y| y == x) {
            intersection += 1;
        }
    }
    intersection as f64 / (sa.len() + sb.len() - intersection) as f64
}

fn f1_of(report: &scamsift_core::EvaluationReport, name: &str) -> f64 {
    report
        .rows
        .iter()
        .find(|r| r.name == name)
        .unwrap_or_else(|| panic!("missing row {name}"))
        .metrics
        .f1
}

#[test]
fn acceptance_06_end_to_end_synthetic() {
    let corpus_cfg = |seed: u64| SyntheticConfig {
        records: 2000,
        seed: 7000 + seed,
        ..Default::default()
    };

    // seed 0 runs through the real CLI: ingest -> train -> evaluate
    let dir = tempfile::tempdir().unwrap();
    let raw = dir.path().join("raw.jsonl");
    fs::write(&raw, raw_corpus_text(&corpus_cfg(0))).unwrap();
    let corpus = dir.path().join("corpus.jsonl");
    let bundle = dir.path().join("bundle");
    let reports = dir.path().join("reports");

    let clock = Instant::now();
    let ok = scamsift()
        .args(["ingest", "--corpus", raw.to_str().unwrap(), "--out", corpus.to_str().unwrap()])
        .status()
        .unwrap()
        .success()
        && scamsift()
            .args([
                "train",
                "--corpus",
                corpus.to_str().unwrap(),
                "--out",
                bundle.to_str().unwrap(),
                "--seed",
                "0",
            ])
            .status()
            .unwrap()
            .success()
        && scamsift()
            .args([
                "evaluate",
                "--bundle",
                bundle.to_str().unwrap(),
                "--corpus",
                bundle.join("splits/validation.jsonl").to_str().unwrap(),
                "--out",
                reports.to_str().unwrap(),
            ])
            .status()
            .unwrap()
            .success();
    let pipeline_seconds = clock.elapsed().as_secs_f64();
    assert!(ok, "CLI pipeline failed");

    // remaining seeds through the library (same code path)
    let mut per_model: BTreeMap<&str, Vec<f64>> = BTreeMap::new();
    for seed in 0..10u64 {
        let profiles = generate_profiles(&corpus_cfg(seed)).unwrap();
        let config = RunConfig {
            seed,
            ..RunConfig::default()
        };
        let out = pipeline::train(&profiles, &config).unwrap();
        let (report, _) = pipeline::evaluate(&out.bundle, &out.split.validation).unwrap();
        for name in ["demographics", "captions", "description", "simple-vote", "single", "weighted-vote"] {
            per_model.entry(name).or_default().push(f1_of(&report, name));
        }
    }
    let mut med = |name: &str| median(per_model.get_mut(name).unwrap());
    let weighted = med("weighted-vote");
    let simple = med("simple-vote");
    let demographics = med("demographics");
    let captions = med("captions");
    let description = med("description");

    let pass = pipeline_seconds < 120.0
        && weighted >= demographics
        && weighted >= captions
        && weighted >= description
        && weighted >= simple - 0.01;
    verdict(
        6,
        "end-to-end synthetic",
        pass,
        &format!(
            "pipeline {pipeline_seconds:.1}s; median F1 over 10 seeds: M {demographics:.3} C {captions:.3} S {description:.3} simple {simple:.3} weighted {weighted:.3}"
        ),
    );
}

#[test]
fn acceptance_07_missing_section_degradation() {
    let start = Instant::now();
    let mut failures = Vec::new();
    for section in ["demographics", "captions", "descriptions"] {
        let mut profiles = generate_profiles(&SyntheticConfig {
            records: 600,
            seed: 51,
            missing_section_rate: 0.2,
            ..Default::default()
        })
        .unwrap();
        for p in &mut profiles {
            match section {
                "demographics" => {
                    p.age = None;
                    p.gender = None;
                    p.ethnicity = None;
                    p.marital_status = None;
                    p.occupation_raw = None;
                    p.country = None;
                    p.latitude = None;
                    p.longitude = None;
                }
                "captions" => p.captions.clear(),
                _ => p.description = None,
            }
        }
        let mut config = RunConfig {
            seed: 51,
            train_folds: 3,
            test_folds: 3,
            ..RunConfig::default()
        };
        config.demographics.rf.n_trees = 50;
        let out = pipeline::train(&profiles, &config).unwrap();
        let decisions = pipeline::predict(&out.bundle, &out.split.validation, None);
        if decisions.len() != out.split.validation.len() {
            failures.push(format!("{section}: missing decisions"));
        }
        let base_rate = match section {
            "demographics" => out.bundle.demographics.model.base_rate,
            "captions" => out.bundle.captions.base_rate,
            _ => out.bundle.descriptions.base_rate,
        };
        for d in &decisions {
            let (informed, p) = match section {
                "demographics" => (d.informed_m, d.p_m),
                "captions" => (d.informed_c, d.p_c),
                _ => (d.informed_s, d.p_s),
            };
            if informed || (p - base_rate).abs() > 1e-12 {
                failures.push(format!("{section}: component did not fall back to base rate"));
                break;
            }
        }
        let (report, _) = pipeline::evaluate(&out.bundle, &out.split.validation).unwrap();
        let n = out.split.validation.len() as f64;
        let scam = out.split.validation.iter().filter(|p| p.is_scam()).count() as f64;
        let majority = (n - scam).max(scam) / n;
        let accuracy = report.rows.last().unwrap().metrics.accuracy;
        if accuracy < majority - 1e-9 {
            failures.push(format!("{section}: accuracy {accuracy:.3} < majority {majority:.3}"));
        }
    }
    let elapsed = start.elapsed().as_secs_f64();
    let pass = failures.is_empty() && elapsed < 60.0;
    verdict(
        7,
        "missing-section degradation",
        pass,
        &format!("3 ablations, {:?}, {elapsed:.1}s", failures),
    );
}

#[test]
fn acceptance_08_f_beta_behavior() {
    let start = Instant::now();
    let m = metrics::<f64>(&ConfusionMatrix::new(2834, 78, 40, 1021)).unwrap();
    let identity = (f_beta(m.precision, m.recall, 1.0).unwrap() - m.f1).abs() < 1e-12;
    let to_precision = (f_beta(m.precision, m.recall, 0.01).unwrap() - m.precision).abs() < 1e-3;
    let to_recall = (f_beta(m.precision, m.recall, 100.0).unwrap() - m.recall).abs() < 1e-3;

    // symmetric construction: class scores mirrored around 0.5 with a small
    // mirrored overlap, so the F1 optimum sits at the central gap
    let mut scored: Vec<(f64, bool)> = Vec::new();
    for i in 0..50 {
        let offset = 0.004 * i as f64;
        scored.push((0.52 + offset, true));
        scored.push((0.48 - offset, false));
    }
    for j in 0..5 {
        let offset = 0.01 * j as f64;
        scored.push((0.41 + offset, true)); // low-scoring scam outliers
        scored.push((0.59 - offset, false)); // high-scoring real outliers
    }
    let symmetric = sweep_thresholds(&scored, 1.0).unwrap();
    let near_half = (symmetric.threshold - 0.5).abs() <= 0.1;

    // monotone consequences on the synthetic corpus
    let profiles = generate_profiles(&SyntheticConfig {
        records: 600,
        seed: 77,
        ..Default::default()
    })
    .unwrap();
    let mut config = RunConfig {
        seed: 77,
        train_folds: 3,
        test_folds: 3,
        ..RunConfig::default()
    };
    config.demographics.rf.n_trees = 50;
    let out = pipeline::train(&profiles, &config).unwrap();
    let low = pipeline::tune(&out.bundle, &out.split.validation, 0.1).unwrap();
    let mid = pipeline::tune(&out.bundle, &out.split.validation, 1.0).unwrap();
    let high = pipeline::tune(&out.bundle, &out.split.validation, 10.0).unwrap();
    let monotone = high.recall >= mid.recall && low.precision >= mid.precision;

    let elapsed = start.elapsed().as_secs_f64();
    let pass = identity && to_precision && to_recall && near_half && monotone && elapsed < 10.0;
    verdict(
        8,
        "F_beta behavior",
        pass,
        &format!(
            "identity {identity}, beta->0 {to_precision}, beta->inf {to_recall}, symmetric threshold {:.3}, recall {:.3}<={:.3}, precision {:.3}<={:.3}, {elapsed:.1}s",
            symmetric.threshold, mid.recall, high.recall, mid.precision, low.precision
        ),
    );
}

#[test]
fn acceptance_09_roc_properties() {
    let start = Instant::now();
    let scores = vec![0.9, 0.8, 0.7, 0.3, 0.2, 0.1];
    let labels = vec![true, true, true, false, false, false];
    let (_, auc_perfect) = roc_points(&scores, &labels).unwrap();

    let constant = vec![0.4f64; 50];
    let const_labels: Vec<bool> = (0..50).map(|i| i % 2 == 0).collect();
    let (_, auc_constant) = roc_points(&constant, &const_labels).unwrap();

    let mut rng = ChaCha20Rng::seed_from_u64(2024);
    let shuffled_scores: Vec<f64> = (0..2000).map(|_| rng.gen_range(0.0..1.0)).collect();
    let mut shuffled_labels: Vec<bool> = (0..2000).map(|i| i % 2 == 0).collect();
    shuffled_labels.shuffle(&mut rng);
    let (_, auc_permuted) = roc_points(&shuffled_scores, &shuffled_labels).unwrap();

    let elapsed = start.elapsed().as_secs_f64();
    let pass = auc_perfect == 1.0
        && auc_constant == 0.5
        && (0.45..=0.55).contains(&auc_permuted)
        && elapsed < 5.0;
    verdict(
        9,
        "ROC properties",
        pass,
        &format!("perfect {auc_perfect}, constant {auc_constant}, permuted {auc_permuted:.3}, {elapsed:.2}s"),
    );
}

#[test]
fn acceptance_10_feature_importance_planting() {
    let start = Instant::now();
    let mut wins = 0;
    for seed in 0..20u64 {
        let mut rng = ChaCha20Rng::seed_from_u64(4000 + seed);
        let mut rows = Vec::new();
        let mut labels = Vec::new();
        for _ in 0..200 {
            let scam: bool = rng.gen_bool(0.5);
            let informative = if scam {
                rng.gen_range(0.3..1.0)
            } else {
                rng.gen_range(-1.0..0.1)
            };
            let mut row = vec![informative];
            for _ in 0..5 {
                row.push(rng.gen_range(-1.0..1.0));
            }
            rows.push(row);
            labels.push(scam);
        }
        let forest = RandomForest::train(
            &rows,
            &labels,
            RandomForestParams {
                n_trees: 50,
                ..Default::default()
            },
            seed,
        )
        .unwrap();
        let top = forest
            .importance()
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.partial_cmp(b.1).unwrap())
            .unwrap()
            .0;
        if top == 0 {
            wins += 1;
        }
    }
    let elapsed = start.elapsed().as_secs_f64();
    let pass = wins >= 18 && elapsed < 30.0;
    verdict(
        10,
        "feature-importance planting",
        pass,
        &format!("planted feature ranked #1 in {wins}/20 seeds, {elapsed:.1}s"),
    );
}

fn dir_hashes(dir: &Path) -> BTreeMap<String, String> {
    let mut hashes = BTreeMap::new();
    let mut stack = vec![dir.to_path_buf()];
    while let Some(current) = stack.pop() {
        for entry in fs::read_dir(&current).unwrap() {
            let path = entry.unwrap().path();
            if path.is_dir() {
                stack.push(path);
            } else {
                let rel = path.strip_prefix(dir).unwrap().to_string_lossy().to_string();
                let bytes = fs::read(&path).unwrap();
                hashes.insert(rel, hex::encode(Sha256::digest(&bytes)));
            }
        }
    }
    hashes
}

#[test]
fn acceptance_11_reproducibility() {
    let start = Instant::now();
    let dir = tempfile::tempdir().unwrap();
    let raw = dir.path().join("raw.jsonl");
    fs::write(
        &raw,
        raw_corpus_text(&SyntheticConfig {
            records: 500,
            seed: 99,
            ..Default::default()
        }),
    )
    .unwrap();
    let corpus = dir.path().join("corpus.jsonl");
    assert!(scamsift()
        .args(["ingest", "--corpus", raw.to_str().unwrap(), "--out", corpus.to_str().unwrap()])
        .status()
        .unwrap()
        .success());
    let config = dir.path().join("config.json");
    fs::write(
        &config,
        r#"{"seed": 9, "demographics": {"rf": {"n_trees": 50}}, "train_folds": 5, "test_folds": 3}"#,
    )
    .unwrap();

    let mut bundles = Vec::new();
    for run in 0..2 {
        let out_dir = dir.path().join(format!("bundle{run}"));
        assert!(scamsift()
            .args([
                "train",
                "--corpus",
                corpus.to_str().unwrap(),
                "--out",
                out_dir.to_str().unwrap(),
                "--config",
                config.to_str().unwrap(),
            ])
            .status()
            .unwrap()
            .success());
        bundles.push(dir_hashes(&out_dir));
    }
    let identical = bundles[0] == bundles[1];
    let elapsed = start.elapsed().as_secs_f64();
    let pass = identical && elapsed < 120.0;
    verdict(
        11,
        "reproducibility",
        pass,
        &format!(
            "{} files hashed, identical: {identical}, {elapsed:.1}s",
            bundles[0].len()
        ),
    );
}

#[test]
fn acceptance_12_optional_corpus_tier() {
    let Ok(corpus_path) = std::env::var("SCAMSIFT_CORPUS") else {
        println!("ACCEPTANCE 12 (corpus tier): SKIP (set SCAMSIFT_CORPUS to an ingested corpus to enable)");
        return;
    };
    let profiles = load_corpus(PathBuf::from(&corpus_path), LabelPolicy::Required).unwrap();
    let config = RunConfig {
        seed: 0,
        ..RunConfig::default()
    };
    let out = pipeline::train(&profiles, &config).unwrap();
    let (report, _) = pipeline::evaluate(&out.bundle, &out.split.validation).unwrap();
    let row = report
        .rows
        .iter()
        .find(|r| r.name == "weighted-vote")
        .expect("weighted-vote row");
    let f1 = row.metrics.f1;
    let accuracy = row.metrics.accuracy;
    let pass = (0.92..=0.97).contains(&f1) && accuracy >= 0.96;
    verdict(
        12,
        "corpus tier",
        pass,
        &format!("weighted-vote F1 {f1:.3} (target [0.92, 0.97]), accuracy {accuracy:.3} (target >= 0.96)"),
    );
}
