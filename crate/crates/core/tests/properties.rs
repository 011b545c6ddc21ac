//! Property tests for the spec-level invariants: partition/grouping of
//! splits and folds, parse/serialize identity, Jaccard against a brute-force
//! oracle, caption-encoding invariances, vote symmetry and calibration
//! monotonicity.

use std::collections::{BTreeMap, BTreeSet};

use proptest::prelude::*;

use scamsift_core::classifiers::{ComponentPrediction, PlattScaler};
use scamsift_core::ensemble::simple_vote;
use scamsift_core::features::{CaptionEncoder, Section};
use scamsift_core::profile::{
    group_k_folds, parse_profile, split_dataset, Gender, Label, Profile, SplitRatios,
};
use scamsift_core::similarity::{jaccard, shingle};

fn profile_strategy() -> impl Strategy<Value = Profile> {
    (
        "[a-z0-9]{1,8}",
        proptest::option::of(18u32..86),
        proptest::option::of(prop_oneof![Just(Gender::Male), Just(Gender::Female)]),
        proptest::option::of("[a-zA-Z ]{1,12}"),
        proptest::option::of((-90.0f64..90.0, -180.0f64..180.0)),
        proptest::collection::vec("[a-z ]{1,30}", 0..3),
        proptest::option::of("[a-zA-Z ,.!']{1,60}"),
        any::<bool>(),
        proptest::collection::vec("[A-Za-z ]{1,20}", 0..3),
    )
        .prop_map(
            |(id, age, gender, occupation, coords, captions, description, scam, tags)| Profile {
                variant_group: id.clone(),
                id,
                age,
                gender,
                ethnicity: None,
                marital_status: None,
                occupation_raw: occupation.map(|s| s.trim().to_string()).filter(|s| !s.is_empty()),
                country: None,
                latitude: coords.map(|(lat, _)| lat),
                longitude: coords.map(|(_, lon)| lon),
                captions: captions
                    .into_iter()
                    .map(|c| c.trim().to_string())
                    .filter(|c| !c.is_empty())
                    .collect(),
                description: description.map(|s| s.trim().to_string()).filter(|s| !s.is_empty()),
                label: Some(if scam { Label::Scam } else { Label::Real }),
                tags: tags
                    .into_iter()
                    .map(|t| t.trim().to_string())
                    .filter(|t| !t.is_empty())
                    .collect(),
            },
        )
}

/// Corpus with a controlled variant-group structure: `sizes[i]` variants in
/// group i.
fn grouped_corpus(sizes: Vec<u8>) -> Vec<Profile> {
    let mut corpus = Vec::new();
    for (g, &size) in sizes.iter().enumerate() {
        for v in 0..size.max(1) {
            let mut p = Profile {
                id: format!("g{g}v{v}"),
                variant_group: format!("g{g}"),
                age: Some(20 + (g as u32 % 50)),
                gender: None,
                ethnicity: None,
                marital_status: None,
                occupation_raw: None,
                country: None,
                latitude: None,
                longitude: None,
                captions: Vec::new(),
                description: None,
                label: Some(if g % 3 == 0 { Label::Scam } else { Label::Real }),
                tags: Vec::new(),
            };
            if size == 1 {
                p.variant_group = p.id.clone();
            }
            corpus.push(p);
        }
    }
    corpus
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn split_is_a_partition_and_respects_groups(
        sizes in proptest::collection::vec(1u8..5, 4..40),
        seed in any::<u64>(),
    ) {
        let corpus = grouped_corpus(sizes);
        let split = split_dataset(&corpus, SplitRatios::default(), seed).unwrap();

        let mut seen: BTreeSet<&str> = BTreeSet::new();
        for p in split.train.iter().chain(&split.test).chain(&split.validation) {
            prop_assert!(seen.insert(&p.id), "duplicate id across partitions");
        }
        prop_assert_eq!(seen.len(), corpus.len(), "partitions must cover the corpus");

        let mut group_home: BTreeMap<&str, u8> = BTreeMap::new();
        for (slot, part) in [(&split.train, 0u8), (&split.test, 1), (&split.validation, 2)]
            .map(|(p, s)| (p, s))
        {
            for p in slot.iter() {
                if let Some(&prev) = group_home.get(p.variant_group.as_str()) {
                    prop_assert_eq!(prev, part, "group {} straddles partitions", p.variant_group);
                } else {
                    group_home.insert(&p.variant_group, part);
                }
            }
        }
    }

    #[test]
    fn folds_respect_groups_and_balance(
        sizes in proptest::collection::vec(1u8..4, 6..30),
        seed in any::<u64>(),
        k in 2usize..6,
    ) {
        let corpus = grouped_corpus(sizes);
        let groups: BTreeSet<&str> = corpus.iter().map(|p| p.variant_group.as_str()).collect();
        prop_assume!(groups.len() >= k);
        let folds = group_k_folds(&corpus, k, seed).unwrap();

        let mut group_fold: BTreeMap<&str, usize> = BTreeMap::new();
        let mut group_counts = vec![BTreeSet::new(); k];
        for p in &corpus {
            let f = folds.fold(&p.id);
            prop_assert!(f < k);
            if let Some(&prev) = group_fold.get(p.variant_group.as_str()) {
                prop_assert_eq!(prev, f, "group {} straddles folds", p.variant_group);
            } else {
                group_fold.insert(&p.variant_group, f);
            }
            group_counts[f].insert(p.variant_group.clone());
        }
        let max = group_counts.iter().map(|s| s.len()).max().unwrap();
        let min = group_counts.iter().map(|s| s.len()).min().unwrap();
        prop_assert!(max - min <= 1, "fold sizes differ by more than one group");
    }

    #[test]
    fn parse_after_serialize_is_identity(profile in profile_strategy()) {
        let line = profile.to_json().to_string();
        let parsed = parse_profile(&line).unwrap();
        prop_assert_eq!(parsed, profile);
    }

    #[test]
    fn jaccard_matches_brute_force(
        a in "[a-c ]{0,40}",
        b in "[a-c ]{0,40}",
        k in prop_oneof![Just(3usize), Just(5), Just(8)],
    ) {
        let sim: f64 = jaccard(&shingle(&a, k), &shingle(&b, k)).unwrap();
        let brute = brute_force_jaccard(&a, &b, k);
        prop_assert_eq!(sim, brute);
    }

    #[test]
    fn jaccard_is_symmetric_and_bounded(
        a in "[a-d ]{0,30}",
        b in "[a-d ]{0,30}",
    ) {
        let sa = shingle(&a, 5);
        let sb = shingle(&b, 5);
        let ab: f64 = jaccard(&sa, &sb).unwrap();
        let ba: f64 = jaccard(&sb, &sa).unwrap();
        prop_assert_eq!(ab, ba);
        prop_assert!((0.0..=1.0).contains(&ab));
        if !sa.shingles.is_empty() {
            prop_assert_eq!(jaccard::<f64>(&sa, &sa).unwrap(), 1.0);
        }
    }

    #[test]
    fn adding_a_shared_shingle_never_decreases_similarity(
        a in "[a-d ]{6,30}",
        b in "[a-d ]{6,30}",
        extra in "[x-z]{5}",
    ) {
        let mut sa = shingle(&a, 5);
        let mut sb = shingle(&b, 5);
        prop_assume!(!sa.shingles.is_empty() && !sb.shingles.is_empty());
        let before: f64 = jaccard(&sa, &sb).unwrap();
        sa.shingles.insert(extra.clone());
        sb.shingles.insert(extra);
        let after: f64 = jaccard(&sa, &sb).unwrap();
        prop_assert!(after >= before, "shared shingle decreased similarity");
    }

    #[test]
    fn caption_features_ignore_order_and_duplication(
        captions in proptest::collection::vec("[a-z ]{3,30}", 1..5),
        dup_index in any::<proptest::sample::Index>(),
    ) {
        let mut enc = CaptionEncoder::with_default_stoplist();
        enc.fit_document(&captions);
        enc.freeze();

        let mut shuffled = captions.clone();
        shuffled.reverse();
        shuffled.push(captions[dup_index.index(captions.len())].clone());

        let a: scamsift_core::FeatureVector = enc.encode(&captions);
        let b: scamsift_core::FeatureVector = enc.encode(&shuffled);
        prop_assert_eq!(a, b);
    }

    #[test]
    fn simple_vote_is_symmetric_and_total(
        probs in [0.0f64..1.0, 0.0f64..1.0, 0.0f64..1.0],
        rotation in 0usize..3,
    ) {
        let sections = [Section::Demographics, Section::Captions, Section::Descriptions];
        let preds: Vec<ComponentPrediction<f64>> = (0..3)
            .map(|i| ComponentPrediction::new(sections[i], probs[i], true, 0.5))
            .collect();
        let mut rotated = preds.clone();
        rotated.rotate_left(rotation);
        let a = simple_vote(&[preds[0], preds[1], preds[2]]);
        let b = simple_vote(&[rotated[0], rotated[1], rotated[2]]);
        prop_assert_eq!(a.decision, b.decision);
        prop_assert_eq!(a.votes_for_scam, b.votes_for_scam);
    }

    #[test]
    fn platt_output_is_monotone_and_in_unit_interval(
        raw in proptest::collection::vec((-5.0f64..5.0, any::<bool>()), 4..40),
        probes in proptest::collection::vec(-10.0f64..10.0, 2..20),
    ) {
        let decisions: Vec<f64> = raw.iter().map(|&(d, _)| d).collect();
        let labels: Vec<bool> = raw.iter().map(|&(_, l)| l).collect();
        let platt = PlattScaler::fit(&decisions, &labels);
        let mut sorted = probes.clone();
        sorted.sort_by(|x, y| x.partial_cmp(y).unwrap());
        let mut last = 0.0f64;
        for (i, &p) in sorted.iter().enumerate() {
            let prob = platt.probability(p);
            prop_assert!(prob > 0.0 && prob < 1.0);
            if i > 0 {
                prop_assert!(prob >= last, "calibration not monotone");
            }
            last = prob;
        }
    }
}

/// Independent oracle: enumerate all k-substrings via index loops into
/// sorted-deduped vectors, intersect by nested scan.
fn brute_force_jaccard(a: &str, b: &str, k: usize) -> f64 {
    fn subs(text: &str, k: usize) -> Vec<String> {
        let normalized: String = {
            let mut out = String::new();
            let mut space = false;
            for ch in text.chars() {
                if ch.is_whitespace() {
                    space = !out.is_empty();
                } else {
                    if space {
                        out.push(' ');
                        space = false;
                    }
                    out.extend(ch.to_lowercase());
                }
            }
            out
        };
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
    let mut intersection = 0usize;
    for x in &sa {
        for y in &sb {
            if x == y {
                intersection += 1;
                break;
            }
        }
    }
    let union = sa.len() + sb.len() - intersection;
    intersection as f64 / union as f64
}
