use senseforge::mssg::SenseRef;
use senseforge::sgns::{dot, norm};
use senseforge::synthetic::topic_clusters_corpus;
use senseforge::{
    build_vocab, train_mssg, train_skipgram, ModelKind, SenseModel, SentenceSource, Tokenizer,
    TrainingConfig, Vocabulary,
};

fn cosine(a: &[f32], b: &[f32]) -> f64 {
    dot(a, b) as f64 / (norm(a) as f64 * norm(b) as f64)
}

fn config(dim: usize) -> TrainingConfig {
    TrainingConfig {
        dim,
        min_count: 1,
        seed: 42,
        negative_table_size: 1_000_000,
        ..Default::default()
    }
}

fn vocab_of(lines: &impl SentenceSource, tagged: bool) -> Vocabulary {
    build_vocab(lines, &Tokenizer::new(tagged), 1, 1).unwrap()
}

#[test]
fn disjoint_topics_separate() {
    let (groups, lines) = topic_clusters_corpus(2, 20, 100_000, 8, 3);
    let vocab = vocab_of(&lines, false);
    let (model, _) = train_skipgram(&lines, &Tokenizer::default(), &vocab, &config(32)).unwrap();
    let row = |w: &str| model.global().row(vocab.id(w).unwrap() as usize);
    let (mut within, mut cross) = (Vec::new(), Vec::new());
    for (gi, g) in groups.iter().enumerate() {
        for (i, a) in g.iter().enumerate() {
            for b in &g[i + 1..] {
                within.push(cosine(row(a), row(b)));
            }
            for other in &groups[gi + 1..] {
                for b in other {
                    cross.push(cosine(row(a), row(b)));
                }
            }
        }
    }
    let mean = |v: &[f64]| v.iter().sum::<f64>() / v.len() as f64;
    let (w, c) = (mean(&within), mean(&cross));
    assert!(w - c >= 0.2, "within {w:.3} cross {c:.3}");
}

#[test]
fn fixed_seed_single_worker_is_reproducible() {
    let (_, lines) = topic_clusters_corpus(3, 10, 2_000, 6, 8);
    let vocab = vocab_of(&lines, false);
    let cfg = config(16);
    let a = train_skipgram(&lines, &Tokenizer::default(), &vocab, &cfg)
        .unwrap()
        .0;
    let b = train_skipgram(&lines, &Tokenizer::default(), &vocab, &cfg)
        .unwrap()
        .0;
    assert_eq!(a, b);
    let cfg = TrainingConfig { senses: 2, ..cfg };
    let a = train_mssg(&lines, &Tokenizer::default(), &vocab, &cfg)
        .unwrap()
        .0;
    let b = train_mssg(&lines, &Tokenizer::default(), &vocab, &cfg)
        .unwrap()
        .0;
    assert_eq!(a, b);
}

#[test]
fn tagged_training_keeps_pos_variants_apart() {
    let mut lines = Vec::new();
    for _ in 0..12 {
        lines.push("o|ART livro|N novo|ADJ".to_string());
    }
    for _ in 0..11 {
        lines.push("eu|PRON livro|V hoje|ADV".to_string());
    }
    let tokenizer = Tokenizer::new(true);
    let vocab = build_vocab(&lines, &tokenizer, 10, 1).unwrap();
    assert_eq!(vocab.count(vocab.id("livro|N").unwrap()), 12);
    assert_eq!(vocab.count(vocab.id("livro|V").unwrap()), 11);
    let cfg = TrainingConfig {
        min_count: 10,
        ..config(8)
    };
    let (model, _) = train_skipgram(&lines, &tokenizer, &vocab, &cfg).unwrap();
    assert_eq!(model.kind(), ModelKind::Tagged);
    let n = vocab.id("livro|N").unwrap() as usize;
    let v = vocab.id("livro|V").unwrap() as usize;
    assert_ne!(n, v);
    assert_ne!(model.global().row(n), model.global().row(v));
}

/// Occurrences of each word that sit in a sentence with at least one
/// other in-vocabulary token, i.e. the positions that get trained.
fn trained_occurrences(lines: &[String], vocab: &Vocabulary, epochs: u64) -> Vec<u64> {
    let mut n = vec![0u64; vocab.len()];
    for line in lines {
        let ids: Vec<u32> = line
            .split_whitespace()
            .filter_map(|w| vocab.id(w))
            .collect();
        if ids.len() > 1 {
            for id in ids {
                n[id as usize] += epochs;
            }
        }
    }
    n
}

#[test]
fn cluster_counts_add_up_to_occurrences() {
    let (_, mut lines) = topic_clusters_corpus(2, 8, 3_000, 5, 13);
    lines.push("t0w0".into());
    let vocab = vocab_of(&lines, false);
    let cfg = TrainingConfig {
        senses: 3,
        epochs: 2,
        sense_min_count: vocab.count(vocab.len() as u32 / 2),
        ..config(12)
    };
    let (model, stats) = train_mssg(&lines, &Tokenizer::default(), &vocab, &cfg).unwrap();
    let expected = trained_occurrences(&lines, &vocab, 2);
    let clusters = model.clusters().unwrap();
    let mut singles = 0;
    for w in 0..vocab.len() as u32 {
        assert_eq!(
            clusters.counts(w).iter().sum::<u64>(),
            expected[w as usize],
            "word {w}"
        );
        if !model.is_multi_sense(w) {
            singles += 1;
            assert!(clusters.counts(w)[1..].iter().all(|&c| c == 0));
        }
    }
    assert!(singles > 0 && singles < vocab.len(), "{singles}");
    assert_eq!(stats.positions, expected.iter().sum::<u64>());
}

#[test]
fn monosemous_word_uses_one_cluster() {
    let (groups, lines) = topic_clusters_corpus(1, 20, 20_000, 8, 21);
    let vocab = vocab_of(&lines, false);
    let cfg = TrainingConfig {
        senses: 3,
        ..config(24)
    };
    let (model, _) = train_mssg(&lines, &Tokenizer::default(), &vocab, &cfg).unwrap();
    let w = vocab.id(&groups[0][0]).unwrap();
    let counts = model.clusters().unwrap().counts(w);
    let total: u64 = counts.iter().sum();
    let top = *counts.iter().max().unwrap();
    assert!(top as f64 >= 0.9 * total as f64, "{counts:?}");
}

#[test]
fn single_sense_mssg_equals_skipgram() {
    let (_, lines) = topic_clusters_corpus(3, 12, 3_000, 7, 5);
    let vocab = vocab_of(&lines, false);
    let cfg = TrainingConfig {
        senses: 1,
        ..config(20)
    };
    let (plain, _) = train_skipgram(&lines, &Tokenizer::default(), &vocab, &cfg).unwrap();
    let (mssg, _) = train_mssg(&lines, &Tokenizer::default(), &vocab, &cfg).unwrap();
    assert_eq!(plain.global(), mssg.global());
    assert_eq!(plain.output(), mssg.output());
    assert!(mssg.senses().is_none());
    let w = SenseRef {
        word_id: 0,
        sense: 0,
    };
    assert_eq!(mssg.sense_vector(w), plain.global().row(0));
}

#[test]
fn several_workers_train_finite_models() {
    let (_, lines) = topic_clusters_corpus(2, 15, 20_000, 8, 2);
    let vocab = vocab_of(&lines, false);
    let cfg = TrainingConfig {
        workers: 4,
        senses: 2,
        ..config(16)
    };
    let (model, stats): (SenseModel, _) =
        train_mssg(&lines, &Tokenizer::default(), &vocab, &cfg).unwrap();
    assert_eq!(stats.tokens, 20_000 * 8);
    assert!(model.global().is_finite() && model.output().is_finite());
    assert!(model.senses().unwrap().is_finite());
    let (model, stats) = train_skipgram(&lines, &Tokenizer::default(), &vocab, &cfg).unwrap();
    assert_eq!(stats.tokens, 20_000 * 8);
    assert!(model.global().is_finite());
}

#[test]
fn empty_vocabulary_is_a_configuration_error() {
    let lines: Vec<String> = vec![];
    let vocab = vocab_of(&lines, false);
    assert!(train_skipgram(&lines, &Tokenizer::default(), &vocab, &config(4)).is_err());
}
