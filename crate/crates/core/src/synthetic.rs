//! Constructed corpora with known structure, used by tests, benchmarks and
//! demos.

use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Finance collocates of the pseudo-ambiguous word.
pub const FINANCE: [&str; 10] = [
    "dinheiro",
    "juros",
    "conta",
    "credito",
    "emprestimo",
    "agencia",
    "saldo",
    "deposito",
    "investimento",
    "cartao",
];

/// Furniture collocates of the pseudo-ambiguous word.
pub const FURNITURE: [&str; 10] = [
    "madeira",
    "sentar",
    "praca",
    "jardim",
    "encosto",
    "assento",
    "pernas",
    "parque",
    "descansar",
    "almofada",
];

pub const AMBIGUOUS: &str = "banco";

/// Monosemous words that can stand in for the ambiguous one, per topic.
pub const SYNONYMS: [&str; 2] = ["instituicao", "cadeira"];

/// All words belonging to `topic` (collocates and the topic synonym).
pub fn topic_words(topic: usize) -> impl Iterator<Item = &'static str> {
    let collocates: &[&'static str] = if topic == 0 { &FINANCE } else { &FURNITURE };
    collocates
        .iter()
        .copied()
        .chain(std::iter::once(SYNONYMS[topic]))
}

/// A sentence of the ambiguity corpus with its ground-truth topic.
#[derive(Clone, Debug)]
pub struct TopicSentence {
    pub text: String,
    /// 0 for finance, 1 for furniture.
    pub topic: usize,
    /// Whether the head slot holds the ambiguous word (else the synonym).
    pub ambiguous: bool,
}

/// `per_topic` sentences for each topic, in random order. Every sentence
/// has `collocates` words drawn from its topic plus one head word at a
/// random position: the ambiguous word, or with probability
/// `synonym_rate` the topic's monosemous synonym.
pub fn ambiguity_corpus(
    per_topic: usize,
    collocates: usize,
    synonym_rate: f64,
    seed: u64,
) -> Vec<TopicSentence> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut topics: Vec<usize> = (0..2 * per_topic).map(|i| i % 2).collect();
    for i in (1..topics.len()).rev() {
        topics.swap(i, rng.random_range(0..=i));
    }
    topics
        .into_iter()
        .map(|topic| {
            let words = if topic == 0 { &FINANCE } else { &FURNITURE };
            let mut tokens: Vec<&str> = (0..collocates)
                .map(|_| *words.choose(&mut rng).unwrap())
                .collect();
            let ambiguous = !rng.random_bool(synonym_rate);
            let at = rng.random_range(0..=tokens.len());
            tokens.insert(
                at,
                if ambiguous {
                    AMBIGUOUS
                } else {
                    SYNONYMS[topic]
                },
            );
            TopicSentence {
                text: tokens.join(" "),
                topic,
                ambiguous,
            }
        })
        .collect()
}

/// `clusters` disjoint groups of `words_per_cluster` words; each sentence
/// uses words of a single group.
pub fn topic_clusters_corpus(
    clusters: usize,
    words_per_cluster: usize,
    sentences: usize,
    length: usize,
    seed: u64,
) -> (Vec<Vec<String>>, Vec<String>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let groups: Vec<Vec<String>> = (0..clusters)
        .map(|c| {
            (0..words_per_cluster)
                .map(|w| format!("t{c}w{w}"))
                .collect()
        })
        .collect();
    let lines = (0..sentences)
        .map(|_| {
            let group = &groups[rng.random_range(0..clusters)];
            (0..length)
                .map(|_| group.choose(&mut rng).unwrap().as_str())
                .collect::<Vec<_>>()
                .join(" ")
        })
        .collect();
    (groups, lines)
}
