use std::collections::HashMap;
use std::io::{BufRead, Write};

use super::source::SentenceSource;
use super::token::Tokenizer;
use crate::error::{Error, Result};

/// Token-string to dense id mapping with corpus frequencies.
///
/// Entries are ordered by descending count, ties broken lexicographically,
/// and entry `i` has id `i`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Vocabulary {
    entries: Vec<(String, u64)>,
    index: HashMap<String, u32>,
    total_tokens: u64,
}

impl Vocabulary {
    /// Builds a vocabulary from raw counts, dropping entries below `min_count`.
    pub fn from_counts<I>(counts: I, min_count: u64) -> Self
    where
        I: IntoIterator<Item = (String, u64)>,
    {
        let mut entries: Vec<(String, u64)> = counts
            .into_iter()
            .filter(|(_, c)| *c >= min_count && *c > 0)
            .collect();
        entries.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
        let index = entries
            .iter()
            .enumerate()
            .map(|(i, (w, _))| (w.clone(), i as u32))
            .collect();
        let total_tokens = entries.iter().map(|(_, c)| c).sum();
        Vocabulary {
            entries,
            index,
            total_tokens,
        }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn total_tokens(&self) -> u64 {
        self.total_tokens
    }

    pub fn id(&self, token: &str) -> Option<u32> {
        self.index.get(token).copied()
    }

    pub fn token(&self, id: u32) -> &str {
        &self.entries[id as usize].0
    }

    pub fn count(&self, id: u32) -> u64 {
        self.entries[id as usize].1
    }

    pub fn entries(&self) -> &[(String, u64)] {
        &self.entries
    }

    pub fn counts(&self) -> impl Iterator<Item = u64> + '_ {
        self.entries.iter().map(|(_, c)| *c)
    }

    /// Writes one `token<TAB>count` line per entry, in id order.
    pub fn write_tsv<W: Write>(&self, mut out: W) -> Result<()> {
        for (token, count) in &self.entries {
            writeln!(out, "{token}\t{count}")?;
        }
        Ok(())
    }

    pub fn read_tsv<R: BufRead>(input: R) -> Result<Self> {
        let mut counts = Vec::new();
        for (i, line) in input.lines().enumerate() {
            let line = line?;
            if line.is_empty() {
                continue;
            }
            let (token, count) = line
                .split_once('\t')
                .ok_or_else(|| Error::parse(i + 1, "expected `token<TAB>count`"))?;
            let count = count
                .trim()
                .parse()
                .map_err(|_| Error::parse(i + 1, format!("invalid count `{count}`")))?;
            counts.push((token.to_owned(), count));
        }
        Ok(Vocabulary::from_counts(counts, 0))
    }
}

/// Counts every serialized token of `source` and keeps those occurring at
/// least `min_count` times. With `workers > 1` the source is sharded and the
/// per-shard counts are merged; the result does not depend on `workers`.
pub fn build_vocab(
    source: &dyn SentenceSource,
    tokenizer: &Tokenizer,
    min_count: u64,
    workers: usize,
) -> Result<Vocabulary> {
    if min_count == 0 {
        return Err(Error::Config("min_count must be at least 1".into()));
    }
    let workers = workers.max(1);
    let shard_counts: Vec<Result<HashMap<String, u64>>> = if workers == 1 {
        vec![count_shard(source, tokenizer, 0, 1)]
    } else {
        std::thread::scope(|scope| {
            let handles: Vec<_> = (0..workers)
                .map(|i| scope.spawn(move || count_shard(source, tokenizer, i, workers)))
                .collect();
            handles.into_iter().map(|h| h.join().unwrap()).collect()
        })
    };
    let mut merged: HashMap<String, u64> = HashMap::new();
    for counts in shard_counts {
        for (token, c) in counts? {
            *merged.entry(token).or_default() += c;
        }
    }
    Ok(Vocabulary::from_counts(merged, min_count))
}

fn count_shard(
    source: &dyn SentenceSource,
    tokenizer: &Tokenizer,
    index: usize,
    count: usize,
) -> Result<HashMap<String, u64>> {
    let mut counts: HashMap<String, u64> = HashMap::new();
    for line in source.shard(index, count)? {
        let (line_no, line) = line?;
        tokenizer.for_each_key(&line, line_no, |key| {
            if let Some(c) = counts.get_mut(key) {
                *c += 1;
            } else {
                counts.insert(key.to_owned(), 1);
            }
        })?;
    }
    Ok(counts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::token::strip_tag;

    fn lines(text: &[&str]) -> Vec<String> {
        text.iter().map(|s| s.to_string()).collect()
    }

    fn hand_count(corpus: &[String]) -> HashMap<String, u64> {
        let mut counts = HashMap::new();
        for line in corpus {
            for w in line.split_whitespace() {
                *counts.entry(w.to_owned()).or_insert(0) += 1;
            }
        }
        counts
    }

    #[test]
    fn drops_rare_tokens_and_sorts() {
        let corpus = lines(&["a b a c a b"]);
        assert_eq!(hand_count(&corpus)["c"], 1);
        let vocab = build_vocab(&corpus, &Tokenizer::default(), 2, 1).unwrap();
        assert_eq!(vocab.entries(), [("a".into(), 3), ("b".into(), 2)]);
        assert_eq!(vocab.total_tokens(), 5);
        assert_eq!(vocab.id("c"), None);
        assert_eq!(vocab.id("b"), Some(1));
    }

    #[test]
    fn empty_corpus_gives_empty_vocab() {
        let corpus: Vec<String> = Vec::new();
        let vocab = build_vocab(&corpus, &Tokenizer::default(), 1, 1).unwrap();
        assert!(vocab.is_empty());
        assert_eq!(vocab.total_tokens(), 0);
    }

    #[test]
    fn tagged_variants_are_distinct_entries() {
        let mut corpus = Vec::new();
        corpus.extend(std::iter::repeat_n("o|ART livro|N".to_string(), 12));
        corpus.extend(std::iter::repeat_n("eu|PROPESS livro|V".to_string(), 11));
        let vocab = build_vocab(&corpus, &Tokenizer::new(true), 10, 1).unwrap();
        assert_eq!(vocab.count(vocab.id("livro|N").unwrap()), 12);
        assert_eq!(vocab.count(vocab.id("livro|V").unwrap()), 11);
    }

    #[test]
    fn ties_broken_lexicographically() {
        let corpus = lines(&["b a c", "c a b"]);
        let vocab = build_vocab(&corpus, &Tokenizer::default(), 1, 1).unwrap();
        let order: Vec<_> = vocab.entries().iter().map(|(w, _)| w.as_str()).collect();
        assert_eq!(order, ["a", "b", "c"]);
    }

    #[test]
    fn zero_min_count_rejected() {
        let corpus = lines(&["a"]);
        assert!(matches!(
            build_vocab(&corpus, &Tokenizer::default(), 0, 1),
            Err(Error::Config(_))
        ));
    }

    #[test]
    fn tsv_round_trip() {
        let corpus = lines(&["a b a c a b", "livro-texto a"]);
        let vocab = build_vocab(&corpus, &Tokenizer::default(), 1, 1).unwrap();
        let mut buf = Vec::new();
        vocab.write_tsv(&mut buf).unwrap();
        assert_eq!(
            String::from_utf8(buf.clone()).unwrap(),
            "a\t4\nb\t2\nc\t1\nlivro-texto\t1\n"
        );
        assert_eq!(Vocabulary::read_tsv(&buf[..]).unwrap(), vocab);
    }

    #[test]
    fn tagged_counts_aggregate_to_untagged() {
        let corpus = lines(&[
            "o|ART livro|N caiu|V",
            "eu|PROPESS livro|V o|ART livro|N",
            "Livro|N ,|PU caiu|V",
        ]);
        let tagged = build_vocab(&corpus, &Tokenizer::new(true), 1, 1).unwrap();
        let untagged_text: Vec<String> = corpus
            .iter()
            .map(|l| {
                l.split_whitespace()
                    .map(strip_tag)
                    .collect::<Vec<_>>()
                    .join(" ")
            })
            .collect();
        let untagged = build_vocab(&untagged_text, &Tokenizer::new(false), 1, 1).unwrap();
        let mut summed: HashMap<&str, u64> = HashMap::new();
        for (key, c) in tagged.entries() {
            *summed.entry(strip_tag(key)).or_default() += c;
        }
        assert_eq!(summed.len(), untagged.len());
        for (surface, c) in summed {
            assert_eq!(
                untagged.count(untagged.id(surface).unwrap()),
                c,
                "{surface}"
            );
        }
    }
}
