use rand::Rng;

use super::source::SentenceSource;
use super::token::Tokenizer;
use super::vocab::Vocabulary;
use crate::error::Result;

/// A sentence as vocabulary ids, with OOV and subsampled tokens removed.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct EncodedSentence {
    pub ids: Vec<u32>,
}

/// Frequent-word subsampling: token `w` is kept with probability
/// `min(1, sqrt(t / f(w)))`, `f` being its relative frequency.
#[derive(Clone, Debug)]
pub struct Subsampler {
    keep: Option<Vec<f32>>,
}

impl Subsampler {
    pub fn new(vocab: &Vocabulary, threshold: f64) -> Self {
        if threshold <= 0.0 || vocab.is_empty() {
            return Subsampler { keep: None };
        }
        let total = vocab.total_tokens() as f64;
        let keep = vocab
            .counts()
            .map(|c| keep_probability(threshold, c as f64 / total) as f32)
            .collect();
        Subsampler { keep: Some(keep) }
    }

    pub fn is_active(&self) -> bool {
        self.keep.is_some()
    }

    #[inline]
    pub fn keep<R: Rng + ?Sized>(&self, id: u32, rng: &mut R) -> bool {
        match &self.keep {
            None => true,
            Some(p) => {
                let p = p[id as usize];
                p >= 1.0 || rng.random::<f32>() < p
            }
        }
    }
}

pub fn keep_probability(threshold: f64, frequency: f64) -> f64 {
    (threshold / frequency).sqrt().min(1.0)
}

/// Turns text lines into id sequences.
#[derive(Clone, Debug)]
pub struct Encoder<'v> {
    tokenizer: Tokenizer,
    vocab: &'v Vocabulary,
    subsampler: Subsampler,
}

impl<'v> Encoder<'v> {
    pub fn new(tokenizer: Tokenizer, vocab: &'v Vocabulary, subsample_t: f64) -> Self {
        Encoder {
            subsampler: Subsampler::new(vocab, subsample_t),
            tokenizer,
            vocab,
        }
    }

    pub fn vocab(&self) -> &'v Vocabulary {
        self.vocab
    }

    /// Encodes `line` into `out` (cleared first). Returns the number of
    /// in-vocabulary tokens before subsampling.
    pub fn encode_into<R: Rng + ?Sized>(
        &self,
        line: &str,
        line_no: usize,
        rng: &mut R,
        out: &mut Vec<u32>,
    ) -> Result<usize> {
        out.clear();
        let mut in_vocab = 0;
        self.tokenizer.for_each_key(line, line_no, |key| {
            if let Some(id) = self.vocab.id(key) {
                in_vocab += 1;
                if self.subsampler.keep(id, rng) {
                    out.push(id);
                }
            }
        })?;
        Ok(in_vocab)
    }

    pub fn encode<R: Rng + ?Sized>(
        &self,
        line: &str,
        line_no: usize,
        rng: &mut R,
    ) -> Result<EncodedSentence> {
        let mut ids = Vec::new();
        self.encode_into(line, line_no, rng, &mut ids)?;
        Ok(EncodedSentence { ids })
    }

    pub fn decode(&self, sentence: &EncodedSentence) -> Vec<&'v str> {
        sentence
            .ids
            .iter()
            .map(|&id| self.vocab.token(id))
            .collect()
    }
}

/// Streams every line of `source` as an encoded sentence. Deterministic for
/// a given rng state.
pub fn encode_stream<'a, R: Rng + 'a>(
    source: &'a dyn SentenceSource,
    encoder: &'a Encoder<'a>,
    mut rng: R,
) -> Result<impl Iterator<Item = Result<EncodedSentence>> + 'a> {
    let lines = source.lines()?;
    Ok(lines.map(move |line| {
        let (line_no, line) = line?;
        encoder.encode(&line, line_no, &mut rng)
    }))
}
