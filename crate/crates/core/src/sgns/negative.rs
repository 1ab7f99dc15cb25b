use rand::Rng;

use crate::error::{Error, Result};

pub const UNIGRAM_POWER: f64 = 0.75;

/// Precomputed noise distribution: ids appear proportionally to
/// `count^0.75`, so a uniform draw from the table is a negative sample.
#[derive(Clone, Debug)]
pub struct NegativeTable {
    ids: Vec<u32>,
}

impl NegativeTable {
    pub fn new<I>(counts: I, size: usize) -> Result<Self>
    where
        I: IntoIterator<Item = u64>,
    {
        let weights: Vec<f64> = counts
            .into_iter()
            .map(|c| (c as f64).powf(UNIGRAM_POWER))
            .collect();
        let total: f64 = weights.iter().sum();
        if weights.is_empty() || total <= 0.0 || size == 0 {
            return Err(Error::Config(
                "negative table needs a non-empty vocabulary".into(),
            ));
        }
        let mut ids = Vec::with_capacity(size);
        let mut word = 0usize;
        let mut cumulative = weights[0] / total;
        for slot in 0..size {
            ids.push(word as u32);
            if (slot + 1) as f64 / size as f64 > cumulative && word + 1 < weights.len() {
                word += 1;
                cumulative += weights[word] / total;
            }
        }
        Ok(NegativeTable { ids })
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    #[inline]
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> u32 {
        self.ids[rng.random_range(0..self.ids.len())]
    }

    /// Fills `out` with `n` draws, resampling any draw equal to `avoid`.
    /// A draw that keeps colliding (single-word vocabularies) is dropped.
    pub fn sample_into<R: Rng + ?Sized>(
        &self,
        rng: &mut R,
        n: usize,
        avoid: u32,
        out: &mut Vec<u32>,
    ) {
        out.clear();
        for _ in 0..n {
            for _ in 0..MAX_RESAMPLES {
                let id = self.sample(rng);
                if id != avoid {
                    out.push(id);
                    break;
                }
            }
        }
    }
}

const MAX_RESAMPLES: usize = 32;
