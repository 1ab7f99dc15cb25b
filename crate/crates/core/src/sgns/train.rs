//! The training loop shared by skip-gram, tagged skip-gram and MSSG.

use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};
use std::sync::Mutex;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::config::LrSchedule;
use super::negative::NegativeTable;
use super::sigmoid::Sigmoid;
use super::step::{sgns_step, StepScratch};
use super::table::SharedRows;
use crate::corpus::{Encoder, SentenceSource, Tokenizer, Vocabulary};
use crate::error::{Error, Result};
use crate::mssg::cluster::{argmax_sense, context_mean, running_mean};
use crate::mssg::{ModelKind, SenseModel};

/// Throughput summary of a training run.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct TrainStats {
    /// In-vocabulary tokens read, over all epochs.
    pub tokens: u64,
    /// Positions that received a gradient update.
    pub positions: u64,
    pub seconds: f64,
}

impl TrainStats {
    pub fn tokens_per_sec(&self) -> f64 {
        if self.seconds > 0.0 {
            self.tokens as f64 / self.seconds
        } else {
            0.0
        }
    }
}

/// Trains a single-vector skip-gram model. With a tagged tokenizer this is
/// the PoS-tagged variant: every `surface|TAG` pair is its own word.
pub fn train_skipgram(
    source: &dyn SentenceSource,
    tokenizer: &Tokenizer,
    vocab: &Vocabulary,
    config: &crate::sgns::TrainingConfig,
) -> Result<(SenseModel, TrainStats)> {
    let kind = if tokenizer.tagged {
        ModelKind::Tagged
    } else {
        ModelKind::Word
    };
    let mut model = SenseModel::new(vocab.clone(), config.clone(), kind)?;
    let stats = run(&mut model, source, tokenizer)?;
    Ok((model, stats))
}

/// Mutable views over a model's parameters, shared by workers.
#[derive(Clone, Copy)]
pub(crate) struct Kernel<'a> {
    pub global: SharedRows<f32>,
    pub output: SharedRows<f32>,
    pub senses: Option<SharedRows<f32>>,
    pub centroids: Option<SharedRows<f64>>,
    pub counts: Option<SharedRows<u64>>,
    pub k: usize,
    pub sense_min_count: u64,
    pub vocab: &'a Vocabulary,
    pub sigmoid: &'a Sigmoid,
}

/// Per-worker buffers.
#[derive(Default)]
pub(crate) struct Buffers {
    pub scratch: StepScratch,
    pub ctx: Vec<f64>,
}

impl<'a> Kernel<'a> {
    pub(crate) fn new(model: &'a mut SenseModel, sigmoid: &'a Sigmoid) -> Self {
        let k = model.k();
        let sense_min_count = model.config.sense_min_count;
        let dim = model.global.dim();
        let SenseModel {
            vocab,
            global,
            output,
            senses,
            clusters,
            ..
        } = model;
        let (centroids, counts) = match clusters {
            Some(c) => (
                Some(SharedRows::new(&mut c.centroids, c.k * c.dim)),
                Some(SharedRows::new(&mut c.counts, c.k)),
            ),
            None => (None, None),
        };
        Kernel {
            global: SharedRows::new(global.as_mut_slice(), dim),
            output: SharedRows::new(output.as_mut_slice(), dim),
            senses: senses
                .as_mut()
                .map(|s| SharedRows::new(s.as_mut_slice(), dim)),
            centroids,
            counts,
            k,
            sense_min_count,
            vocab,
            sigmoid,
        }
    }

    fn multi_sense(&self, word: u32) -> bool {
        self.senses.is_some() && self.vocab.count(word) >= self.sense_min_count
    }

    /// Plain skip-gram update of `word` against each context word.
    pub(crate) fn skipgram_position(
        &self,
        word: u32,
        context: &[u32],
        negatives: &[Vec<u32>],
        lr: f32,
        buf: &mut Buffers,
    ) -> Result<()> {
        let center = self.global.get_mut(word as usize);
        let mut output = self.output;
        for (&c, negs) in context.iter().zip(negatives) {
            sgns_step(
                center,
                &mut output,
                c,
                negs,
                lr,
                self.sigmoid,
                &mut buf.scratch,
            )?;
        }
        Ok(())
    }

    /// One MSSG position: predict the sense of `word` from the mean global
    /// vector of its context, train that sense vector and the global vector,
    /// then add the context to the chosen cluster. Returns the sense used,
    /// or `None` when the context vector is zero and the position is skipped.
    pub(crate) fn mssg_position(
        &self,
        word: u32,
        context: &[u32],
        negatives: &[Vec<u32>],
        lr: f32,
        buf: &mut Buffers,
    ) -> Result<Option<usize>> {
        let nonzero = context_mean(|c| self.global.get(c as usize), context, &mut buf.ctx);
        let (Some(centroids), Some(counts)) = (self.centroids, self.counts) else {
            return Err(Error::Config("MSSG training needs cluster storage".into()));
        };
        let word_centroids = centroids.get_mut(word as usize);
        let word_counts = counts.get_mut(word as usize);
        let dim = buf.ctx.len();

        if !self.multi_sense(word) {
            self.skipgram_position(word, context, negatives, lr, buf)?;
            running_mean(&mut word_centroids[..dim], &mut word_counts[0], &buf.ctx);
            return Ok(Some(0));
        }
        if !nonzero {
            return Ok(None);
        }
        let sense = argmax_sense(word_centroids, word_counts, &buf.ctx);
        let senses = self.senses.expect("multi-sense word without sense table");
        let sense_row = senses.get_mut(word as usize * self.k + sense);
        let global_row = self.global.get_mut(word as usize);
        let mut output = self.output;
        for (&c, negs) in context.iter().zip(negatives) {
            sgns_step(
                sense_row,
                &mut output,
                c,
                negs,
                lr,
                self.sigmoid,
                &mut buf.scratch,
            )?;
            sgns_step(
                global_row,
                &mut output,
                c,
                negs,
                lr,
                self.sigmoid,
                &mut buf.scratch,
            )?;
        }
        running_mean(
            &mut word_centroids[sense * dim..(sense + 1) * dim],
            &mut word_counts[sense],
            &buf.ctx,
        );
        Ok(Some(sense))
    }
}

const PROGRESS_EVERY: u64 = 1_000_000;

/// Runs the configured number of epochs over `source`, updating `model` in
/// place. MSSG models (those with clusters) get sense-aware updates.
pub(crate) fn run(
    model: &mut SenseModel,
    source: &dyn SentenceSource,
    tokenizer: &Tokenizer,
) -> Result<TrainStats> {
    let config = model.config.clone();
    config.validate()?;
    if model.vocab.is_empty() {
        return Err(Error::Config("vocabulary is empty".into()));
    }
    let vocab = model.vocab.clone();
    let mssg = model.clusters.is_some();
    let sigmoid = Sigmoid::new(config.sigmoid);
    let negatives = NegativeTable::new(vocab.counts(), config.negative_table_size)?;
    let encoder = Encoder::new(tokenizer.clone(), &vocab, config.subsample_t);
    let schedule = LrSchedule::new(config.lr0, config.epochs as u64 * vocab.total_tokens());
    let processed = AtomicU64::new(0);
    let positions = AtomicU64::new(0);
    let abort = AtomicBool::new(false);
    let first_error: Mutex<Option<Error>> = Mutex::new(None);
    let kernel = Kernel::new(model, &sigmoid);
    let start = Instant::now();

    let worker = |index: usize| {
        let shared = Shared {
            kernel,
            encoder: &encoder,
            negatives: &negatives,
            schedule,
            processed: &processed,
            positions: &positions,
            abort: &abort,
            mssg,
        };
        if let Err(e) = shared.work(source, &config, index) {
            abort.store(true, Ordering::Relaxed);
            first_error.lock().unwrap().get_or_insert(e);
        }
    };
    if config.workers == 1 {
        worker(0);
    } else {
        std::thread::scope(|scope| {
            for index in 0..config.workers {
                let worker = &worker;
                scope.spawn(move || worker(index));
            }
        });
    }

    if let Some(e) = first_error.into_inner().unwrap() {
        return Err(e);
    }
    Ok(TrainStats {
        tokens: processed.into_inner(),
        positions: positions.into_inner(),
        seconds: start.elapsed().as_secs_f64(),
    })
}

struct Shared<'a> {
    kernel: Kernel<'a>,
    encoder: &'a Encoder<'a>,
    negatives: &'a NegativeTable,
    schedule: LrSchedule,
    processed: &'a AtomicU64,
    positions: &'a AtomicU64,
    abort: &'a AtomicBool,
    mssg: bool,
}

impl Shared<'_> {
    fn work(
        &self,
        source: &dyn SentenceSource,
        config: &crate::sgns::TrainingConfig,
        index: usize,
    ) -> Result<()> {
        let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
        rng.set_stream(index as u64 + 1);
        let mut buf = Buffers::default();
        let mut ids = Vec::new();
        let mut context = Vec::with_capacity(2 * config.window);
        let mut negative_sets: Vec<Vec<u32>> = vec![Vec::new(); 2 * config.window];
        let mut next_report = PROGRESS_EVERY;
        let mut trained = 0u64;

        for epoch in 0..config.epochs {
            for line in source.shard(index, config.workers)? {
                if self.abort.load(Ordering::Relaxed) {
                    return Ok(());
                }
                let (line_no, line) = line?;
                let read = self
                    .encoder
                    .encode_into(&line, line_no, &mut rng, &mut ids)?
                    as u64;
                let base = self.processed.load(Ordering::Relaxed);
                for t in 0..ids.len() {
                    let lr = self.schedule.at(base + t as u64);
                    let radius = rng.random_range(1..=config.window);
                    context.clear();
                    let lo = t.saturating_sub(radius);
                    let hi = (t + radius).min(ids.len() - 1);
                    context.extend((lo..=hi).filter(|&j| j != t).map(|j| ids[j]));
                    if context.is_empty() {
                        continue;
                    }
                    for (&c, negs) in context.iter().zip(negative_sets.iter_mut()) {
                        self.negatives
                            .sample_into(&mut rng, config.negatives, c, negs);
                    }
                    let negs = &negative_sets[..context.len()];
                    let word = ids[t];
                    let updated = if self.mssg {
                        self.kernel
                            .mssg_position(word, &context, negs, lr, &mut buf)?
                            .is_some()
                    } else {
                        self.kernel
                            .skipgram_position(word, &context, negs, lr, &mut buf)?;
                        true
                    };
                    trained += updated as u64;
                }
                let done = self.processed.fetch_add(read, Ordering::Relaxed) + read;
                if index == 0 && done >= next_report {
                    next_report = done + PROGRESS_EVERY;
                    log::info!(
                        "epoch {}/{} tokens {done} lr {:.6}",
                        epoch + 1,
                        config.epochs,
                        self.schedule.at(done)
                    );
                }
            }
        }
        self.positions.fetch_add(trained, Ordering::Relaxed);
        Ok(())
    }
}
