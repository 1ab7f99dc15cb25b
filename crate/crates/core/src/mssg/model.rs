use std::fmt;
use std::str::FromStr;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::cluster::{argmax_sense, context_mean, running_mean};
use super::label::SenseRef;
use crate::corpus::Vocabulary;
use crate::error::{Error, Result};
use crate::sgns::{EmbeddingTable, TrainingConfig};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ModelKind {
    /// Plain skip-gram over untagged tokens.
    Word,
    /// Skip-gram over `surface|TAG` tokens.
    Tagged,
    /// Multiple-sense skip-gram.
    Mssg,
}

impl ModelKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ModelKind::Word => "word",
            ModelKind::Tagged => "tagged",
            ModelKind::Mssg => "mssg",
        }
    }
}

impl fmt::Display for ModelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ModelKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "word" => Ok(ModelKind::Word),
            "tagged" => Ok(ModelKind::Tagged),
            "mssg" => Ok(ModelKind::Mssg),
            other => Err(Error::Usage(format!("unknown model kind `{other}`"))),
        }
    }
}

/// Per-word context clusters: `k` running-mean centroids and the number of
/// occurrences assigned to each.
#[derive(Clone, Debug, PartialEq)]
pub struct Clusters {
    pub(crate) k: usize,
    pub(crate) dim: usize,
    pub(crate) centroids: Vec<f64>,
    pub(crate) counts: Vec<u64>,
}

impl Clusters {
    pub fn new(words: usize, k: usize, dim: usize) -> Self {
        Clusters {
            k,
            dim,
            centroids: vec![0.0; words * k * dim],
            counts: vec![0; words * k],
        }
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn centroid(&self, word: u32, sense: usize) -> &[f64] {
        let start = (word as usize * self.k + sense) * self.dim;
        &self.centroids[start..start + self.dim]
    }

    pub fn counts(&self, word: u32) -> &[u64] {
        let start = word as usize * self.k;
        &self.counts[start..start + self.k]
    }

    pub(crate) fn word_centroids(&self, word: u32) -> &[f64] {
        let span = self.k * self.dim;
        &self.centroids[word as usize * span..(word as usize + 1) * span]
    }
}

/// Trained parameters shared by all modes. A plain skip-gram model is the
/// degenerate case with one sense per word and no clusters.
#[derive(Clone, Debug, PartialEq)]
pub struct SenseModel {
    pub(crate) vocab: Vocabulary,
    pub(crate) config: TrainingConfig,
    pub(crate) kind: ModelKind,
    pub(crate) global: EmbeddingTable,
    pub(crate) output: EmbeddingTable,
    /// `V * k` rows; absent when `k == 1`.
    pub(crate) senses: Option<EmbeddingTable>,
    pub(crate) clusters: Option<Clusters>,
}

impl SenseModel {
    /// Freshly initialized parameters: input-side rows uniform in
    /// `[-0.5/dim, 0.5/dim]`, output rows zero.
    pub fn new(vocab: Vocabulary, config: TrainingConfig, kind: ModelKind) -> Result<Self> {
        config.validate()?;
        if vocab.is_empty() {
            return Err(Error::Config("vocabulary is empty".into()));
        }
        let (v, d) = (vocab.len(), config.dim);
        let k = if kind == ModelKind::Mssg {
            config.senses
        } else {
            1
        };
        let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
        let global = EmbeddingTable::uniform(v, d, &mut rng);
        let senses = (k > 1).then(|| EmbeddingTable::uniform(v * k, d, &mut rng));
        let clusters = (kind == ModelKind::Mssg).then(|| Clusters::new(v, k, d));
        Ok(SenseModel {
            output: EmbeddingTable::zeros(v, d),
            vocab,
            config,
            kind,
            global,
            senses,
            clusters,
        })
    }

    pub(crate) fn from_parts(
        vocab: Vocabulary,
        config: TrainingConfig,
        kind: ModelKind,
        global: EmbeddingTable,
        output: EmbeddingTable,
        senses: Option<EmbeddingTable>,
        clusters: Option<Clusters>,
    ) -> Self {
        SenseModel {
            vocab,
            config,
            kind,
            global,
            output,
            senses,
            clusters,
        }
    }

    pub fn vocab(&self) -> &Vocabulary {
        &self.vocab
    }

    pub fn config(&self) -> &TrainingConfig {
        &self.config
    }

    pub fn kind(&self) -> ModelKind {
        self.kind
    }

    pub fn dim(&self) -> usize {
        self.global.dim()
    }

    /// Senses per word (1 for single-vector models).
    pub fn k(&self) -> usize {
        self.senses
            .as_ref()
            .map_or(1, |s| s.rows() / self.vocab.len())
    }

    pub fn global(&self) -> &EmbeddingTable {
        &self.global
    }

    pub fn output(&self) -> &EmbeddingTable {
        &self.output
    }

    pub fn senses(&self) -> Option<&EmbeddingTable> {
        self.senses.as_ref()
    }

    pub fn global_mut(&mut self) -> &mut EmbeddingTable {
        &mut self.global
    }

    pub fn output_mut(&mut self) -> &mut EmbeddingTable {
        &mut self.output
    }

    pub fn senses_mut(&mut self) -> Option<&mut EmbeddingTable> {
        self.senses.as_mut()
    }

    pub fn clusters(&self) -> Option<&Clusters> {
        self.clusters.as_ref()
    }

    /// Whether `word` carries `k` senses; words rarer than
    /// `sense_min_count` are trained with their global vector only.
    pub fn is_multi_sense(&self, word: u32) -> bool {
        self.senses.is_some() && self.vocab.count(word) >= self.config.sense_min_count
    }

    pub fn n_senses(&self, word: u32) -> usize {
        if self.is_multi_sense(word) {
            self.k()
        } else {
            1
        }
    }

    /// `v_s(w, k)`; single-sense words share their global vector.
    pub fn sense_vector(&self, sense: SenseRef) -> &[f32] {
        match &self.senses {
            Some(s) if self.is_multi_sense(sense.word_id) => {
                s.row(sense.word_id as usize * self.k() + sense.sense)
            }
            _ => self.global.row(sense.word_id as usize),
        }
    }

    /// Mean of the global vectors of `context`.
    pub fn context_vector(&self, context: &[u32]) -> Result<Vec<f64>> {
        let mut out = Vec::new();
        if context_mean(|c| self.global.row(c as usize), context, &mut out) {
            Ok(out)
        } else {
            Err(Error::DegenerateContext)
        }
    }

    /// Cluster whose centroid is closest (cosine) to `ctx`.
    pub fn predict_sense(&self, word: u32, ctx: &[f64]) -> usize {
        match &self.clusters {
            Some(c) => argmax_sense(c.word_centroids(word), c.counts(word), ctx),
            None => 0,
        }
    }

    /// Adds `ctx` to cluster `sense` of `word`, keeping the centroid the
    /// arithmetic mean of all assigned contexts.
    pub fn update_centroid(&mut self, word: u32, sense: usize, ctx: &[f64]) {
        let c = self
            .clusters
            .as_mut()
            .expect("update_centroid on a model without clusters");
        assert!(sense < c.k, "sense index out of range");
        let slot = word as usize * c.k + sense;
        running_mean(
            &mut c.centroids[slot * c.dim..(slot + 1) * c.dim],
            &mut c.counts[slot],
            ctx,
        );
    }
}
