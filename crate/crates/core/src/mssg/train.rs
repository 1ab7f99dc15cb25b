use super::model::{ModelKind, SenseModel};
use crate::corpus::{SentenceSource, Tokenizer, Vocabulary};
use crate::error::{Error, Result};
use crate::sgns::train::{run, Buffers, Kernel};
use crate::sgns::{Sigmoid, TrainStats, TrainingConfig};

/// Trains a multiple-sense skip-gram model with `config.senses` senses per
/// word. Sense identification happens online, during training.
pub fn train_mssg(
    source: &dyn SentenceSource,
    tokenizer: &Tokenizer,
    vocab: &Vocabulary,
    config: &TrainingConfig,
) -> Result<(SenseModel, TrainStats)> {
    let mut model = SenseModel::new(vocab.clone(), config.clone(), ModelKind::Mssg)?;
    let stats = run(&mut model, source, tokenizer)?;
    Ok((model, stats))
}

impl SenseModel {
    /// One MSSG update for an occurrence of `word` with the given context.
    /// `negatives[i]` are the noise words paired with `context[i]`.
    ///
    /// Returns the sense that was trained, or `None` if the context vector
    /// is zero and the position was skipped.
    pub fn mssg_step(
        &mut self,
        word: u32,
        context: &[u32],
        negatives: &[Vec<u32>],
        lr: f32,
        sigmoid: &Sigmoid,
    ) -> Result<Option<usize>> {
        if context.is_empty() {
            return Err(Error::DegenerateContext);
        }
        if negatives.len() != context.len() {
            return Err(Error::Usage(
                "one negative set per context word is required".into(),
            ));
        }
        if self.clusters.is_none() {
            return Err(Error::Config("mssg_step needs an MSSG model".into()));
        }
        let mut buf = Buffers::default();
        Kernel::new(self, sigmoid).mssg_position(word, context, negatives, lr, &mut buf)
    }

    /// Plain skip-gram update of `word`'s global vector.
    pub fn skipgram_step(
        &mut self,
        word: u32,
        context: &[u32],
        negatives: &[Vec<u32>],
        lr: f32,
        sigmoid: &Sigmoid,
    ) -> Result<()> {
        if negatives.len() != context.len() {
            return Err(Error::Usage(
                "one negative set per context word is required".into(),
            ));
        }
        let mut buf = Buffers::default();
        Kernel::new(self, sigmoid).skipgram_position(word, context, negatives, lr, &mut buf)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mssg::SenseRef;
    use crate::sgns::SigmoidMode;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn vocab(n: usize) -> Vocabulary {
        Vocabulary::from_counts((0..n).map(|i| (format!("w{i}"), 100 - i as u64)), 1)
    }

    fn config(k: usize, dim: usize) -> TrainingConfig {
        TrainingConfig {
            dim,
            senses: k,
            min_count: 1,
            sigmoid: SigmoidMode::Exact,
            ..Default::default()
        }
    }

    fn randomize(model: &mut SenseModel, rng: &mut ChaCha8Rng) {
        for v in model.output.as_mut_slice() {
            *v = rng.random_range(-0.5..0.5);
        }
        for v in model.global.as_mut_slice() {
            *v = rng.random_range(-0.5..0.5);
        }
        if let Some(s) = model.senses.as_mut() {
            for v in s.as_mut_slice() {
                *v = rng.random_range(-0.5..0.5);
            }
        }
    }

    #[test]
    fn k1_step_equals_skipgram_step() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let sig = Sigmoid::new(SigmoidMode::Exact);
        let mut mssg = SenseModel::new(vocab(8), config(1, 6), ModelKind::Mssg).unwrap();
        randomize(&mut mssg, &mut rng);
        let mut plain = SenseModel::from_parts(
            mssg.vocab.clone(),
            mssg.config.clone(),
            ModelKind::Word,
            mssg.global.clone(),
            mssg.output.clone(),
            None,
            None,
        );
        let context = [1, 2, 5];
        let negs = vec![vec![3, 4], vec![0, 7], vec![6, 6]];
        assert_eq!(
            mssg.mssg_step(0, &context, &negs, 0.05, &sig).unwrap(),
            Some(0)
        );
        plain.skipgram_step(0, &context, &negs, 0.05, &sig).unwrap();
        assert_eq!(mssg.global, plain.global);
        assert_eq!(mssg.output, plain.output);
        assert_eq!(mssg.clusters().unwrap().counts(0), [1]);
    }

    #[test]
    fn sense_gradient_matches_finite_differences() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let sig = Sigmoid::new(SigmoidMode::Exact);
        for _ in 0..50 {
            let mut model = SenseModel::new(vocab(10), config(3, 5), ModelKind::Mssg).unwrap();
            randomize(&mut model, &mut rng);
            // A single context word makes the lr = 1 step delta exactly the
            // analytic gradient of that pair's summand.
            let context = [rng.random_range(1..10u32)];
            let negs = vec![(0..3)
                .map(|_| rng.random_range(1..10u32))
                .collect::<Vec<_>>()];
            let before = model.clone();
            let sense = model
                .mssg_step(0, &context, &negs, 1.0, &sig)
                .unwrap()
                .unwrap();
            let at = SenseRef { word_id: 0, sense };
            let center: Vec<f64> = before.sense_vector(at).iter().map(|&v| v as f64).collect();
            let objective = |c: &[f64]| -> f64 {
                let out = before.output();
                let ls = |x: f64| -(1.0 + (-x).exp()).ln();
                let d = |row: &[f32]| c.iter().zip(row).map(|(a, b)| a * *b as f64).sum::<f64>();
                ls(d(out.row(context[0] as usize)))
                    + negs[0]
                        .iter()
                        .map(|&n| ls(-d(out.row(n as usize))))
                        .sum::<f64>()
            };
            let h = 1e-4;
            for i in 0..center.len() {
                let mut plus = center.clone();
                plus[i] += h;
                let mut minus = center.clone();
                minus[i] -= h;
                let numeric = (objective(&plus) - objective(&minus)) / (2.0 * h);
                let analytic = (model.sense_vector(at)[i] - before.sense_vector(at)[i]) as f64;
                let rel = (analytic - numeric).abs() / analytic.abs().max(numeric.abs()).max(1e-3);
                assert!(rel < 1e-4, "component {i}: {analytic} vs {numeric}");
            }
        }
    }

    #[test]
    fn first_occurrences_seed_clusters_in_order() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let sig = Sigmoid::new(SigmoidMode::Exact);
        let mut model = SenseModel::new(vocab(6), config(3, 4), ModelKind::Mssg).unwrap();
        randomize(&mut model, &mut rng);
        let negs = vec![vec![5]];
        let senses: Vec<_> = (0..3)
            .map(|_| {
                model
                    .mssg_step(0, &[1], &negs, 0.01, &sig)
                    .unwrap()
                    .unwrap()
            })
            .collect();
        assert_eq!(senses, [0, 1, 2]);
        assert_eq!(model.clusters().unwrap().counts(0), [1, 1, 1]);
    }

    #[test]
    fn empty_context_is_degenerate() {
        let sig = Sigmoid::new(SigmoidMode::Exact);
        let mut model = SenseModel::new(vocab(4), config(2, 4), ModelKind::Mssg).unwrap();
        assert!(matches!(
            model.mssg_step(0, &[], &[], 0.1, &sig),
            Err(Error::DegenerateContext)
        ));
    }

    #[test]
    fn zero_context_skips_position() {
        let sig = Sigmoid::new(SigmoidMode::Exact);
        let mut model = SenseModel::new(vocab(4), config(2, 4), ModelKind::Mssg).unwrap();
        model
            .global
            .row_mut(1)
            .copy_from_slice(&[1.0, 2.0, 3.0, 4.0]);
        model
            .global
            .row_mut(2)
            .copy_from_slice(&[-1.0, -2.0, -3.0, -4.0]);
        let before = model.clone();
        let out = model
            .mssg_step(0, &[1, 2], &[vec![3], vec![3]], 0.1, &sig)
            .unwrap();
        assert_eq!(out, None);
        assert_eq!(model, before);
    }

    #[test]
    fn rare_words_are_single_sense() {
        let cfg = TrainingConfig {
            sense_min_count: 100,
            ..config(3, 4)
        };
        let model = SenseModel::new(vocab(4), cfg, ModelKind::Mssg).unwrap();
        assert!(model.is_multi_sense(0));
        assert!(!model.is_multi_sense(1));
        assert_eq!(model.n_senses(1), 1);
        assert_eq!(
            model.sense_vector(SenseRef {
                word_id: 1,
                sense: 0
            }),
            model.global().row(1)
        );
    }
}
