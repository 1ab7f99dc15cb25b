use crate::error::{Error, Result};

/// How the logistic function is evaluated during training.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum SigmoidMode {
    /// 1024-bin lookup on [-6, 6], clamped outside.
    #[default]
    Table,
    Exact,
}

impl SigmoidMode {
    pub fn as_str(self) -> &'static str {
        match self {
            SigmoidMode::Table => "table",
            SigmoidMode::Exact => "exact",
        }
    }
}

impl std::str::FromStr for SigmoidMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "table" => Ok(SigmoidMode::Table),
            "exact" => Ok(SigmoidMode::Exact),
            other => Err(Error::Usage(format!("unknown sigmoid mode `{other}`"))),
        }
    }
}

/// Hyperparameters shared by all training modes.
#[derive(Clone, Debug, PartialEq)]
pub struct TrainingConfig {
    pub dim: usize,
    pub window: usize,
    pub lr0: f32,
    pub min_count: u64,
    pub negatives: usize,
    pub epochs: usize,
    pub subsample_t: f64,
    /// Senses per word; only read by MSSG training.
    pub senses: usize,
    /// Words rarer than this get a single sense under MSSG.
    pub sense_min_count: u64,
    pub seed: u64,
    pub workers: usize,
    pub negative_table_size: usize,
    pub sigmoid: SigmoidMode,
}

impl Default for TrainingConfig {
    fn default() -> Self {
        TrainingConfig {
            dim: 300,
            window: 5,
            lr0: 0.025,
            min_count: 10,
            negatives: 5,
            epochs: 1,
            subsample_t: 0.0,
            senses: 3,
            sense_min_count: 0,
            seed: 1,
            workers: 1,
            negative_table_size: 10_000_000,
            sigmoid: SigmoidMode::Table,
        }
    }
}

impl TrainingConfig {
    pub fn validate(&self) -> Result<()> {
        let fail = |msg: &str| Err(Error::Config(msg.to_owned()));
        if self.dim == 0 {
            return fail("dim must be at least 1");
        }
        if self.window == 0 {
            return fail("window must be at least 1");
        }
        if !(self.lr0 > 0.0 && self.lr0.is_finite()) {
            return fail("learning rate must be positive and finite");
        }
        if self.min_count == 0 {
            return fail("min_count must be at least 1");
        }
        if self.negatives == 0 {
            return fail("negatives must be at least 1");
        }
        if self.epochs == 0 {
            return fail("epochs must be at least 1");
        }
        if !(self.subsample_t >= 0.0 && self.subsample_t.is_finite()) {
            return fail("subsampling threshold must be non-negative");
        }
        if self.senses == 0 {
            return fail("senses must be at least 1");
        }
        if self.workers == 0 {
            return fail("workers must be at least 1");
        }
        if self.negative_table_size == 0 {
            return fail("negative table size must be positive");
        }
        Ok(())
    }
}

/// Linear decay from `lr0` to `lr0 * 1e-4` over `total` processed tokens.
#[derive(Clone, Copy, Debug)]
pub struct LrSchedule {
    lr0: f32,
    total: f64,
}

pub const LR_FLOOR_RATIO: f32 = 1e-4;

impl LrSchedule {
    pub fn new(lr0: f32, total_tokens: u64) -> Self {
        LrSchedule {
            lr0,
            total: total_tokens as f64 + 1.0,
        }
    }

    #[inline]
    pub fn at(&self, processed: u64) -> f32 {
        let frac = 1.0 - processed as f64 / self.total;
        self.lr0 * (frac as f32).max(LR_FLOOR_RATIO)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn defaults_match_reported_parameters() {
        let c = TrainingConfig::default();
        assert_eq!((c.dim, c.window, c.min_count, c.senses), (300, 5, 10, 3));
        assert_eq!(c.lr0, 0.025);
        assert_eq!(c.negatives, 5);
        assert_eq!(c.subsample_t, 0.0);
        c.validate().unwrap();
    }

    #[test]
    fn rejects_invalid_values() {
        for broken in [
            TrainingConfig {
                dim: 0,
                ..Default::default()
            },
            TrainingConfig {
                window: 0,
                ..Default::default()
            },
            TrainingConfig {
                lr0: 0.0,
                ..Default::default()
            },
            TrainingConfig {
                lr0: f32::NAN,
                ..Default::default()
            },
            TrainingConfig {
                senses: 0,
                ..Default::default()
            },
        ] {
            assert!(broken.validate().is_err(), "{broken:?}");
        }
    }

    proptest! {
        #[test]
        fn schedule_is_monotone_and_floored(total in 1u64..1_000_000, a in 0u64..2_000_000, b in 0u64..2_000_000) {
            let s = LrSchedule::new(0.025, total);
            let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
            prop_assert!(s.at(hi) <= s.at(lo));
            prop_assert!(s.at(hi) >= 0.025 * LR_FLOOR_RATIO);
            prop_assert!(s.at(0) <= 0.025);
        }
    }
}
