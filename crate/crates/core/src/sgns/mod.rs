//! Skip-gram with negative sampling.

mod config;
mod negative;
mod sigmoid;
mod step;
mod table;
pub(crate) mod train;

pub use config::{LrSchedule, SigmoidMode, TrainingConfig, LR_FLOOR_RATIO};
pub use negative::{NegativeTable, UNIGRAM_POWER};
pub use sigmoid::{exact as sigmoid, Sigmoid};
pub use step::{sgns_gradient, sgns_step, SgnsGradient, StepScratch};
pub use table::{axpy, dot, norm, EmbeddingTable, Rows};
pub use train::{train_skipgram, TrainStats};
