//! Word, sense and PoS-tagged embeddings trained with skip-gram negative
//! sampling, plus analogy evaluation and vector-algebra queries.

pub mod corpus;
pub mod error;
pub mod eval;
pub mod mssg;
pub mod sgns;
pub mod store;
pub mod synthetic;

pub use corpus::{build_vocab, SentenceSource, TextFile, Token, Tokenizer, Vocabulary};
pub use error::{Error, Result};
pub use eval::{
    evaluate_analogies, parse_analogy_file, parse_expression, AnalogyDataset, AnalogyOptions,
    AnalogyReport, Embeddings, QueryResult, Space,
};
pub use mssg::{train_mssg, ModelKind, SenseModel, SenseRef};
pub use sgns::{train_skipgram, TrainStats, TrainingConfig};
pub use store::{load, load_model, save_binary, save_text, Include, ModelManifest};
