//! Analogy scoring, nearest neighbours and vector algebra over a read-only
//! set of labelled vectors.

mod analogy;
mod embeddings;
mod query;
mod report;

pub use analogy::{parse_analogy_file, AnalogyDataset, Category, CategoryKind, Quadruple};
pub(crate) use embeddings::labeled_rows;
pub use embeddings::Embeddings;
pub use query::{parse_expression, Hit, QueryResult, Space, Term};
pub use report::{evaluate_analogies, AnalogyOptions, AnalogyReport, CategoryScore};
