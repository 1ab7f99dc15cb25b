//! Multiple-sense skip-gram: per-word global vectors, `k` sense vectors and
//! `k` context clusters whose centroids are running means of the contexts
//! assigned to them.

pub(crate) mod cluster;
mod label;
mod model;
mod train;

pub use label::{escape, global_label, parse_label, sense_label, Label, SenseRef, SENSE_SEPARATOR};
pub use model::{Clusters, ModelKind, SenseModel};
pub use train::train_mssg;
