//! Corpus reading, normalization, vocabulary building and id encoding.

mod encode;
mod source;
mod token;
mod vocab;

pub use encode::{encode_stream, keep_probability, EncodedSentence, Encoder, Subsampler};
pub use source::{LineIter, NumberedLine, SentenceSource, TextFile};
pub use token::{strip_tag, Token, Tokenizer, TAG_SEPARATOR};
pub use vocab::{build_vocab, Vocabulary};
