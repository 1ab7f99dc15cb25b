//! Saving and loading models: a word2vec-compatible text format, a binary
//! full dump, and a `key: value` sidecar manifest.

mod binary;
mod manifest;
mod text;

use std::fmt;
use std::fs::File;
use std::io::{BufReader, Read};
use std::path::Path;
use std::str::FromStr;

pub use binary::MAGIC;
pub use manifest::{Format, ModelManifest, FORMAT_VERSION};
pub use text::format_g;

use crate::error::{Error, Result};
use crate::eval::{labeled_rows, Embeddings};
use crate::mssg::SenseModel;

/// Which rows a text dump contains.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Include {
    /// One `surface` row per word.
    Global,
    /// `surface#k` rows only.
    Senses,
    #[default]
    Both,
}

impl Include {
    pub fn as_str(self) -> &'static str {
        match self {
            Include::Global => "global",
            Include::Senses => "senses",
            Include::Both => "both",
        }
    }
}

impl fmt::Display for Include {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Include {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "global" => Ok(Include::Global),
            "senses" => Ok(Include::Senses),
            "both" => Ok(Include::Both),
            other => Err(Error::Usage(format!("unknown row selection `{other}`"))),
        }
    }
}

/// Writes a text dump of `model` and its `.meta` sidecar. Returns the
/// number of rows written.
pub fn save_text(model: &SenseModel, path: impl AsRef<Path>, include: Include) -> Result<usize> {
    let path = path.as_ref();
    let rows = labeled_rows(model, include)?;
    let n = text::write_rows(
        File::create(path)?,
        model.dim(),
        rows.iter().map(|(l, r)| (l.as_str(), *r)),
    )?;
    ModelManifest::new(model, Format::Text, include, n).write_sidecar(path)?;
    Ok(n)
}

/// Writes every row of `emb` as a text dump (no sidecar).
pub fn save_embeddings_text(emb: &Embeddings, path: impl AsRef<Path>) -> Result<usize> {
    text::write_rows(
        File::create(path.as_ref())?,
        emb.dim(),
        (0..emb.len()).map(|r| (emb.label(r), emb.vector(r))),
    )
}

/// Writes the full model, cluster state included, in the binary format,
/// plus a `.meta` sidecar.
pub fn save_binary(model: &SenseModel, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    binary::write_model(model, File::create(path)?)?;
    ModelManifest::new(model, Format::Binary, Include::Both, model.vocab().len())
        .write_sidecar(path)
}

/// Whether `path` starts with the binary magic.
pub fn is_binary(path: impl AsRef<Path>) -> Result<bool> {
    let mut head = [0u8; 8];
    let mut f = File::open(path)?;
    let mut got = 0;
    while got < head.len() {
        match f.read(&mut head[got..])? {
            0 => break,
            n => got += n,
        }
    }
    Ok(got == head.len() && &head == MAGIC)
}

/// Loads the full model from a binary dump.
pub fn load_model(path: impl AsRef<Path>) -> Result<SenseModel> {
    binary::read_model(path.as_ref())
}

/// Loads any saved model in evaluation form. Binary dumps contribute
/// global and sense rows; text dumps are read as they are, with the model
/// kind taken from the sidecar when present and inferred from the labels
/// otherwise.
pub fn load(path: impl AsRef<Path>) -> Result<Embeddings> {
    let path = path.as_ref();
    if is_binary(path)? {
        return Embeddings::from_model(&load_model(path)?, Include::Both);
    }
    let kind = ModelManifest::read_sidecar(path)?.map(|m| m.kind);
    text::read_rows(BufReader::new(File::open(path)?), kind)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::Vocabulary;
    use crate::mssg::ModelKind;
    use crate::sgns::TrainingConfig;

    fn model(kind: ModelKind, words: usize, dim: usize, k: usize) -> SenseModel {
        let vocab =
            Vocabulary::from_counts((0..words).map(|i| (format!("w{i}"), 50 - i as u64)), 1);
        let config = TrainingConfig {
            dim,
            senses: k,
            seed: 3,
            ..Default::default()
        };
        SenseModel::new(vocab, config, kind).unwrap()
    }

    #[test]
    fn row_counts() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("m.txt");
        let m = model(ModelKind::Word, 2, 3, 1);
        assert_eq!(save_text(&m, &p, Include::Global).unwrap(), 2);
        let text = std::fs::read_to_string(&p).unwrap();
        assert_eq!(text.lines().count(), 3);
        assert_eq!(text.lines().next(), Some("2 3"));

        let m = model(ModelKind::Mssg, 2, 3, 3);
        assert_eq!(save_text(&m, &p, Include::Both).unwrap(), 8);
        assert_eq!(
            std::fs::read_to_string(&p).unwrap().lines().next(),
            Some("8 3")
        );
        assert_eq!(save_text(&m, &p, Include::Senses).unwrap(), 6);
        assert!(save_text(&model(ModelKind::Word, 2, 3, 1), &p, Include::Senses).is_err());
    }

    #[test]
    fn sidecar_describes_the_dump() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("m.txt");
        let m = model(ModelKind::Mssg, 3, 2, 2);
        save_text(&m, &p, Include::Senses).unwrap();
        let meta = ModelManifest::read_sidecar(&p).unwrap().unwrap();
        assert_eq!(
            (
                meta.kind,
                meta.vocab_size,
                meta.senses,
                meta.rows,
                meta.include
            ),
            (ModelKind::Mssg, 3, 2, 6, Include::Senses)
        );
        assert!(ModelManifest::read_sidecar(&dir.path().join("none"))
            .unwrap()
            .is_none());
    }

    #[test]
    fn binary_is_sniffed() {
        let dir = tempfile::tempdir().unwrap();
        let (b, t) = (dir.path().join("m.bin"), dir.path().join("m.txt"));
        let m = model(ModelKind::Mssg, 4, 5, 2);
        save_binary(&m, &b).unwrap();
        save_text(&m, &t, Include::Both).unwrap();
        assert!(is_binary(&b).unwrap());
        assert!(!is_binary(&t).unwrap());
        let (eb, et) = (load(&b).unwrap(), load(&t).unwrap());
        assert_eq!(eb.labels(), et.labels());
        assert_eq!(eb.kind(), ModelKind::Mssg);
    }

    #[test]
    fn truncated_binary_is_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("m.bin");
        save_binary(&model(ModelKind::Word, 4, 5, 1), &p).unwrap();
        let bytes = std::fs::read(&p).unwrap();
        std::fs::write(&p, &bytes[..bytes.len() - 3]).unwrap();
        assert!(matches!(load_model(&p), Err(Error::Load { .. })));
        std::fs::write(&p, b"SENSEFRG").unwrap();
        assert!(load_model(&p).is_err());
    }
}
