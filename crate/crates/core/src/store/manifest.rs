use std::collections::HashMap;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use super::Include;
use crate::error::{Error, Result};
use crate::mssg::{ModelKind, SenseModel};
use crate::sgns::TrainingConfig;

pub const FORMAT_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Text,
    Binary,
}

impl Format {
    pub fn as_str(self) -> &'static str {
        match self {
            Format::Text => "text",
            Format::Binary => "binary",
        }
    }
}

/// Description of a saved model, written next to it as `<path>.meta` and
/// embedded in binary files. One `key: value` pair per line.
#[derive(Clone, Debug, PartialEq)]
pub struct ModelManifest {
    pub format: Format,
    pub format_version: u32,
    pub kind: ModelKind,
    pub vocab_size: usize,
    pub dim: usize,
    pub senses: usize,
    /// Rows in the file (text dumps); for binary files, the vocabulary size.
    pub rows: usize,
    pub include: Include,
    pub config: TrainingConfig,
}

impl ModelManifest {
    pub fn new(model: &SenseModel, format: Format, include: Include, rows: usize) -> Self {
        ModelManifest {
            format,
            format_version: FORMAT_VERSION,
            kind: model.kind(),
            vocab_size: model.vocab().len(),
            dim: model.dim(),
            senses: model.k(),
            rows,
            include,
            config: model.config().clone(),
        }
    }

    pub fn sidecar_path(model_path: &Path) -> PathBuf {
        let mut name = model_path.as_os_str().to_owned();
        name.push(".meta");
        PathBuf::from(name)
    }

    pub fn write_sidecar(&self, model_path: &Path) -> Result<()> {
        std::fs::write(Self::sidecar_path(model_path), self.to_string())?;
        Ok(())
    }

    /// The sidecar of `model_path`, if there is one.
    pub fn read_sidecar(model_path: &Path) -> Result<Option<Self>> {
        match std::fs::read_to_string(Self::sidecar_path(model_path)) {
            Ok(text) => text.parse().map(Some),
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => Ok(None),
            Err(e) => Err(e.into()),
        }
    }
}

impl fmt::Display for ModelManifest {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = &self.config;
        writeln!(f, "format: {}", self.format.as_str())?;
        writeln!(f, "format_version: {}", self.format_version)?;
        writeln!(f, "model_kind: {}", self.kind)?;
        writeln!(f, "vocab_size: {}", self.vocab_size)?;
        writeln!(f, "dim: {}", self.dim)?;
        writeln!(f, "senses: {}", self.senses)?;
        writeln!(f, "rows: {}", self.rows)?;
        writeln!(f, "include: {}", self.include.as_str())?;
        writeln!(f, "config.dim: {}", c.dim)?;
        writeln!(f, "config.window: {}", c.window)?;
        writeln!(f, "config.lr0: {}", c.lr0)?;
        writeln!(f, "config.min_count: {}", c.min_count)?;
        writeln!(f, "config.negatives: {}", c.negatives)?;
        writeln!(f, "config.epochs: {}", c.epochs)?;
        writeln!(f, "config.subsample_t: {}", c.subsample_t)?;
        writeln!(f, "config.senses: {}", c.senses)?;
        writeln!(f, "config.sense_min_count: {}", c.sense_min_count)?;
        writeln!(f, "config.seed: {}", c.seed)?;
        writeln!(f, "config.workers: {}", c.workers)?;
        writeln!(f, "config.negative_table_size: {}", c.negative_table_size)?;
        writeln!(f, "config.sigmoid: {}", c.sigmoid.as_str())
    }
}

impl FromStr for ModelManifest {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let mut map = HashMap::new();
        for (i, line) in text.lines().enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once(':')
                .ok_or_else(|| Error::parse(i + 1, "manifest lines are `key: value`"))?;
            map.insert(k.trim(), (i + 1, v.trim()));
        }
        fn get<T: FromStr>(map: &HashMap<&str, (usize, &str)>, key: &str) -> Result<T> {
            let &(line, v) = map
                .get(key)
                .ok_or_else(|| Error::parse(0, format!("manifest is missing `{key}`")))?;
            v.parse()
                .map_err(|_| Error::parse(line, format!("bad value `{v}` for `{key}`")))
        }
        let format = match get::<String>(&map, "format")?.as_str() {
            "text" => Format::Text,
            "binary" => Format::Binary,
            other => return Err(Error::parse(0, format!("unknown format `{other}`"))),
        };
        let config = TrainingConfig {
            dim: get(&map, "config.dim")?,
            window: get(&map, "config.window")?,
            lr0: get(&map, "config.lr0")?,
            min_count: get(&map, "config.min_count")?,
            negatives: get(&map, "config.negatives")?,
            epochs: get(&map, "config.epochs")?,
            subsample_t: get(&map, "config.subsample_t")?,
            senses: get(&map, "config.senses")?,
            sense_min_count: get(&map, "config.sense_min_count")?,
            seed: get(&map, "config.seed")?,
            workers: get(&map, "config.workers")?,
            negative_table_size: get(&map, "config.negative_table_size")?,
            sigmoid: get(&map, "config.sigmoid")?,
        };
        Ok(ModelManifest {
            format,
            format_version: get(&map, "format_version")?,
            kind: get(&map, "model_kind")?,
            vocab_size: get(&map, "vocab_size")?,
            dim: get(&map, "dim")?,
            senses: get(&map, "senses")?,
            rows: get(&map, "rows")?,
            include: get(&map, "include")?,
            config,
        })
    }
}
