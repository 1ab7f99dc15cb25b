use std::fmt;
use std::fs::File;
use std::io::{BufRead, BufReader};
use std::path::Path;

use crate::error::{Error, Result};

const SYNTACTIC: [&str; 9] = [
    "adjective-to-adverb",
    "opposite",
    "comparative",
    "superlative",
    "present-participle",
    "nationality-adjective",
    "past-tense",
    "plural",
    "plural-verbs",
];

const SEMANTIC: [&str; 5] = [
    "capital-common-countries",
    "capital-world",
    "currency",
    "city-in-state",
    "family",
];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CategoryKind {
    Syntactic,
    Semantic,
    /// Not one of the known category names; counted under the overall
    /// aggregate only.
    Unknown,
}

impl CategoryKind {
    /// Kind of a category header. A `gramN-` prefix, as used by some
    /// releases of the dataset, is ignored.
    pub fn of(name: &str) -> Self {
        let base = strip_gram_prefix(name);
        if SYNTACTIC.contains(&base) {
            CategoryKind::Syntactic
        } else if SEMANTIC.contains(&base) {
            CategoryKind::Semantic
        } else {
            CategoryKind::Unknown
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            CategoryKind::Syntactic => "syntactic",
            CategoryKind::Semantic => "semantic",
            CategoryKind::Unknown => "unknown",
        }
    }
}

impl fmt::Display for CategoryKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

fn strip_gram_prefix(name: &str) -> &str {
    if let Some(rest) = name.strip_prefix("gram") {
        let digits = rest.bytes().take_while(u8::is_ascii_digit).count();
        if digits > 0 {
            if let Some(base) = rest[digits..].strip_prefix('-') {
                return base;
            }
        }
    }
    name
}

/// `a : b :: c : d`.
pub type Quadruple = [String; 4];

#[derive(Clone, Debug, PartialEq)]
pub struct Category {
    pub name: String,
    pub kind: CategoryKind,
    pub quadruples: Vec<Quadruple>,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct AnalogyDataset {
    pub categories: Vec<Category>,
}

impl AnalogyDataset {
    pub fn is_empty(&self) -> bool {
        self.categories.is_empty()
    }

    pub fn len(&self) -> usize {
        self.categories.iter().map(|c| c.quadruples.len()).sum()
    }

    /// Parses `: category` headers followed by lines of four
    /// whitespace-separated words. Blank lines are ignored; quadruples
    /// before the first header go to a category named `uncategorized`.
    pub fn parse<R: BufRead>(input: R) -> Result<Self> {
        let mut categories: Vec<Category> = Vec::new();
        for (i, line) in input.lines().enumerate() {
            let line_no = i + 1;
            let line = line?;
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            if let Some(name) = line.strip_prefix(':') {
                let name = name.trim();
                if name.is_empty() {
                    return Err(Error::parse(line_no, "empty category name"));
                }
                categories.push(Category {
                    name: name.to_string(),
                    kind: CategoryKind::of(name),
                    quadruples: Vec::new(),
                });
                continue;
            }
            let words: Vec<&str> = line.split_whitespace().collect();
            let Ok(quad) = <[&str; 4]>::try_from(words.as_slice()) else {
                return Err(Error::parse(
                    line_no,
                    format!("expected 4 words, found {}", words.len()),
                ));
            };
            if categories.is_empty() {
                categories.push(Category {
                    name: "uncategorized".into(),
                    kind: CategoryKind::Unknown,
                    quadruples: Vec::new(),
                });
            }
            let current = categories.last_mut().unwrap();
            current.quadruples.push(quad.map(str::to_string));
        }
        Ok(AnalogyDataset { categories })
    }
}

pub fn parse_analogy_file(path: impl AsRef<Path>) -> Result<AnalogyDataset> {
    AnalogyDataset::parse(BufReader::new(File::open(path)?))
}
