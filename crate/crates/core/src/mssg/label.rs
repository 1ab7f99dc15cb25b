//! Row labels: `surface` for global rows and `surface#k` for sense rows.
//! A literal `#` inside a surface is written as `##`.

use std::borrow::Cow;
use std::fmt;

pub const SENSE_SEPARATOR: char = '#';

/// A (word, sense) pair of a multi-sense model.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SenseRef {
    pub word_id: u32,
    pub sense: usize,
}

/// A parsed row label.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Label<'a> {
    pub surface: Cow<'a, str>,
    pub sense: Option<usize>,
}

impl fmt::Display for Label<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&escape(&self.surface))?;
        if let Some(k) = self.sense {
            write!(f, "{SENSE_SEPARATOR}{k}")?;
        }
        Ok(())
    }
}

pub fn escape(surface: &str) -> Cow<'_, str> {
    if surface.contains(SENSE_SEPARATOR) {
        Cow::Owned(surface.replace('#', "##"))
    } else {
        Cow::Borrowed(surface)
    }
}

pub fn sense_label(surface: &str, sense: usize) -> String {
    format!("{}{SENSE_SEPARATOR}{sense}", escape(surface))
}

pub fn global_label(surface: &str) -> Cow<'_, str> {
    escape(surface)
}

/// Parses a label written by [`sense_label`] or [`global_label`].
pub fn parse_label(label: &str) -> Label<'_> {
    let digits = label.bytes().rev().take_while(u8::is_ascii_digit).count();
    let head = &label[..label.len() - digits];
    let hashes = head.bytes().rev().take_while(|&b| b == b'#').count();
    if digits > 0 && hashes % 2 == 1 {
        if let Ok(sense) = label[label.len() - digits..].parse() {
            return Label {
                surface: unescape(&head[..head.len() - 1]),
                sense: Some(sense),
            };
        }
    }
    Label {
        surface: unescape(label),
        sense: None,
    }
}

fn unescape(s: &str) -> Cow<'_, str> {
    if s.contains("##") {
        Cow::Owned(s.replace("##", "#"))
    } else {
        Cow::Borrowed(s)
    }
}
