use std::borrow::Cow;
use std::fmt;

use crate::error::{Error, Result};

/// Separator between a surface form and its PoS tag.
pub const TAG_SEPARATOR: char = '|';

/// A normalized corpus token, optionally carrying a PoS tag.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Token {
    pub surface: String,
    pub tag: Option<String>,
}

impl Token {
    pub fn untagged(surface: impl Into<String>) -> Self {
        Token {
            surface: surface.into(),
            tag: None,
        }
    }

    pub fn tagged(surface: impl Into<String>, tag: impl Into<String>) -> Self {
        Token {
            surface: surface.into(),
            tag: Some(tag.into()),
        }
    }
}

impl fmt::Display for Token {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.tag {
            Some(tag) => write!(f, "{}{}{}", self.surface, TAG_SEPARATOR, tag),
            None => f.write_str(&self.surface),
        }
    }
}

/// Strips a trailing `|TAG` from a serialized token, if present.
pub fn strip_tag(label: &str) -> &str {
    match label.rfind(TAG_SEPARATOR) {
        Some(pos) => &label[..pos],
        None => label,
    }
}

/// Line tokenizer: whitespace split, optional `surface|TAG` parsing and
/// surface normalization.
#[derive(Clone, Debug)]
pub struct Tokenizer {
    pub tagged: bool,
    pub lowercase: bool,
    pub strip_punctuation: bool,
}

impl Default for Tokenizer {
    fn default() -> Self {
        Tokenizer {
            tagged: false,
            lowercase: true,
            strip_punctuation: true,
        }
    }
}

impl Tokenizer {
    pub fn new(tagged: bool) -> Self {
        Tokenizer {
            tagged,
            ..Default::default()
        }
    }

    /// Applies the surface normalization (lowercasing, stripping of
    /// surrounding punctuation). Internal punctuation such as hyphens is kept.
    pub fn normalize<'a>(&self, surface: &'a str) -> Cow<'a, str> {
        let trimmed = if self.strip_punctuation {
            surface.trim_matches(|c: char| !c.is_alphanumeric())
        } else {
            surface
        };
        if self.lowercase && trimmed.chars().any(char::is_uppercase) {
            Cow::Owned(trimmed.to_lowercase())
        } else {
            Cow::Borrowed(trimmed)
        }
    }

    /// Tokenizes one sentence. `line_no` is only used for error reporting.
    pub fn tokenize(&self, line: &str, line_no: usize) -> Result<Vec<Token>> {
        let mut tokens = Vec::new();
        for raw in line.split_whitespace() {
            if let Some((surface, tag)) = self.split(raw, line_no)? {
                tokens.push(Token {
                    surface: surface.into_owned(),
                    tag: tag.map(str::to_owned),
                });
            }
        }
        Ok(tokens)
    }

    /// Calls `f` with the serialized form of every token of `line`, reusing
    /// one buffer. This is the allocation-light path used during training.
    pub fn for_each_key<F>(&self, line: &str, line_no: usize, mut f: F) -> Result<()>
    where
        F: FnMut(&str),
    {
        let mut key = String::new();
        for raw in line.split_whitespace() {
            if let Some((surface, tag)) = self.split(raw, line_no)? {
                match tag {
                    None => f(&surface),
                    Some(tag) => {
                        key.clear();
                        key.push_str(&surface);
                        key.push(TAG_SEPARATOR);
                        key.push_str(tag);
                        f(&key);
                    }
                }
            }
        }
        Ok(())
    }

    /// Returns `None` for tokens that normalize to an empty surface.
    fn split<'a>(
        &self,
        raw: &'a str,
        line_no: usize,
    ) -> Result<Option<(Cow<'a, str>, Option<&'a str>)>> {
        if !self.tagged {
            let surface = self.normalize(raw);
            return Ok((!surface.is_empty()).then_some((surface, None)));
        }
        let malformed = |reason| Error::MalformedToken {
            line: line_no,
            token: raw.to_owned(),
            reason,
        };
        let (surface, tag) = raw
            .rsplit_once(TAG_SEPARATOR)
            .ok_or_else(|| malformed("expected `surface|TAG`"))?;
        if tag.is_empty() || !tag.chars().all(is_tag_char) {
            return Err(malformed("invalid tag"));
        }
        if surface.is_empty() {
            return Err(malformed("empty surface"));
        }
        let surface = self.normalize(surface);
        Ok((!surface.is_empty()).then_some((surface, Some(tag))))
    }
}

// Tagger inventories use compound labels such as `PREP+ART` or `PRO-KS`.
fn is_tag_char(c: char) -> bool {
    c.is_ascii_uppercase() || c.is_ascii_digit() || matches!(c, '+' | '-' | '_')
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn untagged_whitespace_split() {
        let tokens = Tokenizer::new(false).tokenize("o banco caiu", 1).unwrap();
        let surfaces: Vec<_> = tokens.iter().map(|t| t.surface.as_str()).collect();
        assert_eq!(surfaces, ["o", "banco", "caiu"]);
        assert!(tokens.iter().all(|t| t.tag.is_none()));
    }

    #[test]
    fn tagged_tokens_split_on_separator() {
        let tokens = Tokenizer::new(true)
            .tokenize("aparente|ADJ aparentemente|ADV", 1)
            .unwrap();
        assert_eq!(
            tokens,
            [
                Token::tagged("aparente", "ADJ"),
                Token::tagged("aparentemente", "ADV")
            ]
        );
        assert_eq!(tokens[0].to_string(), "aparente|ADJ");
    }

    #[test]
    fn lowercases_surface() {
        let tokens = Tokenizer::new(false).tokenize("Banco", 1).unwrap();
        assert_eq!(tokens, [Token::untagged("banco")]);
    }

    #[test]
    fn strips_surrounding_punctuation_keeps_hyphens() {
        let tokens = Tokenizer::new(false)
            .tokenize("(centro-direita), \"Lisboa\". --", 1)
            .unwrap();
        assert_eq!(
            tokens,
            [Token::untagged("centro-direita"), Token::untagged("lisboa")]
        );
    }

    #[test]
    fn normalization_can_be_disabled() {
        let tok = Tokenizer {
            tagged: false,
            lowercase: false,
            strip_punctuation: false,
        };
        let tokens = tok.tokenize("Banco,", 1).unwrap();
        assert_eq!(tokens, [Token::untagged("Banco,")]);
    }

    #[test]
    fn tagged_splits_on_last_separator() {
        let tokens = Tokenizer::new(true).tokenize("a|b|N", 1).unwrap();
        assert_eq!(tokens, [Token::tagged("a|b", "N")]);
    }

    #[test]
    fn tagged_missing_separator_names_line() {
        let err = Tokenizer::new(true)
            .tokenize("banco|N caiu", 7)
            .unwrap_err();
        match err {
            Error::MalformedToken { line, token, .. } => {
                assert_eq!(line, 7);
                assert_eq!(token, "caiu");
            }
            other => panic!("unexpected error {other:?}"),
        }
        assert!(Tokenizer::new(true).tokenize("x|adj", 1).is_err());
        assert!(Tokenizer::new(true).tokenize("|N", 1).is_err());
    }

    #[test]
    fn compound_tags_accepted() {
        let tokens = Tokenizer::new(true).tokenize("do|PREP+ART", 1).unwrap();
        assert_eq!(tokens, [Token::tagged("do", "PREP+ART")]);
    }

    #[test]
    fn punctuation_only_tagged_token_dropped() {
        let tokens = Tokenizer::new(true).tokenize("banco|N ,|PU", 1).unwrap();
        assert_eq!(tokens, [Token::tagged("banco", "N")]);
    }

    #[test]
    fn for_each_key_matches_display() {
        let tok = Tokenizer::new(true);
        let line = "Aparente|ADJ livro|N livro|V";
        let mut keys = Vec::new();
        tok.for_each_key(line, 1, |k| keys.push(k.to_owned()))
            .unwrap();
        let expected: Vec<_> = tok
            .tokenize(line, 1)
            .unwrap()
            .iter()
            .map(Token::to_string)
            .collect();
        assert_eq!(keys, expected);
    }

    #[test]
    fn strip_tag_removes_last_component() {
        assert_eq!(strip_tag("completamente|ADV"), "completamente");
        assert_eq!(strip_tag("banco"), "banco");
    }
}
