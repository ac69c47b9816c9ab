//! Tweet text normalization: placeholder removal, punctuation/digit
//! stripping, elongation collapse, then whitespace tokenization.
//!
//! The three rewrite rules run in that fixed order. Each rule is
//! idempotent on its own, and the composed pipeline is idempotent over
//! re-tokenized output.

use std::sync::OnceLock;

use regex::Regex;

/// Organizer-inserted markers that replace private or structural content.
/// Matching is exact and case-sensitive.
const PLACEHOLDERS: [&str; 3] = ["@USER", "URL", "<LF>"];

/// Ordered tokens produced by [`preprocess`]: non-empty, free of
/// whitespace, and free of the stripped punctuation/digit characters.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct TokenSequence(pub Vec<String>);

impl TokenSequence {
    pub fn as_slice(&self) -> &[String] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, String> {
        self.0.iter()
    }

    /// Tokens joined by single spaces, the inverse direction of [`tokenize`].
    pub fn join(&self) -> String {
        self.0.join(" ")
    }
}

impl From<Vec<String>> for TokenSequence {
    fn from(tokens: Vec<String>) -> Self {
        TokenSequence(tokens)
    }
}

impl From<&[&str]> for TokenSequence {
    fn from(tokens: &[&str]) -> Self {
        TokenSequence(tokens.iter().map(|t| t.to_string()).collect())
    }
}

impl<'a> IntoIterator for &'a TokenSequence {
    type Item = &'a String;
    type IntoIter = std::slice::Iter<'a, String>;

    fn into_iter(self) -> Self::IntoIter {
        self.0.iter()
    }
}

/// Delete every occurrence of the `@USER`, `URL` and `<LF>` markers.
///
/// Deletion repeats until no marker remains, so occurrences formed by the
/// concatenation of surrounding text are deleted too; this keeps the
/// function idempotent.
pub fn remove_placeholders(text: &str) -> String {
    let mut current = text.to_string();
    loop {
        let mut out = String::with_capacity(current.len());
        let mut rest = current.as_str();
        'scan: while !rest.is_empty() {
            for marker in PLACEHOLDERS {
                if let Some(stripped) = rest.strip_prefix(marker) {
                    rest = stripped;
                    continue 'scan;
                }
            }
            let ch = rest.chars().next().expect("non-empty");
            out.push(ch);
            rest = &rest[ch.len_utf8()..];
        }
        if out == current {
            return out;
        }
        current = out;
    }
}

fn strip_pattern() -> &'static Regex {
    static RE: OnceLock<Regex> = OnceLock::new();
    // Unicode punctuation (P) and symbols (S), ASCII digits, Arabic-Indic digits.
    RE.get_or_init(|| Regex::new(r"[\p{P}\p{S}0-9\u{0660}-\u{0669}]").expect("valid pattern"))
}

/// Replace every punctuation/symbol character and every ASCII or
/// Arabic-Indic decimal digit with a single space.
pub fn strip_punct_digits(text: &str) -> String {
    strip_pattern().replace_all(text, " ").into_owned()
}

/// Reduce every run of more than two identical characters to exactly two.
pub fn collapse_elongation(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    let mut prev: Option<char> = None;
    let mut run = 0usize;
    for ch in text.chars() {
        if prev == Some(ch) {
            run += 1;
        } else {
            prev = Some(ch);
            run = 1;
        }
        if run <= 2 {
            out.push(ch);
        }
    }
    out
}

/// Split on maximal Unicode whitespace runs, dropping empty fragments.
pub fn tokenize(text: &str) -> TokenSequence {
    TokenSequence(text.split_whitespace().map(str::to_string).collect())
}

/// The full preprocessing pipeline:
/// `tokenize(collapse_elongation(strip_punct_digits(remove_placeholders(text))))`.
///
/// Placeholder removal must come first; stripping punctuation first would
/// degrade `@USER` to `USER` and let it survive as a token.
pub fn preprocess(text: &str) -> TokenSequence {
    tokenize(&collapse_elongation(&strip_punct_digits(
        &remove_placeholders(text),
    )))
}
