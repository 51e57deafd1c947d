//! Whitespace tokenizer with punctuation peeling and sentence splitting.
//!
//! The tokenizer is deliberately small: split on whitespace, peel leading
//! and trailing ASCII punctuation off each chunk into standalone tokens,
//! and lowercase everything except masked-entity placeholders (all-caps
//! tokens with an underscore, e.g. `GENE_A`), which pass through verbatim.
//! Counts used by the surface features distinguish word tokens from pure
//! punctuation tokens.

use std::ops::Range;

/// Tokens that end a sentence for [`split_sentences`].
const SENTENCE_TERMINATORS: [&str; 3] = [".", "!", "?"];

/// True for masked-entity placeholders such as `GENE_A` or `CHEMICAL_C`:
/// all chars in `[A-Z0-9_]`, at least one letter and one underscore.
pub fn is_placeholder(token: &str) -> bool {
    token.chars().all(|c| c.is_ascii_uppercase() || c.is_ascii_digit() || c == '_')
        && token.chars().any(|c| c.is_ascii_uppercase())
        && token.contains('_')
}

/// True when the token carries at least one non-punctuation character.
pub fn is_word_token(token: &str) -> bool {
    !token.is_empty() && !token.chars().all(|c| c.is_ascii_punctuation())
}

/// Number of word (non-punctuation) tokens.
pub fn word_count(tokens: &[String]) -> usize {
    tokens.iter().filter(|t| is_word_token(t)).count()
}

/// Applies the tokenizer's case rule to a single token: placeholders are
/// preserved, everything else is lowercased. Entity strings supplied by
/// callers go through this before being matched against tokens.
pub fn normalize_token(token: &str) -> String {
    if is_placeholder(token) {
        token.to_string()
    } else {
        token.to_lowercase()
    }
}

/// Splits `text` into tokens. Deterministic and total; empty input yields
/// an empty list.
pub fn tokenize(text: &str) -> Vec<String> {
    let mut out = Vec::new();
    for chunk in text.split_whitespace() {
        let chars: Vec<char> = chunk.chars().collect();
        let mut start = 0;
        let mut end = chars.len();
        while start < end && chars[start].is_ascii_punctuation() {
            start += 1;
        }
        while end > start && chars[end - 1].is_ascii_punctuation() {
            end -= 1;
        }
        for &c in &chars[..start] {
            out.push(c.to_string());
        }
        if start < end {
            let core: String = chars[start..end].iter().collect();
            out.push(normalize_token(&core));
        }
        for &c in &chars[end..] {
            out.push(c.to_string());
        }
    }
    out
}

/// Splits a token list into sentence ranges. A sentence ends after a
/// terminator token (`.`, `!`, `?`); a trailing stretch with no terminator
/// still forms a sentence. The ranges are disjoint, ordered, and cover
/// `0..tokens.len()`.
pub fn split_sentences(tokens: &[String]) -> Vec<Range<usize>> {
    let mut ranges = Vec::new();
    let mut start = 0;
    for (i, tok) in tokens.iter().enumerate() {
        if SENTENCE_TERMINATORS.contains(&tok.as_str()) {
            ranges.push(start..i + 1);
            start = i + 1;
        }
    }
    if start < tokens.len() {
        ranges.push(start..tokens.len());
    }
    ranges
}
