//! Lexicon files: one token per line, `#` starts a comment.

use std::fs;
use std::path::Path;

use crate::error::{Error, Result};

/// Stock relation-trigger list used when no lexicon file is supplied.
pub fn default_relation_triggers() -> Vec<String> {
    ["interacts", "binds", "phosphorylates", "activates", "inhibits", "regulates"]
        .map(str::to_string)
        .to_vec()
}

/// Stock negation-cue list for the NLI features.
pub fn default_negation_lexicon() -> Vec<String> {
    ["no", "not", "never", "nothing", "nobody", "n't", "none"]
        .map(str::to_string)
        .to_vec()
}

/// Loads a lexicon file. Entries are trimmed, lowercased, and deduplicated
/// preserving first occurrence; blank lines and `#` comments are skipped.
pub fn load_lexicon(path: impl AsRef<Path>) -> Result<Vec<String>> {
    let path = path.as_ref();
    let content =
        fs::read_to_string(path).map_err(|e| Error::io(path.display().to_string(), e))?;
    let mut entries = Vec::new();
    for line in content.lines() {
        let token = line.split('#').next().unwrap_or("").trim().to_lowercase();
        if !token.is_empty() && !entries.contains(&token) {
            entries.push(token);
        }
    }
    if entries.is_empty() {
        return Err(Error::InvalidInput(format!(
            "lexicon {} contains no entries",
            path.display()
        )));
    }
    Ok(entries)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    #[test]
    fn parses_comments_blanks_and_case() {
        let mut file = tempfile::NamedTempFile::new().unwrap();
        writeln!(file, "# relation triggers").unwrap();
        writeln!(file, "Interacts").unwrap();
        writeln!(file).unwrap();
        writeln!(file, "binds  # most common").unwrap();
        writeln!(file, "binds").unwrap();
        let lex = load_lexicon(file.path()).unwrap();
        assert_eq!(lex, vec!["interacts", "binds"]);
    }

    #[test]
    fn empty_lexicon_rejected() {
        let mut file = tempfile::NamedTempFile::new().unwrap();
        writeln!(file, "# nothing but comments").unwrap();
        assert!(load_lexicon(file.path()).is_err());
    }

    #[test]
    fn shipped_lexicons_match_defaults() {
        let root = concat!(env!("CARGO_MANIFEST_DIR"), "/../..");
        let triggers = load_lexicon(format!("{root}/lexicons/relation_triggers.txt")).unwrap();
        assert_eq!(triggers, default_relation_triggers());
        let negation = load_lexicon(format!("{root}/lexicons/negation.txt")).unwrap();
        assert_eq!(negation, default_negation_lexicon());
    }
}
