//! Surface-pattern feature extraction.
//!
//! Turns each example into a [`FeatureVector`]: sparse n-gram counts plus
//! the named handcrafted features. For REL these are the entity
//! percentage counts (`E1C`, `E2C`), the fraction of sentences containing
//! the entity pair (`SPC`), and the shortest-span lengths covering both
//! entities and a trigger word (`LSS`, and `LSS_<trigger>` per configured
//! trigger). For NLI they are the hypothesis/premise word lengths (`HYL`,
//! `PRL`) and negation-presence flags (`HNEG`, `PNEG`).
//!
//! Span lengths count all tokens between the endpoints, punctuation
//! included, while the percentage and length denominators count word
//! tokens only. A span feature with no occurrence of some participant is
//! encoded as the constant [`ABSENT_LSS`] alongside a `{0,1}` presence
//! indicator, so downstream trees can split on presence and magnitude
//! separately.

mod export;
mod lexicon;

pub use export::{named_features_csv, ngram_counts_csv};
pub use lexicon::{default_negation_lexicon, default_relation_triggers, load_lexicon};

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::corpus::{tokenize, word_count, Dataset, ExampleBody, Task, TokenizedExample};
use crate::error::{Error, Result};

/// Encoding for span features whose trigger or entities never occur.
pub const ABSENT_LSS: f64 = 10_000.0;

/// Named-feature keys.
pub const E1C: &str = "E1C";
pub const E2C: &str = "E2C";
pub const SPC: &str = "SPC";
pub const LSS: &str = "LSS";
pub const LSS_PRESENT: &str = "LSS_PRESENT";
pub const HYL: &str = "HYL";
pub const PRL: &str = "PRL";
pub const HNEG: &str = "HNEG";
pub const PNEG: &str = "PNEG";

/// Key of the per-trigger span feature, e.g. `LSS_interacts`.
pub fn lss_feature_name(trigger: &str) -> String {
    format!("LSS_{trigger}")
}

/// Key of the per-trigger presence indicator, e.g. `LSS_interacts_PRESENT`.
pub fn lss_present_feature_name(trigger: &str) -> String {
    format!("LSS_{trigger}_PRESENT")
}

/// Configuration of the extraction pass.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeatureSpec {
    /// n-gram order for the sparse counts.
    pub ngram_n: usize,
    /// Relation trigger words (REL tasks), lowercase.
    pub trigger_lexicon: Vec<String>,
    /// Negation cue words (NLI tasks), lowercase.
    pub negation_lexicon: Vec<String>,
    pub task: Task,
}

impl FeatureSpec {
    /// Unigram REL spec with the stock trigger lexicon.
    pub fn default_rel() -> Self {
        FeatureSpec {
            ngram_n: 1,
            trigger_lexicon: default_relation_triggers(),
            negation_lexicon: Vec::new(),
            task: Task::Rel,
        }
    }

    /// Unigram NLI spec with the stock negation lexicon.
    pub fn default_nli() -> Self {
        FeatureSpec {
            ngram_n: 1,
            trigger_lexicon: Vec::new(),
            negation_lexicon: default_negation_lexicon(),
            task: Task::Nli,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.ngram_n < 1 {
            return Err(Error::InvalidInput("ngram_n must be >= 1".into()));
        }
        let (lexicon, name) = match self.task {
            Task::Rel => (&self.trigger_lexicon, "trigger"),
            Task::Nli => (&self.negation_lexicon, "negation"),
        };
        if lexicon.is_empty() {
            return Err(Error::InvalidInput(format!(
                "{name} lexicon must be non-empty for task {}",
                self.task
            )));
        }
        if let Some(bad) = lexicon.iter().find(|t| t.chars().any(char::is_uppercase)) {
            return Err(Error::InvalidInput(format!(
                "{name} lexicon entries must be lowercase, got '{bad}'"
            )));
        }
        Ok(())
    }
}

/// Extracted features for one example.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeatureVector {
    /// Sparse n-gram counts, key = tokens joined by a space.
    pub ngram_counts: BTreeMap<String, u64>,
    /// Named numeric features.
    pub named: BTreeMap<String, f64>,
}

/// Counts contiguous `n`-token sequences. Shorter-than-`n` input yields an
/// empty map.
pub fn extract_ngrams(tokens: &[String], n: usize) -> BTreeMap<String, u64> {
    let mut counts = BTreeMap::new();
    if n == 0 || tokens.len() < n {
        return counts;
    }
    for window in tokens.windows(n) {
        *counts.entry(window.join(" ")).or_insert(0) += 1;
    }
    counts
}

/// Occurrence counts of each entity as a percentage of the word-token
/// count. Errors when the text has zero word tokens.
pub fn entity_percentages(te: &TokenizedExample) -> Result<(f64, f64)> {
    let words = te.word_count();
    if words == 0 {
        return Err(Error::InvalidInput(
            "entity percentages undefined: zero word tokens".into(),
        ));
    }
    let pct = |count: usize| 100.0 * count as f64 / words as f64;
    Ok((pct(te.e1_positions.len()), pct(te.e2_positions.len())))
}

/// Length of the shortest token span containing both entities and the
/// given trigger word; `None` when any of the three never occurs.
pub fn lss_trigger(te: &TokenizedExample, trigger: &str) -> Option<usize> {
    let trigger_positions: Vec<usize> = te
        .tokens
        .iter()
        .enumerate()
        .filter(|(_, t)| t.as_str() == trigger)
        .map(|(i, _)| i)
        .collect();
    let mut best: Option<usize> = None;
    for &i in &te.e1_positions {
        for &j in &te.e2_positions {
            for &t in &trigger_positions {
                let span = i.max(j).max(t) - i.min(j).min(t) + 1;
                best = Some(best.map_or(span, |b| b.min(span)));
            }
        }
    }
    best
}

/// Length of the shortest span containing both entities and any trigger
/// from the lexicon; `None` when no trigger co-occurs with the entities.
pub fn lss_any(te: &TokenizedExample, triggers: &[String]) -> Option<usize> {
    triggers.iter().filter_map(|t| lss_trigger(te, t)).min()
}

/// Fraction of sentences containing at least one occurrence of each
/// entity. Errors when the example has no sentences.
pub fn spc(te: &TokenizedExample) -> Result<f64> {
    if te.sentence_spans.is_empty() {
        return Err(Error::InvalidInput(
            "sentence pair count undefined: zero sentences".into(),
        ));
    }
    let both = te
        .sentence_spans
        .iter()
        .filter(|range| {
            te.e1_positions.iter().any(|p| range.contains(p))
                && te.e2_positions.iter().any(|p| range.contains(p))
        })
        .count();
    Ok(both as f64 / te.sentence_spans.len() as f64)
}

/// NLI surface features.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NliFeatures {
    /// Hypothesis word length.
    pub hyl: usize,
    /// Premise word length.
    pub prl: usize,
    /// 1 iff any hypothesis token is a negation cue.
    pub hneg: bool,
    pub pneg: bool,
}

pub fn nli_features(
    premise_tokens: &[String],
    hypothesis_tokens: &[String],
    negation_lexicon: &[String],
) -> NliFeatures {
    let has_negation =
        |tokens: &[String]| tokens.iter().any(|t| negation_lexicon.iter().any(|n| n == t));
    NliFeatures {
        hyl: word_count(hypothesis_tokens),
        prl: word_count(premise_tokens),
        hneg: has_negation(hypothesis_tokens),
        pneg: has_negation(premise_tokens),
    }
}

fn span_entry(named: &mut BTreeMap<String, f64>, key: String, present_key: String, value: Option<usize>) {
    match value {
        Some(len) => {
            named.insert(key, len as f64);
            named.insert(present_key, 1.0);
        }
        None => {
            named.insert(key, ABSENT_LSS);
            named.insert(present_key, 0.0);
        }
    }
}

fn featurize_rel(
    text: &str,
    entity1: &str,
    entity2: &str,
    spec: &FeatureSpec,
) -> Result<FeatureVector> {
    let te = TokenizedExample::from_rel(text, entity1, entity2);
    let (e1c, e2c) = entity_percentages(&te)?;
    let mut named = BTreeMap::new();
    named.insert(E1C.to_string(), e1c);
    named.insert(E2C.to_string(), e2c);
    named.insert(SPC.to_string(), spc(&te)?);
    span_entry(
        &mut named,
        LSS.to_string(),
        LSS_PRESENT.to_string(),
        lss_any(&te, &spec.trigger_lexicon),
    );
    for trigger in &spec.trigger_lexicon {
        span_entry(
            &mut named,
            lss_feature_name(trigger),
            lss_present_feature_name(trigger),
            lss_trigger(&te, trigger),
        );
    }
    Ok(FeatureVector {
        ngram_counts: extract_ngrams(&te.tokens, spec.ngram_n),
        named,
    })
}

fn featurize_nli(premise: &str, hypothesis: &str, spec: &FeatureSpec) -> FeatureVector {
    let premise_tokens = tokenize(premise);
    let hypothesis_tokens = tokenize(hypothesis);
    let nli = nli_features(&premise_tokens, &hypothesis_tokens, &spec.negation_lexicon);
    let mut named = BTreeMap::new();
    named.insert(HYL.to_string(), nli.hyl as f64);
    named.insert(PRL.to_string(), nli.prl as f64);
    named.insert(HNEG.to_string(), nli.hneg as u8 as f64);
    named.insert(PNEG.to_string(), nli.pneg as u8 as f64);
    let mut ngram_counts = extract_ngrams(&premise_tokens, spec.ngram_n);
    for (gram, count) in extract_ngrams(&hypothesis_tokens, spec.ngram_n) {
        *ngram_counts.entry(gram).or_insert(0) += count;
    }
    FeatureVector {
        ngram_counts,
        named,
    }
}

/// Extracts one [`FeatureVector`] per example, in example order. Extractor
/// errors are tagged with the example id.
pub fn featurize(dataset: &Dataset, spec: &FeatureSpec) -> Result<Vec<FeatureVector>> {
    spec.validate()?;
    if spec.task != dataset.task {
        return Err(Error::InvalidInput(format!(
            "feature spec task {} does not match dataset task {}",
            spec.task, dataset.task
        )));
    }
    dataset
        .examples
        .iter()
        .map(|ex| {
            let vector = match &ex.body {
                ExampleBody::Rel {
                    text,
                    entity1,
                    entity2,
                } => featurize_rel(text, entity1, entity2, spec),
                ExampleBody::Nli {
                    premise,
                    hypothesis,
                } => Ok(featurize_nli(premise, hypothesis, spec)),
            };
            vector.map_err(|e| Error::example(&ex.id, e.to_string()))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{Example, Task};

    const WORKED: &str = "GENE_A interacts with CHEMICAL_C and binds to CHEMICAL_C and CHEMICAL_D";

    fn worked_example() -> TokenizedExample {
        TokenizedExample::from_rel(WORKED, "CHEMICAL_C", "GENE_A")
    }

    #[test]
    fn ngram_counts_unigram_and_bigram() {
        let t = |s: &str| s.split(' ').map(str::to_string).collect::<Vec<_>>();
        let uni = extract_ngrams(&t("a b a"), 1);
        assert_eq!(uni.get("a"), Some(&2));
        assert_eq!(uni.get("b"), Some(&1));
        let bi = extract_ngrams(&t("a b a"), 2);
        assert_eq!(bi.get("a b"), Some(&1));
        assert_eq!(bi.get("b a"), Some(&1));
        assert!(extract_ngrams(&t("a"), 2).is_empty());
    }

    #[test]
    fn worked_example_entity_counts() {
        // E1 occurs twice, E2 once, over 10 words.
        let te = worked_example();
        let uni = extract_ngrams(&te.tokens, 1);
        assert_eq!(uni.get("CHEMICAL_C"), Some(&2));
        let (e1c, e2c) = entity_percentages(&te).unwrap();
        assert_eq!(e1c, 20.0);
        assert_eq!(e2c, 10.0);
    }

    #[test]
    fn entity_percentage_edge_cases() {
        let te = TokenizedExample::from_rel("GENE_A GENE_B", "GENE_A", "GENE_B");
        assert_eq!(entity_percentages(&te).unwrap(), (50.0, 50.0));
        let te = TokenizedExample::from_rel("GENE_A binds x", "GENE_A", "CHEMICAL_Z");
        assert_eq!(entity_percentages(&te).unwrap().1, 0.0);
        let te = TokenizedExample::from_rel("...", "GENE_A", "CHEMICAL_Z");
        assert!(entity_percentages(&te).is_err());
    }

    #[test]
    fn worked_example_span_lengths() {
        let te = worked_example();
        assert_eq!(lss_trigger(&te, "interacts"), Some(4));
        assert_eq!(lss_trigger(&te, "binds"), Some(6));
        assert_eq!(lss_trigger(&te, "phosphorylates"), None);
        let lexicon = vec!["interacts".to_string(), "binds".to_string()];
        assert_eq!(lss_any(&te, &lexicon), Some(4));
        assert_eq!(lss_any(&te, &["absent".to_string()]), None);
        assert_eq!(
            lss_any(&te, &["binds".to_string()]),
            lss_trigger(&te, "binds")
        );
    }

    #[test]
    fn spc_counts_cooccurring_sentences() {
        let te = TokenizedExample::from_rel("GENE_A binds CHEMICAL_C", "GENE_A", "CHEMICAL_C");
        assert_eq!(spc(&te).unwrap(), 1.0);
        let te = TokenizedExample::from_rel(
            "A binds GENE_A. CHEMICAL_C is stable.",
            "GENE_A",
            "CHEMICAL_C",
        );
        assert_eq!(spc(&te).unwrap(), 0.0);
        let te = TokenizedExample::from_rel(
            "GENE_A binds CHEMICAL_C. GENE_A alone. CHEMICAL_C alone. nothing here.",
            "GENE_A",
            "CHEMICAL_C",
        );
        assert_eq!(spc(&te).unwrap(), 0.25);
        let te = TokenizedExample::from_rel("", "GENE_A", "CHEMICAL_C");
        assert!(spc(&te).is_err());
    }

    #[test]
    fn nli_feature_fixtures() {
        let lexicon = default_negation_lexicon();
        let toks = |s: &str| tokenize(s);
        let f = nli_features(&toks("a dog runs"), &toks("nobody is outside"), &lexicon);
        assert_eq!((f.hyl, f.hneg), (3, true));
        let f = nli_features(&toks("a dog runs"), &toks("a dog runs"), &lexicon);
        assert_eq!((f.hyl, f.hneg), (3, false));
        let f = nli_features(&toks(""), &toks("a dog runs"), &lexicon);
        assert_eq!((f.prl, f.pneg), (0, false));
    }

    fn rel_dataset(texts: &[&str]) -> Dataset {
        let examples = texts
            .iter()
            .enumerate()
            .map(|(i, text)| Example {
                id: format!("e{i}"),
                body: crate::corpus::ExampleBody::Rel {
                    text: text.to_string(),
                    entity1: "CHEMICAL_C".to_string(),
                    entity2: "GENE_A".to_string(),
                },
                gold: if i % 2 == 0 { "pos" } else { "neg" }.to_string(),
                pred: None,
                confidence: None,
            })
            .collect();
        Dataset::new("fx", Task::Rel, Some(vec!["neg".into(), "pos".into()]), examples).unwrap()
    }

    #[test]
    fn featurize_rel_produces_expected_names_and_values() {
        let ds = rel_dataset(&[WORKED, "GENE_A binds CHEMICAL_C", "CHEMICAL_C alone GENE_A"]);
        let spec = FeatureSpec {
            trigger_lexicon: vec!["interacts".into(), "binds".into()],
            ..FeatureSpec::default_rel()
        };
        let vectors = featurize(&ds, &spec).unwrap();
        assert_eq!(vectors.len(), 3);
        for v in &vectors {
            for key in [E1C, E2C, SPC, LSS, LSS_PRESENT] {
                assert!(v.named.contains_key(key), "missing {key}");
            }
            assert!(v.named.contains_key("LSS_interacts"));
            assert!(v.named.contains_key("LSS_binds"));
        }
        let first = &vectors[0];
        assert_eq!(first.named[E1C], 20.0);
        assert_eq!(first.named[LSS], 4.0);
        assert_eq!(first.named[LSS_PRESENT], 1.0);
        // No trigger in the third text: sentinel encoding plus indicator.
        let third = &vectors[2];
        assert_eq!(third.named[LSS], ABSENT_LSS);
        assert_eq!(third.named[LSS_PRESENT], 0.0);
    }

    #[test]
    fn featurize_nli_produces_exactly_the_four_named_features() {
        let examples = vec![Example {
            id: "n0".to_string(),
            body: crate::corpus::ExampleBody::Nli {
                premise: "two dogs run in a park".to_string(),
                hypothesis: "nobody is outside".to_string(),
            },
            gold: "contradiction".to_string(),
            pred: None,
            confidence: None,
        }];
        let ds = Dataset::new(
            "fx",
            Task::Nli,
            Some(vec!["contradiction".into(), "entailment".into()]),
            examples,
        )
        .unwrap();
        let vectors = featurize(&ds, &FeatureSpec::default_nli()).unwrap();
        let keys: Vec<&str> = vectors[0].named.keys().map(String::as_str).collect();
        assert_eq!(keys, vec![HNEG, HYL, PNEG, PRL]);
        assert_eq!(vectors[0].named[HYL], 3.0);
        assert_eq!(vectors[0].named[HNEG], 1.0);
    }

    #[test]
    fn featurize_error_names_example_id() {
        let ds = rel_dataset(&["..."]);
        let err = featurize(&ds, &FeatureSpec::default_rel()).unwrap_err();
        assert!(err.to_string().contains("example e0"), "{err}");
    }

    #[test]
    fn task_mismatch_rejected() {
        let ds = rel_dataset(&["GENE_A binds CHEMICAL_C"]);
        assert!(featurize(&ds, &FeatureSpec::default_nli()).is_err());
    }
}
