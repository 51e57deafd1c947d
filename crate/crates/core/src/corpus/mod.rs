//! Data model, tokenization, dataset ingestion, and the planted-pattern
//! synthetic generator.
//!
//! All values here are immutable after construction and safe to share
//! across threads; every operation is pure given its inputs (the generator
//! is pure given its seed).

mod generate;
mod io;
mod tokenize;

pub use generate::{generate_planted_dataset, PlantSpec, Shortcut};
pub use io::{load_dataset, read_dataset, save_dataset, write_dataset};
pub use tokenize::{
    is_placeholder, is_word_token, normalize_token, split_sentences, tokenize, word_count,
};

use std::collections::BTreeSet;
use std::ops::Range;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Task kind a dataset was annotated for.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Task {
    /// Relation extraction over pre-masked entity pairs.
    Rel,
    /// Natural language inference (premise/hypothesis).
    Nli,
}

impl std::fmt::Display for Task {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Task::Rel => write!(f, "REL"),
            Task::Nli => write!(f, "NLI"),
        }
    }
}

/// Task-specific payload of an [`Example`].
#[derive(Debug, Clone, PartialEq)]
pub enum ExampleBody {
    Rel {
        text: String,
        /// Placeholder token for the first participating entity, e.g. `GENE_A`.
        entity1: String,
        entity2: String,
    },
    Nli {
        premise: String,
        hypothesis: String,
    },
}

impl ExampleBody {
    pub fn task(&self) -> Task {
        match self {
            ExampleBody::Rel { .. } => Task::Rel,
            ExampleBody::Nli { .. } => Task::Nli,
        }
    }
}

/// One labeled instance, optionally carrying the audited model's
/// prediction and its confidence.
#[derive(Debug, Clone, PartialEq)]
pub struct Example {
    pub id: String,
    pub body: ExampleBody,
    /// Gold label.
    pub gold: String,
    /// Prediction of the audited model, when available.
    pub pred: Option<String>,
    /// Confidence of `pred`, in `[0, 1]`. Present only with `pred`.
    pub confidence: Option<f64>,
}

/// A validated collection of examples sharing one task and label set.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    pub name: String,
    pub task: Task,
    /// Ordered label strings; ties throughout the crate break in this order.
    pub label_set: Vec<String>,
    pub examples: Vec<Example>,
}

impl Dataset {
    /// Builds a dataset, inferring the label set from observed gold and
    /// pred labels when `label_set` is `None`, and validates it.
    pub fn new(
        name: impl Into<String>,
        task: Task,
        label_set: Option<Vec<String>>,
        examples: Vec<Example>,
    ) -> Result<Self> {
        let label_set = label_set.unwrap_or_else(|| infer_label_set(&examples));
        let ds = Dataset {
            name: name.into(),
            task,
            label_set,
            examples,
        };
        ds.validate()?;
        Ok(ds)
    }

    /// Checks every dataset invariant; errors name the offending example id.
    pub fn validate(&self) -> Result<()> {
        if self.label_set.len() < 2 {
            return Err(Error::InvalidInput(format!(
                "label set must contain at least 2 labels, got {:?}",
                self.label_set
            )));
        }
        let mut seen = BTreeSet::new();
        for ex in &self.examples {
            if !seen.insert(ex.id.as_str()) {
                return Err(Error::example(&ex.id, "duplicate id"));
            }
            if ex.body.task() != self.task {
                return Err(Error::example(
                    &ex.id,
                    format!("example task does not match dataset task {}", self.task),
                ));
            }
            match &ex.body {
                ExampleBody::Rel {
                    text,
                    entity1,
                    entity2,
                } => {
                    for (field, value) in
                        [("text", text), ("entity1", entity1), ("entity2", entity2)]
                    {
                        if value.trim().is_empty() {
                            return Err(Error::example(&ex.id, format!("empty field '{field}'")));
                        }
                    }
                }
                ExampleBody::Nli {
                    premise,
                    hypothesis,
                } => {
                    for (field, value) in [("premise", premise), ("hypothesis", hypothesis)] {
                        if value.trim().is_empty() {
                            return Err(Error::example(&ex.id, format!("empty field '{field}'")));
                        }
                    }
                }
            }
            if ex.confidence.is_some() && ex.pred.is_none() {
                return Err(Error::example(&ex.id, "confidence present without pred"));
            }
            if let Some(c) = ex.confidence {
                if !(0.0..=1.0).contains(&c) {
                    return Err(Error::example(&ex.id, format!("confidence {c} not in [0,1]")));
                }
            }
            if !self.label_set.contains(&ex.gold) {
                return Err(Error::example(
                    &ex.id,
                    format!("gold label '{}' not in label set", ex.gold),
                ));
            }
            if let Some(pred) = &ex.pred {
                if !self.label_set.contains(pred) {
                    return Err(Error::example(
                        &ex.id,
                        format!("pred label '{pred}' not in label set"),
                    ));
                }
            }
        }
        Ok(())
    }

    /// Gold labels in example order.
    pub fn gold_labels(&self) -> Vec<String> {
        self.examples.iter().map(|e| e.gold.clone()).collect()
    }

    /// Ids of examples without a model prediction.
    pub fn ids_missing_pred(&self) -> Vec<String> {
        self.examples
            .iter()
            .filter(|e| e.pred.is_none())
            .map(|e| e.id.clone())
            .collect()
    }
}

/// Sorted set of labels observed across gold and pred columns.
pub fn infer_label_set(examples: &[Example]) -> Vec<String> {
    let mut set = BTreeSet::new();
    for ex in examples {
        set.insert(ex.gold.clone());
        if let Some(p) = &ex.pred {
            set.insert(p.clone());
        }
    }
    set.into_iter().collect()
}

/// Token-level view of a REL example: tokens, sentence ranges, and the
/// token positions of both entity placeholders.
#[derive(Debug, Clone, PartialEq)]
pub struct TokenizedExample {
    pub tokens: Vec<String>,
    /// Disjoint, ordered half-open ranges covering `0..tokens.len()`.
    pub sentence_spans: Vec<Range<usize>>,
    /// Sorted token indices where entity 1's placeholder occurs.
    pub e1_positions: Vec<usize>,
    pub e2_positions: Vec<usize>,
}

impl TokenizedExample {
    /// Tokenizes REL text and locates both entities. Entity strings are
    /// normalized with the tokenizer's case rule before matching, so the
    /// positions always dereference to the exact placeholder token.
    pub fn from_rel(text: &str, entity1: &str, entity2: &str) -> Self {
        let tokens = tokenize(text);
        let sentence_spans = split_sentences(&tokens);
        let e1 = normalize_token(entity1);
        let e2 = normalize_token(entity2);
        let positions = |needle: &str| -> Vec<usize> {
            tokens
                .iter()
                .enumerate()
                .filter(|(_, t)| t.as_str() == needle)
                .map(|(i, _)| i)
                .collect()
        };
        TokenizedExample {
            e1_positions: positions(&e1),
            e2_positions: positions(&e2),
            tokens,
            sentence_spans,
        }
    }

    /// Number of word (non-punctuation) tokens.
    pub fn word_count(&self) -> usize {
        word_count(&self.tokens)
    }
}
