//! Audits text classifiers for reliance on spurious surface patterns.
//!
//! The core idea: fit simple, interpretable surrogate models (multinomial
//! naive Bayes over top-k n-grams, a depth-bounded decision tree, or the
//! NB-T stack of the two) on shallow surface features of the input, once
//! against gold labels and once against the audited model's predictions,
//! and compare the Cohen's-kappa fidelity of the two fits. A surrogate
//! that tracks the audited model's predictions much more closely than the
//! gold labels is evidence that the model leans on those surface patterns
//! rather than on task semantics.
//!
//! Module map:
//!
//! * [`corpus`] — data model, tokenization, JSONL ingestion, and a
//!   planted-pattern synthetic generator for end-to-end testing.
//! * [`features`] — surface-pattern feature extraction (n-grams, entity
//!   percentages, shortest trigger spans, sentence co-occurrence, NLI
//!   length/negation features).
//! * [`surrogate`] — the interpretable models, deterministic fitting, and
//!   Graphviz export of fitted trees.
//! * [`agreement`] — Cohen's kappa, significance, interpretation bands,
//!   multi-run aggregation.
//! * [`audit`] — the audit protocol: paired gold/model-prediction fits,
//!   fidelity gap, high-confidence (GH) sampling, multi-run reports.
//! * [`matchedpair`] — strict case/control scoring of matched test pairs.

pub mod agreement;
pub mod audit;
pub mod corpus;
pub mod error;
pub mod features;
pub mod matchedpair;
pub mod surrogate;

pub use agreement::{cohen_kappa, interpret, summarize_runs, Band, KappaReport, MultiRunSummary};
pub use audit::{audit_gh, audit_split, fidelity_gap, sample_gh, AuditConfig, AuditReport, Target};
pub use corpus::{
    generate_planted_dataset, load_dataset, tokenize, Dataset, Example, ExampleBody, PlantSpec,
    Shortcut, Task, TokenizedExample,
};
pub use error::{Error, Result};
pub use features::{featurize, FeatureSpec, FeatureVector};
pub use matchedpair::{load_pairs, score_pairs, MatchedPair, MatchedScore};
pub use surrogate::{
    fit_nb, fit_nbt, fit_tree, select_top_k, FitConfig, NbModel, NbtModel, SurrogateModel,
    TreeModel,
};
